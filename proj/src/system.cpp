#include "qoc/system.hpp"

#include <cmath>
#include <numbers>

namespace qoc {

QuantumSystem::QuantumSystem(ComplexMatrix drift,
                             std::vector<ComplexMatrix> controls)
    : drift_(std::move(drift)), controls_(std::move(controls)) {
  require_square(drift_, "QuantumSystem drift");
  if (controls_.empty()) {
    throw Error("QuantumSystem: at least one control Hamiltonian is required");
  }
  auto check = [&](const ComplexMatrix& h, const std::string& name) {
    require_square(h, "QuantumSystem");
    if (h.rows() != drift_.rows()) {
      throw Error("QuantumSystem: " + name + " has dimension " +
                  std::to_string(h.rows()) + ", expected " +
                  std::to_string(drift_.rows()));
    }
    const double scale = h.cwiseAbs().maxCoeff();
    if (hermiticity_defect(h) > kHermitianTolerance * scale) {
      throw Error("QuantumSystem: " + name + " is not Hermitian");
    }
  };
  check(drift_, "drift Hamiltonian");
  for (std::size_t k = 0; k < controls_.size(); ++k) {
    check(controls_[k], "control Hamiltonian " + std::to_string(k));
  }
}

ControlGrid::ControlGrid(int num_controls, int num_slices, double final_time)
    : final_time_(final_time) {
  if (num_controls < 1 || num_slices < 1) {
    throw Error("ControlGrid: need at least one control and one slice");
  }
  amplitudes_ = AmplitudeMatrix::Zero(num_controls, num_slices);
  validate();
}

ControlGrid::ControlGrid(AmplitudeMatrix amplitudes, double final_time)
    : amplitudes_(std::move(amplitudes)), final_time_(final_time) {
  validate();
}

void ControlGrid::validate() const {
  if (amplitudes_.rows() < 1 || amplitudes_.cols() < 1) {
    throw Error("ControlGrid: need at least one control and one slice");
  }
  if (!(final_time_ > 0.0) || !std::isfinite(final_time_)) {
    throw Error("ControlGrid: final time must be positive and finite");
  }
  if (!amplitudes_.allFinite()) {
    throw Error("ControlGrid: amplitudes must be finite");
  }
}

ControlGrid ControlGrid::with_amplitudes(AmplitudeMatrix amplitudes) const {
  if (amplitudes.rows() != amplitudes_.rows() ||
      amplitudes.cols() != amplitudes_.cols()) {
    throw Error("ControlGrid::with_amplitudes: shape mismatch");
  }
  return ControlGrid(std::move(amplitudes), final_time_);
}

double PropagationCache::max_unitarity_defect() const {
  double worst = 0.0;
  for (const auto& p : prefixes) worst = std::max(worst, unitarity_defect(p));
  return worst;
}

GateTarget::GateTarget(ComplexMatrix unitary, std::string label)
    : unitary_(std::move(unitary)), label_(std::move(label)) {
  require_square(unitary_, "GateTarget");
  if (!is_unitary(unitary_, 1e-10)) {
    throw Error("GateTarget '" + label_ + "': matrix is not unitary");
  }
}

namespace {

void check_slice(const ControlGrid& grid, int slice, const char* what) {
  if (slice < 0 || slice >= grid.num_slices()) {
    throw Error(std::string(what) + ": slice index " + std::to_string(slice) +
                " out of range [0, " + std::to_string(grid.num_slices()) + ")");
  }
}

void check_shapes(const QuantumSystem& sys, const ControlGrid& grid) {
  if (sys.num_controls() != grid.num_controls()) {
    throw Error("control grid has " + std::to_string(grid.num_controls()) +
                " controls, system has " + std::to_string(sys.num_controls()));
  }
}

}  // namespace

ComplexMatrix slice_hamiltonian(const QuantumSystem& sys,
                                const ControlGrid& grid, int slice) {
  check_shapes(sys, grid);
  check_slice(grid, slice, "slice_hamiltonian");
  ComplexMatrix h = sys.drift();
  for (int k = 0; k < sys.num_controls(); ++k) {
    h += grid.amplitude(k, slice) * sys.control(k);
  }
  return h;
}

ComplexMatrix step_propagator(const QuantumSystem& sys, const ControlGrid& grid,
                              int slice) {
  return expm_hermitian_generator(slice_hamiltonian(sys, grid, slice),
                                  grid.dt());
}

PropagationCache propagate(const std::vector<ComplexMatrix>& steps) {
  if (steps.empty()) throw Error("propagate: no slices");
  PropagationCache cache;
  cache.prefixes.reserve(steps.size() + 1);
  cache.prefixes.push_back(identity(steps.front().rows()));
  for (const auto& step : steps) {
    cache.prefixes.push_back(step * cache.prefixes.back());
  }
  return cache;
}

PropagationCache propagate(const QuantumSystem& sys, const ControlGrid& grid) {
  check_shapes(sys, grid);
  std::vector<ComplexMatrix> steps;
  steps.reserve(grid.num_slices());
  for (int l = 0; l < grid.num_slices(); ++l) {
    steps.push_back(step_propagator(sys, grid, l));
  }
  return propagate(steps);
}

ComplexMatrix backward_propagator(const PropagationCache& cache, int slice) {
  if (slice < 0 || slice >= cache.num_slices()) {
    throw Error("backward_propagator: slice index " + std::to_string(slice) +
                " out of range");
  }
  return cache.total() * cache.prefixes[slice].adjoint();
}

ComplexMatrix spin_x() {
  ComplexMatrix s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  return s * (1.0 / std::numbers::sqrt2);
}

ComplexMatrix spin_y() {
  const Complex i{0.0, 1.0};
  ComplexMatrix s(2, 2);
  s << 0.0, -i, i, 0.0;
  return s * (1.0 / std::numbers::sqrt2);
}

ComplexMatrix spin_z() {
  ComplexMatrix s(2, 2);
  s << 1.0, 0.0, 0.0, -1.0;
  return s * (1.0 / std::numbers::sqrt2);
}

QuantumSystem build_two_spin_benchmark(const TwoSpinParameters& p) {
  const ComplexMatrix id = identity(2);
  const ComplexMatrix sx = spin_x();
  const ComplexMatrix sy = spin_y();
  const ComplexMatrix sz = spin_z();
  ComplexMatrix h0 = p.omega1 * kron(sz, id) + p.omega2 * kron(id, sz) +
                     p.coupling_x * kron(sx, sx) + p.coupling_y * kron(sy, sy) +
                     p.coupling_z * kron(sz, sz);
  return QuantumSystem(std::move(h0), {kron(sx, id), kron(id, sx)});
}

namespace {

ComplexMatrix phased_permutation(const std::array<int, 4>& image) {
  const Complex phase = std::polar(1.0, std::numbers::pi / 4.0);
  ComplexMatrix u = ComplexMatrix::Zero(4, 4);
  for (int col = 0; col < 4; ++col) u(image[col], col) = phase;
  return u;
}

}  // namespace

GateTarget cnot_target() {
  return GateTarget(phased_permutation({0, 1, 3, 2}), "cnot");
}

GateTarget swap_target() {
  return GateTarget(phased_permutation({0, 2, 1, 3}), "swap");
}

std::array<GateTarget, 2> build_gate_targets() {
  return {cnot_target(), swap_target()};
}

}  // namespace qoc
