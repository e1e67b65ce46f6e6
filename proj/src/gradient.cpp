#include "qoc/gradient.hpp"

#include <cmath>
#include <charconv>

namespace qoc {

CorrectionOrder CorrectionOrder::series(int terms) {
  if (terms < 0 || terms > kMaxTerms) {
    throw Error("correction order must be in [0, " + std::to_string(kMaxTerms) +
                "] or 'exact', got " + std::to_string(terms));
  }
  return CorrectionOrder(terms);
}

CorrectionOrder CorrectionOrder::parse(std::string_view text) {
  if (text == "exact") return exact();
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error("invalid correction order '" + std::string(text) + "'");
  }
  return series(value);
}

int CorrectionOrder::terms() const {
  if (is_exact()) throw Error("exact correction order has no series length");
  return terms_;
}

std::string CorrectionOrder::to_string() const {
  return is_exact() ? "exact" : std::to_string(terms_);
}

namespace {

void require_target_dim(const QuantumSystem& sys, const GateTarget& target) {
  if (target.dim() != sys.dim()) {
    throw Error("target '" + target.label() + "' has dimension " +
                std::to_string(target.dim()) + ", system has " +
                std::to_string(sys.dim()));
  }
}

void require_control(const QuantumSystem& sys, int k) {
  if (k < 0 || k >= sys.num_controls()) {
    throw Error("control index " + std::to_string(k) + " out of range");
  }
}

// (e^z - 1) / z
Complex phi(Complex z) {
  if (std::abs(z) < 1e-4) {
    return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
  }
  return (std::exp(z) - 1.0) / z;
}

ComplexMatrix series_average(const ComplexMatrix& h_slice,
                             const ComplexMatrix& h_control, double dt,
                             int terms) {
  const ComplexMatrix x = Complex{0.0, 1.0} * h_slice;
  ComplexMatrix sum = h_control;
  ComplexMatrix term = h_control;
  double coeff = 1.0;
  for (int j = 1; j <= terms; ++j) {
    term = x * term - term * x;
    coeff *= dt / (j + 1);
    sum += coeff * term;
  }
  return sum;
}

ComplexMatrix exact_average(const HermitianEigensystem& eig,
                            const ComplexMatrix& h_control, double dt) {
  const Eigen::Index n = eig.dim();
  ComplexMatrix b = eig.vectors.adjoint() * h_control * eig.vectors;
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const double gap = eig.values(a) - eig.values(c);
      b(a, c) *= phi(Complex{0.0, gap * dt});
    }
  }
  return eig.vectors * b * eig.vectors.adjoint();
}

// Tr(q m)
Complex trace_product(const ComplexMatrix& q, const ComplexMatrix& m) {
  return q.cwiseProduct(m.transpose()).sum();
}

}  // namespace

double objective(const ComplexMatrix& u_final, const GateTarget& target) {
  require_square(u_final, "objective");
  if (u_final.rows() != target.dim()) {
    throw Error("objective: dimension mismatch");
  }
  const double n = static_cast<double>(target.dim());
  return 0.5 - overlap_trace(target.unitary(), u_final).real() / (2.0 * n);
}

double objective(const QuantumSystem& sys, const ControlGrid& grid,
                 const GateTarget& target) {
  require_target_dim(sys, target);
  return objective(propagate(sys, grid).total(), target);
}

FlowRhs rhs_original(const QuantumSystem& sys, const ControlGrid& grid,
                     const GateTarget& target) {
  return rhs_corrected(sys, grid, target, CorrectionOrder::series(0));
}

FlowRhs rhs_corrected(const QuantumSystem& sys, const ControlGrid& grid,
                      const GateTarget& target, CorrectionOrder order) {
  require_target_dim(sys, target);
  const int num_slices = grid.num_slices();
  const double dt = grid.dt();

  // One eigensystem per slice, shared by the step propagator and the exact
  // interval average.
  std::vector<ComplexMatrix> hamiltonians;
  std::vector<HermitianEigensystem> spectra;
  std::vector<ComplexMatrix> steps;
  hamiltonians.reserve(num_slices);
  spectra.reserve(num_slices);
  steps.reserve(num_slices);
  for (int l = 0; l < num_slices; ++l) {
    hamiltonians.push_back(slice_hamiltonian(sys, grid, l));
    spectra.push_back(diagonalize_hermitian(hamiltonians.back()));
    steps.push_back(expm_from_eigensystem(spectra.back(), dt));
  }
  const PropagationCache cache = propagate(steps);

  FlowRhs rhs;
  rhs.values.resize(sys.num_controls(), num_slices);
  rhs.objective = objective(cache.total(), target);
  rhs.evaluations = 1;
  rhs.max_unitarity_defect = cache.max_unitarity_defect();

  const double norm = 2.0 * static_cast<double>(sys.dim());
  const ComplexMatrix target_adjoint = target.unitary().adjoint();
  for (int l = 0; l < num_slices; ++l) {
    // Tr(U_D* U(T,t_l) M U(t_l,0)) = Tr(q M) with q = U(t_l,0) U_D* U(T,t_l)
    const ComplexMatrix q =
        cache.prefixes[l] * (target_adjoint * backward_propagator(cache, l));
    for (int k = 0; k < sys.num_controls(); ++k) {
      const ComplexMatrix averaged =
          order.is_exact()
              ? exact_average(spectra[l], sys.control(k), dt)
              : series_average(hamiltonians[l], sys.control(k), dt,
                               order.terms());
      rhs.values(k, l) = trace_product(q, averaged).imag() / norm;
    }
  }
  return rhs;
}

ComplexMatrix interval_average_series(const QuantumSystem& sys,
                                      const ControlGrid& grid, int slice, int k,
                                      int terms) {
  require_control(sys, k);
  if (terms < 0) throw Error("interval_average_series: negative term count");
  return series_average(slice_hamiltonian(sys, grid, slice), sys.control(k),
                        grid.dt(), terms);
}

ComplexMatrix interval_average_exact(const QuantumSystem& sys,
                                     const ControlGrid& grid, int slice, int k) {
  require_control(sys, k);
  return exact_average(diagonalize_hermitian(slice_hamiltonian(sys, grid, slice)),
                       sys.control(k), grid.dt());
}

AmplitudeMatrix finite_difference_gradient(const QuantumSystem& sys,
                                           const ControlGrid& grid,
                                           const GateTarget& target,
                                           double delta) {
  if (!(delta > 0.0)) {
    throw Error("finite_difference_gradient: delta must be positive");
  }
  require_target_dim(sys, target);
  AmplitudeMatrix gradient(grid.num_controls(), grid.num_slices());
  AmplitudeMatrix shifted = grid.amplitudes();
  for (int k = 0; k < grid.num_controls(); ++k) {
    for (int l = 0; l < grid.num_slices(); ++l) {
      const double base = shifted(k, l);
      shifted(k, l) = base + delta;
      const double up = objective(sys, grid.with_amplitudes(shifted), target);
      shifted(k, l) = base - delta;
      const double down = objective(sys, grid.with_amplitudes(shifted), target);
      shifted(k, l) = base;
      gradient(k, l) = (up - down) / (2.0 * delta);
    }
  }
  return gradient;
}

}  // namespace qoc
