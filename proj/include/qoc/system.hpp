#pragma once

#include <array>
#include <string>
#include <vector>

#include "qoc/matrix.hpp"

namespace qoc {

/// n×L control amplitudes, row k holds the L slice values of control k.
/// Row-major storage flattens the amplitudes k-major, then by slice.
using AmplitudeMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Drift Hamiltonian H0 plus control Hamiltonians H_k, all N×N Hermitian.
class QuantumSystem {
 public:
  QuantumSystem(ComplexMatrix drift, std::vector<ComplexMatrix> controls);

  Eigen::Index dim() const { return drift_.rows(); }
  int num_controls() const { return static_cast<int>(controls_.size()); }
  const ComplexMatrix& drift() const { return drift_; }
  const ComplexMatrix& control(int k) const { return controls_.at(k); }
  const std::vector<ComplexMatrix>& controls() const { return controls_; }

 private:
  ComplexMatrix drift_;
  std::vector<ComplexMatrix> controls_;
};

/// Piecewise-constant controls on L equal slices of [0, T]. Slices are
/// indexed 0..L-1; slice l covers [l*dt, (l+1)*dt].
class ControlGrid {
 public:
  /// All-zero amplitudes.
  ControlGrid(int num_controls, int num_slices, double final_time);
  ControlGrid(AmplitudeMatrix amplitudes, double final_time);

  int num_controls() const { return static_cast<int>(amplitudes_.rows()); }
  int num_slices() const { return static_cast<int>(amplitudes_.cols()); }
  double final_time() const { return final_time_; }
  double dt() const { return final_time_ / num_slices(); }

  double amplitude(int k, int slice) const { return amplitudes_(k, slice); }
  const AmplitudeMatrix& amplitudes() const { return amplitudes_; }

  /// Copy with the given amplitudes; shape must match.
  ControlGrid with_amplitudes(AmplitudeMatrix amplitudes) const;

 private:
  void validate() const;

  AmplitudeMatrix amplitudes_;
  double final_time_;
};

/// Prefix propagators P_l = U(t_l, 0) for l = 0..L, with P_0 = I.
struct PropagationCache {
  std::vector<ComplexMatrix> prefixes;

  const ComplexMatrix& total() const { return prefixes.back(); }
  int num_slices() const { return static_cast<int>(prefixes.size()) - 1; }
  /// Largest max|P*P - I| over all prefixes.
  double max_unitarity_defect() const;
};

/// Target unitary U_D.
class GateTarget {
 public:
  GateTarget(ComplexMatrix unitary, std::string label);

  const ComplexMatrix& unitary() const { return unitary_; }
  const std::string& label() const { return label_; }
  Eigen::Index dim() const { return unitary_.rows(); }

 private:
  ComplexMatrix unitary_;
  std::string label_;
};

/// H0 + sum_k eps_k^l H_k.
ComplexMatrix slice_hamiltonian(const QuantumSystem& sys,
                                const ControlGrid& grid, int slice);

/// exp(-i dt H_l).
ComplexMatrix step_propagator(const QuantumSystem& sys, const ControlGrid& grid,
                              int slice);

/// Time-ordered product of slice propagators; later slices multiply on the
/// left.
PropagationCache propagate(const QuantumSystem& sys, const ControlGrid& grid);

/// Same as propagate() but with step propagators already available.
PropagationCache propagate(const std::vector<ComplexMatrix>& steps);

/// U(T, t_l) = P_L P_l* for the slice starting at t_l.
ComplexMatrix backward_propagator(const PropagationCache& cache, int slice);

// Spin-1/2 operators with 1/sqrt(2) normalization.
ComplexMatrix spin_x();
ComplexMatrix spin_y();
ComplexMatrix spin_z();

struct TwoSpinParameters {
  double omega1 = 20.0;
  double omega2 = 30.0;
  double coupling_x = 110.0;
  double coupling_y = 120.0;
  double coupling_z = 130.0;
};

/// Two coupled spins, basis index 2*q1 + q2:
///   H0 = w1 Sz⊗I + w2 I⊗Sz + Cx Sx⊗Sx + Cy Sy⊗Sy + Cz Sz⊗Sz,
///   H1 = Sx⊗I, H2 = I⊗Sx.
QuantumSystem build_two_spin_benchmark(const TwoSpinParameters& params = {});

/// CNOT and SWAP, each with global phase e^{i pi/4}.
GateTarget cnot_target();
GateTarget swap_target();
std::array<GateTarget, 2> build_gate_targets();

}  // namespace qoc
