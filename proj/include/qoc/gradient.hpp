#pragma once

#include <string>
#include <string_view>

#include "qoc/system.hpp"

namespace qoc {

/// Number of commutator terms kept beyond H_k in the slice-averaged control
/// operator, or the exact average.
///
///   terms = 0  plain gradient flow, control operator H_k
///   terms = 1  first correction, H_k + dt/2 [iH_l, H_k]
///   exact      (1/dt) ∫_0^dt e^{iτH_l} H_k e^{-iτH_l} dτ in closed form
class CorrectionOrder {
 public:
  static constexpr int kMaxTerms = 8;

  static CorrectionOrder series(int terms);
  static CorrectionOrder exact() { return CorrectionOrder(kExact); }

  /// Accepts "0".."8" or "exact".
  static CorrectionOrder parse(std::string_view text);

  bool is_exact() const { return terms_ == kExact; }
  /// Series length; throws for the exact order.
  int terms() const;
  std::string to_string() const;

  friend bool operator==(const CorrectionOrder&, const CorrectionOrder&) = default;

 private:
  static constexpr int kExact = -1;
  explicit CorrectionOrder(int terms) : terms_(terms) {}
  int terms_;
};

/// dε_k^l/ds for every control and slice, plus what the same propagation
/// yields for free.
struct FlowRhs {
  AmplitudeMatrix values;
  /// J at the grid the right-hand side was evaluated on.
  double objective = 0.0;
  /// Propagations performed.
  int evaluations = 0;
  /// max|P*P - I| over the prefixes of that propagation.
  double max_unitarity_defect = 0.0;
};

/// J = 1/2 - Re Tr(U_D* U) / (2N).
double objective(const ComplexMatrix& u_final, const GateTarget& target);

/// Objective of the grid's final propagator.
double objective(const QuantumSystem& sys, const ControlGrid& grid,
                 const GateTarget& target);

/// Uncorrected flow: entry (k, l) = Im Tr(U_D* U(T,t_l) H_k U(t_l,0)) / (2N).
FlowRhs rhs_original(const QuantumSystem& sys, const ControlGrid& grid,
                     const GateTarget& target);

/// Flow with H_k replaced by the slice-averaged operator of the given order.
/// The series with zero terms reproduces rhs_original() bit for bit.
FlowRhs rhs_corrected(const QuantumSystem& sys, const ControlGrid& grid,
                      const GateTarget& target, CorrectionOrder order);

/// sum_{j=0}^{terms} dt^j/(j+1)! ad_{iH_l}^j(H_k).
ComplexMatrix interval_average_series(const QuantumSystem& sys,
                                      const ControlGrid& grid, int slice, int k,
                                      int terms);

/// (1/dt) ∫_0^dt e^{iτH_l} H_k e^{-iτH_l} dτ, evaluated in the eigenbasis of
/// H_l.
ComplexMatrix interval_average_exact(const QuantumSystem& sys,
                                     const ControlGrid& grid, int slice, int k);

/// Central differences of J with respect to every amplitude. Approximates
/// -dt * rhs_corrected(exact).
AmplitudeMatrix finite_difference_gradient(const QuantumSystem& sys,
                                           const ControlGrid& grid,
                                           const GateTarget& target,
                                           double delta);

}  // namespace qoc
