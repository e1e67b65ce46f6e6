#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "qoc/gradient.hpp"

namespace qoc {

struct FlowConfig {
  double s_max = 5000.0;    ///< flow horizon S
  double abs_tol = 1e-4;
  double rel_tol = 1e-4;
  double j_stop = 1e-7;     ///< stop once J drops to this value
  double h_init = 1.0;
  double h_min = 1e-12;
  std::size_t max_rhs_evals = 1'000'000;

  /// Throws qoc::Error naming the offending field.
  void validate() const;
};

enum class StopReason { j_reached, horizon, step_underflow, eval_budget };

std::string to_string(StopReason reason);
StopReason parse_stop_reason(std::string_view text);

struct TraceSample {
  double s;
  double objective;
};

struct FlowResult {
  ControlGrid final_grid;
  /// (s, J) at s = 0 and after every accepted step.
  std::vector<TraceSample> trace;
  StopReason stop_reason = StopReason::horizon;
  double s_stop = 0.0;
  std::size_t rhs_evals = 0;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  /// Worst max|P*P - I| over every propagation performed.
  double max_unitarity_defect = 0.0;

  double final_objective() const { return trace.back().objective; }
};

/// Observer invoked at s = 0 and at every accepted step with the current
/// controls and the flow right-hand side evaluated there.
using FlowObserver =
    std::function<void(double s, const ControlGrid& grid, const FlowRhs& rhs)>;

/// Integrates dε/ds = rhs_corrected(ε) from grid0 until J <= j_stop, s reaches
/// s_max, the step underflows or the evaluation budget runs out, in that
/// order of precedence.
FlowResult integrate_flow(const QuantumSystem& sys, const ControlGrid& grid0,
                          const GateTarget& target, CorrectionOrder order,
                          const FlowConfig& cfg,
                          const FlowObserver& observer = {});

/// True iff the final J is within j_stop, s is strictly increasing along the
/// trace and J never rises by more than 10 * abs_tol between samples.
bool error_tolerance_check(const FlowResult& result, const FlowConfig& cfg);

}  // namespace qoc
