#include "qoc/flow.hpp"

#include <algorithm>
#include <cmath>

#include "qoc/dormand_prince.hpp"

namespace qoc {

void FlowConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(std::string("flow config: ") + name + " must be positive");
    }
  };
  positive(s_max, "s_max");
  positive(abs_tol, "abs_tol");
  positive(rel_tol, "rel_tol");
  positive(j_stop, "j_stop");
  positive(h_init, "h_init");
  positive(h_min, "h_min");
  if (max_rhs_evals < 1) {
    throw Error("flow config: max_rhs_evals must be positive");
  }
  if (!(h_min < h_init)) {
    throw Error("flow config: h_min must be smaller than h_init");
  }
  if (!(h_init < s_max)) {
    throw Error("flow config: h_init must be smaller than s_max");
  }
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::j_reached: return "j_reached";
    case StopReason::horizon: return "horizon";
    case StopReason::step_underflow: return "step_underflow";
    case StopReason::eval_budget: return "eval_budget";
  }
  return "unknown";
}

StopReason parse_stop_reason(std::string_view text) {
  for (auto r : {StopReason::j_reached, StopReason::horizon,
                 StopReason::step_underflow, StopReason::eval_budget}) {
    if (text == to_string(r)) return r;
  }
  throw Error("unknown stop reason '" + std::string(text) + "'");
}

FlowResult integrate_flow(const QuantumSystem& sys, const ControlGrid& grid0,
                          const GateTarget& target, CorrectionOrder order,
                          const FlowConfig& cfg, const FlowObserver& observer) {
  cfg.validate();
  if (grid0.num_controls() != sys.num_controls()) {
    throw Error("integrate_flow: grid has " +
                std::to_string(grid0.num_controls()) + " controls, system has " +
                std::to_string(sys.num_controls()));
  }
  if (target.dim() != sys.dim()) {
    throw Error("integrate_flow: target dimension does not match the system");
  }

  const int num_controls = grid0.num_controls();
  const int num_slices = grid0.num_slices();
  const double final_time = grid0.final_time();

  auto grid_of = [&](const Eigen::VectorXd& state) {
    return ControlGrid(Eigen::Map<const AmplitudeMatrix>(
                           state.data(), num_controls, num_slices),
                       final_time);
  };

  FlowRhs last;
  double worst_unitarity = 0.0;
  const OdeRhs ode = [&](double, const Eigen::VectorXd& state,
                         Eigen::VectorXd& dstate) {
    if (!state.allFinite()) {
      throw Error("integrate_flow: non-finite control amplitude");
    }
    last = rhs_corrected(sys, grid_of(state), target, order);
    for (int k = 0; k < num_controls; ++k) {
      for (int l = 0; l < num_slices; ++l) {
        if (!std::isfinite(last.values(k, l))) {
          throw Error("integrate_flow: non-finite flow rhs at control " +
                      std::to_string(k) + ", slice " + std::to_string(l));
        }
      }
    }
    worst_unitarity = std::max(worst_unitarity, last.max_unitarity_defect);
    dstate = Eigen::Map<const Eigen::VectorXd>(last.values.data(),
                                               last.values.size());
  };

  std::vector<TraceSample> trace;
  bool reached = false;
  // The last rhs evaluation of an accepted step is the FSAL stage at the new
  // state, so `last` describes the accepted point here.
  const AcceptCallback accept = [&](double s, const Eigen::VectorXd& state,
                                    const Eigen::VectorXd&) {
    trace.push_back({s, last.objective});
    if (observer) observer(s, grid_of(state), last);
    reached = last.objective <= cfg.j_stop;
    return reached;
  };

  Eigen::VectorXd state = Eigen::Map<const Eigen::VectorXd>(
      grid0.amplitudes().data(), grid0.amplitudes().size());
  StepperSettings settings;
  settings.s_max = cfg.s_max;
  settings.abs_tol = cfg.abs_tol;
  settings.rel_tol = cfg.rel_tol;
  settings.h_init = cfg.h_init;
  settings.h_min = cfg.h_min;
  settings.max_evals = cfg.max_rhs_evals;

  const StepperStats stats = dormand_prince(ode, state, 0.0, settings, accept);

  FlowResult result{grid_of(state), std::move(trace)};
  result.s_stop = stats.s;
  result.rhs_evals = stats.evals;
  result.accepted_steps = stats.accepted;
  result.rejected_steps = stats.rejected;
  result.max_unitarity_defect = worst_unitarity;
  switch (stats.stop) {
    case StepperStop::requested: result.stop_reason = StopReason::j_reached; break;
    case StepperStop::horizon: result.stop_reason = StopReason::horizon; break;
    case StepperStop::step_underflow:
      result.stop_reason = StopReason::step_underflow;
      break;
    case StepperStop::eval_budget:
      result.stop_reason = StopReason::eval_budget;
      break;
  }
  if (result.trace.empty()) {
    // Budget exhausted before the first evaluation.
    result.trace.push_back({0.0, objective(sys, grid0, target)});
  }
  return result;
}

bool error_tolerance_check(const FlowResult& result, const FlowConfig& cfg) {
  if (result.trace.empty()) return false;
  if (!(result.final_objective() <= cfg.j_stop)) return false;
  for (std::size_t i = 1; i < result.trace.size(); ++i) {
    const auto& prev = result.trace[i - 1];
    const auto& cur = result.trace[i];
    if (!(cur.s > prev.s)) return false;
    if (cur.objective > prev.objective + 10.0 * cfg.abs_tol) return false;
  }
  return true;
}

}  // namespace qoc
