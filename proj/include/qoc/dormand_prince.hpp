#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

namespace qoc {

/// Embedded Runge–Kutta 4(5) pair of Dormand and Prince with local
/// extrapolation (the 5th-order solution is propagated).
struct StepperSettings {
  double s_max = 1.0;
  double abs_tol = 1e-6;
  double rel_tol = 1e-6;
  double h_init = 1e-2;
  double h_min = 1e-12;
  std::size_t max_evals = 1'000'000;
};

enum class StepperStop {
  requested,       // the accept callback asked to stop
  horizon,         // s reached s_max
  step_underflow,  // proposed step fell below h_min
  eval_budget,     // max_evals exhausted
};

struct StepperStats {
  StepperStop stop = StepperStop::horizon;
  double s = 0.0;
  std::size_t evals = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// dy = f(s, y)
using OdeRhs = std::function<void(double s, const Eigen::VectorXd& y,
                                  Eigen::VectorXd& dy)>;

/// Called at s0 and after every accepted step with the current state and its
/// derivative. Returning true stops the integration.
using AcceptCallback = std::function<bool(double s, const Eigen::VectorXd& y,
                                          const Eigen::VectorXd& dy)>;

/// Integrates y from s0 towards settings.s_max in place.
///
/// The error of a trial step is the RMS over components of
/// err_i / (abs_tol + rel_tol * max(|y_i|, |y_new_i|)); the step is accepted
/// when that is at most 1 and the next step is h * min(5, max(0.2,
/// 0.9 * err^(-1/5))).
StepperStats dormand_prince(const OdeRhs& rhs, Eigen::VectorXd& y, double s0,
                            const StepperSettings& settings,
                            const AcceptCallback& on_accept = {});

}  // namespace qoc
