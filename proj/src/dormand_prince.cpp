#include "qoc/dormand_prince.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "qoc/matrix.hpp"

namespace qoc {

namespace {

// Butcher tableau.
constexpr std::array<double, 7> kC = {0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0,
                                      8.0 / 9.0, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5.0},
    {3.0 / 40.0, 9.0 / 40.0},
    {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0},
    {19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0},
    {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
     -5103.0 / 18656.0},
    {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
     11.0 / 84.0},
};
// 5th-order weights (equal to the last row of kA, so stage 7 is FSAL).
constexpr std::array<double, 7> kB = {35.0 / 384.0,     0.0,
                                      500.0 / 1113.0,   125.0 / 192.0,
                                      -2187.0 / 6784.0, 11.0 / 84.0,
                                      0.0};
// 4th-order weights.
constexpr std::array<double, 7> kBHat = {5179.0 / 57600.0,    0.0,
                                         7571.0 / 16695.0,    393.0 / 640.0,
                                         -92097.0 / 339200.0, 187.0 / 2100.0,
                                         1.0 / 40.0};

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

double next_step_factor(double err) {
  if (err == 0.0) return kMaxFactor;
  return std::min(kMaxFactor,
                  std::max(kMinFactor, kSafety * std::pow(err, -0.2)));
}

}  // namespace

StepperStats dormand_prince(const OdeRhs& rhs, Eigen::VectorXd& y, double s0,
                            const StepperSettings& settings,
                            const AcceptCallback& on_accept) {
  if (!(settings.abs_tol > 0.0) || !(settings.rel_tol > 0.0) ||
      !(settings.h_init > 0.0) || !(settings.h_min > 0.0)) {
    throw Error("dormand_prince: tolerances and step sizes must be positive");
  }
  const Eigen::Index dim = y.size();
  std::array<Eigen::VectorXd, 7> k;
  for (auto& stage : k) stage.resize(dim);
  Eigen::VectorXd trial(dim);
  Eigen::VectorXd y_new(dim);

  StepperStats stats;
  stats.s = s0;
  const double horizon_slack = 1e-12 * std::max(1.0, std::abs(settings.s_max));

  if (settings.max_evals < 1) {
    stats.stop = StepperStop::eval_budget;
    return stats;
  }
  rhs(stats.s, y, k[0]);
  ++stats.evals;
  if (on_accept && on_accept(stats.s, y, k[0])) {
    stats.stop = StepperStop::requested;
    return stats;
  }

  double h = settings.h_init;
  for (;;) {
    const double remaining = settings.s_max - stats.s;
    if (remaining <= horizon_slack) {
      stats.stop = StepperStop::horizon;
      return stats;
    }
    if (stats.evals + 6 > settings.max_evals) {
      stats.stop = StepperStop::eval_budget;
      return stats;
    }
    if (h < settings.h_min) {
      stats.stop = StepperStop::step_underflow;
      return stats;
    }
    const bool clipped = h >= remaining;
    const double step = clipped ? remaining : h;

    for (int i = 1; i < 7; ++i) {
      trial = y;
      for (int j = 0; j < i; ++j) {
        if (kA[i][j] != 0.0) trial.noalias() += (step * kA[i][j]) * k[j];
      }
      rhs(stats.s + kC[i] * step, trial, k[i]);
      ++stats.evals;
    }
    // Stage 7 was evaluated at the 5th-order solution.
    y_new = trial;

    double sum_sq = 0.0;
    for (Eigen::Index c = 0; c < dim; ++c) {
      double err = 0.0;
      for (int i = 0; i < 7; ++i) err += (kB[i] - kBHat[i]) * k[i](c);
      err *= step;
      const double scale =
          settings.abs_tol +
          settings.rel_tol * std::max(std::abs(y(c)), std::abs(y_new(c)));
      sum_sq += (err / scale) * (err / scale);
    }
    const double err_norm = dim > 0 ? std::sqrt(sum_sq / dim) : 0.0;
    if (!std::isfinite(err_norm)) {
      throw Error("dormand_prince: non-finite error estimate");
    }

    if (err_norm <= 1.0) {
      stats.s = clipped ? settings.s_max : stats.s + step;
      y.swap(y_new);
      k[0].swap(k[6]);
      ++stats.accepted;
      if (on_accept && on_accept(stats.s, y, k[0])) {
        stats.stop = StepperStop::requested;
        return stats;
      }
    } else {
      ++stats.rejected;
    }
    h = step * next_step_factor(err_norm);
  }
}

}  // namespace qoc
