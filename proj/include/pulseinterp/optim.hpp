#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "pulseinterp/pulsemodel.hpp"

namespace pulseinterp {

struct OptConfig {
  int max_iter = 50;
  double grad_tol = 1e-8;
  double cost_rel_tol = 1e-9;
  int stall_window = 5;
  double lower = -1.0;
  double upper = 1.0;
  int memory = 10;  ///< number of stored curvature pairs

  void validate() const;
};

enum class StopReason { GradTol, Stall, MaxIter };

std::string to_string(StopReason r);
StopReason stop_reason_from_string(const std::string& s);

struct OptReport {
  int iterations = 0;   ///< accepted steps
  int evaluations = 0;  ///< every objective call, line-search probes included
  double initial_cost = 0.0;
  double final_cost = 0.0;
  double final_infidelity = std::numeric_limits<double>::quiet_NaN();
  StopReason converged_by = StopReason::MaxIter;
};

struct ObjectiveValue {
  double value = 0.0;
  Eigen::VectorXd gradient;
  /// Optional diagnostic carried into the report (gate infidelity for pulse costs).
  double infidelity = std::numeric_limits<double>::quiet_NaN();
};

using Objective = std::function<ObjectiveValue(const Eigen::VectorXd&)>;

struct OptResult {
  Eigen::VectorXd x;
  OptReport report;
};

/// Projected limited-memory BFGS on the box [cfg.lower, cfg.upper]^n with Armijo
/// backtracking along the projected path.
///
/// Stops when the projected gradient infinity-norm drops below grad_tol, when the
/// relative cost decrease stays below cost_rel_tol for stall_window consecutive steps
/// (or the line search cannot find a decrease), or after max_iter accepted steps.
/// Throws std::runtime_error if the starting cost or gradient is not finite.
OptResult minimize(const Objective& objective, const Eigen::VectorXd& x_init, const OptConfig& cfg);

OptResult minimize(const std::function<double(const Eigen::VectorXd&)>& cost_fn,
                   const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad_fn,
                   const Eigen::VectorXd& x_init, const OptConfig& cfg);

/// I.i.d. uniform entries in [-scale, scale], reproducible from the seed on any platform.
PulseVector seeded_init(const ControlAnsatz& ansatz, std::uint64_t seed, double scale);

/// Objective for one pulse optimization (cost, gradient and infidelity in one call).
Objective pulse_objective(const CostSpec& spec, const HamiltonianModel& model,
                          const ControlAnsatz& ansatz);

}  // namespace pulseinterp
