#pragma once

#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pulseinterp/qcore.hpp"

namespace pulseinterp {

/// Flat control amplitudes, control-major: control k, segment s lives at k * n_segments + s.
using PulseVector = Eigen::VectorXd;

/// Piecewise-constant controls on equal time segments.
struct ControlAnsatz {
  int n_controls = 5;
  int n_segments = 20;
  double duration = std::numbers::pi;
  double alpha_max = 1.0;

  double dt() const { return duration / n_segments; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(n_controls) * n_segments; }
  Eigen::Index index(int control, int segment) const {
    return static_cast<Eigen::Index>(control) * n_segments + segment;
  }
  /// Throws std::invalid_argument if any field is out of range.
  void validate() const;

  friend bool operator==(const ControlAnsatz&, const ControlAnsatz&) = default;
};

/// H(t) = drift + sum_k f_k(t) controls[k].
struct HamiltonianModel {
  CMatrix drift;
  std::vector<CMatrix> controls;
  std::vector<std::string> labels;

  int dim() const { return static_cast<int>(drift.rows()); }
  int n_controls() const { return static_cast<int>(controls.size()); }
};

/// XX, Y1, Z1, Y2, Z2 with zero drift.
HamiltonianModel two_qubit_model();
/// Y, Z on a single qubit with zero drift.
HamiltonianModel single_qubit_model();
/// Model matching a target dimension (2 or 4).
HamiltonianModel model_for_dimension(int dim);

struct CostSpec {
  CMatrix target;
  double lambda = 1e-2;
  PulseVector alpha0;  ///< Tikhonov target
};

/// lambda / (n_controls * n_segments * alpha_max^2)
double tikhonov_weight(double lambda, const ControlAnsatz& ansatz);

bool within_bounds(const PulseVector& alpha, const ControlAnsatz& ansatz);

/// Propagator of the piecewise-constant pulse, segment 0 acting first.
/// Throws std::invalid_argument on shape mismatch and std::domain_error for amplitudes
/// outside [-alpha_max, alpha_max].
CMatrix evolve(const HamiltonianModel& model, const ControlAnsatz& ansatz, const PulseVector& alpha);

struct CostValue {
  double cost = 0.0;
  double infidelity = 0.0;
  double regularization = 0.0;
  PulseVector gradient;  ///< empty unless requested
};

/// Infidelity plus weighted Tikhonov distance to spec.alpha0, optionally with the exact
/// gradient (propagator Frechet derivatives through each segment's eigenbasis).
CostValue evaluate_cost(const CostSpec& spec, const HamiltonianModel& model,
                        const ControlAnsatz& ansatz, const PulseVector& alpha, bool with_gradient);

double cost(const CostSpec& spec, const HamiltonianModel& model, const ControlAnsatz& ansatz,
            const PulseVector& alpha);

PulseVector cost_gradient(const CostSpec& spec, const HamiltonianModel& model,
                          const ControlAnsatz& ansatz, const PulseVector& alpha);

}  // namespace pulseinterp
