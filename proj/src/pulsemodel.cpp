#include "pulseinterp/pulsemodel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pulseinterp {

namespace {

constexpr double kBoundSlack = 1e-12;

void check_shapes(const HamiltonianModel& model, const ControlAnsatz& ansatz,
                  const PulseVector& alpha) {
  ansatz.validate();
  if (model.n_controls() != ansatz.n_controls) {
    throw std::invalid_argument("model has " + std::to_string(model.n_controls()) +
                                " controls, ansatz expects " + std::to_string(ansatz.n_controls));
  }
  if (alpha.size() != ansatz.size()) {
    throw std::invalid_argument("pulse vector has length " + std::to_string(alpha.size()) +
                                ", ansatz expects " + std::to_string(ansatz.size()));
  }
  if (!alpha.allFinite()) throw std::invalid_argument("pulse vector has non-finite entries");
  if (!within_bounds(alpha, ansatz)) {
    throw std::domain_error("pulse amplitude outside [-alpha_max, alpha_max]");
  }
}

// sin(x)/x, accurate near zero.
double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

struct Segment {
  Eigen::MatrixXcd vectors;
  Eigen::VectorXd values;
  CMatrix unitary;
};

Segment diagonalize_segment(const HamiltonianModel& model, const ControlAnsatz& ansatz,
                            const PulseVector& alpha, int s) {
  CMatrix h = model.drift;
  for (int k = 0; k < ansatz.n_controls; ++k) h += alpha[ansatz.index(k, s)] * model.controls[k];
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
  Segment seg;
  seg.vectors = eig.eigenvectors();
  seg.values = eig.eigenvalues();
  const double dt = ansatz.dt();
  const Eigen::VectorXcd phases =
      (seg.values * (-dt)).unaryExpr([](double x) { return std::polar(1.0, x); });
  seg.unitary = seg.vectors * phases.asDiagonal() * seg.vectors.adjoint();
  return seg;
}

}  // namespace

void ControlAnsatz::validate() const {
  if (n_controls < 1 || n_segments < 1 || !(duration > 0.0) || !(alpha_max > 0.0) ||
      !std::isfinite(duration) || !std::isfinite(alpha_max)) {
    throw std::invalid_argument("invalid control ansatz");
  }
}

HamiltonianModel two_qubit_model() {
  const CMatrix i2 = identity(2);
  const CMatrix x = pauli(PauliAxis::X), y = pauli(PauliAxis::Y), z = pauli(PauliAxis::Z);
  HamiltonianModel m;
  m.drift = CMatrix::Zero(4, 4);
  m.controls = {kron2(x, x), kron2(y, i2), kron2(z, i2), kron2(i2, y), kron2(i2, z)};
  m.labels = {"xx", "y1", "z1", "y2", "z2"};
  return m;
}

HamiltonianModel single_qubit_model() {
  HamiltonianModel m;
  m.drift = CMatrix::Zero(2, 2);
  m.controls = {pauli(PauliAxis::Y), pauli(PauliAxis::Z)};
  m.labels = {"y", "z"};
  return m;
}

HamiltonianModel model_for_dimension(int dim) {
  if (dim == 4) return two_qubit_model();
  if (dim == 2) return single_qubit_model();
  throw std::invalid_argument("no Hamiltonian model for dimension " + std::to_string(dim));
}

double tikhonov_weight(double lambda, const ControlAnsatz& ansatz) {
  return lambda / (static_cast<double>(ansatz.n_controls) * ansatz.n_segments * ansatz.alpha_max *
                   ansatz.alpha_max);
}

bool within_bounds(const PulseVector& alpha, const ControlAnsatz& ansatz) {
  return alpha.size() == 0 || alpha.cwiseAbs().maxCoeff() <= ansatz.alpha_max + kBoundSlack;
}

CMatrix evolve(const HamiltonianModel& model, const ControlAnsatz& ansatz,
               const PulseVector& alpha) {
  check_shapes(model, ansatz, alpha);
  CMatrix u = identity(model.dim());
  for (int s = 0; s < ansatz.n_segments; ++s) {
    u = diagonalize_segment(model, ansatz, alpha, s).unitary * u;
  }
  return u;
}

CostValue evaluate_cost(const CostSpec& spec, const HamiltonianModel& model,
                        const ControlAnsatz& ansatz, const PulseVector& alpha, bool with_gradient) {
  check_shapes(model, ansatz, alpha);
  const int h = model.dim();
  if (spec.target.rows() != h || spec.target.cols() != h) {
    throw std::invalid_argument("target dimension does not match the Hamiltonian model");
  }
  if (spec.alpha0.size() != alpha.size()) {
    throw std::invalid_argument("Tikhonov target length does not match the pulse vector");
  }
  if (!(spec.lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");

  const int n = ansatz.n_segments;
  const double weight = tikhonov_weight(spec.lambda, ansatz);
  const PulseVector diff = alpha - spec.alpha0;

  std::vector<Segment> segments;
  segments.reserve(n);
  // prefix[s] = U_{s-1} ... U_0
  std::vector<CMatrix> prefix;
  prefix.reserve(n + 1);
  prefix.push_back(identity(h));
  for (int s = 0; s < n; ++s) {
    segments.push_back(diagonalize_segment(model, ansatz, alpha, s));
    prefix.push_back(segments.back().unitary * prefix.back());
  }

  const CMatrix target_adj = spec.target.adjoint();
  const Complex tau = (target_adj * prefix.back()).trace();

  CostValue out;
  out.infidelity = std::max(0.0, 1.0 - trace_overlap_fidelity(tau, h));
  out.regularization = weight * diff.squaredNorm();
  out.cost = out.infidelity + out.regularization;
  if (!with_gradient) return out;

  out.gradient = 2.0 * weight * diff;
  const double dt = ansatz.dt();
  const double scale = -2.0 / (static_cast<double>(h) * h);
  // suffix = U_{n-1} ... U_{s+1}
  CMatrix suffix = identity(h);
  for (int s = n - 1; s >= 0; --s) {
    const Segment& seg = segments[s];
    const CMatrix m = prefix[s] * target_adj * suffix;
    const CMatrix m_eig = seg.vectors.adjoint() * m * seg.vectors;
    // Divided differences of exp(-i dt x) at the eigenvalue pairs.
    CMatrix gamma(h, h);
    for (int a = 0; a < h; ++a) {
      for (int b = 0; b < h; ++b) {
        const double mean = 0.5 * (seg.values[a] + seg.values[b]);
        const double half_gap = 0.5 * dt * (seg.values[a] - seg.values[b]);
        gamma(a, b) = Complex(0.0, -dt) * std::polar(1.0, -dt * mean) * sinc(half_gap);
      }
    }
    // d tau = sum_ab m_eig(b, a) gamma(a, b) C~(a, b)
    const CMatrix weighted = m_eig.transpose().cwiseProduct(gamma);
    for (int k = 0; k < ansatz.n_controls; ++k) {
      const CMatrix c_eig = seg.vectors.adjoint() * model.controls[k] * seg.vectors;
      const Complex dtau = weighted.cwiseProduct(c_eig).sum();
      out.gradient[ansatz.index(k, s)] += scale * (std::conj(tau) * dtau).real();
    }
    suffix = suffix * seg.unitary;
  }
  return out;
}

double cost(const CostSpec& spec, const HamiltonianModel& model, const ControlAnsatz& ansatz,
            const PulseVector& alpha) {
  return evaluate_cost(spec, model, ansatz, alpha, false).cost;
}

PulseVector cost_gradient(const CostSpec& spec, const HamiltonianModel& model,
                          const ControlAnsatz& ansatz, const PulseVector& alpha) {
  return evaluate_cost(spec, model, ansatz, alpha, true).gradient;
}

}  // namespace pulseinterp
