#include <doctest.h>

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "pulseinterp/gatefam.hpp"
#include "pulseinterp/pulsemodel.hpp"

using namespace pulseinterp;

namespace {

const Complex I1{0.0, 1.0};

PulseVector random_pulse(const ControlAnsatz& a, std::mt19937_64& gen, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  PulseVector v(a.size());
  for (auto& x : v) x = u(gen);
  return v;
}

ControlAnsatz ansatz_with(int n_controls) {
  ControlAnsatz a;
  a.n_controls = n_controls;
  return a;
}

// Product of segment exponentials from the generic matrix exponential.
CMatrix reference_evolution(const HamiltonianModel& m, const ControlAnsatz& a, const PulseVector& alpha) {
  CMatrix u = identity(m.dim());
  for (int s = 0; s < a.n_segments; ++s) {
    CMatrix h = m.drift;
    for (int k = 0; k < a.n_controls; ++k) h += alpha[a.index(k, s)] * m.controls[k];
    const CMatrix step = (CMatrix(-I1 * a.dt() * h)).exp();
    u = step * u;
  }
  return u;
}

double fd_relative_error(const CostSpec& spec, const HamiltonianModel& m, const ControlAnsatz& a,
                         const PulseVector& alpha) {
  const PulseVector g = cost_gradient(spec, m, a, alpha);
  PulseVector fd(alpha.size());
  const double h = 1e-6;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    PulseVector p = alpha, q = alpha;
    p[i] += h;
    q[i] -= h;
    fd[i] = (cost(spec, m, a, p) - cost(spec, m, a, q)) / (2 * h);
  }
  return (g - fd).cwiseAbs().maxCoeff() / g.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("tikhonov weight") {
  CHECK(tikhonov_weight(1e-2, ansatz_with(5)) == doctest::Approx(1e-4).epsilon(1e-14));
  CHECK(tikhonov_weight(1e-2, ansatz_with(2)) == doctest::Approx(2.5e-4).epsilon(1e-14));
  CHECK(tikhonov_weight(0.0, ansatz_with(5)) == 0.0);
  ControlAnsatz wide = ansatz_with(5);
  wide.alpha_max = 2.0;
  CHECK(tikhonov_weight(1e-2, wide) == doctest::Approx(2.5e-5));
}

TEST_CASE("ansatz layout and validation") {
  const ControlAnsatz a;
  CHECK(a.size() == 100);
  CHECK(a.index(0, 0) == 0);
  CHECK(a.index(1, 0) == 20);
  CHECK(a.index(4, 19) == 99);
  CHECK(a.dt() == doctest::Approx(M_PI / 20));
  ControlAnsatz bad = a;
  bad.n_segments = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("models") {
  const auto two = two_qubit_model();
  CHECK(two.dim() == 4);
  CHECK(two.n_controls() == 5);
  CHECK(two.controls[0].isApprox(kron2(pauli(PauliAxis::X), pauli(PauliAxis::X))));
  CHECK(two.controls[4].isApprox(kron2(identity(2), pauli(PauliAxis::Z))));
  CHECK(two.drift.isZero());
  const auto one = single_qubit_model();
  CHECK(one.dim() == 2);
  CHECK(one.n_controls() == 2);
  CHECK(one.controls[0].isApprox(pauli(PauliAxis::Y)));
  CHECK(one.controls[1].isApprox(pauli(PauliAxis::Z)));
  CHECK_THROWS_AS(model_for_dimension(3), std::invalid_argument);
}

TEST_CASE("evolve closed forms") {
  const auto m = two_qubit_model();
  const ControlAnsatz a;
  CHECK(evolve(m, a, PulseVector::Zero(100)).isApprox(identity(4)));
  PulseVector xx = PulseVector::Zero(100);
  xx.head(20).setOnes();
  const CMatrix u = evolve(m, a, xx);
  CHECK((u + identity(4)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(gate_infidelity(identity(4), u, 4) < 1e-12);
  // f_xx = 1/4 on every segment gives exp(-i pi/4 XX), the (1/2, 0, 0) Cartan gate.
  const CMatrix cnotlike = evolve(m, a, 0.25 * xx);
  CHECK(gate_infidelity(cartan_unitary(Eigen::Vector3d(0.5, 0, 0)), cnotlike, 4) < 1e-14);
}

TEST_CASE("evolve agrees with a generic matrix exponential") {
  std::mt19937_64 gen(11);
  for (int dim : {2, 4}) {
    const auto m = model_for_dimension(dim);
    ControlAnsatz a = ansatz_with(m.n_controls());
    a.n_segments = 7;
    for (int t = 0; t < 20; ++t) {
      const PulseVector alpha = random_pulse(a, gen, 1.0);
      CHECK((evolve(m, a, alpha) - reference_evolution(m, a, alpha)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("evolve invariants") {
  std::mt19937_64 gen(5);
  for (int dim : {2, 4}) {
    const auto m = model_for_dimension(dim);
    const ControlAnsatz a = ansatz_with(m.n_controls());
    for (int t = 0; t < 100; ++t) {
      const PulseVector alpha = random_pulse(a, gen, 1.0);
      const CMatrix u = evolve(m, a, alpha);
      CHECK(unitarity_error(u) < 1e-10);
      // Negating every amplitude and reversing the segment order gives the inverse.
      PulseVector rev(alpha.size());
      for (int k = 0; k < a.n_controls; ++k)
        for (int s = 0; s < a.n_segments; ++s)
          rev[a.index(k, s)] = -alpha[a.index(k, a.n_segments - 1 - s)];
      CHECK((evolve(m, a, rev) - u.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("splitting a constant pulse leaves the propagator unchanged") {
  const auto m = two_qubit_model();
  const Eigen::Matrix<double, 5, 1> level(0.3, -0.7, 0.2, 0.9, -0.4);
  CMatrix first;
  for (int n : {1, 3, 20, 64}) {
    ControlAnsatz a;
    a.n_segments = n;
    PulseVector alpha(a.size());
    for (int k = 0; k < 5; ++k) alpha.segment(a.index(k, 0), n).setConstant(level[k]);
    const CMatrix u = evolve(m, a, alpha);
    if (n == 1) first = u;
    CHECK((u - first).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("evolve rejects bad input") {
  const auto m = two_qubit_model();
  const ControlAnsatz a;
  CHECK_THROWS_AS(evolve(m, a, PulseVector::Zero(99)), std::invalid_argument);
  PulseVector over = PulseVector::Zero(100);
  over[17] = 1.01;
  CHECK_THROWS_AS(evolve(m, a, over), std::domain_error);
  CHECK_FALSE(within_bounds(over, a));
  over[17] = 1.0;
  CHECK(within_bounds(over, a));
  CHECK_THROWS_AS(evolve(single_qubit_model(), a, PulseVector::Zero(100)), std::invalid_argument);
}

TEST_CASE("cost examples") {
  const auto m = two_qubit_model();
  const ControlAnsatz a;
  CostSpec spec{identity(4), 1e-2, PulseVector::Zero(100)};
  const PulseVector zero = PulseVector::Zero(100);
  CHECK(cost(spec, m, a, zero) == 0.0);
  CHECK(cost_gradient(spec, m, a, zero).cwiseAbs().maxCoeff() < 1e-15);

  std::mt19937_64 gen(2);
  const PulseVector alpha = random_pulse(a, gen, 0.8);
  spec.target = cartan_unitary(Eigen::Vector3d(0.5, 0.25, 0.1));
  const double inf = gate_infidelity(spec.target, evolve(m, a, alpha), 4);
  spec.alpha0 = alpha;
  CHECK(cost(spec, m, a, alpha) == doctest::Approx(inf).epsilon(1e-14));

  spec.alpha0 = random_pulse(a, gen, 0.8);
  const CostValue full = evaluate_cost(spec, m, a, alpha, true);
  CHECK(full.regularization ==
        doctest::Approx(1e-4 * (alpha - spec.alpha0).squaredNorm()).epsilon(1e-13));
  CHECK(full.cost == doctest::Approx(full.infidelity + full.regularization));
  CostSpec plain = spec;
  plain.lambda = 0.0;
  CHECK(cost(plain, m, a, alpha) == doctest::Approx(inf).epsilon(1e-14));
  const PulseVector diff = full.gradient - cost_gradient(plain, m, a, alpha);
  CHECK((diff - 2e-4 * (alpha - spec.alpha0)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(full.cost >= 0.0);
  CHECK(full.cost <= 1.0 + 1e-4 * 100 * 4);

  spec.alpha0 = PulseVector::Zero(3);
  CHECK_THROWS_AS(cost(spec, m, a, alpha), std::invalid_argument);
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const char* name : {"weyl-chamber", "cartan-box", "single-qubit"}) {
    const GateFamily& fam = family_by_name(name);
    const auto m = model_for_dimension(fam.dim);
    const ControlAnsatz a = ansatz_with(m.n_controls());
    double worst = 0.0;
    int done = 0;
    while (done < 100) {
      ParamPoint p(u(gen), u(gen), u(gen));
      if (!fam.contains(p)) continue;
      CostSpec spec{fam.target(p), 1e-2, random_pulse(a, gen, 0.9)};
      worst = std::max(worst, fd_relative_error(spec, m, a, random_pulse(a, gen, 0.9)));
      ++done;
    }
    CAPTURE(name);
    CHECK(worst < 1e-5);
  }
}
