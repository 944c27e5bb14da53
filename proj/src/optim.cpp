#include "pulseinterp/optim.hpp"

#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

namespace pulseinterp {

namespace {

struct CurvaturePair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

Eigen::VectorXd clamp_box(const Eigen::VectorXd& x, double lo, double hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

// Zero where the variable sits on a bound and the gradient points outward.
Eigen::Array<bool, Eigen::Dynamic, 1> free_mask(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                                                 double lo, double hi) {
  Eigen::Array<bool, Eigen::Dynamic, 1> mask(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    mask[i] = !((x[i] <= lo && g[i] > 0.0) || (x[i] >= hi && g[i] < 0.0));
  }
  return mask;
}

Eigen::VectorXd two_loop(const Eigen::VectorXd& g, const std::deque<CurvaturePair>& mem) {
  Eigen::VectorXd q = g;
  std::vector<double> a(mem.size());
  for (std::size_t j = mem.size(); j-- > 0;) {
    a[j] = mem[j].rho * mem[j].s.dot(q);
    q -= a[j] * mem[j].y;
  }
  if (!mem.empty()) {
    const auto& last = mem.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t j = 0; j < mem.size(); ++j) {
    const double b = mem[j].rho * mem[j].y.dot(q);
    q += (a[j] - b) * mem[j].s;
  }
  return -q;
}

}  // namespace

void OptConfig::validate() const {
  if (max_iter < 1 || !(grad_tol > 0.0) || !(cost_rel_tol > 0.0) || stall_window < 1 ||
      !(lower < upper) || memory < 1) {
    throw std::invalid_argument("invalid optimizer configuration");
  }
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::GradTol:
      return "grad_tol";
    case StopReason::Stall:
      return "stall";
    case StopReason::MaxIter:
      return "max_iter";
  }
  return "max_iter";
}

StopReason stop_reason_from_string(const std::string& s) {
  if (s == "grad_tol") return StopReason::GradTol;
  if (s == "stall") return StopReason::Stall;
  if (s == "max_iter") return StopReason::MaxIter;
  throw std::invalid_argument("unknown stop reason '" + s + "'");
}

OptResult minimize(const Objective& objective, const Eigen::VectorXd& x_init,
                   const OptConfig& cfg) {
  cfg.validate();
  constexpr double armijo_c1 = 1e-4;
  constexpr int max_backtracks = 40;

  OptResult res;
  Eigen::VectorXd x = clamp_box(x_init, cfg.lower, cfg.upper);
  ObjectiveValue cur = objective(x);
  res.report.evaluations = 1;
  if (!std::isfinite(cur.value) || cur.gradient.size() != x.size() || !cur.gradient.allFinite()) {
    throw std::runtime_error("minimize: non-finite cost or gradient at the initial point");
  }
  res.report.initial_cost = cur.value;

  std::deque<CurvaturePair> memory;
  int stalled = 0;
  res.report.converged_by = StopReason::MaxIter;

  while (true) {
    const auto mask = free_mask(x, cur.gradient, cfg.lower, cfg.upper);
    const Eigen::VectorXd pg = mask.select(cur.gradient, 0.0);
    if (pg.cwiseAbs().maxCoeff() < cfg.grad_tol) {
      res.report.converged_by = StopReason::GradTol;
      break;
    }
    if (res.report.iterations >= cfg.max_iter) {
      res.report.converged_by = StopReason::MaxIter;
      break;
    }

    Eigen::VectorXd x_new;
    ObjectiveValue trial;
    auto line_search = [&](const Eigen::VectorXd& d, double t) {
      for (int k = 0; k < max_backtracks; ++k, t *= 0.5) {
        x_new = clamp_box(x + t * d, cfg.lower, cfg.upper);
        const Eigen::VectorXd step = x_new - x;
        if (step.cwiseAbs().maxCoeff() == 0.0) return false;
        trial = objective(x_new);
        ++res.report.evaluations;
        if (std::isfinite(trial.value) &&
            trial.value <= cur.value + armijo_c1 * cur.gradient.dot(step) &&
            trial.value <= cur.value) {
          return true;
        }
      }
      return false;
    };

    bool accepted = false;
    if (!memory.empty()) {
      const Eigen::VectorXd d = mask.select(two_loop(pg, memory), 0.0);
      if (pg.dot(d) < 0.0) accepted = line_search(d, 1.0);
    }
    if (!accepted) {
      // Quasi-Newton direction unusable: restart from projected steepest descent.
      memory.clear();
      // Polyak step f / |g|^2 (the attainable minimum is near zero), capped at unit length.
      const double g2 = pg.squaredNorm();
      accepted = line_search(-pg, std::min(std::abs(cur.value) / g2, 1.0 / std::sqrt(g2)));
    }
    if (!accepted) {
      res.report.converged_by = StopReason::Stall;
      break;
    }

    CurvaturePair pair{x_new - x, trial.gradient - cur.gradient, 0.0};
    const double sy = pair.s.dot(pair.y);
    if (sy > 1e-12 * pair.y.squaredNorm() && sy > 0.0) {
      pair.rho = 1.0 / sy;
      memory.push_back(std::move(pair));
      if (static_cast<int>(memory.size()) > cfg.memory) memory.pop_front();
    }

    const double rel = (cur.value - trial.value) / std::max(std::abs(cur.value), 1e-300);
    x = std::move(x_new);
    cur = std::move(trial);
    ++res.report.iterations;

    stalled = rel < cfg.cost_rel_tol ? stalled + 1 : 0;
    if (stalled >= cfg.stall_window) {
      res.report.converged_by = StopReason::Stall;
      break;
    }
  }

  res.x = std::move(x);
  res.report.final_cost = cur.value;
  res.report.final_infidelity = cur.infidelity;
  return res;
}

OptResult minimize(const std::function<double(const Eigen::VectorXd&)>& cost_fn,
                   const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad_fn,
                   const Eigen::VectorXd& x_init, const OptConfig& cfg) {
  return minimize(
      [&](const Eigen::VectorXd& x) {
        ObjectiveValue v;
        v.value = cost_fn(x);
        v.gradient = grad_fn(x);
        return v;
      },
      x_init, cfg);
}

PulseVector seeded_init(const ControlAnsatz& ansatz, std::uint64_t seed, double scale) {
  ansatz.validate();
  if (!(scale > 0.0) || scale > ansatz.alpha_max) {
    throw std::invalid_argument("seeded_init: scale must lie in (0, alpha_max]");
  }
  // mt19937_64 is fully specified by the standard; the double conversion is done by hand
  // because uniform_real_distribution is implementation-defined.
  std::mt19937_64 gen(seed);
  PulseVector alpha(ansatz.size());
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    alpha[i] = scale * (2.0 * u - 1.0);
  }
  return alpha;
}

Objective pulse_objective(const CostSpec& spec, const HamiltonianModel& model,
                          const ControlAnsatz& ansatz) {
  return [&spec, &model, &ansatz](const Eigen::VectorXd& alpha) {
    const CostValue c = evaluate_cost(spec, model, ansatz, alpha, true);
    ObjectiveValue v;
    v.value = c.cost;
    v.gradient = c.gradient;
    v.infidelity = c.infidelity;
    return v;
  };
}

}  // namespace pulseinterp
