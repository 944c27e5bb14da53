#include "pulseinterp/calib.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "pulseinterp/parallel.hpp"

namespace pulseinterp {

namespace {

OptConfig bounded(OptConfig opt, const ControlAnsatz& ansatz) {
  opt.lower = -ansatz.alpha_max;
  opt.upper = ansatz.alpha_max;
  return opt;
}

std::string describe(const ParamPoint& p) {
  std::ostringstream os;
  os << "(" << p.x() << ", " << p.y() << ", " << p.z() << ")";
  return os.str();
}

struct PointResult {
  PulseVector alpha;
  double infidelity = 0.0;
  OptReport report;
};

PointResult optimize_point(const Landscape& land, const HamiltonianModel& model,
                           const ParamPoint& p, const PulseVector& guess,
                           const PulseVector& tikhonov_target) {
  CostSpec spec;
  spec.target = land.gate_family().target(p);
  spec.lambda = land.lambda;
  spec.alpha0 = tikhonov_target;
  OptResult r;
  try {
    r = minimize(pulse_objective(spec, model, land.ansatz), guess, bounded(land.opt, land.ansatz));
  } catch (const std::exception& e) {
    throw std::runtime_error("optimization failed at point " + describe(p) + ": " + e.what());
  }
  PointResult out;
  out.infidelity = gate_infidelity(spec.target, evolve(model, land.ansatz, r.x), model.dim());
  out.alpha = std::move(r.x);
  out.report = r.report;
  return out;
}

void fill_statistics(const Landscape& land, RoundLog& entry) {
  const auto n = static_cast<double>(land.references.size());
  double sum = 0.0, worst = 0.0, penalty = 0.0;
  for (std::size_t i = 0; i < land.references.size(); ++i) {
    sum += land.references[i].infidelity;
    worst = std::max(worst, land.references[i].infidelity);
    penalty += neighbor_penalty(land, static_cast<int>(i));
  }
  entry.mean_infidelity = sum / n;
  entry.max_infidelity = worst;
  entry.mean_penalty = penalty / n;
}

}  // namespace

void CalibConfig::validate() const {
  family_by_name(family);
  if (rounds < 0) throw std::invalid_argument("rounds must be non-negative");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
  if (!(init_scale > 0.0) || init_scale > alpha_max) {
    throw std::invalid_argument("init_scale must lie in (0, alpha_max]");
  }
  ansatz_for(*this).validate();
  opt.validate();
}

ControlAnsatz ansatz_for(const CalibConfig& cfg) {
  ControlAnsatz a;
  a.n_controls = model_for_dimension(family_by_name(cfg.family).dim).n_controls();
  a.n_segments = cfg.n_segments;
  a.duration = cfg.duration;
  a.alpha_max = cfg.alpha_max;
  return a;
}

double pulse_infidelity(const Landscape& landscape, const ParamPoint& p, const PulseVector& alpha) {
  const auto& family = landscape.gate_family();
  const HamiltonianModel model = model_for_dimension(family.dim);
  return gate_infidelity(family.target(p), evolve(model, landscape.ansatz, alpha), family.dim);
}

Landscape initial_round(const CalibConfig& cfg) {
  cfg.validate();
  Landscape land;
  land.family = cfg.family;
  land.granularity = cfg.granularity;
  land.ansatz = ansatz_for(cfg);
  land.lambda = cfg.lambda;
  land.seed = cfg.seed;
  land.opt = bounded(cfg.opt, land.ansatz);

  const auto& family = land.gate_family();
  const auto points = grid_points(family, cfg.granularity);
  const HamiltonianModel model = model_for_dimension(family.dim);
  const PulseVector zero = PulseVector::Zero(land.ansatz.size());

  std::vector<PointResult> results(points.size());
  parallel_for(
      static_cast<int>(points.size()),
      [&](int i) {
        const PulseVector guess =
            seeded_init(land.ansatz, cfg.seed ^ static_cast<std::uint64_t>(i), cfg.init_scale);
        results[i] = optimize_point(land, model, points[i], guess, zero);
      },
      cfg.threads);

  RoundLog entry;
  entry.round = 0;
  land.references.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    ReferencePulse ref;
    ref.point = points[i];
    ref.alpha = std::move(results[i].alpha);
    ref.infidelity = results[i].infidelity;
    ref.cumulative_iterations = results[i].report.iterations;
    entry.iterations += results[i].report.iterations;
    entry.evaluations += results[i].report.evaluations;
    land.references.push_back(std::move(ref));
  }
  land.mesh = Mesh3::build(points);
  entry.cumulative_iterations = entry.iterations;
  fill_statistics(land, entry);
  land.log.push_back(entry);
  return land;
}

PulseVector neighbor_average(const Landscape& landscape, int i) {
  const auto& nbrs = landscape.mesh.neighbors(i);
  if (nbrs.empty()) {
    throw std::logic_error("vertex " + std::to_string(i) + " has no mesh neighbors");
  }
  PulseVector avg = PulseVector::Zero(landscape.ansatz.size());
  for (int j : nbrs) avg += landscape.references[j].alpha;
  return avg / static_cast<double>(nbrs.size());
}

double neighbor_penalty(const Landscape& landscape, int i) {
  const PulseVector diff = landscape.references.at(i).alpha - neighbor_average(landscape, i);
  return tikhonov_weight(landscape.lambda, landscape.ansatz) * diff.squaredNorm();
}

std::vector<int> penalty_order(const std::vector<double>& penalties) {
  std::vector<int> order(penalties.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return penalties[a] > penalties[b]; });
  return order;
}

Landscape reoptimization_round(Landscape landscape, const CalibConfig& cfg) {
  if (landscape.log.empty()) throw std::invalid_argument("landscape has no initial round");
  landscape.opt = bounded(cfg.opt, landscape.ansatz);
  landscape.lambda = cfg.lambda;
  const auto& family = landscape.gate_family();
  const HamiltonianModel model = model_for_dimension(family.dim);
  const int n = static_cast<int>(landscape.references.size());

  std::vector<double> penalties(n);
  for (int i = 0; i < n; ++i) penalties[i] = neighbor_penalty(landscape, i);

  RoundLog entry;
  entry.round = landscape.log.back().round + 1;
  for (int i : penalty_order(penalties)) {
    const PulseVector target = neighbor_average(landscape, i);
    auto& ref = landscape.references[i];
    PointResult r = optimize_point(landscape, model, ref.point, target, target);
    ref.alpha = std::move(r.alpha);
    ref.infidelity = r.infidelity;
    ref.cumulative_iterations += r.report.iterations;
    entry.iterations += r.report.iterations;
    entry.evaluations += r.report.evaluations;
  }
  entry.cumulative_iterations = landscape.log.back().cumulative_iterations + entry.iterations;
  fill_statistics(landscape, entry);
  landscape.log.push_back(entry);
  return landscape;
}

Landscape calibrate(const CalibConfig& cfg, const RoundCallback& on_round) {
  Landscape land = initial_round(cfg);
  if (on_round) on_round(land.log.back());
  for (int r = 0; r < cfg.rounds; ++r) {
    land = reoptimization_round(std::move(land), cfg);
    if (on_round) on_round(land.log.back());
  }
  return land;
}

}  // namespace pulseinterp
