#include "pulseinterp/evalharness.hpp"

#include <algorithm>
#include <cmath>

#include "pulseinterp/errors.hpp"
#include "pulseinterp/parallel.hpp"

namespace pulseinterp {

namespace {

PulseVector blend(const Landscape& landscape, int simplex, const Mesh3::Barycentric& b) {
  const auto& vertices = landscape.mesh.simplices()[simplex];
  PulseVector alpha = PulseVector::Zero(landscape.ansatz.size());
  for (int k = 0; k < 4; ++k) alpha += b[k] * landscape.references[vertices[k]].alpha;
  // Coordinates may dip below zero by rounding; keep the result feasible.
  const double bound = landscape.ansatz.alpha_max;
  return alpha.cwiseMax(-bound).cwiseMin(bound);
}

}  // namespace

Interpolation interpolate_at(const Landscape& landscape, const ParamPoint& p) {
  if (auto why = landscape.gate_family().domain_violation(p, 1e-12)) {
    throw OutOfDomainError("point outside the " + landscape.family + " domain: " + *why);
  }
  const auto loc = landscape.mesh.try_locate(p);
  if (!loc) throw OutOfDomainError("point lies outside the reference mesh");
  return Interpolation{blend(landscape, loc->simplex, loc->coords), *loc};
}

PulseVector interpolate(const Landscape& landscape, const ParamPoint& p) {
  return interpolate_at(landscape, p).alpha;
}

PulseVector interpolate_in_simplex(const Landscape& landscape, int simplex, const ParamPoint& p) {
  return blend(landscape, simplex, landscape.mesh.barycentric(simplex, p));
}

EvalSummary summarize(const std::vector<EvalRecord>& records, std::int64_t cumulative_iterations) {
  EvalSummary s;
  s.count = records.size();
  s.cumulative_iterations = cumulative_iterations;
  if (records.empty()) return s;
  double sum = 0.0;
  for (const auto& r : records) {
    sum += r.infidelity;
    s.max = std::max(s.max, r.infidelity);
  }
  s.mean = sum / static_cast<double>(s.count);
  double var = 0.0;
  for (const auto& r : records) var += (r.infidelity - s.mean) * (r.infidelity - s.mean);
  s.std = std::sqrt(var / static_cast<double>(s.count));
  return s;
}

std::pair<std::vector<EvalRecord>, EvalSummary> evaluate_grid(const Landscape& landscape,
                                                              const Granularity& test_granularity,
                                                              int threads) {
  const auto& family = landscape.gate_family();
  const auto points = grid_points(family, test_granularity);
  const HamiltonianModel model = model_for_dimension(family.dim);
  std::vector<EvalRecord> records(points.size());
  parallel_for(
      static_cast<int>(points.size()),
      [&](int i) {
        const auto interp = interpolate_at(landscape, points[i]);
        const CMatrix u = evolve(model, landscape.ansatz, interp.alpha);
        records[i].point = points[i];
        records[i].infidelity = gate_infidelity(family.target(points[i]), u, family.dim);
        records[i].simplex = interp.location.simplex;
      },
      threads);
  auto summary = summarize(records, landscape.total_iterations());
  return {std::move(records), summary};
}

std::vector<SweepRow> sweep(const std::vector<Granularity>& granularities, int max_rounds,
                            const CalibConfig& base, const Granularity& test_granularity,
                            const std::function<void(const SweepRow&)>& on_row) {
  if (max_rounds < 0) throw std::invalid_argument("max_rounds must be non-negative");
  std::vector<SweepRow> rows;
  for (const auto& g : granularities) {
    CalibConfig cfg = base;
    cfg.granularity = g;
    cfg.rounds = max_rounds;
    Landscape land = initial_round(cfg);
    for (int round = 0;; ++round) {
      SweepRow row{g, round, evaluate_grid(land, test_granularity, cfg.threads).second};
      if (on_row) on_row(row);
      rows.push_back(row);
      if (round == max_rounds) break;
      land = reoptimization_round(std::move(land), cfg);
    }
  }
  return rows;
}

}  // namespace pulseinterp
