#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "pulseinterp/calib.hpp"

namespace pulseinterp {

struct EvalRecord {
  ParamPoint point;
  double infidelity = 0.0;
  int simplex = -1;
};

struct EvalSummary {
  double mean = 0.0;
  double std = 0.0;  ///< population standard deviation
  double max = 0.0;
  std::size_t count = 0;
  std::int64_t cumulative_iterations = 0;
};

struct Interpolation {
  PulseVector alpha;
  Mesh3::Location location;
};

/// Barycentric blend of the reference pulses at the vertices of the simplex holding p.
/// Throws OutOfDomainError naming the violated constraint when p is outside the family
/// domain, or when it lies outside the mesh hull.
Interpolation interpolate_at(const Landscape& landscape, const ParamPoint& p);

PulseVector interpolate(const Landscape& landscape, const ParamPoint& p);

/// Same blend restricted to a given simplex (used to check continuity across faces).
PulseVector interpolate_in_simplex(const Landscape& landscape, int simplex, const ParamPoint& p);

EvalSummary summarize(const std::vector<EvalRecord>& records, std::int64_t cumulative_iterations);

/// Interpolates, evolves and scores every test-grid point of the family domain.
std::pair<std::vector<EvalRecord>, EvalSummary> evaluate_grid(const Landscape& landscape,
                                                              const Granularity& test_granularity,
                                                              int threads = 0);

struct SweepRow {
  Granularity granularity;
  int round = 0;
  EvalSummary summary;
};

/// For each reference granularity, calibrates round by round (reusing the previous
/// round's landscape) and evaluates after every round.
std::vector<SweepRow> sweep(const std::vector<Granularity>& granularities, int max_rounds,
                            const CalibConfig& base, const Granularity& test_granularity,
                            const std::function<void(const SweepRow&)>& on_row = {});

}  // namespace pulseinterp
