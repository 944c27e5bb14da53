#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pulseinterp/gatefam.hpp"
#include "pulseinterp/mesh.hpp"
#include "pulseinterp/optim.hpp"
#include "pulseinterp/pulsemodel.hpp"

namespace pulseinterp {

struct ReferencePulse {
  ParamPoint point;
  PulseVector alpha;
  double infidelity = 0.0;
  std::int64_t cumulative_iterations = 0;  ///< optimizer steps spent on this point so far
};

/// One entry per calibration round; round 0 is the initial optimization.
struct RoundLog {
  int round = 0;
  std::int64_t iterations = 0;             ///< accepted optimizer steps in this round
  std::int64_t cumulative_iterations = 0;  ///< including all earlier rounds
  std::int64_t evaluations = 0;            ///< objective calls in this round
  double mean_infidelity = 0.0;            ///< over reference pulses, after the round
  double max_infidelity = 0.0;
  double mean_penalty = 0.0;  ///< mean neighbor-average Tikhonov penalty after the round
};

struct CalibConfig {
  std::string family = "weyl-chamber";
  Granularity granularity{1, 4};
  int rounds = 0;
  double lambda = 1e-2;
  int n_segments = 20;
  double duration = std::numbers::pi;
  double alpha_max = 1.0;
  double init_scale = 0.5;  ///< random initial guesses drawn from [-init_scale, init_scale]
  std::uint64_t seed = 0;
  OptConfig opt;
  int threads = 0;  ///< 0 = default_thread_count()

  void validate() const;
};

/// Calibrated reference pulses plus the mesh used to interpolate between them.
struct Landscape {
  std::string family;
  Granularity granularity;
  ControlAnsatz ansatz;
  double lambda = 1e-2;
  std::uint64_t seed = 0;
  OptConfig opt;
  std::vector<ReferencePulse> references;
  Mesh3 mesh;  ///< vertices are the reference points, in order
  std::vector<RoundLog> log;

  const GateFamily& gate_family() const { return family_by_name(family); }
  std::int64_t total_iterations() const { return log.empty() ? 0 : log.back().cumulative_iterations; }
};

using RoundCallback = std::function<void(const RoundLog&)>;

ControlAnsatz ansatz_for(const CalibConfig& cfg);

/// Optimizes every grid point from a seeded random guess with a zero Tikhonov target,
/// then meshes the points.
Landscape initial_round(const CalibConfig& cfg);

/// Mean of the pulses at the mesh neighbors of vertex i.
PulseVector neighbor_average(const Landscape& landscape, int i);

/// Weighted squared distance between pulse i and its neighbor average.
double neighbor_penalty(const Landscape& landscape, int i);

/// Vertex indices by descending penalty, ties by ascending index.
std::vector<int> penalty_order(const std::vector<double>& penalties);

/// Visits vertices in penalty order (snapshot at round start); each visit re-optimizes
/// pulse i from its freshly recomputed neighbor average, which is both the initial guess
/// and the Tikhonov target.
Landscape reoptimization_round(Landscape landscape, const CalibConfig& cfg);

/// initial_round followed by cfg.rounds re-optimization rounds.
Landscape calibrate(const CalibConfig& cfg, const RoundCallback& on_round = {});

/// Infidelity of a pulse against the family target at p, from a fresh evolution.
double pulse_infidelity(const Landscape& landscape, const ParamPoint& p, const PulseVector& alpha);

}  // namespace pulseinterp
