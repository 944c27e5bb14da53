#include "pulseinterp/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pulseinterp/errors.hpp"
#include "pulseinterp/evalharness.hpp"
#include "pulseinterp/landscape_io.hpp"

namespace pulseinterp {

namespace {

using nlohmann::json;

struct CalibrateArgs {
  std::string family;
  std::string granularity;
  int rounds = 0;
  double lambda = 1e-2;
  std::uint64_t seed = 0;
  int segments = 20;
  int max_iter = 50;
  double init_scale = 0.5;
  std::string out;
};

struct EvaluateArgs {
  std::string landscape;
  std::string granularity;
  std::string csv;
  std::string summary;
};

struct InterpolateArgs {
  std::string landscape;
  std::string point;
  std::string out;
};

struct SweepArgs {
  std::string family;
  std::vector<std::string> granularities;
  int rounds = 10;
  std::string test_granularity;
  double lambda = 1e-2;
  std::uint64_t seed = 0;
  int max_iter = 50;
  std::string out;
};

class BadArguments : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::ostream& exact(std::ostream& os) {
  return os << std::setprecision(std::numeric_limits<double>::max_digits10);
}

// Fails before any long computation when the destination cannot be created.
void ensure_writable(const std::string& path) {
  const bool existed = std::filesystem::exists(path);
  std::ofstream probe(path, std::ios::app);
  if (!probe) throw IoError("cannot write to '" + path + "'");
  probe.close();
  if (!existed) std::filesystem::remove(path);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.close();
  if (!f) throw IoError("failed writing '" + path + "'");
}

ParamPoint parse_point(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw BadArguments("bad coordinate '" + item + "' in --point");
    v.push_back(x);
  }
  if (v.size() != 3) throw BadArguments("--point needs three comma-separated coordinates");
  return ParamPoint(v[0], v[1], v[2]);
}

Granularity parse_granularity(const std::string& text) {
  try {
    return Granularity::parse(text);
  } catch (const std::invalid_argument& e) {
    throw BadArguments(e.what());
  }
}

void check_family(const std::string& name) {
  try {
    family_by_name(name);
  } catch (const std::invalid_argument& e) {
    throw BadArguments(e.what());
  }
}

void print_round(std::ostream& out, const RoundLog& r) {
  out << std::setw(5) << r.round << std::setw(12) << r.iterations << std::setw(12)
      << r.cumulative_iterations << std::scientific << std::setprecision(3) << std::setw(13)
      << r.mean_infidelity << std::setw(13) << r.max_infidelity << std::setw(13) << r.mean_penalty
      << std::defaultfloat << "\n";
  out.flush();
}

int cmd_calibrate(const CalibrateArgs& a, std::ostream& out) {
  check_family(a.family);
  CalibConfig cfg;
  cfg.family = a.family;
  cfg.granularity = parse_granularity(a.granularity);
  cfg.rounds = a.rounds;
  cfg.lambda = a.lambda;
  cfg.seed = a.seed;
  cfg.n_segments = a.segments;
  cfg.init_scale = a.init_scale;
  cfg.opt.max_iter = a.max_iter;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw BadArguments(e.what());
  }
  ensure_writable(a.out);

  out << "round  iterations  cumulative  mean_infid   max_infid    mean_penalty\n";
  const Landscape land = calibrate(cfg, [&](const RoundLog& r) { print_round(out, r); });
  save_landscape(land, a.out);
  out << "wrote " << land.references.size() << " references, " << land.mesh.num_simplices()
      << " simplices to " << a.out << "\n";
  return kExitOk;
}

json summary_json(const EvalSummary& s) {
  return {{"mean", s.mean},
          {"std", s.std},
          {"max", s.max},
          {"count", s.count},
          {"cumulative_iterations", s.cumulative_iterations}};
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const Granularity g = parse_granularity(a.granularity);
  if (!a.csv.empty()) ensure_writable(a.csv);
  if (!a.summary.empty()) ensure_writable(a.summary);
  const Landscape land = load_landscape(a.landscape);
  const auto [records, summary] = evaluate_grid(land, g);

  if (!a.csv.empty()) {
    std::ostringstream csv;
    exact(csv) << "tx,ty,tz,infidelity,simplex\n";
    for (const auto& r : records) {
      csv << r.point.x() << ',' << r.point.y() << ',' << r.point.z() << ',' << r.infidelity << ','
          << r.simplex << '\n';
    }
    write_text(a.csv, csv.str());
  }
  json doc = summary_json(summary);
  doc["family"] = land.family;
  doc["reference_granularity"] = land.granularity.to_string();
  doc["test_granularity"] = g.to_string();
  doc["rounds"] = land.log.empty() ? 0 : land.log.back().round;
  const std::string text = doc.dump(2) + "\n";
  if (!a.summary.empty()) {
    write_text(a.summary, text);
  } else {
    out << text;
  }
  return kExitOk;
}

int cmd_interpolate(const InterpolateArgs& a, std::ostream& out) {
  const ParamPoint p = parse_point(a.point);
  if (!a.out.empty()) ensure_writable(a.out);
  const Landscape land = load_landscape(a.landscape);
  const Interpolation interp = interpolate_at(land, p);
  json doc = {{"family", land.family},
              {"point", {p.x(), p.y(), p.z()}},
              {"ansatz",
               {{"n_controls", land.ansatz.n_controls},
                {"n_segments", land.ansatz.n_segments},
                {"duration", land.ansatz.duration},
                {"alpha_max", land.ansatz.alpha_max}}},
              {"alpha", std::vector<double>(interp.alpha.data(), interp.alpha.data() + interp.alpha.size())},
              {"simplex", interp.location.simplex},
              {"barycentric", std::vector<double>(interp.location.coords.data(),
                                                  interp.location.coords.data() + 4)},
              {"infidelity", pulse_infidelity(land, p, interp.alpha)}};
  const std::string text = doc.dump(2) + "\n";
  if (!a.out.empty()) {
    write_text(a.out, text);
  } else {
    out << text;
  }
  return kExitOk;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  check_family(a.family);
  std::vector<Granularity> gs;
  for (const auto& g : a.granularities) gs.push_back(parse_granularity(g));
  const Granularity test = parse_granularity(a.test_granularity);
  CalibConfig cfg;
  cfg.family = a.family;
  cfg.lambda = a.lambda;
  cfg.seed = a.seed;
  cfg.opt.max_iter = a.max_iter;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw BadArguments(e.what());
  }
  if (a.rounds < 0) throw BadArguments("--rounds must be non-negative");
  ensure_writable(a.out);

  std::ostringstream csv;
  exact(csv) << "granularity,round,cumulative_iterations,mean_infidelity,std_infidelity,max_infidelity\n";
  sweep(gs, a.rounds, cfg, test, [&](const SweepRow& row) {
    csv << row.granularity.to_string() << ',' << row.round << ',' << row.summary.cumulative_iterations
        << ',' << row.summary.mean << ',' << row.summary.std << ',' << row.summary.max << '\n';
    out << row.granularity.to_string() << " round " << row.round << ": iterations "
        << row.summary.cumulative_iterations << ", mean " << row.summary.mean << ", max "
        << row.summary.max << "\n";
    out.flush();
  });
  write_text(a.out, csv.str());
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Calibrate and interpolate control pulses over continuous gate families"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pulseinterp 1.0");

  CalibrateArgs ca;
  auto* cal = app.add_subcommand("calibrate", "Optimize reference pulses and write a landscape file");
  cal->add_option("--family", ca.family, "weyl-chamber, cartan-box or single-qubit")->required();
  cal->add_option("--granularity", ca.granularity, "Reference grid spacing, e.g. 1/4")->required();
  cal->add_option("--rounds", ca.rounds, "Re-optimization rounds")->capture_default_str();
  cal->add_option("--lambda", ca.lambda, "Tikhonov weight")->capture_default_str();
  cal->add_option("--seed", ca.seed, "Seed for the initial guesses")->capture_default_str();
  cal->add_option("--segments", ca.segments, "Piecewise-constant segments per control")->capture_default_str();
  cal->add_option("--max-iter", ca.max_iter, "Iteration cap per optimization")->capture_default_str();
  cal->add_option("--init-scale", ca.init_scale, "Amplitude of random initial guesses")->capture_default_str();
  cal->add_option("--out", ca.out, "Landscape file to write")->required();

  EvaluateArgs ea;
  auto* ev = app.add_subcommand("evaluate", "Score interpolated pulses on a test grid");
  ev->add_option("--landscape", ea.landscape, "Landscape file")->required();
  ev->add_option("--granularity", ea.granularity, "Test grid spacing, e.g. 1/24")->required();
  ev->add_option("--csv", ea.csv, "Per-point CSV output (tx,ty,tz,infidelity,simplex)");
  ev->add_option("--summary", ea.summary, "Summary JSON output (default: stdout)");

  InterpolateArgs ia;
  auto* ip = app.add_subcommand("interpolate", "Interpolated pulse at one point");
  ip->add_option("--landscape", ia.landscape, "Landscape file")->required();
  ip->add_option("--point", ia.point, "Coordinates tx,ty,tz")->required();
  ip->add_option("--out", ia.out, "Pulse JSON output (default: stdout)");

  SweepArgs sa;
  auto* sw = app.add_subcommand("sweep", "Infidelity versus iterations over granularities and rounds");
  sw->add_option("--family", sa.family, "Gate family")->required();
  sw->add_option("--granularities", sa.granularities, "Reference spacings, e.g. 1/2,1/4")
      ->required()
      ->delimiter(',');
  sw->add_option("--rounds", sa.rounds, "Maximum re-optimization rounds")->capture_default_str();
  sw->add_option("--test-granularity", sa.test_granularity, "Test grid spacing")->required();
  sw->add_option("--lambda", sa.lambda, "Tikhonov weight")->capture_default_str();
  sw->add_option("--seed", sa.seed, "Seed for the initial guesses")->capture_default_str();
  sw->add_option("--max-iter", sa.max_iter, "Iteration cap per optimization")->capture_default_str();
  sw->add_option("--out", sa.out, "Sweep CSV output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadArgs;
  }

  try {
    if (*cal) return cmd_calibrate(ca, out);
    if (*ev) return cmd_evaluate(ea, out);
    if (*ip) return cmd_interpolate(ia, out);
    if (*sw) return cmd_sweep(sa, out);
  } catch (const BadArguments& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadArgs;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitBadArgs;
}

}  // namespace pulseinterp
