#include "pulseinterp/landscape_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pulseinterp/errors.hpp"

namespace pulseinterp {

using nlohmann::json;

namespace {

json point_json(const ParamPoint& p) { return json::array({p.x(), p.y(), p.z()}); }

ParamPoint point_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw FormatError("point must be an array of 3 numbers");
  return ParamPoint(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json opt_json(const OptConfig& o) {
  return {{"max_iter", o.max_iter},         {"grad_tol", o.grad_tol},
          {"cost_rel_tol", o.cost_rel_tol}, {"stall_window", o.stall_window},
          {"lower", o.lower},               {"upper", o.upper},
          {"memory", o.memory}};
}

OptConfig opt_from(const json& j) {
  OptConfig o;
  o.max_iter = j.at("max_iter").get<int>();
  o.grad_tol = j.at("grad_tol").get<double>();
  o.cost_rel_tol = j.at("cost_rel_tol").get<double>();
  o.stall_window = j.at("stall_window").get<int>();
  o.lower = j.at("lower").get<double>();
  o.upper = j.at("upper").get<double>();
  o.memory = j.at("memory").get<int>();
  return o;
}

Landscape parse(const json& doc) {
  if (!doc.is_object()) throw FormatError("landscape file must hold a JSON object");
  const auto version = doc.at("version").get<std::string>();
  if (version != kLandscapeVersion) {
    throw FormatError("unsupported landscape version '" + version + "' (expected '" +
                      kLandscapeVersion + "')");
  }
  Landscape land;
  land.family = doc.at("family").get<std::string>();
  try {
    land.gate_family();
    land.granularity = Granularity::parse(doc.at("granularity").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  const auto& a = doc.at("ansatz");
  land.ansatz.n_controls = a.at("n_controls").get<int>();
  land.ansatz.n_segments = a.at("n_segments").get<int>();
  land.ansatz.duration = a.at("duration").get<double>();
  land.ansatz.alpha_max = a.at("alpha_max").get<double>();
  land.lambda = doc.at("lambda").get<double>();
  land.seed = doc.at("seed").get<std::uint64_t>();
  land.opt = opt_from(doc.at("optimizer"));
  try {
    land.ansatz.validate();
    land.opt.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }

  std::vector<ParamPoint> points;
  for (const auto& r : doc.at("references")) {
    ReferencePulse ref;
    ref.point = point_from(r.at("point"));
    const auto& alpha = r.at("alpha");
    if (!alpha.is_array() || static_cast<Eigen::Index>(alpha.size()) != land.ansatz.size()) {
      throw FormatError("reference pulse length does not match the ansatz");
    }
    ref.alpha.resize(land.ansatz.size());
    for (Eigen::Index k = 0; k < ref.alpha.size(); ++k) ref.alpha[k] = alpha[k].get<double>();
    ref.infidelity = r.at("infidelity").get<double>();
    ref.cumulative_iterations = r.at("iterations").get<std::int64_t>();
    points.push_back(ref.point);
    land.references.push_back(std::move(ref));
  }

  std::vector<Mesh3::Simplex> simplices;
  for (const auto& s : doc.at("simplices")) {
    if (!s.is_array() || s.size() != 4) throw FormatError("simplex must list 4 vertex indices");
    Mesh3::Simplex simplex;
    for (int k = 0; k < 4; ++k) simplex[k] = s[k].get<int>();
    simplices.push_back(simplex);
  }
  try {
    land.mesh = Mesh3::from_simplices(std::move(points), std::move(simplices));
  } catch (const std::exception& e) {
    throw FormatError(std::string("invalid mesh: ") + e.what());
  }

  for (const auto& e : doc.at("log")) {
    RoundLog entry;
    entry.round = e.at("round").get<int>();
    entry.iterations = e.at("iterations").get<std::int64_t>();
    entry.cumulative_iterations = e.at("cumulative_iterations").get<std::int64_t>();
    entry.evaluations = e.at("evaluations").get<std::int64_t>();
    entry.mean_infidelity = e.at("mean_infidelity").get<double>();
    entry.max_infidelity = e.at("max_infidelity").get<double>();
    entry.mean_penalty = e.at("mean_penalty").get<double>();
    land.log.push_back(entry);
  }
  return land;
}

}  // namespace

std::string landscape_to_json(const Landscape& land) {
  json refs = json::array();
  for (const auto& r : land.references) {
    refs.push_back({{"point", point_json(r.point)},
                    {"alpha", std::vector<double>(r.alpha.data(), r.alpha.data() + r.alpha.size())},
                    {"infidelity", r.infidelity},
                    {"iterations", r.cumulative_iterations}});
  }
  json simplices = json::array();
  for (const auto& s : land.mesh.simplices()) simplices.push_back(s);
  json log = json::array();
  for (const auto& e : land.log) {
    log.push_back({{"round", e.round},
                   {"iterations", e.iterations},
                   {"cumulative_iterations", e.cumulative_iterations},
                   {"evaluations", e.evaluations},
                   {"mean_infidelity", e.mean_infidelity},
                   {"max_infidelity", e.max_infidelity},
                   {"mean_penalty", e.mean_penalty}});
  }
  json doc = {{"version", kLandscapeVersion},
              {"family", land.family},
              {"granularity", land.granularity.to_string()},
              {"ansatz",
               {{"n_controls", land.ansatz.n_controls},
                {"n_segments", land.ansatz.n_segments},
                {"duration", land.ansatz.duration},
                {"alpha_max", land.ansatz.alpha_max}}},
              {"lambda", land.lambda},
              {"seed", land.seed},
              {"optimizer", opt_json(land.opt)},
              {"references", std::move(refs)},
              {"simplices", std::move(simplices)},
              {"log", std::move(log)}};
  return doc.dump(1) + "\n";
}

Landscape landscape_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed landscape JSON: ") + e.what());
  }
  try {
    return parse(doc);
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad landscape field: ") + e.what());
  }
}

void save_landscape(const Landscape& landscape, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << landscape_to_json(landscape);
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

Landscape load_landscape(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return landscape_from_json(buf.str());
}

}  // namespace pulseinterp
