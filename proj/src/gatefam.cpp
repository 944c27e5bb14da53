#include "pulseinterp/gatefam.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pulseinterp {

namespace {

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || s.empty()) {
    throw std::invalid_argument("granularity: cannot parse '" + std::string(s) + "'");
  }
  return v;
}

std::string describe(const ParamPoint& p) {
  std::ostringstream os;
  os << "(" << p.x() << ", " << p.y() << ", " << p.z() << ")";
  return os.str();
}

void check_arity(const Eigen::Ref<const Eigen::VectorXd>& p, const char* who) {
  if (p.size() != 3) {
    throw std::invalid_argument(std::string(who) + ": expected 3 coordinates, got " +
                                std::to_string(p.size()));
  }
}

std::optional<std::string> unit_box_violation(const ParamPoint& p, double tol) {
  static constexpr const char* names[] = {"t_x", "t_y", "t_z"};
  for (int k = 0; k < 3; ++k) {
    if (!std::isfinite(p[k]) || p[k] < -tol || p[k] > 1.0 + tol) {
      return std::string("0 <= ") + names[k] + " <= 1 violated at " + describe(p);
    }
  }
  return std::nullopt;
}

bool unit_box_lattice(const LatticePoint& q) {
  return std::all_of(q.numerators.begin(), q.numerators.end(),
                     [&](std::int64_t n) { return n >= 0 && n <= q.den; });
}

bool weyl_lattice(const LatticePoint& q) {
  const auto [x, y, z] = q.numerators;
  return x >= 0 && x <= q.den && y >= 0 && y <= std::min(x, q.den - x) && z >= 0 && z <= y;
}

GateFamily make_weyl() {
  GateFamily f;
  f.name = "weyl-chamber";
  f.dim = 4;
  f.target = [](const ParamPoint& p) { return cartan_unitary(p); };
  f.contains_lattice = weyl_lattice;
  f.domain_violation = [](const ParamPoint& p, double tol) { return weyl_chamber_violation(p, tol); };
  return f;
}

GateFamily make_cartan_box() {
  GateFamily f;
  f.name = "cartan-box";
  f.dim = 4;
  f.target = [](const ParamPoint& p) { return cartan_unitary(p); };
  f.contains_lattice = unit_box_lattice;
  f.domain_violation = unit_box_violation;
  return f;
}

GateFamily make_single_qubit() {
  GateFamily f;
  f.name = "single-qubit";
  f.dim = 2;
  f.target = [](const ParamPoint& p) { return single_qubit_unitary(p); };
  f.contains_lattice = unit_box_lattice;
  f.domain_violation = unit_box_violation;
  return f;
}

struct Registry {
  std::mutex mutex;
  std::map<std::string, std::unique_ptr<GateFamily>, std::less<>> families;

  Registry() {
    for (auto f : {make_weyl(), make_cartan_box(), make_single_qubit()}) {
      auto name = f.name;
      families.emplace(std::move(name), std::make_unique<GateFamily>(std::move(f)));
    }
  }
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

Granularity::Granularity(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (d == 0) throw std::invalid_argument("granularity: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num <= 0) throw std::invalid_argument("granularity must be positive");
  const auto g = std::gcd(num, den);
  num /= g;
  den /= g;
}

Granularity Granularity::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Granularity(parse_int(text), 1);
  return Granularity(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

std::string Granularity::to_string() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

ParamPoint LatticePoint::to_point() const {
  const double d = static_cast<double>(den);
  return ParamPoint(static_cast<double>(numerators[0]) / d, static_cast<double>(numerators[1]) / d,
                    static_cast<double>(numerators[2]) / d);
}

CMatrix cartan_unitary(const Eigen::Ref<const Eigen::VectorXd>& p) {
  check_arity(p, "cartan_unitary");
  const CMatrix xx = kron2(pauli(PauliAxis::X), pauli(PauliAxis::X));
  const CMatrix yy = kron2(pauli(PauliAxis::Y), pauli(PauliAxis::Y));
  const CMatrix zz = kron2(pauli(PauliAxis::Z), pauli(PauliAxis::Z));
  const CMatrix h = p[0] * xx + p[1] * yy + p[2] * zz;
  return expm_hermitian(h, std::numbers::pi / 2.0);
}

CMatrix single_qubit_unitary(const Eigen::Ref<const Eigen::VectorXd>& p) {
  check_arity(p, "single_qubit_unitary");
  const CMatrix h =
      p[0] * pauli(PauliAxis::X) + p[1] * pauli(PauliAxis::Y) + p[2] * pauli(PauliAxis::Z);
  return expm_hermitian(h, std::numbers::pi / 2.0);
}

std::optional<std::string> weyl_chamber_violation(const ParamPoint& p, double tol) {
  const double x = p.x(), y = p.y(), z = p.z();
  if (!p.allFinite()) return "non-finite coordinates " + describe(p);
  if (x < -tol || x > 1.0 + tol) return "0 <= t_x <= 1 violated at " + describe(p);
  if (y < -tol || y > std::min(x, 1.0 - x) + tol) {
    return "0 <= t_y <= min(t_x, 1 - t_x) violated at " + describe(p);
  }
  if (z < -tol || z > y + tol) return "0 <= t_z <= t_y violated at " + describe(p);
  return std::nullopt;
}

bool in_weyl_chamber(const ParamPoint& p, double tol) { return !weyl_chamber_violation(p, tol); }

const GateFamily& weyl_chamber_family() { return family_by_name("weyl-chamber"); }
const GateFamily& cartan_box_family() { return family_by_name("cartan-box"); }
const GateFamily& single_qubit_family() { return family_by_name("single-qubit"); }

const GateFamily& family_by_name(std::string_view name) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  const auto it = r.families.find(name);
  if (it == r.families.end()) {
    std::string known;
    for (const auto& [k, _] : r.families) known += (known.empty() ? "" : ", ") + k;
    throw std::invalid_argument("unknown gate family '" + std::string(name) + "' (known: " +
                                known + ")");
  }
  return *it->second;
}

std::vector<std::string> family_names() {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  std::vector<std::string> names;
  for (const auto& [k, _] : r.families) names.push_back(k);
  return names;
}

void register_family(GateFamily family) {
  if (family.name.empty() || !family.target || !family.contains_lattice ||
      !family.domain_violation) {
    throw std::invalid_argument("register_family: incomplete family descriptor");
  }
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  auto name = family.name;
  // Entries are never erased, so references handed out earlier stay valid.
  auto it = r.families.find(name);
  if (it != r.families.end()) {
    *it->second = std::move(family);
  } else {
    r.families.emplace(std::move(name), std::make_unique<GateFamily>(std::move(family)));
  }
}

std::vector<ParamPoint> grid_points(const GateFamily& family, const Granularity& g) {
  // Coordinates k * num / den for k = 0 .. floor(den / num); every built-in domain
  // lives inside the unit cube.
  const std::int64_t steps = g.den / g.num;
  std::vector<ParamPoint> out;
  LatticePoint q;
  q.den = g.den;
  for (std::int64_t i = 0; i <= steps; ++i) {
    for (std::int64_t j = 0; j <= steps; ++j) {
      for (std::int64_t k = 0; k <= steps; ++k) {
        q.numerators = {i * g.num, j * g.num, k * g.num};
        if (family.contains_lattice(q)) out.push_back(q.to_point());
      }
    }
  }
  return out;
}

}  // namespace pulseinterp
