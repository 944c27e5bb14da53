#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pulseinterp/qcore.hpp"

namespace pulseinterp {

/// Coordinates (t_x, t_y, t_z) of a gate inside a three-parameter family.
using ParamPoint = Eigen::Vector3d;

/// Positive rational grid spacing, kept exact so lattice membership tests never
/// suffer from rounding at the domain boundary.
struct Granularity {
  std::int64_t num = 1;
  std::int64_t den = 1;

  Granularity() = default;
  Granularity(std::int64_t n, std::int64_t d);

  /// Parses "1/4", "3/8" or an integer such as "1".
  static Granularity parse(std::string_view text);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;

  friend bool operator==(const Granularity&, const Granularity&) = default;
};

/// Lattice point whose coordinates are numerators over a common denominator.
struct LatticePoint {
  std::array<std::int64_t, 3> numerators{};
  std::int64_t den = 1;

  ParamPoint to_point() const;
};

struct GateFamily {
  std::string name;
  int dim = 0;  ///< Hilbert-space dimension of the targets
  std::function<CMatrix(const ParamPoint&)> target;
  /// Exact membership for rational lattice points.
  std::function<bool(const LatticePoint&)> contains_lattice;
  /// Returns a description of the first violated domain constraint, if any.
  std::function<std::optional<std::string>(const ParamPoint&, double tol)> domain_violation;

  bool contains(const ParamPoint& p, double tol = 1e-12) const {
    return !domain_violation(p, tol).has_value();
  }
};

/// exp(-i pi/2 (t_x XX + t_y YY + t_z ZZ)); throws std::invalid_argument on wrong arity.
CMatrix cartan_unitary(const Eigen::Ref<const Eigen::VectorXd>& p);

/// exp(-i pi/2 (t_x X + t_y Y + t_z Z)).
CMatrix single_qubit_unitary(const Eigen::Ref<const Eigen::VectorXd>& p);

/// 0 <= t_x <= 1, 0 <= t_y <= min(t_x, 1 - t_x), 0 <= t_z <= t_y, boundary inclusive.
bool in_weyl_chamber(const ParamPoint& p, double tol = 1e-12);
std::optional<std::string> weyl_chamber_violation(const ParamPoint& p, double tol = 1e-12);

const GateFamily& weyl_chamber_family();
const GateFamily& cartan_box_family();
const GateFamily& single_qubit_family();

/// Looks a family up by its CLI name; throws std::invalid_argument for unknown names.
const GateFamily& family_by_name(std::string_view name);
std::vector<std::string> family_names();
/// Adds (or replaces) a family in the registry.
void register_family(GateFamily family);

/// All lattice points with spacing g inside the family domain, boundary inclusive,
/// in lexicographic (t_x, t_y, t_z) order.
std::vector<ParamPoint> grid_points(const GateFamily& family, const Granularity& g);

}  // namespace pulseinterp
