#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pulseinterp/errors.hpp"

namespace pulseinterp {

/// Simplicial complex over a point set in Dim dimensions.
///
/// build() produces a Delaunay triangulation of the convex hull. Co-spherical
/// configurations (every regular lattice) are resolved by an infinitesimal,
/// index-seeded perturbation of the lifted heights, which always yields a proper
/// triangulation: no flat simplices, every input point is a vertex.
template <int Dim>
class SimplicialMesh {
  static_assert(Dim >= 2, "meshes need at least two dimensions");

 public:
  using Point = Eigen::Matrix<double, Dim, 1>;
  using Simplex = std::array<int, Dim + 1>;
  using Barycentric = Eigen::Matrix<double, Dim + 1, 1>;

  struct Location {
    int simplex = -1;
    Barycentric coords;
  };

  static constexpr double kMinVolume = 1e-12;
  static constexpr double kLocateTol = 1e-9;

  SimplicialMesh() = default;

  /// Delaunay triangulation; deterministic for a fixed input order.
  /// Throws DegenerateMeshError when no full-dimensional simplex exists and
  /// std::invalid_argument on duplicate or non-finite points.
  static SimplicialMesh build(std::vector<Point> points);

  /// Reassembles a mesh from stored simplices, validating every invariant.
  static SimplicialMesh from_simplices(std::vector<Point> points, std::vector<Simplex> simplices);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Simplex>& simplices() const { return simplices_; }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_simplices() const { return static_cast<int>(simplices_.size()); }

  /// Vertices joined to i by a simplex edge, ascending.
  const std::vector<int>& neighbors(int i) const;

  /// Simplex across the face opposite local vertex `face`, or -1 on the hull.
  int adjacent_simplex(int simplex, int face) const { return adjacency_.at(simplex)[face]; }

  double volume(int simplex) const;

  /// Barycentric coordinates of p with respect to one simplex (may be negative).
  Barycentric barycentric(int simplex, const Point& p) const;

  std::optional<Location> try_locate(const Point& p) const;

  /// Throws OutOfDomainError when p is outside the hull (tolerance kLocateTol).
  Location locate(const Point& p) const;

 private:
  void finalize();

  std::vector<Point> vertices_;
  std::vector<Simplex> simplices_;
  std::vector<std::vector<int>> vertex_neighbors_;
  std::vector<std::array<int, Dim + 1>> adjacency_;
  std::vector<Eigen::Matrix<double, Dim, Dim>> inverse_edges_;
};

using Mesh3 = SimplicialMesh<3>;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <int Dim>
class DelaunayBuilder {
 public:
  using Point = Eigen::Matrix<double, Dim, 1>;
  using Cell = std::array<int, Dim + 1>;
  static constexpr int kInfinite = -1;

  explicit DelaunayBuilder(const std::vector<Point>& points) {
    if (points.size() < static_cast<std::size_t>(Dim + 1)) {
      throw DegenerateMeshError("need at least " + std::to_string(Dim + 1) + " points, got " +
                                std::to_string(points.size()));
    }
    Point lo = points.front(), hi = points.front();
    for (const auto& p : points) {
      if (!p.allFinite()) throw std::invalid_argument("mesh: non-finite point");
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    const Point center = 0.5 * (lo + hi);
    const double extent = (hi - lo).maxCoeff();
    if (!(extent > 0.0)) throw DegenerateMeshError("all points coincide");
    pts_.reserve(points.size());
    for (const auto& p : points) pts_.push_back((p - center) / extent);
    perturb_.resize(pts_.size());
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      perturb_[i] = static_cast<double>(splitmix64(i) >> 11) * 0x1.0p-53;
    }
  }

  std::vector<Cell> run() {
    const auto first = initial_simplex();
    std::vector<bool> inserted(pts_.size(), false);
    for (int v : first) inserted[v] = true;
    for (int i = 0; i < static_cast<int>(pts_.size()); ++i) {
      if (!inserted[i]) insert(i);
    }
    std::vector<Cell> finite;
    for (const auto& c : cells_) {
      if (std::find(c.begin(), c.end(), kInfinite) != c.end()) continue;
      if (!(orient(c) > kOrientTol)) {
        throw std::logic_error("Delaunay: produced an inverted or flat cell");
      }
      finite.push_back(c);
    }
    return finite;
  }

 private:
  static constexpr double kOrientTol = 1e-11;
  static constexpr double kPowerTol = 1e-11;

  double orient(const Cell& c, int slot_override = -1, int replacement = -1) const {
    Eigen::Matrix<double, Dim, Dim> m;
    auto vertex = [&](int k) -> const Point& {
      return pts_[k == slot_override ? replacement : c[k]];
    };
    const Point& base = vertex(0);
    for (int k = 1; k <= Dim; ++k) m.col(k - 1) = vertex(k) - base;
    return m.determinant();
  }

  std::array<int, Dim + 1> initial_simplex() {
    std::vector<int> chosen{0};
    for (int i = 1; i < static_cast<int>(pts_.size()) && static_cast<int>(chosen.size()) <= Dim;
         ++i) {
      // Distance from pts_[i] to the affine hull of the chosen points.
      const int k = static_cast<int>(chosen.size()) - 1;
      Eigen::Matrix<double, Dim, Eigen::Dynamic> basis(Dim, k);
      for (int j = 0; j < k; ++j) basis.col(j) = pts_[chosen[j + 1]] - pts_[chosen[0]];
      Point r = pts_[i] - pts_[chosen[0]];
      if (k > 0) {
        const Eigen::VectorXd coef = basis.colPivHouseholderQr().solve(r);
        r -= basis * coef;
      }
      if (r.norm() > 1e-9) chosen.push_back(i);
    }
    if (static_cast<int>(chosen.size()) <= Dim) {
      throw DegenerateMeshError(
          "points do not span a full-dimensional region; no nonzero-volume simplex exists");
    }
    Cell c;
    std::copy(chosen.begin(), chosen.end(), c.begin());
    if (orient(c) < 0.0) std::swap(c[0], c[1]);
    cells_.push_back(c);
    for (int i = 0; i <= Dim; ++i) {
      Cell inf = c;
      inf[i] = kInfinite;
      // Orient so that putting an outside point in the infinite slot is positive.
      const int a = (i == 0) ? 1 : 0;
      const int b = (i == Dim) ? Dim - 1 : Dim;
      std::swap(inf[a], inf[b]);
      cells_.push_back(inf);
    }
    return c;
  }

  bool finite_conflict(const Cell& c, int p) const {
    Eigen::Matrix<double, Dim, Dim> edges;
    for (int k = 1; k <= Dim; ++k) edges.col(k - 1) = pts_[c[k]] - pts_[c[0]];
    const Point tail = edges.partialPivLu().solve(pts_[p] - pts_[c[0]]);
    std::array<double, Dim + 1> beta;
    beta[0] = 1.0 - tail.sum();
    for (int k = 0; k < Dim; ++k) beta[k + 1] = tail[k];
    double d0 = -pts_[p].squaredNorm();
    double d1 = -perturb_[p];
    double mag = 1.0;
    for (int k = 0; k <= Dim; ++k) {
      d0 += beta[k] * pts_[c[k]].squaredNorm();
      d1 += beta[k] * perturb_[c[k]];
      mag += std::abs(beta[k]);
    }
    if (std::abs(d0) > kPowerTol * mag) return d0 > 0.0;
    return d1 > 0.0;
  }

  bool conflict(const Cell& c, int p) const {
    const auto inf = std::find(c.begin(), c.end(), kInfinite);
    if (inf == c.end()) return finite_conflict(c, p);
    const int slot = static_cast<int>(inf - c.begin());
    const double o = orient(c, slot, p);
    if (o > kOrientTol) return true;
    if (o < -kOrientTol) return false;
    // p lies in the hull facet's plane: defer to the finite cell across that facet.
    std::array<int, Dim> face;
    for (int k = 0, j = 0; k <= Dim; ++k) {
      if (k != slot) face[j++] = c[k];
    }
    for (const auto& other : cells_) {
      if (std::find(other.begin(), other.end(), kInfinite) != other.end()) continue;
      if (std::all_of(face.begin(), face.end(), [&](int v) {
            return std::find(other.begin(), other.end(), v) != other.end();
          })) {
        return finite_conflict(other, p);
      }
    }
    throw std::logic_error("Delaunay: hull facet without a finite cell");
  }

  void insert(int p) {
    for (const auto& c : cells_) {
      for (int v : c) {
        if (v != kInfinite && (pts_[v] - pts_[p]).norm() < 1e-12) {
          throw std::invalid_argument("mesh: duplicate point (index " + std::to_string(p) + ")");
        }
      }
    }
    std::vector<char> in_cavity(cells_.size(), 0);
    for (std::size_t i = 0; i < cells_.size(); ++i) in_cavity[i] = conflict(cells_[i], p);

    std::map<std::array<int, Dim>, int> face_count;
    auto face_key = [](const Cell& c, int skip) {
      std::array<int, Dim> f;
      for (int k = 0, j = 0; k <= Dim; ++k) {
        if (k != skip) f[j++] = c[k];
      }
      std::sort(f.begin(), f.end());
      return f;
    };
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (!in_cavity[i]) continue;
      for (int k = 0; k <= Dim; ++k) ++face_count[face_key(cells_[i], k)];
    }
    if (face_count.empty()) {
      throw std::logic_error("Delaunay: point " + std::to_string(p) + " conflicts with no cell");
    }

    std::vector<Cell> next;
    next.reserve(cells_.size() + 2 * Dim);
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (!in_cavity[i]) {
        next.push_back(cells_[i]);
        continue;
      }
      for (int k = 0; k <= Dim; ++k) {
        if (face_count[face_key(cells_[i], k)] != 1) continue;
        Cell fresh = cells_[i];
        fresh[k] = p;
        next.push_back(fresh);
      }
    }
    cells_ = std::move(next);
  }

  std::vector<Point> pts_;
  std::vector<double> perturb_;
  std::vector<Cell> cells_;
};

}  // namespace detail

template <int Dim>
SimplicialMesh<Dim> SimplicialMesh<Dim>::build(std::vector<Point> points) {
  detail::DelaunayBuilder<Dim> builder(points);
  auto cells = builder.run();
  SimplicialMesh mesh;
  mesh.vertices_ = std::move(points);
  mesh.simplices_ = std::move(cells);
  std::sort(mesh.simplices_.begin(), mesh.simplices_.end());
  mesh.finalize();
  return mesh;
}

template <int Dim>
SimplicialMesh<Dim> SimplicialMesh<Dim>::from_simplices(std::vector<Point> points,
                                                        std::vector<Simplex> simplices) {
  SimplicialMesh mesh;
  mesh.vertices_ = std::move(points);
  mesh.simplices_ = std::move(simplices);
  for (const auto& s : mesh.simplices_) {
    for (int v : s) {
      if (v < 0 || v >= mesh.num_vertices()) {
        throw std::invalid_argument("mesh: simplex references vertex " + std::to_string(v));
      }
    }
  }
  mesh.finalize();
  return mesh;
}

template <int Dim>
void SimplicialMesh<Dim>::finalize() {
  if (simplices_.empty()) throw DegenerateMeshError("mesh has no simplices");
  const int n = num_vertices();
  std::vector<std::set<int>> nbrs(n);
  std::map<std::array<int, Dim>, std::vector<std::pair<int, int>>> faces;
  inverse_edges_.clear();
  inverse_edges_.reserve(simplices_.size());
  for (int s = 0; s < num_simplices(); ++s) {
    auto& simplex = simplices_[s];
    Eigen::Matrix<double, Dim, Dim> edges;
    for (int k = 1; k <= Dim; ++k) edges.col(k - 1) = vertices_[simplex[k]] - vertices_[simplex[0]];
    double det = edges.determinant();
    if (det < 0.0) {
      std::swap(simplex[0], simplex[1]);
      for (int k = 1; k <= Dim; ++k) {
        edges.col(k - 1) = vertices_[simplex[k]] - vertices_[simplex[0]];
      }
      det = -det;
    }
    double factorial = 1.0;
    for (int k = 2; k <= Dim; ++k) factorial *= k;
    if (!(det / factorial > kMinVolume)) {
      throw DegenerateMeshError("mesh: simplex " + std::to_string(s) + " has near-zero volume");
    }
    inverse_edges_.push_back(edges.inverse());
    for (int a = 0; a <= Dim; ++a) {
      for (int b = 0; b <= Dim; ++b) {
        if (a != b) nbrs[simplex[a]].insert(simplex[b]);
      }
      std::array<int, Dim> f;
      for (int k = 0, j = 0; k <= Dim; ++k) {
        if (k != a) f[j++] = simplex[k];
      }
      std::sort(f.begin(), f.end());
      faces[f].emplace_back(s, a);
    }
  }
  adjacency_.assign(simplices_.size(), {});
  for (auto& a : adjacency_) a.fill(-1);
  for (const auto& [face, owners] : faces) {
    if (owners.size() > 2) {
      throw DegenerateMeshError("mesh: a face is shared by more than two simplices");
    }
    if (owners.size() == 2) {
      // Simplices sharing a face must lie on opposite sides of it.
      const Point& apex = vertices_[simplices_[owners[1].first][owners[1].second]];
      if (!(barycentric(owners[0].first, apex)[owners[0].second] < 0.0)) {
        throw DegenerateMeshError("mesh: simplices " + std::to_string(owners[0].first) + " and " +
                                  std::to_string(owners[1].first) + " overlap");
      }
      adjacency_[owners[0].first][owners[0].second] = owners[1].first;
      adjacency_[owners[1].first][owners[1].second] = owners[0].first;
    }
  }
  vertex_neighbors_.assign(n, {});
  for (int i = 0; i < n; ++i) {
    if (nbrs[i].empty()) {
      throw DegenerateMeshError("mesh: vertex " + std::to_string(i) + " belongs to no simplex");
    }
    vertex_neighbors_[i].assign(nbrs[i].begin(), nbrs[i].end());
  }
}

template <int Dim>
const std::vector<int>& SimplicialMesh<Dim>::neighbors(int i) const {
  if (i < 0 || i >= num_vertices()) {
    throw std::out_of_range("mesh: vertex index " + std::to_string(i) + " out of range");
  }
  return vertex_neighbors_[i];
}

template <int Dim>
double SimplicialMesh<Dim>::volume(int simplex) const {
  double factorial = 1.0;
  for (int k = 2; k <= Dim; ++k) factorial *= k;
  return 1.0 / (std::abs(inverse_edges_.at(simplex).determinant()) * factorial);
}

template <int Dim>
typename SimplicialMesh<Dim>::Barycentric SimplicialMesh<Dim>::barycentric(int simplex,
                                                                            const Point& p) const {
  const auto& s = simplices_.at(simplex);
  const Point tail = inverse_edges_[simplex] * (p - vertices_[s[0]]);
  Barycentric b;
  b[0] = 1.0 - tail.sum();
  b.template tail<Dim>() = tail;
  return b;
}

template <int Dim>
std::optional<typename SimplicialMesh<Dim>::Location> SimplicialMesh<Dim>::try_locate(
    const Point& p) const {
  if (!p.allFinite() || simplices_.empty()) return std::nullopt;
  // Visibility walk from simplex 0 across the most violated face.
  int current = 0;
  for (int step = 0; step <= num_simplices(); ++step) {
    const Barycentric b = barycentric(current, p);
    Eigen::Index worst;
    const double lowest = b.minCoeff(&worst);
    if (lowest >= -kLocateTol) return Location{current, b};
    const int next = adjacency_[current][worst];
    if (next < 0) break;
    current = next;
  }
  // Fallback: the simplex whose smallest coordinate is largest.
  Location best;
  double best_min = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < num_simplices(); ++s) {
    const Barycentric b = barycentric(s, p);
    const double lowest = b.minCoeff();
    if (lowest > best_min) {
      best_min = lowest;
      best = Location{s, b};
    }
  }
  if (best_min >= -kLocateTol) return best;
  return std::nullopt;
}

template <int Dim>
typename SimplicialMesh<Dim>::Location SimplicialMesh<Dim>::locate(const Point& p) const {
  auto loc = try_locate(p);
  if (!loc) throw OutOfDomainError("point lies outside the mesh hull");
  return *loc;
}

}  // namespace pulseinterp
