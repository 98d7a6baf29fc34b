// Image-level verification: convex hulls of sampled moment images, fixed
// point hull comparison, level connectivity, a non-convexity defect
// measure, half-space cut bookkeeping with face decomposition, and local
// polyhedrality of the image boundary.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcx/hamilton.hpp"
#include "gcx/models.hpp"

namespace gcx {

// Face membership tolerance on <x,v> - b; ties resolve to the boundary face.
inline constexpr double kFaceTol = 1e-9;

// ---- rational polyhedral sets ------------------------------------------

struct HalfSpace {
  Eigen::VectorXi normal;  // nonzero integer vector
  double offset = 0.0;     // P locally means <x, normal> >= offset
};

struct PolyhedralSet {
  std::vector<HalfSpace> constraints;

  int ambient() const {
    return constraints.empty() ? 0 : static_cast<int>(constraints[0].normal.size());
  }
  bool contains(const VectorXd& x, double slack = kFaceTol) const {
    for (const HalfSpace& h : constraints)
      if (h.normal.cast<double>().dot(x) < h.offset - slack) return false;
    return true;
  }
  // Indices of constraints active at x; determines the open face of x.
  std::vector<int> active_set(const VectorXd& x, double eps = kFaceTol) const {
    std::vector<int> out;
    for (size_t j = 0; j < constraints.size(); ++j)
      if (std::abs(constraints[j].normal.cast<double>().dot(x) -
                   constraints[j].offset) <= eps)
        out.push_back(static_cast<int>(j));
    return out;
  }
};

// Row-style Hermite basis of the integer row span. Small inputs only.
inline Eigen::MatrixXi hermite_row_basis(Eigen::MatrixXi a) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  int r = 0;
  for (int col = 0; col < cols && r < rows; ++col) {
    while (true) {
      int pivot = -1;
      for (int i = r; i < rows; ++i)
        if (a(i, col) != 0 &&
            (pivot < 0 || std::abs(a(i, col)) < std::abs(a(pivot, col))))
          pivot = i;
      if (pivot < 0) break;
      a.row(pivot).swap(a.row(r));
      bool clean = true;
      for (int i = r + 1; i < rows; ++i) {
        if (a(i, col) == 0) continue;
        a.row(i) -= (a(i, col) / a(r, col)) * a.row(r);
        if (a(i, col) != 0) clean = false;
      }
      if (clean) break;
    }
    if (a(r, col) == 0) continue;
    if (a(r, col) < 0) a.row(r) = -a.row(r);
    for (int i = 0; i < r; ++i) {
      const int q = static_cast<int>(
          std::floor(static_cast<double>(a(i, col)) / a(r, col)));
      a.row(i) -= q * a.row(r);
    }
    ++r;
  }
  return a.topRows(r);
}

// Whether the basis spans all of Z^m (rank m and unimodular).
inline bool lattice_is_full(const Eigen::MatrixXi& basis, int m) {
  if (basis.rows() != m) return false;
  const double det = basis.cast<double>().determinant();
  return std::abs(std::abs(det) - 1.0) < 1e-9;
}

// Smallest integer direction within angle_tol of dir, entries bounded by
// max_denom; empty when no such direction exists.
inline std::optional<Eigen::Vector2i> rationalize_direction(
    Eigen::Vector2d dir, int max_denom = 100, double angle_tol = 1e-3) {
  const double norm = dir.norm();
  if (norm == 0.0) return std::nullopt;
  dir /= norm;
  const bool swapped = std::abs(dir[1]) > std::abs(dir[0]);
  const Eigen::Vector2d major =
      swapped ? Eigen::Vector2d(dir[1], dir[0]) : dir;
  const double ratio = major[1] / major[0];
  const double sign = major[0] >= 0.0 ? 1.0 : -1.0;
  for (int q = 1; q <= max_denom; ++q) {
    const long long p = std::llround(ratio * q);
    Eigen::Vector2d cand(sign * q, sign * static_cast<double>(p));
    if (swapped) std::swap(cand[0], cand[1]);
    const double cross = std::abs(cand[0] * dir[1] - cand[1] * dir[0]);
    const double dot = cand.dot(dir);
    if (dot <= 0.0) continue;
    if (std::atan2(cross, dot) > angle_tol) continue;
    const long long cx = std::llround(cand[0]);
    const long long cy = std::llround(cand[1]);
    long long g = std::gcd(std::abs(cx), std::abs(cy));
    if (g == 0) g = 1;
    return Eigen::Vector2i(static_cast<int>(cx / g), static_cast<int>(cy / g));
  }
  return std::nullopt;
}

// ---- convex hulls (m <= 3) ----------------------------------------------

struct HullReport {
  int input_count = 0;
  int ambient_dim = 0;
  int hull_dim = 0;
  bool degenerate = false;  // hull_dim < ambient_dim
  MatrixXd vertices;        // rows; counterclockwise for ambient_dim == 2
  std::vector<Eigen::VectorXd> facet_normals;  // outward unit normals
  double max_violation = 0.0;  // worst input excursion outside the hull
  double hausdorff = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

// Positive for a left turn o -> a -> b.
inline double turn(const Eigen::Vector2d& o, const Eigen::Vector2d& a,
                   const Eigen::Vector2d& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Monotone chain; drops vertices within 1e-10 of the adjoining edge.
inline std::vector<Eigen::Vector2d> chain_hull(
    std::vector<Eigen::Vector2d> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
              return a[0] != b[0] ? a[0] < b[0] : a[1] < b[1];
            });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                          return (a - b).norm() < 1e-12;
                        }),
            pts.end());
  const size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<Eigen::Vector2d> hull(2 * n);
  size_t k = 0;
  auto flat = [&](const Eigen::Vector2d& o, const Eigen::Vector2d& a,
                  const Eigen::Vector2d& b) {
    return turn(o, a, b) <= 1e-10 * (b - o).norm();
  };
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && flat(hull[k - 2], hull[k - 1], pts[i])) --k;
    hull[k++] = pts[i];
  }
  for (size_t i = n - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && flat(hull[k - 2], hull[k - 1], pts[i])) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;  // counterclockwise
}

struct HullTri {
  int a, b, c;
  Eigen::Vector3d n;  // outward unit normal
  double off;
  bool alive = true;
};

inline std::vector<HullTri> incremental_hull3(
    const std::vector<Eigen::Vector3d>& pts, double eps) {
  const int n = static_cast<int>(pts.size());
  // Seed tetrahedron: spread-out extremes.
  int i0 = 0, i1 = -1;
  double best = -1.0;
  for (int i = 1; i < n; ++i) {
    const double d = (pts[i] - pts[i0]).norm();
    if (d > best) best = d, i1 = i;
  }
  int i2 = -1;
  best = -1.0;
  const Eigen::Vector3d axis = (pts[i1] - pts[i0]).normalized();
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d rel = pts[i] - pts[i0];
    const double d = (rel - rel.dot(axis) * axis).norm();
    if (d > best) best = d, i2 = i;
  }
  const Eigen::Vector3d plane_n =
      (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]).normalized();
  int i3 = -1;
  best = -1.0;
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(plane_n.dot(pts[i] - pts[i0]));
    if (d > best) best = d, i3 = i;
  }

  const Eigen::Vector3d interior =
      0.25 * (pts[i0] + pts[i1] + pts[i2] + pts[i3]);
  std::vector<HullTri> tris;
  auto add_face = [&](int a, int b, int c) {
    HullTri t{a, b, c, {}, 0.0, true};
    t.n = (pts[b] - pts[a]).cross(pts[c] - pts[a]).normalized();
    t.off = t.n.dot(pts[a]);
    if (t.n.dot(interior) > t.off) {
      std::swap(t.b, t.c);
      t.n = -t.n;
      t.off = -t.off;
    }
    tris.push_back(t);
  };
  add_face(i0, i1, i2);
  add_face(i0, i1, i3);
  add_face(i0, i2, i3);
  add_face(i1, i2, i3);

  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2 || i == i3) continue;
    std::vector<int> visible;
    for (size_t f = 0; f < tris.size(); ++f)
      if (tris[f].alive && tris[f].n.dot(pts[i]) - tris[f].off > eps)
        visible.push_back(static_cast<int>(f));
    if (visible.empty()) continue;
    std::map<std::pair<int, int>, int> edge_use;
    for (int f : visible) {
      const int vs[3] = {tris[f].a, tris[f].b, tris[f].c};
      for (int e = 0; e < 3; ++e) {
        int u = vs[e], v = vs[(e + 1) % 3];
        if (u > v) std::swap(u, v);
        ++edge_use[{u, v}];
      }
      tris[f].alive = false;
    }
    for (const auto& [edge, uses] : edge_use)
      if (uses == 1) add_face(edge.first, edge.second, i);
  }
  std::vector<HullTri> out;
  for (const HullTri& t : tris)
    if (t.alive) out.push_back(t);
  return out;
}

}  // namespace detail

inline HullReport convex_hull(const MatrixXd& points,
                              const MatrixXd* reference = nullptr);

// Exact distance from a point to a convex hull given by vertex rows
// (dimension 1 or 2; 2-d vertices counterclockwise).
inline double point_to_hull(const VectorXd& p, const MatrixXd& vertices) {
  const int m = static_cast<int>(vertices.cols());
  const int k = static_cast<int>(vertices.rows());
  if (k == 0) return std::numeric_limits<double>::infinity();
  if (m == 1) {
    const double lo = vertices.col(0).minCoeff();
    const double hi = vertices.col(0).maxCoeff();
    return std::max({lo - p[0], p[0] - hi, 0.0});
  }
  if (m != 2) throw std::invalid_argument("point_to_hull supports m <= 2");
  auto seg = [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    const Eigen::Vector2d ab = b - a;
    const double len2 = ab.squaredNorm();
    const double t =
        len2 == 0.0 ? 0.0
                    : std::clamp((Eigen::Vector2d(p) - a).dot(ab) / len2, 0.0, 1.0);
    return (Eigen::Vector2d(p) - (a + t * ab)).norm();
  };
  if (k == 1) return (p - vertices.row(0).transpose()).norm();
  if (k == 2) return seg(vertices.row(0), vertices.row(1));
  bool inside = true;
  double boundary = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i) {
    const Eigen::Vector2d a = vertices.row(i);
    const Eigen::Vector2d b = vertices.row((i + 1) % k);
    if (detail::turn(a, b, p) < 0.0) inside = false;
    boundary = std::min(boundary, seg(a, b));
  }
  return inside ? 0.0 : boundary;
}

// Symmetric Hausdorff distance between two convex hulls via their vertices.
inline double hull_hausdorff(const MatrixXd& a, const MatrixXd& b) {
  double worst = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    worst = std::max(worst, point_to_hull(a.row(i), b));
  for (int i = 0; i < b.rows(); ++i)
    worst = std::max(worst, point_to_hull(b.row(i), a));
  return worst;
}

inline HullReport convex_hull(const MatrixXd& points, const MatrixXd* reference) {
  HullReport out;
  out.input_count = static_cast<int>(points.rows());
  out.ambient_dim = static_cast<int>(points.cols());
  if (out.input_count == 0) throw std::invalid_argument("empty point set");
  if (out.ambient_dim > 3) throw std::invalid_argument("hull dimension > 3");

  // Affine rank decides degeneracy; degenerate clouds drop to the hull of
  // their projection onto the principal directions.
  const Eigen::RowVectorXd mean = points.colwise().mean();
  const MatrixXd centered = points.rowwise() - mean;
  Eigen::JacobiSVD<MatrixXd> svd(centered, Eigen::ComputeThinV);
  const double top = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  int rank = 0;
  for (int s = 0; s < svd.singularValues().size(); ++s)
    if (svd.singularValues()[s] > 1e-10 * (1.0 + top)) ++rank;
  out.hull_dim = std::min(rank, out.ambient_dim);
  out.degenerate = out.hull_dim < out.ambient_dim;

  if (out.hull_dim == 0) {
    out.vertices = points.topRows(1);
    return out;
  }
  if (out.hull_dim == 1) {
    const VectorXd axis = svd.matrixV().col(0);
    const VectorXd coord = centered * axis;
    int lo, hi;
    coord.minCoeff(&lo);
    coord.maxCoeff(&hi);
    out.vertices.resize(2, out.ambient_dim);
    out.vertices.row(0) = points.row(lo);
    out.vertices.row(1) = points.row(hi);
    if (out.ambient_dim == 1) {
      if (out.vertices(0, 0) > out.vertices(1, 0))
        out.vertices.row(0).swap(out.vertices.row(1));
      out.facet_normals.push_back(Eigen::VectorXd::Constant(1, -1.0));
      out.facet_normals.push_back(Eigen::VectorXd::Constant(1, 1.0));
    }
  } else if (out.hull_dim == 2) {
    // Planar inputs go through the chain directly; degenerate 3-d clouds
    // drop into their principal plane first (orientation is arbitrary there,
    // which is fine since facet data is only reported for full rank).
    std::vector<Eigen::Vector2d> plane(points.rows());
    MatrixXd basis;
    if (out.ambient_dim == 2) {
      for (int i = 0; i < points.rows(); ++i) plane[i] = points.row(i);
    } else {
      basis = svd.matrixV().leftCols(2);
      for (int i = 0; i < points.rows(); ++i)
        plane[i] = (centered.row(i) * basis).transpose();
    }
    const std::vector<Eigen::Vector2d> hull = detail::chain_hull(plane);
    out.vertices.resize(hull.size(), out.ambient_dim);
    for (size_t i = 0; i < hull.size(); ++i) {
      if (out.ambient_dim == 2)
        out.vertices.row(i) = hull[i].transpose();
      else
        out.vertices.row(i) = mean + (basis * hull[i]).transpose();
    }
    if (!out.degenerate) {
      for (size_t i = 0; i < hull.size(); ++i) {
        const Eigen::Vector2d edge = hull[(i + 1) % hull.size()] - hull[i];
        out.facet_normals.push_back(
            Eigen::Vector2d(edge[1], -edge[0]).normalized());
      }
      for (int i = 0; i < points.rows(); ++i)
        out.max_violation = std::max(
            out.max_violation, point_to_hull(points.row(i), out.vertices));
    }
  } else {
    std::vector<Eigen::Vector3d> pts(points.rows());
    for (int i = 0; i < points.rows(); ++i) pts[i] = points.row(i);
    const double scale = (points.colwise().maxCoeff() -
                          points.colwise().minCoeff()).norm();
    const auto tris = detail::incremental_hull3(pts, 1e-10 * (1.0 + scale));
    std::vector<int> used;
    for (const auto& t : tris) {
      used.push_back(t.a);
      used.push_back(t.b);
      used.push_back(t.c);
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    out.vertices.resize(used.size(), 3);
    for (size_t i = 0; i < used.size(); ++i) out.vertices.row(i) = pts[used[i]];
    for (const auto& t : tris) {
      bool seen = false;
      for (const auto& n : out.facet_normals)
        if ((n - t.n).norm() < 1e-9) seen = true;
      if (!seen) out.facet_normals.push_back(t.n);
      for (int i = 0; i < points.rows(); ++i)
        out.max_violation =
            std::max(out.max_violation, t.n.dot(pts[i]) - t.off);
    }
    out.max_violation = std::max(out.max_violation, 0.0);
  }

  if (reference && out.ambient_dim <= 2)
    out.hausdorff = hull_hausdorff(out.vertices, *reference);
  return out;
}

// ---- image sampling ------------------------------------------------------

inline MatrixXd sample_image(const MomentSystem& sys, int n, uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample count must be positive");
  MatrixXd out(n, sys.m);
  parallel_for(n, [&](int i) {
    Rng rng(derive_seed(seed, "sample-image", static_cast<uint64_t>(i)));
    out.row(i) = sys.mu(sys.chart.sample(rng)).transpose();
  });
  return out;
}

// ---- connectivity --------------------------------------------------------

// Connected components of a point cloud under the chart metric. An explicit
// delta gives plain single linkage at that radius. Otherwise the cut is set
// automatically from the minimum spanning tree: split only at edges beyond
// five times the 90th-percentile edge length. A fixed multiple of the median
// nearest-neighbour distance misreads one-dimensional clouds, whose largest
// sampling gap grows logarithmically past the typical one; the percentile
// rule keeps statistical gaps joined (capped clouds stay within the margin)
// while genuine separations sit far above the bulk. Large clouds are thinned
// deterministically before the quadratic scan.
inline int component_count(
    const std::function<double(const ChartPoint&, const ChartPoint&)>& metric,
    const std::vector<ChartPoint>& points, double delta = 0.0,
    double* delta_used = nullptr, int cap = 2000) {
  const int n = static_cast<int>(points.size());
  if (n == 0) return 0;
  std::vector<const ChartPoint*> kept;
  const int stride = (n + cap - 1) / cap;
  for (int i = 0; i < n; i += stride) kept.push_back(&points[i]);
  const int k = static_cast<int>(kept.size());
  MatrixXd dist(k, k);
  for (int i = 0; i < k; ++i) {
    dist(i, i) = 0.0;
    for (int j = i + 1; j < k; ++j)
      dist(i, j) = dist(j, i) = metric(*kept[i], *kept[j]);
  }

  if (delta > 0.0) {
    if (delta_used) *delta_used = delta;
    std::vector<int> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> root = [&](int a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (dist(i, j) <= delta) parent[root(i)] = root(j);
    int count = 0;
    for (int i = 0; i < k; ++i)
      if (root(i) == i) ++count;
    return count;
  }

  if (k == 1) {
    if (delta_used) *delta_used = 0.0;
    return 1;
  }
  std::vector<double> best(k, std::numeric_limits<double>::infinity());
  std::vector<char> used(k, 0);
  std::vector<double> edges;
  best[0] = 0.0;
  for (int it = 0; it < k; ++it) {
    int u = -1;
    for (int v = 0; v < k; ++v)
      if (!used[v] && (u < 0 || best[v] < best[u])) u = v;
    used[u] = 1;
    if (it > 0) edges.push_back(best[u]);
    for (int v = 0; v < k; ++v)
      if (!used[v]) best[v] = std::min(best[v], dist(u, v));
  }
  std::vector<double> sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  const double p90 = sorted[static_cast<size_t>(0.9 * (sorted.size() - 1))];
  // The diameter floor keeps thinning density tails (largest gaps grow as
  // the local density decays) from reading as separations; splits this close
  // relative to the cloud extent are below desk-scale resolution anyway.
  const double cut =
      std::max({5.0 * p90, 0.05 * dist.maxCoeff(), 1e-12});
  if (delta_used) *delta_used = cut;
  int count = 1;
  for (double e : edges)
    if (e > cut) ++count;
  return count;
}

struct ConnectivityReport {
  int in_slab = 0;
  int components = -1;  // -1 when inconclusive
  bool inconclusive = false;
  double delta_used = 0.0;
};

struct LevelCloud {
  std::vector<ChartPoint> points;
  MatrixXd values;  // one row of mu per point
};

inline LevelCloud sample_level_cloud(const MomentSystem& sys, int n,
                                     uint64_t seed) {
  LevelCloud cloud;
  cloud.points.resize(n);
  cloud.values.resize(n, sys.m);
  parallel_for(n, [&](int i) {
    Rng rng(derive_seed(seed, "level-cloud", static_cast<uint64_t>(i)));
    cloud.points[i] = sys.chart.sample(rng);
    cloud.values.row(i) = sys.mu(cloud.points[i]).transpose();
  });
  return cloud;
}

inline ConnectivityReport level_connectivity(const MomentSystem& sys,
                                             const LevelCloud& cloud,
                                             const VectorXd& a, double eps,
                                             double delta = 0.0) {
  ConnectivityReport out;
  std::vector<ChartPoint> slab;
  for (size_t i = 0; i < cloud.points.size(); ++i)
    if ((cloud.values.row(static_cast<int>(i)).transpose() - a).norm() < eps)
      slab.push_back(cloud.points[i]);
  out.in_slab = static_cast<int>(slab.size());
  if (out.in_slab == 0) {
    out.components = 0;  // level empty at sampling resolution
    return out;
  }
  if (out.in_slab < 25) {
    out.inconclusive = true;
    return out;
  }
  out.components =
      component_count(sys.chart.distance, slab, delta, &out.delta_used);
  return out;
}

inline ConnectivityReport level_connectivity(const MomentSystem& sys,
                                             const VectorXd& a, double eps,
                                             double delta, int n,
                                             uint64_t seed) {
  return level_connectivity(sys, sample_level_cloud(sys, n, seed), a, eps,
                            delta);
}

// ---- convexity defect ----------------------------------------------------

// Max over random sample pairs of the distance from the pair midpoint to
// the nearest sample; near zero for dense convex images.
inline double convexity_defect(const MatrixXd& points, int probes,
                               uint64_t seed) {
  const int n = static_cast<int>(points.rows());
  if (n < 2) return 0.0;
  Rng rng(derive_seed(seed, "convexity-defect"));
  double worst = 0.0;
  for (int t = 0; t < probes; ++t) {
    const int i = rng.uniform_int(n);
    const int j = rng.uniform_int(n);
    const Eigen::RowVectorXd mid = 0.5 * (points.row(i) + points.row(j));
    const double nearest =
        (points.rowwise() - mid).rowwise().squaredNorm().minCoeff();
    worst = std::max(worst, std::sqrt(nearest));
  }
  return worst;
}

// ---- fixed-point hull comparison ------------------------------------------

struct TheoremAReport {
  HullReport image_hull;
  MatrixXd fixed_values;  // mu at the detected critical components
  HullReport fixed_hull;
  double hausdorff = 0.0;
  double vertex_match = 0.0;  // fixed values vs nearest image-hull vertex
  bool fixed_set_whole_chart = false;
};

// Generic generator with rationally independent components.
inline VectorXd generic_generator(int m) {
  static const double primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  VectorXd xi(m);
  xi[0] = 1.0;
  for (int j = 1; j < m; ++j) xi[j] = std::sqrt(primes[j - 1]);
  return xi;
}

inline TheoremAReport theorem_a_report(const MomentSystem& sys, int n,
                                       uint64_t seed) {
  TheoremAReport out;
  const MatrixXd cloud = sample_image(sys, n, seed);
  out.image_hull = convex_hull(cloud);

  const VectorXd xi = generic_generator(sys.m);
  ZeroSearchOptions opts;
  opts.seed = derive_seed(seed, "theorem-a/fixed");
  opts.label = "theorem-a";
  const ZeroSetDescription fixed = classify_zero_set(
      sys.chart, [&](const ChartPoint& p) { return sys.dmu_xi(xi, p); },
      [&](const ChartPoint& p) { return sys.mu_xi(xi, p); }, opts);
  out.fixed_set_whole_chart = fixed.whole_chart;
  if (fixed.components.empty())
    throw std::runtime_error("fixed point search found nothing");

  out.fixed_values.resize(fixed.components.size(), sys.m);
  for (size_t k = 0; k < fixed.components.size(); ++k)
    out.fixed_values.row(k) =
        sys.mu(fixed.components[k].representative).transpose();
  std::vector<int> order(out.fixed_values.rows());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    for (int c = 0; c < sys.m; ++c) {
      if (out.fixed_values(a, c) != out.fixed_values(b, c))
        return out.fixed_values(a, c) < out.fixed_values(b, c);
    }
    return false;
  });
  MatrixXd sorted(out.fixed_values.rows(), sys.m);
  for (size_t k = 0; k < order.size(); ++k)
    sorted.row(k) = out.fixed_values.row(order[k]);
  out.fixed_values = sorted;

  out.fixed_hull = convex_hull(out.fixed_values);
  out.hausdorff =
      sys.m <= 2
          ? hull_hausdorff(out.image_hull.vertices, out.fixed_hull.vertices)
          : std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k < out.fixed_values.rows(); ++k) {
    double best = std::numeric_limits<double>::infinity();
    for (int v = 0; v < out.image_hull.vertices.rows(); ++v)
      best = std::min(best, (out.fixed_values.row(k) -
                             out.image_hull.vertices.row(v)).norm());
    out.vertex_match = std::max(out.vertex_match, best);
  }
  return out;
}

// ---- half-space cuts -------------------------------------------------------

struct FaceRecord {
  std::vector<int> active;  // constraint indices defining the face
  int dim = 0;              // m - rank of the active normals
  Eigen::MatrixXi subtorus;  // Hermite basis of the integer span
  bool subtorus_full = false;
  long sample_count = 0;  // random in-P samples landing on this open face
  long population = 0;    // dedicated constrained search population
  int components = -1;    // connectivity of that population, -1 inconclusive
  bool feasible = false;
};

struct CutReport {
  long total = 0;
  long in_p = 0;
  std::vector<FaceRecord> faces;
  bool counts_partition = false;
  int preimage_components = 0;
  int image_components = 0;
  bool item1_equivalent = false;
  bool compact_certified = false;
  double max_image_norm = 0.0;
  std::string note;
};

inline CutReport cut_decompose(const MomentSystem& sys, const PolyhedralSet& P,
                               int n, uint64_t seed) {
  if (P.constraints.empty()) throw std::invalid_argument("empty cut set");
  if (P.ambient() != sys.m)
    throw std::invalid_argument("cut set dimension mismatch");
  const int m = sys.m;
  const int k = static_cast<int>(P.constraints.size());

  CutReport out;
  out.total = n;
  std::vector<ChartPoint> pts(n);
  MatrixXd values(n, m);
  parallel_for(n, [&](int i) {
    Rng rng(derive_seed(seed, "cut-samples", static_cast<uint64_t>(i)));
    pts[i] = sys.chart.sample(rng);
    values.row(i) = sys.mu(pts[i]).transpose();
  });

  std::map<std::vector<int>, long> counts;
  std::vector<ChartPoint> inside_pts;
  std::vector<int> inside_rows;
  for (int i = 0; i < n; ++i) {
    const VectorXd v = values.row(i).transpose();
    if (!P.contains(v)) continue;
    ++out.in_p;
    ++counts[P.active_set(v)];
    inside_pts.push_back(pts[i]);
    inside_rows.push_back(i);
    out.max_image_norm = std::max(out.max_image_norm, v.norm());
  }

  // Candidate faces: the lattice subsets up to rank m plus anything the
  // samples actually hit.
  std::vector<std::vector<int>> candidates;
  candidates.push_back({});
  std::vector<std::vector<int>> frontier = {{}};
  for (int size = 1; size <= std::min(k, m); ++size) {
    std::vector<std::vector<int>> next;
    for (const auto& base : frontier) {
      const int start = base.empty() ? 0 : base.back() + 1;
      for (int j = start; j < k; ++j) {
        auto grown = base;
        grown.push_back(j);
        next.push_back(grown);
        candidates.push_back(grown);
      }
    }
    frontier = std::move(next);
  }
  for (const auto& [key, count] : counts) {
    if (std::find(candidates.begin(), candidates.end(), key) ==
        candidates.end())
      candidates.push_back(key);
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });

  long assigned = 0;
  for (const auto& key : candidates) {
    FaceRecord face;
    face.active = key;
    Eigen::MatrixXi normals(key.size(), m);
    for (size_t r = 0; r < key.size(); ++r)
      normals.row(r) = P.constraints[key[r]].normal.transpose();
    face.subtorus = hermite_row_basis(normals);
    face.dim = m - static_cast<int>(face.subtorus.rows());
    face.subtorus_full = lattice_is_full(face.subtorus, m);
    const auto hit = counts.find(key);
    face.sample_count = hit == counts.end() ? 0 : hit->second;
    assigned += face.sample_count;

    if (key.empty()) {
      face.population = out.in_p;
      face.feasible = out.in_p > 0;
      if (out.in_p >= 25)
        face.components = component_count(sys.chart.distance, inside_pts);
    } else {
      ZeroSearchOptions opts;
      opts.n_starts = 240;
      opts.seed = derive_seed(seed, "cut-face", static_cast<uint64_t>(
          std::accumulate(key.begin(), key.end(), 1L,
                          [](long acc, int j) { return acc * 31 + j + 1; })));
      opts.label = "cut-face";
      const auto comps = find_zero_set(
          sys.chart,
          [&](const ChartPoint& p) {
            const VectorXd mu = sys.mu(p);
            VectorXd f(key.size());
            for (size_t r = 0; r < key.size(); ++r)
              f[static_cast<int>(r)] =
                  P.constraints[key[r]].normal.cast<double>().dot(mu) -
                  P.constraints[key[r]].offset;
            return f;
          },
          nullptr, opts);
      std::vector<ChartPoint> population;
      for (const CriticalComponent& comp : comps)
        for (const ChartPoint& q : comp.members) {
          const VectorXd mu = sys.mu(q);
          if (!P.contains(mu)) continue;
          if (P.active_set(mu) != key) continue;  // stricter face hit
          population.push_back(q);
        }
      face.population = static_cast<long>(population.size());
      face.feasible = face.population > 0;
      if (face.population >= 25)
        face.components = component_count(sys.chart.distance, population);
    }
    out.faces.push_back(std::move(face));
  }
  out.counts_partition = assigned == out.in_p;

  if (out.in_p > 0) {
    out.preimage_components = component_count(sys.chart.distance, inside_pts);
    std::vector<ChartPoint> image_pts;
    image_pts.reserve(inside_rows.size());
    for (int row : inside_rows)
      image_pts.push_back({0, values.row(row).transpose()});
    out.image_components = component_count(
        [](const ChartPoint& a, const ChartPoint& b) {
          return (a.x - b.x).norm();
        },
        image_pts);
    out.item1_equivalent =
        (out.preimage_components == 1) == (out.image_components == 1);
  }

  if (sys.chart.compact) {
    out.compact_certified = true;
  } else {
    double inside_reach = 0.0, total_reach = 0.0;
    for (const ChartPoint& q : inside_pts)
      inside_reach = std::max(inside_reach, q.x.cwiseAbs().maxCoeff());
    for (const ChartPoint& q : pts)
      total_reach = std::max(total_reach, q.x.cwiseAbs().maxCoeff());
    out.compact_certified = inside_reach < 0.9 * total_reach;
    out.note = "assuming properness";
  }
  return out;
}

// ---- local polyhedrality ---------------------------------------------------

struct PolyhedralityReport {
  HullReport hull;
  std::vector<Eigen::Vector2i> normals;  // consolidated outward directions
  std::vector<double> edge_weight;       // boundary length per normal
  int failures = 0;  // dominant directions with no small rational normal
};

inline PolyhedralityReport consolidate_polygon_normals(HullReport hull) {
  PolyhedralityReport out;
  out.hull = std::move(hull);
  if (out.hull.ambient_dim != 2)
    throw std::invalid_argument("normal consolidation needs a planar hull");
  if (out.hull.degenerate || out.hull.vertices.rows() < 3)
    throw std::runtime_error("degenerate hull");

  // Merge consecutive near-parallel edges: sampling turns each true facet
  // into a chain of long chords (off the facet direction by up to a few
  // milliradians at desk-scale sample counts) plus short corner-cutting
  // stubs. Distinct small-integer directions sit hundreds of milliradians
  // apart, so a 20 mrad merge cone is safe on both sides.
  constexpr double kMergeCone = 0.02;
  const int v = static_cast<int>(out.hull.vertices.rows());
  std::vector<Eigen::Vector2d> dir_sum;
  std::vector<double> weight;
  double perimeter = 0.0;
  for (int i = 0; i < v; ++i) {
    const Eigen::Vector2d a = out.hull.vertices.row(i);
    const Eigen::Vector2d b = out.hull.vertices.row((i + 1) % v);
    const Eigen::Vector2d edge = b - a;
    const double len = edge.norm();
    perimeter += len;
    const Eigen::Vector2d normal = Eigen::Vector2d(edge[1], -edge[0]) / len;
    if (!dir_sum.empty()) {
      const Eigen::Vector2d prev = dir_sum.back().normalized();
      if (std::atan2(std::abs(prev[0] * normal[1] - prev[1] * normal[0]),
                     prev.dot(normal)) < kMergeCone) {
        dir_sum.back() += len * normal;
        weight.back() += len;
        continue;
      }
    }
    dir_sum.push_back(len * normal);
    weight.push_back(len);
  }
  if (dir_sum.size() > 1) {
    const Eigen::Vector2d first = dir_sum.front().normalized();
    const Eigen::Vector2d last = dir_sum.back().normalized();
    if (std::atan2(std::abs(first[0] * last[1] - first[1] * last[0]),
                   first.dot(last)) < kMergeCone) {
      dir_sum.front() += dir_sum.back();
      weight.front() += weight.back();
      dir_sum.pop_back();
      weight.pop_back();
    }
  }
  // Snap every chain to the nearest small integer direction and accumulate
  // boundary length per direction. Corner-rounding chords land on junk
  // directions that never collect enough weight to pass the dominance cut.
  std::vector<Eigen::Vector2i> snapped;
  std::vector<double> snapped_weight;
  for (size_t g = 0; g < dir_sum.size(); ++g) {
    const auto rational =
        rationalize_direction(dir_sum[g].normalized(), 12, 0.03);
    if (!rational) {
      if (weight[g] >= 0.05 * perimeter) ++out.failures;
      continue;
    }
    bool merged = false;
    for (size_t s = 0; s < snapped.size(); ++s)
      if (snapped[s] == *rational) {
        snapped_weight[s] += weight[g];
        merged = true;
      }
    if (!merged) {
      snapped.push_back(*rational);
      snapped_weight.push_back(weight[g]);
    }
  }
  for (size_t s = 0; s < snapped.size(); ++s) {
    if (snapped_weight[s] < 0.05 * perimeter) continue;
    out.normals.push_back(snapped[s]);
    out.edge_weight.push_back(snapped_weight[s]);
  }
  return out;
}

inline PolyhedralityReport polyhedrality_report(const MomentSystem& sys, int n,
                                                uint64_t seed) {
  if (sys.m != 2)
    throw std::invalid_argument("polyhedrality check needs a planar image");
  return consolidate_polygon_normals(convex_hull(sample_image(sys, n, seed)));
}

// ---- weighted family coverage ----------------------------------------------

struct CoverageReport {
  int grid_total = 0;
  int uncovered = 0;
  bool covered = false;
};

// Union of the fixed-value triangles over random weights must fill the
// quadrant window [-3,0]^2 at step 0.1.
inline CoverageReport quadrant_coverage(int n_weights, uint64_t seed) {
  Rng rng(derive_seed(seed, "quadrant-coverage"));
  std::vector<Eigen::Vector2d> legs;  // (leg on x axis, leg on y axis), < 0
  for (int t = 0; t < n_weights; ++t) {
    const Eigen::Vector2d w(rng.uniform(0.05, 40.0), rng.uniform(0.05, 40.0));
    const Builtin builtin = make_cp2_fs(w);
    const MomentSystem& sys = *builtin.system;
    const VectorXd apex = sys.mu({0, VectorXd::Zero(4)});
    const VectorXd leg_x = sys.mu({1, VectorXd::Zero(4)});
    const VectorXd leg_y = sys.mu({2, VectorXd::Zero(4)});
    if (apex.norm() > 1e-12) throw std::runtime_error("apex moved");
    legs.emplace_back(leg_x[0], leg_y[1]);
  }
  CoverageReport out;
  for (int i = 0; i <= 30; ++i)
    for (int j = 0; j <= 30; ++j) {
      const double x = -3.0 + 0.1 * i;
      const double y = -3.0 + 0.1 * j;
      ++out.grid_total;
      bool hit = false;
      for (const Eigen::Vector2d& leg : legs)
        if (x / leg[0] + y / leg[1] <= 1.0 + 1e-9) {
          hit = true;
          break;
        }
      if (!hit) ++out.uncovered;
    }
  out.covered = out.uncovered == 0;
  return out;
}

}  // namespace gcx
