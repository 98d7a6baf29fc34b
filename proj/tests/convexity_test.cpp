// Image-level checks: hull extraction, fixed-value hull comparison, level
// connectivity, the midpoint defect measure, half-space cuts, and weighted
// family coverage, all against frozen expected geometry.

#include "gcx/convexity.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace gcx {
namespace {

VectorXd vec(std::initializer_list<double> entries) {
  VectorXd v(static_cast<int>(entries.size()));
  int i = 0;
  for (double e : entries) v[i++] = e;
  return v;
}

MomentSystem cp2_system(double w1 = 1.0, double w2 = 1.0) {
  return *make_cp2_fs(Eigen::Vector2d(w1, w2)).system;
}

MatrixXd rows2(std::initializer_list<std::pair<double, double>> entries) {
  MatrixXd out(entries.size(), 2);
  int i = 0;
  for (const auto& [x, y] : entries) {
    out(i, 0) = x;
    out(i, 1) = y;
    ++i;
  }
  return out;
}

bool same_vertex_set(const MatrixXd& got, const MatrixXd& want, double tol) {
  if (got.rows() != want.rows()) return false;
  for (int i = 0; i < want.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < got.rows(); ++j)
      best = std::min(best, (got.row(j) - want.row(i)).norm());
    if (best > tol) return false;
  }
  return true;
}

bool has_normal(const PolyhedralityReport& rep, int a, int b) {
  for (const Eigen::Vector2i& n : rep.normals)
    if (n[0] == a && n[1] == b) return true;
  return false;
}

PolyhedralSet orthant_cut(double x0, double y0) {
  PolyhedralSet cut;
  cut.constraints.push_back({Eigen::Vector2i(1, 0), x0});
  cut.constraints.push_back({Eigen::Vector2i(0, 1), y0});
  return cut;
}

TEST(Lattice, HermiteRowBasisNormalizesSpans) {
  Eigen::MatrixXi swapped(2, 2);
  swapped << 0, 1, 1, 0;
  const Eigen::MatrixXi id = hermite_row_basis(swapped);
  ASSERT_EQ(id.rows(), 2);
  EXPECT_EQ(id(0, 0), 1);
  EXPECT_EQ(id(0, 1), 0);
  EXPECT_EQ(id(1, 0), 0);
  EXPECT_EQ(id(1, 1), 1);
  EXPECT_TRUE(lattice_is_full(id, 2));

  Eigen::MatrixXi redundant(3, 2);
  redundant << 2, 4, 1, 1, 3, 5;
  const Eigen::MatrixXi reduced = hermite_row_basis(redundant);
  ASSERT_EQ(reduced.rows(), 2);
  EXPECT_EQ(reduced(0, 0), 1);
  EXPECT_EQ(reduced(0, 1), 1);
  EXPECT_EQ(reduced(1, 0), 0);
  EXPECT_EQ(reduced(1, 1), 2);
  EXPECT_FALSE(lattice_is_full(reduced, 2));

  Eigen::MatrixXi single(1, 2);
  single << 2, 4;
  const Eigen::MatrixXi kept = hermite_row_basis(single);
  ASSERT_EQ(kept.rows(), 1);
  EXPECT_EQ(kept(0, 0), 2);
  EXPECT_EQ(kept(0, 1), 4);

  EXPECT_EQ(hermite_row_basis(Eigen::MatrixXi(0, 2)).rows(), 0);
}

TEST(Lattice, RationalizeDirectionFindsSmallNormals) {
  const auto diag = rationalize_direction(Eigen::Vector2d(-1, -1).normalized());
  ASSERT_TRUE(diag.has_value());
  EXPECT_EQ((*diag)[0], -1);
  EXPECT_EQ((*diag)[1], -1);

  const auto axis = rationalize_direction(Eigen::Vector2d(0, 1));
  ASSERT_TRUE(axis.has_value());
  EXPECT_EQ((*axis)[0], 0);
  EXPECT_EQ((*axis)[1], 1);

  const auto steep = rationalize_direction(Eigen::Vector2d(-1, -2).normalized());
  ASSERT_TRUE(steep.has_value());
  EXPECT_EQ((*steep)[0], -1);
  EXPECT_EQ((*steep)[1], -2);

  // Slope 1/7 has no approximation with entries <= 5 at this tolerance.
  const double angle = std::atan2(1.0, 7.0);
  const Eigen::Vector2d awkward(std::cos(angle), std::sin(angle));
  EXPECT_FALSE(rationalize_direction(awkward, 5, 1e-4).has_value());
  EXPECT_FALSE(rationalize_direction(Eigen::Vector2d::Zero()).has_value());
}

TEST(Hull, PlanarCloudDropsInteriorAndCollinearPoints) {
  const MatrixXd square =
      rows2({{0, 0}, {-0.5, 0}, {0, -0.5}, {-0.1, -0.1}});
  const HullReport hull = convex_hull(square);
  EXPECT_FALSE(hull.degenerate);
  EXPECT_EQ(hull.hull_dim, 2);
  ASSERT_EQ(hull.vertices.rows(), 3);
  EXPECT_TRUE(same_vertex_set(hull.vertices,
                              rows2({{0, 0}, {-0.5, 0}, {0, -0.5}}), 1e-12));
  double area2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    const auto a = hull.vertices.row(i);
    const auto b = hull.vertices.row((i + 1) % 3);
    area2 += a[0] * b[1] - a[1] * b[0];
  }
  EXPECT_GT(area2, 0.0);  // counterclockwise
  ASSERT_EQ(hull.facet_normals.size(), 3u);
  const Eigen::RowVector2d centroid = hull.vertices.colwise().mean();
  for (int i = 0; i < 3; ++i) {
    const Eigen::RowVector2d edge_mid =
        0.5 * (hull.vertices.row(i) + hull.vertices.row((i + 1) % 3));
    EXPECT_GT(hull.facet_normals[i].dot((edge_mid - centroid).transpose()), 0.0);
  }
  EXPECT_LT(hull.max_violation, 1e-12);

  const HullReport line =
      convex_hull(rows2({{0, 0}, {1, 1}, {2, 2}, {0.5, 0.5}}));
  EXPECT_TRUE(line.degenerate);
  EXPECT_EQ(line.hull_dim, 1);
  ASSERT_EQ(line.vertices.rows(), 2);
  EXPECT_TRUE(same_vertex_set(line.vertices, rows2({{0, 0}, {2, 2}}), 1e-12));

  const HullReport lone = convex_hull(rows2({{0.3, 0.4}}));
  EXPECT_EQ(lone.hull_dim, 0);
  EXPECT_EQ(lone.vertices.rows(), 1);
}

TEST(Hull, CubeKeepsCornersAndMergesCoplanarFacets) {
  MatrixXd pts(11, 3);
  int row = 0;
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      for (int sz : {-1, 1}) pts.row(row++) = Eigen::RowVector3d(sx, sy, sz);
  pts.row(row++) = Eigen::RowVector3d(0, 0, 0);
  pts.row(row++) = Eigen::RowVector3d(1, 0, 0);
  pts.row(row++) = Eigen::RowVector3d(0.99, 0.2, -0.3);
  const HullReport hull = convex_hull(pts);
  EXPECT_FALSE(hull.degenerate);
  EXPECT_EQ(hull.hull_dim, 3);
  EXPECT_EQ(hull.vertices.rows(), 8);
  ASSERT_EQ(hull.facet_normals.size(), 6u);
  for (int axis = 0; axis < 3; ++axis)
    for (int sign : {-1, 1}) {
      Eigen::Vector3d want = Eigen::Vector3d::Zero();
      want[axis] = sign;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& n : hull.facet_normals)
        best = std::min(best, (n - want).norm());
      EXPECT_LT(best, 1e-9);
    }
  EXPECT_LT(hull.max_violation, 1e-12);
}

TEST(Hull, PointDistanceAndHausdorff) {
  const MatrixXd tri = rows2({{0, 0}, {-0.5, 0}, {0, -0.5}});
  const HullReport hull = convex_hull(tri);
  EXPECT_DOUBLE_EQ(point_to_hull(vec({-0.1, -0.1}), hull.vertices), 0.0);
  EXPECT_NEAR(point_to_hull(vec({0.1, 0.1}), hull.vertices), std::sqrt(0.02),
              1e-12);

  MatrixXd interval(3, 1);
  interval << 0.3, -1.0, 2.0;
  const HullReport seg = convex_hull(interval);
  EXPECT_NEAR(point_to_hull(vec({3.0}), seg.vertices), 1.0, 1e-12);
  EXPECT_NEAR(point_to_hull(vec({0.0}), seg.vertices), 0.0, 1e-12);

  // Adding edge midpoints must not move the hull.
  const MatrixXd padded = rows2({{0, 0},
                                 {-0.5, 0},
                                 {0, -0.5},
                                 {-0.25, 0},
                                 {-0.25, -0.25},
                                 {0, -0.25}});
  const HullReport same = convex_hull(padded, &tri);
  EXPECT_EQ(same.vertices.rows(), 3);
  EXPECT_NEAR(same.hausdorff, 0.0, 1e-12);
}

TEST(Image, SamplesLandOnTheKnownImage) {
  const MomentSystem sys = cp2_system();
  const MatrixXd cloud = sample_image(sys, 2000, 11);
  ASSERT_EQ(cloud.rows(), 2000);
  for (int i = 0; i < cloud.rows(); ++i) {
    EXPECT_LE(cloud(i, 0), 1e-9);
    EXPECT_LE(cloud(i, 1), 1e-9);
    EXPECT_GE(cloud(i, 0) + cloud(i, 1), -0.5 - 1e-9);
  }

  const MomentSystem saddle = *make_c_counterexample().system;
  const MatrixXd graph = sample_image(saddle, 500, 11);
  for (int i = 0; i < graph.rows(); ++i)
    EXPECT_NEAR(graph(i, 2), 2.0 * graph(i, 0) * graph(i, 1), 1e-12);

  EXPECT_EQ(sample_image(sys, 1, 0).rows(), 1);
}

TEST(Image, SamplingIsReproducible) {
  const MomentSystem sys = cp2_system();
  const MatrixXd first = sample_image(sys, 500, 42);
  const MatrixXd second = sample_image(sys, 500, 42);
  EXPECT_EQ((first - second).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Image, FixedValueHullMatchesTheSampledImageHull) {
  const TheoremAReport rep = theorem_a_report(cp2_system(), 20000, 7);
  EXPECT_FALSE(rep.fixed_set_whole_chart);
  ASSERT_EQ(rep.fixed_values.rows(), 3);
  EXPECT_NEAR(rep.fixed_values(0, 0), -0.5, 1e-8);
  EXPECT_NEAR(rep.fixed_values(0, 1), 0.0, 1e-8);
  EXPECT_NEAR(rep.fixed_values(1, 0), 0.0, 1e-8);
  EXPECT_NEAR(rep.fixed_values(1, 1), -0.5, 1e-8);
  EXPECT_NEAR(rep.fixed_values(2, 0), 0.0, 1e-8);
  EXPECT_NEAR(rep.fixed_values(2, 1), 0.0, 1e-8);
  EXPECT_EQ(rep.fixed_hull.vertices.rows(), 3);
  EXPECT_LT(rep.hausdorff, 5e-3);
  EXPECT_LT(rep.vertex_match, 5e-3);

  const TheoremAReport skew = theorem_a_report(cp2_system(2, 1), 20000, 8);
  ASSERT_EQ(skew.fixed_values.rows(), 3);
  EXPECT_TRUE(same_vertex_set(skew.fixed_values,
                              rows2({{0, 0}, {-1, 0}, {0, -0.5}}), 1e-8));
  EXPECT_LT(skew.hausdorff, 5e-3);

  const TheoremAReport tall = theorem_a_report(cp2_system(1, 3), 20000, 9);
  ASSERT_EQ(tall.fixed_values.rows(), 3);
  EXPECT_TRUE(same_vertex_set(tall.fixed_values,
                              rows2({{0, 0}, {-0.5, 0}, {0, -1.5}}), 1e-8));
  EXPECT_LT(tall.hausdorff, 5e-3);
}

TEST(Image, ConstantMomentMapCollapsesBothHulls) {
  MomentSystem sys;
  sys.chart = make_r2_rotation().chart;
  sys.m = 1;
  sys.mu = [](const ChartPoint&) { return vec({0.7}); };
  sys.mu_jacobian = [](const ChartPoint& p) {
    return MatrixXd::Zero(1, p.x.size()).eval();
  };
  sys.xi_basis = [](const ChartPoint& p) {
    return MatrixXd::Zero(p.x.size(), 1).eval();
  };
  sys.alpha_basis = sys.xi_basis;

  const TheoremAReport rep = theorem_a_report(sys, 200, 3);
  EXPECT_TRUE(rep.fixed_set_whole_chart);
  EXPECT_EQ(rep.image_hull.hull_dim, 0);
  ASSERT_EQ(rep.fixed_values.rows(), 1);
  EXPECT_NEAR(rep.fixed_values(0, 0), 0.7, 1e-12);
  EXPECT_NEAR(rep.hausdorff, 0.0, 1e-12);
  EXPECT_NEAR(rep.vertex_match, 0.0, 1e-12);
}

TEST(Connectivity, InteriorLevelsOfTheTriangleAreConnected) {
  const MomentSystem sys = cp2_system();
  const LevelCloud cloud = sample_level_cloud(sys, 20000, 3);

  const ConnectivityReport mid =
      level_connectivity(sys, cloud, vec({-0.2, -0.2}), 0.01);
  EXPECT_GE(mid.in_slab, 25);
  EXPECT_EQ(mid.components, 1);
  EXPECT_FALSE(mid.inconclusive);

  const ConnectivityReport outside =
      level_connectivity(sys, cloud, vec({0.2, 0.2}), 0.01);
  EXPECT_EQ(outside.in_slab, 0);
  EXPECT_EQ(outside.components, 0);
  EXPECT_FALSE(outside.inconclusive);
}

TEST(Connectivity, HoleSplitsALevelIntoTwoStrips) {
  MomentSystem sys;
  ChartModel& chart = sys.chart;
  chart.name = "annulus";
  chart.d = 2;
  chart.in_domain = [](const ChartPoint& p) {
    const double r = p.x.norm();
    return r >= 0.5 && r <= 1.5;
  };
  chart.sample = [](Rng& rng) {
    while (true) {
      ChartPoint p{0, rng.uniform_vector(2, -1.6, 1.6)};
      const double r = p.x.norm();
      if (r >= 0.5 && r <= 1.5) return p;
    }
  };
  chart.canonical = [](const ChartPoint& p) { return p; };
  chart.distance = [](const ChartPoint& a, const ChartPoint& b) {
    return (a.x - b.x).norm();
  };
  chart.seed_lo = vec({-1.6, -1.6});
  chart.seed_hi = vec({1.6, 1.6});
  sys.m = 1;
  sys.mu = [](const ChartPoint& p) { return vec({p.x[0] * p.x[0]}); };
  sys.mu_jacobian = [](const ChartPoint& p) {
    MatrixXd jac(1, 2);
    jac << 2.0 * p.x[0], 0.0;
    return jac;
  };
  sys.xi_basis = [](const ChartPoint&) { return MatrixXd::Zero(2, 1).eval(); };
  sys.alpha_basis = sys.xi_basis;

  // The level x0^2 = 0.5 meets the annulus in two strips that clear the
  // hole, one per sign of x0.
  const ConnectivityReport rep =
      level_connectivity(sys, vec({0.5}), 0.02, 0.0, 8000, 5);
  EXPECT_GE(rep.in_slab, 25);
  EXPECT_FALSE(rep.inconclusive);
  EXPECT_EQ(rep.components, 2);
}

TEST(Defect, SaddleImageHasALargeMidpointGap) {
  const MomentSystem saddle = *make_c_counterexample().system;
  const MatrixXd cloud = sample_image(saddle, 4000, 9);
  EXPECT_GT(convexity_defect(cloud, 4000, 9), 1.0);
}

TEST(Defect, ConvexImageDefectShrinksWithSampleSize) {
  const MomentSystem sys = cp2_system();
  const double coarse = convexity_defect(sample_image(sys, 1000, 13), 2000, 1);
  const double medium = convexity_defect(sample_image(sys, 4000, 13), 2000, 1);
  const double fine = convexity_defect(sample_image(sys, 16000, 13), 2000, 1);
  EXPECT_GT(coarse, medium);
  EXPECT_GT(medium, fine);
  EXPECT_LT(fine, 0.05);
  EXPECT_EQ(convexity_defect(sample_image(sys, 1, 0), 100, 0), 0.0);
}

TEST(Cut, HalfLineCutOfTheRotationPlane) {
  const MomentSystem sys = *make_r2_rotation().system;
  PolyhedralSet cut;
  cut.constraints.push_back({Eigen::VectorXi::Ones(1), 0.5});
  const CutReport rep = cut_decompose(sys, cut, 4000, 21);

  EXPECT_TRUE(rep.counts_partition);
  ASSERT_EQ(rep.faces.size(), 2u);

  const FaceRecord& interior = rep.faces[0];
  EXPECT_TRUE(interior.active.empty());
  EXPECT_EQ(interior.dim, 1);
  EXPECT_EQ(interior.subtorus.rows(), 0);
  EXPECT_FALSE(interior.subtorus_full);
  EXPECT_TRUE(interior.feasible);
  EXPECT_GT(interior.sample_count, 0);
  EXPECT_EQ(interior.components, 1);

  const FaceRecord& rim = rep.faces[1];
  ASSERT_EQ(rim.active.size(), 1u);
  EXPECT_EQ(rim.dim, 0);
  ASSERT_EQ(rim.subtorus.rows(), 1);
  EXPECT_EQ(rim.subtorus(0, 0), 1);
  EXPECT_TRUE(rim.subtorus_full);
  EXPECT_TRUE(rim.feasible);
  EXPECT_GE(rim.population, 25);
  EXPECT_EQ(rim.components, 1);

  EXPECT_EQ(rep.preimage_components, 1);
  EXPECT_EQ(rep.image_components, 1);
  EXPECT_TRUE(rep.item1_equivalent);
  EXPECT_FALSE(rep.compact_certified);
  EXPECT_EQ(rep.note, "assuming properness");
}

TEST(Cut, OrthantCutOfTheTriangleFillsTheFaceLattice) {
  const MomentSystem sys = cp2_system();
  // The orthant corner (-0.2,-0.2) lies strictly inside the image triangle,
  // so every face of the cut meets the image.
  const CutReport rep = cut_decompose(sys, orthant_cut(-0.2, -0.2), 4000, 17);

  EXPECT_TRUE(rep.counts_partition);
  ASSERT_EQ(rep.faces.size(), 4u);
  EXPECT_TRUE(rep.compact_certified);
  EXPECT_TRUE(rep.note.empty());

  const FaceRecord& interior = rep.faces[0];
  EXPECT_TRUE(interior.active.empty());
  EXPECT_EQ(interior.dim, 2);
  EXPECT_FALSE(interior.subtorus_full);
  EXPECT_TRUE(interior.feasible);
  EXPECT_EQ(interior.components, 1);

  const FaceRecord& left = rep.faces[1];
  ASSERT_EQ(left.active.size(), 1u);
  EXPECT_EQ(left.active[0], 0);
  EXPECT_EQ(left.dim, 1);
  ASSERT_EQ(left.subtorus.rows(), 1);
  EXPECT_EQ(left.subtorus(0, 0), 1);
  EXPECT_EQ(left.subtorus(0, 1), 0);
  EXPECT_FALSE(left.subtorus_full);
  EXPECT_TRUE(left.feasible);
  EXPECT_EQ(left.components, 1);

  const FaceRecord& bottom = rep.faces[2];
  ASSERT_EQ(bottom.active.size(), 1u);
  EXPECT_EQ(bottom.active[0], 1);
  ASSERT_EQ(bottom.subtorus.rows(), 1);
  EXPECT_EQ(bottom.subtorus(0, 0), 0);
  EXPECT_EQ(bottom.subtorus(0, 1), 1);
  EXPECT_TRUE(bottom.feasible);
  EXPECT_EQ(bottom.components, 1);

  const FaceRecord& corner = rep.faces[3];
  ASSERT_EQ(corner.active.size(), 2u);
  EXPECT_EQ(corner.dim, 0);
  EXPECT_TRUE(corner.subtorus_full);
  EXPECT_TRUE(corner.feasible);
  EXPECT_GE(corner.population, 25);
  EXPECT_EQ(corner.components, 1);

  EXPECT_TRUE(rep.item1_equivalent);
}

TEST(Cut, CornerBeyondTheHypotenuseIsReportedInfeasible) {
  // At offsets -0.3 the orthant corner has coordinate sum -0.6, past the
  // hypotenuse x + y = -0.5, so its preimage is empty while both edge
  // faces still meet the image.
  const MomentSystem sys = cp2_system();
  const CutReport rep = cut_decompose(sys, orthant_cut(-0.3, -0.3), 4000, 17);
  EXPECT_TRUE(rep.counts_partition);
  ASSERT_EQ(rep.faces.size(), 4u);
  EXPECT_TRUE(rep.faces[0].feasible);
  EXPECT_TRUE(rep.faces[1].feasible);
  EXPECT_TRUE(rep.faces[2].feasible);
  EXPECT_FALSE(rep.faces[3].feasible);
  EXPECT_EQ(rep.faces[3].population, 0);
  EXPECT_TRUE(rep.faces[3].subtorus_full);  // lattice data is combinatorial
  EXPECT_TRUE(rep.item1_equivalent);
}

TEST(Cut, SupersetLeavesOnlyTheInteriorFacePopulated) {
  const MomentSystem sys = cp2_system();
  const CutReport rep = cut_decompose(sys, orthant_cut(-5.0, -5.0), 2000, 19);
  EXPECT_TRUE(rep.counts_partition);
  EXPECT_EQ(rep.in_p, rep.total);
  int feasible = 0;
  for (const FaceRecord& face : rep.faces)
    if (face.feasible) ++feasible;
  EXPECT_EQ(feasible, 1);
  EXPECT_TRUE(rep.faces[0].feasible);
  for (size_t f = 1; f < rep.faces.size(); ++f) {
    EXPECT_EQ(rep.faces[f].population, 0);
    EXPECT_EQ(rep.faces[f].sample_count, 0);
  }
}

TEST(Cut, RejectsMalformedCutSets) {
  const MomentSystem sys = cp2_system();
  EXPECT_THROW(cut_decompose(sys, PolyhedralSet{}, 100, 0),
               std::invalid_argument);
  PolyhedralSet wrong;
  wrong.constraints.push_back({Eigen::VectorXi::Ones(3), 0.0});
  EXPECT_THROW(cut_decompose(sys, wrong, 100, 0), std::invalid_argument);
}

TEST(Polyhedrality, RecoversTheTriangleEdgeNormals) {
  const PolyhedralityReport rep =
      polyhedrality_report(cp2_system(), 8000, 4);
  EXPECT_EQ(rep.failures, 0);
  ASSERT_EQ(rep.normals.size(), 3u);
  EXPECT_TRUE(has_normal(rep, 1, 0));
  EXPECT_TRUE(has_normal(rep, 0, 1));
  EXPECT_TRUE(has_normal(rep, -1, -1));

  const PolyhedralityReport skew =
      polyhedrality_report(cp2_system(2, 1), 8000, 4);
  EXPECT_EQ(skew.failures, 0);
  ASSERT_EQ(skew.normals.size(), 3u);
  EXPECT_TRUE(has_normal(skew, 1, 0));
  EXPECT_TRUE(has_normal(skew, 0, 1));
  EXPECT_TRUE(has_normal(skew, -1, -2));
}

TEST(Polyhedrality, ExactSquareGridYieldsAxisNormals) {
  MatrixXd grid(441, 2);
  int row = 0;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j)
      grid.row(row++) = Eigen::RowVector2d(-1.0 + 0.1 * i, -1.0 + 0.1 * j);
  const PolyhedralityReport rep =
      consolidate_polygon_normals(convex_hull(grid));
  EXPECT_EQ(rep.failures, 0);
  ASSERT_EQ(rep.normals.size(), 4u);
  EXPECT_TRUE(has_normal(rep, 1, 0));
  EXPECT_TRUE(has_normal(rep, -1, 0));
  EXPECT_TRUE(has_normal(rep, 0, 1));
  EXPECT_TRUE(has_normal(rep, 0, -1));
  for (double weight : rep.edge_weight) EXPECT_NEAR(weight, 2.0, 1e-12);

  EXPECT_THROW(
      consolidate_polygon_normals(convex_hull(rows2({{0, 0}, {1, 1}, {2, 2}}))),
      std::runtime_error);
}

TEST(Coverage, WeightedTrianglesFillTheQuadrantWindow) {
  const CoverageReport rep = quadrant_coverage(50, 2);
  EXPECT_EQ(rep.grid_total, 961);
  EXPECT_EQ(rep.uncovered, 0);
  EXPECT_TRUE(rep.covered);
}

}  // namespace
}  // namespace gcx
