// Chart models, the twisted bracket, and integrability residuals.

#include "gcx/geom.hpp"

#include <gtest/gtest.h>

#include "gcx/models.hpp"
#include "gcx/spinor.hpp"

namespace gcx {
namespace {

const complexd kI(0, 1);

TEST(FiniteDifference, HessianOfQuadraticIsExact) {
  MatrixXd a(3, 3);
  a << 2, 1, 0, 1, -3, 2, 0, 2, 5;
  auto f = [&](const VectorXd& x) { return 0.5 * x.dot(a * x); };
  VectorXd x0(3);
  x0 << 0.3, -1.2, 0.7;
  MatrixXd h = fd_hessian(f, x0, 1e-4);
  EXPECT_LT((h - a).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(CourantBracket, ConstantSectionsUntwisted) {
  SectionField s1{[](const VectorXd&) {
    VectorXcd v(4);
    v << 1, 2, -1, 0.5;
    return v;
  }, nullptr};
  SectionField s2{[](const VectorXd&) {
    VectorXcd v(4);
    v << -3, 1, 2, 2;
    return v;
  }, nullptr};
  VectorXd x = VectorXd::Zero(2);
  VectorXcd br = courant_bracket(s1, s2, ThreeForm::zero(2), x);
  EXPECT_LT(br.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(CourantBracket, LieDerivativeOfScaledCovector) {
  // [d/dx1, x1 e^2] = e^2.
  SectionField s1{[](const VectorXd&) {
    VectorXcd v = VectorXcd::Zero(4);
    v[0] = 1;
    return v;
  }, nullptr};
  SectionField s2{[](const VectorXd& x) {
    VectorXcd v = VectorXcd::Zero(4);
    v[3] = x[0];
    return v;
  }, nullptr};
  VectorXd x(2);
  x << 0.7, -0.3;
  VectorXcd br = courant_bracket(s1, s2, ThreeForm::zero(2), x);
  VectorXcd expect = VectorXcd::Zero(4);
  expect[3] = 1;
  EXPECT_LT((br - expect).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(CourantBracket, TwistTermOnConstantVectors) {
  // i_Y i_X (e^1^e^2^e^3) for X = d1, Y = d2 is e^3.
  ThreeForm h = ThreeForm::zero(4);
  h.set(0, 1, 2, 1.0);
  SectionField s1{[](const VectorXd&) {
    VectorXcd v = VectorXcd::Zero(8);
    v[0] = 1;
    return v;
  }, nullptr};
  SectionField s2{[](const VectorXd&) {
    VectorXcd v = VectorXcd::Zero(8);
    v[1] = 1;
    return v;
  }, nullptr};
  VectorXcd br = courant_bracket(s1, s2, h, VectorXd::Zero(4));
  VectorXcd expect = VectorXcd::Zero(8);
  expect[4 + 2] = 1;
  EXPECT_LT((br - expect).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(CourantBracket, VectorPartAntisymmetric) {
  Rng rng(derive_seed(21, "bracket-antisym"));
  MatrixXcd m1(8, 4), m2(8, 4);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 4; ++c) {
      m1(r, c) = complexd(rng.uniform(-1, 1), rng.uniform(-1, 1));
      m2(r, c) = complexd(rng.uniform(-1, 1), rng.uniform(-1, 1));
    }
  SectionField s1{[&](const VectorXd& x) { return VectorXcd(m1 * x); }, nullptr};
  SectionField s2{[&](const VectorXd& x) { return VectorXcd(m2 * x); }, nullptr};
  VectorXd x = rng.uniform_vector(4, -1, 1);
  VectorXcd ab = courant_bracket(s1, s2, ThreeForm::zero(4), x);
  VectorXcd ba = courant_bracket(s2, s1, ThreeForm::zero(4), x);
  EXPECT_LT((ab.head(4) + ba.head(4)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(ThreeFormOps, AntisymmetricStorage) {
  ThreeForm h = ThreeForm::zero(3);
  h.set(0, 1, 2, 2.5);
  EXPECT_EQ(h.at(0, 1, 2), 2.5);
  EXPECT_EQ(h.at(1, 0, 2), -2.5);
  EXPECT_EQ(h.at(2, 0, 1), 2.5);
  EXPECT_EQ(h.at(0, 0, 2), 0.0);
}

std::vector<Builtin> catalog() {
  std::vector<Builtin> out;
  out.push_back(make_builtin("r2n_symplectic", {{1, 1}, 4}));
  out.push_back(make_builtin("r2_rotation", {}));
  out.push_back(make_builtin("cp2_fs", {{1.0, 1.0}, 2}));
  out.push_back(make_builtin("c_counterexample", {}));
  out.push_back(make_builtin("product_family", {{1.0, 1.0}, 2}));
  return out;
}

TEST(Builtins, StructuresSatisfyAxiomsEverywhere) {
  Rng rng(derive_seed(21, "axioms"));
  for (const Builtin& b : catalog()) {
    for (int trial = 0; trial < 30; ++trial) {
      ChartPoint p = b.chart.sample(rng);
      ASSERT_TRUE(b.chart.in_domain(p)) << b.chart.name;
      StructureValidation v = validate_structure(b.chart.structure(p));
      EXPECT_TRUE(v.ok(1e-9)) << b.chart.name << " square " << v.square_residual
                              << " pairing " << v.pairing_residual;
      if (b.chart.has_quadruple()) {
        EXPECT_TRUE(validate_quadruple(b.chart.quadruple(p)).ok(1e-8))
            << b.chart.name;
      }
      EXPECT_LT(closedness_residual(b.chart, p), 1e-8) << b.chart.name;
    }
  }
}

TEST(Builtins, TypesMatchTheModels) {
  Rng rng(derive_seed(21, "types"));
  auto type_at = [&](const Builtin& b) {
    return type_of(b.chart.structure(b.chart.sample(rng)));
  };
  std::vector<Builtin> models = catalog();
  EXPECT_EQ(type_at(models[0]), 0);  // r2n_symplectic
  EXPECT_EQ(type_at(models[1]), 0);  // r2_rotation
  EXPECT_EQ(type_at(models[2]), 0);  // cp2_fs
  EXPECT_EQ(type_at(models[3]), 1);  // c_counterexample, complex on d=2
  EXPECT_EQ(type_at(models[4]), 2);  // product_family, top factor dw1^dw2
}

TEST(Builtins, RejectsBadParameters) {
  EXPECT_THROW(make_builtin("no_such_model", {}), std::invalid_argument);
  EXPECT_THROW(make_builtin("cp2_fs", {{0.0, 1.0}, 2}), std::invalid_argument);
  EXPECT_THROW(make_builtin("r2n_symplectic", {{1, 1}, 3}),
               std::invalid_argument);
}

TEST(Cp2, FrozenMomentValues) {
  Builtin b = make_builtin("cp2_fs", {{1.0, 1.0}, 2});
  ChartPoint p{0, (VectorXd(4) << 1, 0, 1, 0).finished()};  // [1:1:1]
  VectorXd mu = b.system->mu(p);
  EXPECT_NEAR(mu[0], -1.0 / 6.0, 1e-14);
  EXPECT_NEAR(mu[1], -1.0 / 6.0, 1e-14);

  Builtin b21 = make_builtin("cp2_fs", {{2.0, 1.0}, 2});
  ChartPoint origin0{0, VectorXd::Zero(4)};
  ChartPoint origin1{1, VectorXd::Zero(4)};
  ChartPoint origin2{2, VectorXd::Zero(4)};
  EXPECT_LT((b21.system->mu(origin0) - Eigen::Vector2d(0, 0)).norm(), 1e-14);
  EXPECT_LT((b21.system->mu(origin1) - Eigen::Vector2d(-1.0, 0)).norm(), 1e-14);
  EXPECT_LT((b21.system->mu(origin2) - Eigen::Vector2d(0, -0.5)).norm(), 1e-14);
}

TEST(Cp2, ChartOverlapAgreement) {
  Builtin b = make_builtin("cp2_fs", {{1.3, 0.8}, 2});
  Rng rng(derive_seed(21, "overlap"));
  for (int trial = 0; trial < 20; ++trial) {
    VectorXd raw = rng.normal_vector(6);
    Eigen::Vector3cd z;
    for (int j = 0; j < 3; ++j) z[j] = complexd(raw[2 * j], raw[2 * j + 1]);
    z /= z.norm();
    VectorXd mu_by_chart[3];
    for (int chart = 0; chart < 3; ++chart)
      mu_by_chart[chart] = b.system->mu(detail::cp2_chart_point(z, chart));
    EXPECT_LT((mu_by_chart[0] - mu_by_chart[1]).norm(), 1e-10);
    EXPECT_LT((mu_by_chart[0] - mu_by_chart[2]).norm(), 1e-10);
  }
}

TEST(Cp2, MomentConditionExactInEveryChart) {
  // d(mu^xi) = i_{xi_M} omega, i.e. jac^T xi = omega_coeff^T (basis xi).
  Builtin b = make_builtin("cp2_fs", {{2.0, 0.7}, 2});
  Rng rng(derive_seed(21, "moment-exact"));
  for (int trial = 0; trial < 50; ++trial) {
    ChartPoint p = b.chart.sample(rng);
    VectorXd xi(2);
    xi << rng.uniform(-2, 2), rng.uniform(-2, 2);
    VectorXd dmu = b.system->dmu_xi(xi, p);
    MatrixXd omega = detail::fs_form(p.x);
    VectorXd pairing = omega.transpose() * b.system->xi_m(xi, p);
    EXPECT_LT((dmu - pairing).norm(), 1e-12);
  }
}

TEST(Cp2, CanonicalRechartsFarPoints) {
  Builtin b = make_builtin("cp2_fs", {{1.0, 1.0}, 2});
  ChartPoint far{0, (VectorXd(4) << 3.0, 0.5, -0.2, 0.1).finished()};
  ChartPoint canon = b.chart.canonical(far);
  EXPECT_NE(canon.chart, 0);
  EXPECT_LE(canon.x.cwiseAbs().maxCoeff(), 1.05);
  // sqrt(1 - cos^2) resolves separations only down to sqrt(machine eps).
  EXPECT_LT(b.chart.distance(far, canon), 1e-7);
}

TEST(Cp2, SamplerIsDeterministic) {
  Builtin b = make_builtin("cp2_fs", {{1.0, 1.0}, 2});
  Rng r1(derive_seed(99, "sample"));
  Rng r2(derive_seed(99, "sample"));
  for (int trial = 0; trial < 10; ++trial) {
    ChartPoint a = b.chart.sample(r1);
    ChartPoint c = b.chart.sample(r2);
    EXPECT_EQ(a.chart, c.chart);
    EXPECT_EQ(a.x, c.x);
  }
}

TEST(ProductFamily, StructureMatchesSpinorAnnihilator) {
  Builtin b = make_builtin("product_family", {{1.2, 0.9}, 2});
  Rng rng(derive_seed(21, "product-spinor"));
  for (int trial = 0; trial < 3; ++trial) {
    ChartPoint p = b.chart.sample(rng);
    MultiForm phi = detail::product_spinor(p.x);
    SpinorReport r = purity_report(phi);
    EXPECT_TRUE(r.is_pure);
    EXPECT_TRUE(r.nondegenerate);
    EXPECT_EQ(r.type_k, 2);
    ComplexSubspace from_spinor = annihilator(phi);
    ComplexSubspace from_structure = i_eigenspace(b.chart.structure(p));
    EXPECT_LT(subspace_distance(from_spinor, from_structure), 1e-8);
  }
}

TEST(ProductFamily, MomentConditionHoldsIncludingBaseDirections) {
  Builtin b = make_builtin("product_family", {{1.0, 1.0}, 2});
  Rng rng(derive_seed(21, "product-moment"));
  for (int trial = 0; trial < 5; ++trial) {
    ChartPoint p = b.chart.sample(rng);
    VectorXd xi(2);
    xi << rng.uniform(-2, 2), rng.uniform(-2, 2);
    VectorXcd v(16);
    v.head(8) = b.system->xi_m(xi, p).cast<complexd>();
    v.tail(8) = -kI * b.system->dmu_xi(xi, p).cast<complexd>();
    MatrixXd s = b.chart.structure(p).mat;
    EXPECT_LT((s.cast<complexd>() * v - kI * v).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Integrability, FlatModelsVanish) {
  Rng rng(derive_seed(21, "flat-integ"));
  for (const char* name : {"r2n_symplectic", "r2_rotation", "c_counterexample"}) {
    Builtin b = make_builtin(name, {{1, 1}, 4});
    ChartPoint p = b.chart.sample(rng);
    EXPECT_LT(integrability_residual(b.chart, p), 1e-9) << name;
  }
}

TEST(Integrability, CurvedBuiltinsWithinFdError) {
  Rng rng(derive_seed(21, "curved-integ"));
  Builtin cp2 = make_builtin("cp2_fs", {{1.0, 1.0}, 2});
  for (int trial = 0; trial < 20; ++trial) {
    ChartPoint p = cp2.chart.sample(rng);
    EXPECT_LT(integrability_residual(cp2.chart, p), 1e-5);
  }
  Builtin prod = make_builtin("product_family", {{1.0, 1.0}, 2});
  for (int trial = 0; trial < 5; ++trial) {
    ChartPoint p = prod.chart.sample(rng);
    EXPECT_LT(integrability_residual(prod.chart, p), 1e-5);
  }
}

TEST(Integrability, RotatingFixtureFails) {
  ChartModel fixture = make_rotating_complex_fixture();
  Rng rng(derive_seed(21, "fixture"));
  for (int trial = 0; trial < 5; ++trial) {
    ChartPoint p = fixture.sample(rng);
    EXPECT_GT(integrability_residual(fixture, p), 1e-2);
  }
}

TEST(Integrability, SymplecticStructureFailsUnderSyntheticTwist) {
  // Constant symplectic structure with a nonzero closed twist: the bracket
  // picks up i_Y i_X H and leaves the eigenbundle.
  ChartModel m = detail::box_model("twisted_flat", 4, 1.0);
  const GeneralizedStructure s = from_symplectic(standard_symplectic_form(4));
  m.structure = [s](const ChartPoint&) { return s; };
  ThreeForm h = ThreeForm::zero(4);
  h.set(0, 1, 2, 1.0);
  m.h_field = [h](const ChartPoint&) { return h; };
  Rng rng(derive_seed(21, "twisted"));
  ChartPoint p = m.sample(rng);
  EXPECT_LT(closedness_residual(m, p), 1e-8);
  EXPECT_GT(integrability_residual(m, p), 1e-2);
}

TEST(Integrability, ResidualShrinksQuadratically) {
  Builtin cp2 = make_builtin("cp2_fs", {{1.0, 1.0}, 2});
  ChartPoint p{0, (VectorXd(4) << 0.3, 0.41, -0.27, 0.13).finished()};
  double r1 = integrability_residual(cp2.chart, p, 1e-2);
  double r2 = integrability_residual(cp2.chart, p, 5e-3);
  double r4 = integrability_residual(cp2.chart, p, 2.5e-3);
  EXPECT_GT(r1 / r2, 2.0);
  EXPECT_LT(r1 / r2, 8.0);
  EXPECT_GT(r2 / r4, 2.0);
  EXPECT_LT(r2 / r4, 8.0);
}

}  // namespace
}  // namespace gcx
