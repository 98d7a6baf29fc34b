// Built-in chart models and their torus-action data.
//
// Catalog: r2n_symplectic, r2_rotation, cp2_fs(w), c_counterexample,
// product_family(w). cp2_fs covers the projective plane with three affine
// charts and samples uniformly from the unit sphere in C^3; the others are
// single-chart box models. Every built-in carries H = 0; twisted code paths
// are exercised by synthetic test fixtures.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "gcx/geom.hpp"
#include "gcx/spinor.hpp"

namespace gcx {

struct BuiltinParams {
  Eigen::Vector2d w{1.0, 1.0};  // cp2_fs / product_family weights
  int dim = 2;                  // r2n_symplectic dimension
};

struct Builtin {
  ChartModel chart;
  std::optional<MomentSystem> system;
};

namespace detail {

inline ThreeForm zero_three_form(int d) { return ThreeForm::zero(d); }

inline ChartModel box_model(std::string name, int d, double half_width) {
  ChartModel m;
  m.name = std::move(name);
  m.d = d;
  m.charts = 1;
  m.compact = false;
  m.h_field = [d](const ChartPoint&) { return ThreeForm::zero(d); };
  m.in_domain = [d, half_width](const ChartPoint& p) {
    return p.x.cwiseAbs().maxCoeff() <= half_width;
  };
  m.sample = [d, half_width](Rng& rng) {
    return ChartPoint{0, rng.uniform_vector(d, -half_width, half_width)};
  };
  m.canonical = [](const ChartPoint& p) { return p; };
  m.distance = [](const ChartPoint& a, const ChartPoint& b) {
    return (a.x - b.x).norm();
  };
  m.seed_lo = VectorXd::Constant(d, -half_width);
  m.seed_hi = VectorXd::Constant(d, half_width);
  return m;
}

// ---- cp2_fs internals ------------------------------------------------

// Chart c hosts [z : z_c = 1]; coordinates are z_j / z_c for j != c in
// ascending j, as (Re, Im) pairs.
inline Eigen::Vector3cd cp2_homogeneous(const ChartPoint& p) {
  complexd z1(p.x[0], p.x[1]), z2(p.x[2], p.x[3]);
  Eigen::Vector3cd z;
  switch (p.chart) {
    case 0: z << complexd(1, 0), z1, z2; break;
    case 1: z << z1, complexd(1, 0), z2; break;
    default: z << z1, z2, complexd(1, 0); break;
  }
  return z / z.norm();
}

inline ChartPoint cp2_chart_point(const Eigen::Vector3cd& z, int chart) {
  Eigen::Vector3cd s = z / z[chart];
  VectorXd x(4);
  int slot = 0;
  for (int j = 0; j < 3; ++j) {
    if (j == chart) continue;
    x[2 * slot] = s[j].real();
    x[2 * slot + 1] = s[j].imag();
    ++slot;
  }
  return {chart, x};
}

// Study form coefficients from the hermitian h_jk = d_jk/K - conj(z_j)z_k/K^2.
inline MatrixXd fs_form(const VectorXd& x) {
  const complexd z[2] = {complexd(x[0], x[1]), complexd(x[2], x[3])};
  const double bigk = 1.0 + std::norm(z[0]) + std::norm(z[1]);
  Eigen::Matrix2cd h;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      h(j, k) = (j == k ? 1.0 / bigk : 0.0) -
                std::conj(z[j]) * z[k] / (bigk * bigk);
  const Eigen::Matrix2d re = h.real(), im = h.imag();
  MatrixXd u = MatrixXd::Zero(4, 4);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      u(2 * j, 2 * k) = -im(j, k);
      u(2 * j, 2 * k + 1) = re(j, k);
      u(2 * j + 1, 2 * k) = -re(k, j);
      u(2 * j + 1, 2 * k + 1) = -im(j, k);
    }
  return u;
}

// Numerator |z_{j+1}|^2 of the moment component j, expressed in chart c:
// either the constant 1 (when the rotated coordinate is the chart pivot)
// or a squared chart coordinate.
struct Cp2Numerator {
  bool constant;
  int slot;  // valid when !constant
};

inline Cp2Numerator cp2_numerator(int chart, int j) {
  const int hom = j + 1;
  if (hom == chart) return {true, -1};
  return {false, hom - (hom > chart ? 1 : 0)};
}

inline VectorXd cp2_mu(const ChartPoint& p, const Eigen::Vector2d& wabs) {
  const double bigk = 1.0 + p.x.squaredNorm();
  VectorXd mu(2);
  for (int j = 0; j < 2; ++j) {
    const Cp2Numerator n = cp2_numerator(p.chart, j);
    const double num = n.constant ? 1.0
                                  : p.x[2 * n.slot] * p.x[2 * n.slot] +
                                        p.x[2 * n.slot + 1] * p.x[2 * n.slot + 1];
    mu[j] = -wabs[j] * num / (2.0 * bigk);
  }
  return mu;
}

inline MatrixXd cp2_mu_jacobian(const ChartPoint& p, const Eigen::Vector2d& wabs) {
  const double bigk = 1.0 + p.x.squaredNorm();
  const VectorXd dk = 2.0 * p.x;
  MatrixXd jac(2, 4);
  for (int j = 0; j < 2; ++j) {
    const Cp2Numerator n = cp2_numerator(p.chart, j);
    double num = 1.0;
    VectorXd dn = VectorXd::Zero(4);
    if (!n.constant) {
      num = p.x[2 * n.slot] * p.x[2 * n.slot] +
            p.x[2 * n.slot + 1] * p.x[2 * n.slot + 1];
      dn[2 * n.slot] = 2.0 * p.x[2 * n.slot];
      dn[2 * n.slot + 1] = 2.0 * p.x[2 * n.slot + 1];
    }
    jac.row(j) = -wabs[j] / 2.0 * (dn * bigk - num * dk).transpose() /
                 (bigk * bigk);
  }
  return jac;
}

// Generator fields of the [z0 : t1 z1 : t2 z2] action in each chart, scaled
// by |w| so that d(mu_w)^xi = i_{xi_M} omega_FS holds exactly.
inline MatrixXd cp2_xi_basis(const ChartPoint& p, const Eigen::Vector2d& wabs) {
  auto rotate_slot = [&](int slot) {
    VectorXd v = VectorXd::Zero(4);
    v[2 * slot] = -p.x[2 * slot + 1];
    v[2 * slot + 1] = p.x[2 * slot];
    return v;
  };
  auto counter_rotate_both = [&]() {
    VectorXd v(4);
    v << p.x[1], -p.x[0], p.x[3], -p.x[2];
    return v;
  };
  MatrixXd basis(4, 2);
  switch (p.chart) {
    case 0:
      basis.col(0) = rotate_slot(0);
      basis.col(1) = rotate_slot(1);
      break;
    case 1:
      basis.col(0) = counter_rotate_both();
      basis.col(1) = rotate_slot(1);
      break;
    default:
      basis.col(0) = rotate_slot(1);
      basis.col(1) = counter_rotate_both();
      break;
  }
  basis.col(0) *= wabs[0];
  basis.col(1) *= wabs[1];
  return basis;
}

// ---- product_family internals ---------------------------------------

// Coordinates (a1, b1, a2, b2, x1, y1, x2, y2): two base factors
// w_j = a_j + i b_j in C* and a fiber annulus inside the chart-0 affine
// plane of the projective model.
struct ProductGeometry {
  Eigen::Vector2d w_center;
  double base_half = 0.0;
  static constexpr double kFiberInner = 0.35;
  static constexpr double kFiberOuter = 1.2;

  static double fiber_radius(const VectorXd& x, int j) {
    return std::hypot(x[4 + 2 * j], x[5 + 2 * j]);
  }
  static double base_abs(const VectorXd& x, int j) {
    return std::hypot(x[2 * j], x[2 * j + 1]);
  }

  // Fiber pieces, chart-0 projective formulas without weights.
  static double fs_mu(const VectorXd& x, int j) {
    const double bigk =
        1.0 + x.segment(4, 4).squaredNorm();
    const double num = x[4 + 2 * j] * x[4 + 2 * j] + x[5 + 2 * j] * x[5 + 2 * j];
    return -num / (2.0 * bigk);
  }
  static VectorXd fs_mu_grad(const VectorXd& x, int j) {
    const double bigk = 1.0 + x.segment(4, 4).squaredNorm();
    const double num = x[4 + 2 * j] * x[4 + 2 * j] + x[5 + 2 * j] * x[5 + 2 * j];
    VectorXd dn = VectorXd::Zero(8), dk = VectorXd::Zero(8);
    dn[4 + 2 * j] = 2.0 * x[4 + 2 * j];
    dn[5 + 2 * j] = 2.0 * x[5 + 2 * j];
    dk.segment(4, 4) = 2.0 * x.segment(4, 4);
    return -(dn * bigk - num * dk) / (2.0 * bigk * bigk);
  }
  static VectorXd dtheta(const VectorXd& x, int j) {
    VectorXd u = VectorXd::Zero(8);
    const double r2 = x[4 + 2 * j] * x[4 + 2 * j] + x[5 + 2 * j] * x[5 + 2 * j];
    u[4 + 2 * j] = -x[5 + 2 * j] / r2;
    u[5 + 2 * j] = x[4 + 2 * j] / r2;
    return u;
  }
  static VectorXd dbase_abs(const VectorXd& x, int j) {
    VectorXd s = VectorXd::Zero(8);
    const double r = base_abs(x, j);
    s[2 * j] = x[2 * j] / r;
    s[2 * j + 1] = x[2 * j + 1] / r;
    return s;
  }

  // Closed two-form sum_j (|w_j| dtheta_j ^ dmu_j - mu_j d|w_j| ^ dtheta_j).
  static MatrixXd closed_form(const VectorXd& x) {
    MatrixXd omega = MatrixXd::Zero(8, 8);
    for (int j = 0; j < 2; ++j) {
      const VectorXd u = dtheta(x, j);
      const VectorXd v = fs_mu_grad(x, j);
      const VectorXd s = dbase_abs(x, j);
      const double m = fs_mu(x, j);
      omega += base_abs(x, j) * (u * v.transpose() - v * u.transpose());
      omega -= m * (s * u.transpose() - u * s.transpose());
    }
    return omega;
  }
};

// Annihilator of dw1 ^ dw2 sheared by the closed two-form: base
// antiholomorphic vectors, fiber vectors, and the dw covectors, each with
// covector shift i * omega * X.
inline GeneralizedStructure product_structure(const VectorXd& x) {
  const MatrixXcd omega =
      ProductGeometry::closed_form(x).cast<complexd>() * complexd(0, 1);
  MatrixXcd basis = MatrixXcd::Zero(16, 8);
  auto vector_column = [&](int col, const VectorXcd& xv) {
    basis.col(col).head(8) = xv;
    basis.col(col).tail(8) = omega * xv;
  };
  VectorXcd wbar1 = VectorXcd::Zero(8), wbar2 = VectorXcd::Zero(8);
  wbar1[0] = 1.0;
  wbar1[1] = complexd(0, 1);
  wbar2[2] = 1.0;
  wbar2[3] = complexd(0, 1);
  vector_column(0, wbar1);
  vector_column(1, wbar2);
  for (int a = 0; a < 4; ++a) {
    VectorXcd fiber = VectorXcd::Zero(8);
    fiber[4 + a] = 1.0;
    vector_column(2 + a, fiber);
  }
  basis(8 + 0, 6) = 1.0;
  basis(8 + 1, 6) = complexd(0, 1);
  basis(8 + 2, 7) = 1.0;
  basis(8 + 3, 7) = complexd(0, 1);

  MatrixXcd joint(16, 16);
  joint.leftCols(8) = basis;
  joint.rightCols(8) = basis.conjugate();
  VectorXcd eig(16);
  eig.head(8).setConstant(complexd(0, 1));
  eig.tail(8).setConstant(complexd(0, -1));
  MatrixXcd op = joint * eig.asDiagonal() * joint.inverse();
  return {op.real()};
}

inline MultiForm product_spinor(const VectorXd& x) {
  MultiForm top = MultiForm::zero(8);
  MultiForm dw1 = MultiForm::zero(8), dw2 = MultiForm::zero(8);
  dw1.coeff[1 << 0] = 1.0;
  dw1.coeff[1 << 1] = complexd(0, 1);
  dw2.coeff[1 << 2] = 1.0;
  dw2.coeff[1 << 3] = complexd(0, 1);
  top = wedge(dw1, dw2);
  return spinor_exp(MatrixXd::Zero(8, 8), ProductGeometry::closed_form(x), top);
}

}  // namespace detail

inline Builtin make_r2n_symplectic(int d) {
  if (d < 2 || d % 2 != 0)
    throw std::invalid_argument("r2n_symplectic needs even dimension >= 2");
  ChartModel m = detail::box_model("r2n_symplectic", d, 2.0);
  m.metadata = {{"d", std::to_string(d)}};
  const GeneralizedStructure s = from_symplectic(standard_symplectic_form(d));
  m.structure = [s](const ChartPoint&) { return s; };
  const MatrixXd j0 = standard_complex_structure(d);
  const Quadruple q{MatrixXd::Identity(d, d), MatrixXd::Zero(d, d), j0, -j0};
  m.quadruple = [q](const ChartPoint&) { return q; };

  MomentSystem sys;
  sys.chart = m;
  sys.m = 1;
  sys.mu = [](const ChartPoint&) { return VectorXd::Zero(1); };
  sys.mu_jacobian = [d](const ChartPoint&) { return MatrixXd::Zero(1, d); };
  sys.xi_basis = [d](const ChartPoint&) { return MatrixXd::Zero(d, 1); };
  sys.alpha_basis = [d](const ChartPoint&) { return MatrixXd::Zero(d, 1); };
  return {m, sys};
}

inline Builtin make_r2_rotation() {
  ChartModel m = detail::box_model("r2_rotation", 2, 2.0);
  const GeneralizedStructure s = from_symplectic(standard_symplectic_form(2));
  m.structure = [s](const ChartPoint&) { return s; };
  const MatrixXd j0 = standard_complex_structure(2);
  const Quadruple q{MatrixXd::Identity(2, 2), MatrixXd::Zero(2, 2), j0, -j0};
  m.quadruple = [q](const ChartPoint&) { return q; };

  MomentSystem sys;
  sys.chart = m;
  sys.m = 1;
  sys.mu = [](const ChartPoint& p) {
    VectorXd v(1);
    v[0] = 0.5 * p.x.squaredNorm();
    return v;
  };
  sys.mu_jacobian = [](const ChartPoint& p) {
    MatrixXd jac(1, 2);
    jac.row(0) = p.x.transpose();
    return jac;
  };
  sys.xi_basis = [](const ChartPoint& p) {
    MatrixXd b(2, 1);
    b(0, 0) = p.x[1];
    b(1, 0) = -p.x[0];
    return b;
  };
  sys.alpha_basis = [](const ChartPoint&) { return MatrixXd::Zero(2, 1); };
  return {m, sys};
}

inline Builtin make_c_counterexample() {
  ChartModel m = detail::box_model("c_counterexample", 2, 2.0);
  const MatrixXd j0 = standard_complex_structure(2);
  const GeneralizedStructure s = from_complex_structure(j0);
  m.structure = [s](const ChartPoint&) { return s; };
  const Quadruple q{MatrixXd::Identity(2, 2), MatrixXd::Zero(2, 2), j0, j0};
  m.quadruple = [q](const ChartPoint&) { return q; };

  MomentSystem sys;
  sys.chart = m;
  sys.m = 3;
  sys.mu = [](const ChartPoint& p) {
    VectorXd v(3);
    v << p.x[0], p.x[1], 2.0 * p.x[0] * p.x[1];
    return v;
  };
  sys.mu_jacobian = [](const ChartPoint& p) {
    MatrixXd jac(3, 2);
    jac << 1, 0, 0, 1, 2.0 * p.x[1], 2.0 * p.x[0];
    return jac;
  };
  sys.xi_basis = [](const ChartPoint&) { return MatrixXd::Zero(2, 3); };
  sys.alpha_basis = [](const ChartPoint& p) {
    MatrixXd a(2, 3);
    a << 0, 1, 2.0 * p.x[0], -1, 0, -2.0 * p.x[1];
    return a;
  };
  return {m, sys};
}

inline Builtin make_cp2_fs(const Eigen::Vector2d& w) {
  const Eigen::Vector2d wabs = w.cwiseAbs();
  if (wabs.minCoeff() < 1e-6)
    throw std::invalid_argument("cp2_fs requires nonzero weights");

  ChartModel m;
  m.name = "cp2_fs";
  m.metadata = {{"w1", std::to_string(w[0])}, {"w2", std::to_string(w[1])}};
  m.d = 4;
  m.charts = 3;
  m.compact = true;
  m.h_field = [](const ChartPoint&) { return ThreeForm::zero(4); };
  m.structure = [](const ChartPoint& p) {
    return from_symplectic(detail::fs_form(p.x));
  };
  const MatrixXd j0 = standard_complex_structure(4);
  m.quadruple = [j0](const ChartPoint& p) {
    return Quadruple{detail::fs_form(p.x) * j0, MatrixXd::Zero(4, 4), j0, -j0};
  };
  m.in_domain = [](const ChartPoint&) { return true; };
  m.sample = [](Rng& rng) {
    VectorXd raw = rng.normal_vector(6);
    Eigen::Vector3cd z;
    for (int j = 0; j < 3; ++j) z[j] = complexd(raw[2 * j], raw[2 * j + 1]);
    z /= z.norm();
    int chart = 0;
    for (int j = 1; j < 3; ++j)
      if (std::abs(z[j]) > std::abs(z[chart])) chart = j;
    return detail::cp2_chart_point(z, chart);
  };
  m.canonical = [](const ChartPoint& p) {
    const double reach = std::max(std::hypot(p.x[0], p.x[1]),
                                  std::hypot(p.x[2], p.x[3]));
    if (reach <= 1.05) return p;
    Eigen::Vector3cd z = detail::cp2_homogeneous(p);
    int chart = 0;
    for (int j = 1; j < 3; ++j)
      if (std::abs(z[j]) > std::abs(z[chart])) chart = j;
    return detail::cp2_chart_point(z, chart);
  };
  m.distance = [](const ChartPoint& a, const ChartPoint& b) {
    const complexd inner =
        detail::cp2_homogeneous(a).dot(detail::cp2_homogeneous(b));
    const double c2 = std::min(1.0, std::norm(inner));
    return std::sqrt(1.0 - c2);
  };
  m.seed_lo = VectorXd::Constant(4, -1.1);
  m.seed_hi = VectorXd::Constant(4, 1.1);

  MomentSystem sys;
  sys.chart = m;
  sys.m = 2;
  sys.mu = [wabs](const ChartPoint& p) { return detail::cp2_mu(p, wabs); };
  sys.mu_jacobian = [wabs](const ChartPoint& p) {
    return detail::cp2_mu_jacobian(p, wabs);
  };
  sys.xi_basis = [wabs](const ChartPoint& p) {
    return detail::cp2_xi_basis(p, wabs);
  };
  sys.alpha_basis = [](const ChartPoint&) { return MatrixXd::Zero(4, 2); };
  return {m, sys};
}

inline Builtin make_product_family(const Eigen::Vector2d& w) {
  const Eigen::Vector2d wabs = w.cwiseAbs();
  if (wabs.minCoeff() < 1e-6)
    throw std::invalid_argument("product_family requires nonzero weights");
  using PG = detail::ProductGeometry;

  ChartModel m;
  m.name = "product_family";
  m.metadata = {{"w1", std::to_string(w[0])}, {"w2", std::to_string(w[1])}};
  m.d = 8;
  m.charts = 1;
  m.compact = false;
  m.h_field = [](const ChartPoint&) { return ThreeForm::zero(8); };
  m.structure = [](const ChartPoint& p) {
    return detail::product_structure(p.x);
  };
  const Eigen::Vector2d half = 0.15 * wabs;
  m.in_domain = [wabs, half](const ChartPoint& p) {
    for (int j = 0; j < 2; ++j) {
      if (std::abs(p.x[2 * j] - wabs[j]) > 1.5 * half[j]) return false;
      if (std::abs(p.x[2 * j + 1]) > 1.5 * half[j]) return false;
      const double r = PG::fiber_radius(p.x, j);
      if (r < 0.9 * PG::kFiberInner || r > 1.1 * PG::kFiberOuter) return false;
    }
    return true;
  };
  m.sample = [wabs, half](Rng& rng) {
    VectorXd x(8);
    for (int j = 0; j < 2; ++j) {
      x[2 * j] = wabs[j] + rng.uniform(-half[j], half[j]);
      x[2 * j + 1] = rng.uniform(-half[j], half[j]);
    }
    for (int j = 0; j < 2; ++j) {
      double rx, ry, r;
      do {
        rx = rng.uniform(-PG::kFiberOuter, PG::kFiberOuter);
        ry = rng.uniform(-PG::kFiberOuter, PG::kFiberOuter);
        r = std::hypot(rx, ry);
      } while (r < PG::kFiberInner || r > PG::kFiberOuter);
      x[4 + 2 * j] = rx;
      x[5 + 2 * j] = ry;
    }
    return ChartPoint{0, x};
  };
  m.canonical = [](const ChartPoint& p) { return p; };
  m.distance = [](const ChartPoint& a, const ChartPoint& b) {
    return (a.x - b.x).norm();
  };
  m.seed_lo = VectorXd(8);
  m.seed_hi = VectorXd(8);
  for (int j = 0; j < 2; ++j) {
    m.seed_lo[2 * j] = wabs[j] - half[j];
    m.seed_hi[2 * j] = wabs[j] + half[j];
    m.seed_lo[2 * j + 1] = -half[j];
    m.seed_hi[2 * j + 1] = half[j];
    m.seed_lo[4 + 2 * j] = PG::kFiberInner;
    m.seed_hi[4 + 2 * j] = PG::kFiberOuter;
    m.seed_lo[5 + 2 * j] = PG::kFiberInner;
    m.seed_hi[5 + 2 * j] = PG::kFiberOuter;
  }

  MomentSystem sys;
  sys.chart = m;
  sys.m = 2;
  sys.base_coords = {0, 1, 2, 3};
  sys.mu = [](const ChartPoint& p) {
    VectorXd v(2);
    for (int j = 0; j < 2; ++j)
      v[j] = PG::base_abs(p.x, j) * PG::fs_mu(p.x, j);
    return v;
  };
  sys.mu_jacobian = [](const ChartPoint& p) {
    MatrixXd jac = MatrixXd::Zero(2, 8);
    for (int j = 0; j < 2; ++j) {
      jac.row(j) = PG::base_abs(p.x, j) * PG::fs_mu_grad(p.x, j).transpose() +
                   PG::fs_mu(p.x, j) * PG::dbase_abs(p.x, j).transpose();
    }
    return jac;
  };
  sys.xi_basis = [](const ChartPoint& p) {
    MatrixXd b = MatrixXd::Zero(8, 2);
    for (int j = 0; j < 2; ++j) {
      b(4 + 2 * j, j) = -p.x[5 + 2 * j];
      b(5 + 2 * j, j) = p.x[4 + 2 * j];
    }
    return b;
  };
  sys.alpha_basis = [](const ChartPoint&) { return MatrixXd::Zero(8, 2); };
  return {m, sys};
}

// Deliberately non-integrable almost complex field: the standard structure
// conjugated by a rotation in the (y1, x2) plane whose angle is x1. Test
// fixture only; not in the CLI catalog.
inline ChartModel make_rotating_complex_fixture() {
  ChartModel m = detail::box_model("rotating_complex_fixture", 4, 1.0);
  const MatrixXd j0 = standard_complex_structure(4);
  m.structure = [j0](const ChartPoint& p) {
    MatrixXd rot = MatrixXd::Identity(4, 4);
    const double c = std::cos(p.x[0]), s = std::sin(p.x[0]);
    rot(1, 1) = c;
    rot(1, 2) = -s;
    rot(2, 1) = s;
    rot(2, 2) = c;
    return from_complex_structure(rot * j0 * rot.transpose());
  };
  return m;
}

inline Builtin make_builtin(const std::string& name, const BuiltinParams& params) {
  if (name == "r2n_symplectic") return make_r2n_symplectic(params.dim);
  if (name == "r2_rotation") return make_r2_rotation();
  if (name == "cp2_fs") return make_cp2_fs(params.w);
  if (name == "c_counterexample") return make_c_counterexample();
  if (name == "product_family") return make_product_family(params.w);
  throw std::invalid_argument("unknown builtin: " + name);
}

}  // namespace gcx
