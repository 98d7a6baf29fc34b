// Chart models: pointwise structure fields over coordinate charts, the
// twisted Courant bracket, and a finite-difference integrability residual.
//
// A ChartModel owns pure evaluators (point -> structure, point -> 3-form,
// optionally point -> quadruple) plus sampling and chart bookkeeping. All
// evaluators are total on the chart domain and safe to call concurrently.

#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gcx/common.hpp"
#include "gcx/genlin.hpp"

namespace gcx {

struct ChartPoint {
  int chart = 0;
  VectorXd x;
};

// Fully antisymmetric 3-form, dense d^3 coefficient table.
struct ThreeForm {
  int d = 0;
  VectorXd c;  // c[(a*d+b)*d+k] = H(e_a, e_b, e_k)

  static ThreeForm zero(int d) { return {d, VectorXd::Zero(d * d * d)}; }

  double at(int a, int b, int k) const { return c[(a * d + b) * d + k]; }

  void set(int a, int b, int k, double v) {
    c[(a * d + b) * d + k] = v;
    c[(b * d + k) * d + a] = v;
    c[(k * d + a) * d + b] = v;
    c[(a * d + k) * d + b] = -v;
    c[(b * d + a) * d + k] = -v;
    c[(k * d + b) * d + a] = -v;
  }

  // (i_Y i_X H)_k = sum_{a,b} X_a Y_b H(a,b,k)
  VectorXcd contract(const VectorXcd& xv, const VectorXcd& yv) const {
    VectorXcd out = VectorXcd::Zero(d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        if (xv[a] == 0.0 || yv[b] == 0.0) continue;
        for (int k = 0; k < d; ++k)
          out[k] += xv[a] * yv[b] * at(a, b, k);
      }
    return out;
  }
};

inline double fd_default_step(const VectorXd& x) {
  return 1e-5 * (1.0 + x.norm());
}

template <typename Fn>
MatrixXd fd_jacobian(const Fn& f, const VectorXd& x, double h) {
  const int n = static_cast<int>(x.size());
  VectorXd f0 = f(x);
  MatrixXd jac(f0.size(), n);
  for (int a = 0; a < n; ++a) {
    VectorXd xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    jac.col(a) = (f(xp) - f(xm)) / (2 * h);
  }
  return jac;
}

template <typename Fn>
MatrixXcd fd_jacobian_c(const Fn& f, const VectorXd& x, double h) {
  const int n = static_cast<int>(x.size());
  VectorXcd f0 = f(x);
  MatrixXcd jac(f0.size(), n);
  for (int a = 0; a < n; ++a) {
    VectorXd xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    jac.col(a) = (f(xp) - f(xm)) / (2 * h);
  }
  return jac;
}

template <typename Fn>
VectorXd fd_gradient(const Fn& f, const VectorXd& x, double h) {
  const int n = static_cast<int>(x.size());
  VectorXd g(n);
  for (int a = 0; a < n; ++a) {
    VectorXd xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    g[a] = (f(xp) - f(xm)) / (2 * h);
  }
  return g;
}

template <typename Fn>
MatrixXd fd_hessian(const Fn& f, const VectorXd& x, double h) {
  const int n = static_cast<int>(x.size());
  MatrixXd hess(n, n);
  for (int a = 0; a < n; ++a) {
    VectorXd xp = x, xm = x;
    xp[a] += h;
    xm[a] -= h;
    hess(a, a) = (f(xp) - 2 * f(x) + f(xm)) / (h * h);
    for (int b = a + 1; b < n; ++b) {
      VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
      xpp[a] += h;
      xpp[b] += h;
      xpm[a] += h;
      xpm[b] -= h;
      xmp[a] -= h;
      xmp[b] += h;
      xmm[a] -= h;
      xmm[b] -= h;
      hess(a, b) = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4 * h * h);
      hess(b, a) = hess(a, b);
    }
  }
  return hess;
}

struct ChartModel {
  std::string name;
  std::vector<std::pair<std::string, std::string>> metadata;
  int d = 0;
  int charts = 1;
  bool compact = false;

  std::function<GeneralizedStructure(const ChartPoint&)> structure;
  std::function<ThreeForm(const ChartPoint&)> h_field;
  std::function<Quadruple(const ChartPoint&)> quadruple;  // may be empty

  std::function<bool(const ChartPoint&)> in_domain;
  std::function<ChartPoint(Rng&)> sample;
  // Re-expresses a point in its preferred chart (identity for box models).
  std::function<ChartPoint(const ChartPoint&)> canonical;
  std::function<double(const ChartPoint&, const ChartPoint&)> distance;

  VectorXd seed_lo, seed_hi;  // multistart seed box in chart coordinates

  bool has_quadruple() const { return static_cast<bool>(quadruple); }
};

// Section of (TM (+) T*M) (x) C over a fixed chart: 2d complex components,
// vector part first. The Jacobian falls back to central differences.
struct SectionField {
  std::function<VectorXcd(const VectorXd&)> value;
  std::function<MatrixXcd(const VectorXd&)> jacobian;  // optional analytic

  MatrixXcd jac(const VectorXd& x, double step) const {
    if (jacobian) return jacobian(x);
    return fd_jacobian_c(value, x, step);
  }
};

// Torus action data over a chart: generators xi_1..xi_m, moment map mu,
// moment one-forms alpha_1..alpha_m. All evaluators analytic.
struct MomentSystem {
  ChartModel chart;
  int m = 0;
  std::function<VectorXd(const ChartPoint&)> mu;           // R^m
  std::function<MatrixXd(const ChartPoint&)> mu_jacobian;  // m x d
  std::function<MatrixXd(const ChartPoint&)> xi_basis;     // d x m, col j = (xi_j)_M
  std::function<MatrixXd(const ChartPoint&)> alpha_basis;  // d x m, col j = alpha_j
  // Marks chart coordinates transverse to the acted fiber (empty = none).
  // The moment condition is reported separately along these directions.
  std::vector<int> base_coords;

  double mu_xi(const VectorXd& xi, const ChartPoint& p) const {
    return xi.dot(mu(p));
  }
  VectorXd dmu_xi(const VectorXd& xi, const ChartPoint& p) const {
    return mu_jacobian(p).transpose() * xi;
  }
  VectorXd xi_m(const VectorXd& xi, const ChartPoint& p) const {
    return xi_basis(p) * xi;
  }
  VectorXd alpha_xi(const VectorXd& xi, const ChartPoint& p) const {
    return alpha_basis(p) * xi;
  }
};

// [X+a, Y+b]_H at x: Lie bracket, Lie derivative terms, the exact-part
// correction, and the twist i_Y i_X H.
inline VectorXcd courant_bracket(const SectionField& s1, const SectionField& s2,
                                 const ThreeForm& twist, const VectorXd& x,
                                 double step = 0.0) {
  if (step <= 0.0) step = fd_default_step(x);
  const int d = twist.d;
  VectorXcd v1 = s1.value(x), v2 = s2.value(x);
  MatrixXcd j1 = s1.jac(x, step), j2 = s2.jac(x, step);
  VectorXcd xv = v1.head(d), yv = v2.head(d);
  VectorXcd av = v1.tail(d), bv = v2.tail(d);
  MatrixXcd jx = j1.topRows(d), ja = j1.bottomRows(d);
  MatrixXcd jy = j2.topRows(d), jb = j2.bottomRows(d);

  VectorXcd out(2 * d);
  out.head(d) = jy * xv - jx * yv;
  out.tail(d) = jb * xv - 0.5 * jb.transpose() * xv + 0.5 * jx.transpose() * bv -
                ja * yv + 0.5 * ja.transpose() * yv - 0.5 * jy.transpose() * av +
                twist.contract(xv, yv);
  return out;
}

// Max |eta([l_i, l_j]_H, l_k)| over a smooth local frame l_1..l_d of the
// +i eigenbundle. The frame is the center eigenbasis pushed through the
// smooth eigenprojector P(x) = (I - i S(x))/2, so no pivot jumps occur
// within the stencil. Maximal isotropy of L makes eta-pairing against the
// frame a membership test for the bracket.
inline double integrability_residual(const ChartModel& chart, const ChartPoint& p,
                                     double step = 0.0) {
  const int d = chart.d;
  if (step <= 0.0) step = fd_default_step(p.x);

  const MatrixXcd center_basis = i_eigenspace(chart.structure(p)).basis;
  auto frame = [&](const VectorXd& x) -> MatrixXcd {
    MatrixXd s = chart.structure({p.chart, x}).mat;
    return 0.5 * (MatrixXcd::Identity(2 * d, 2 * d) -
                  complexd(0, 1) * s.cast<complexd>()) *
           center_basis;
  };

  const MatrixXcd f0 = frame(p.x);
  std::vector<MatrixXcd> df(d);
  for (int a = 0; a < d; ++a) {
    VectorXd xp = p.x, xm = p.x;
    xp[a] += step;
    xm[a] -= step;
    df[a] = (frame(xp) - frame(xm)) / (2 * step);
  }

  const ThreeForm twist = chart.h_field(p);
  const MatrixXd eta = eta_pairing(d);
  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      auto column_field = [&](int col) {
        return SectionField{
            [&, col](const VectorXd&) { return VectorXcd(f0.col(col)); },
            [&, col](const VectorXd&) {
              MatrixXcd jc(2 * d, d);
              for (int a = 0; a < d; ++a) jc.col(a) = df[a].col(col);
              return jc;
            }};
      };
      SectionField si = column_field(i);
      SectionField sj = column_field(j);
      VectorXcd br = courant_bracket(si, sj, twist, p.x, step);
      for (int k = 0; k < d; ++k) {
        complexd pair = br.transpose() * eta.cast<complexd>() * f0.col(k);
        worst = std::max(worst, std::abs(pair));
      }
    }
  }
  return worst;
}

// Max |dH| component by central differences; closedness diagnostic.
inline double closedness_residual(const ChartModel& chart, const ChartPoint& p,
                                  double step = 0.0) {
  const int d = chart.d;
  if (step <= 0.0) step = fd_default_step(p.x);
  std::vector<ThreeForm> hp(d), hm(d);
  for (int a = 0; a < d; ++a) {
    ChartPoint pp = p, pm = p;
    pp.x[a] += step;
    pm.x[a] -= step;
    hp[a] = chart.h_field(pp);
    hm[a] = chart.h_field(pm);
  }
  auto grad = [&](int a, int b, int k, int l) {
    return (hp[a].at(b, k, l) - hm[a].at(b, k, l)) / (2 * step);
  };
  double worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      for (int k = b + 1; k < d; ++k)
        for (int l = k + 1; l < d; ++l) {
          double v = grad(a, b, k, l) - grad(b, a, k, l) + grad(k, a, b, l) -
                     grad(l, a, b, k);
          worst = std::max(worst, std::abs(v));
        }
  return worst;
}

}  // namespace gcx
