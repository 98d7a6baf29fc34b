// Torus-action verification over chart models: the two defining conditions
// of a generalized moment map, fixed/critical set search, weak
// nondegeneracy, Hessian classification, and the structural identities
// tying the action to the metric quadruple.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "gcx/geom.hpp"

namespace gcx {

struct HamiltonianResidual {
  double condition1 = 0.0;        // ||S v - i v||, v = xi_M + alpha^xi - i dmu^xi
  double condition1_fiber = 0.0;  // same with base-direction gradient removed
  double base_gradient = 0.0;     // size of the removed base-direction part
  double condition2 = 0.0;        // ||i_{xi_M} H - d alpha^xi||
  double mu_invariance = 0.0;     // |dmu^xi(xi_M)|
  double alpha_isotropy = 0.0;    // |alpha^xi(xi_M)|

  double worst() const {
    return std::max({condition1, condition2, mu_invariance, alpha_isotropy});
  }
};

inline HamiltonianResidual hamiltonian_residual(const MomentSystem& sys,
                                                const VectorXd& xi,
                                                const ChartPoint& p,
                                                double step = 0.0) {
  const int d = sys.chart.d;
  if (step <= 0.0) step = fd_default_step(p.x);
  const complexd unit_i(0, 1);

  const VectorXd xi_m = sys.xi_m(xi, p);
  const VectorXd dmu = sys.dmu_xi(xi, p);
  const VectorXd alpha = sys.alpha_xi(xi, p);
  const MatrixXcd op = sys.chart.structure(p).mat.cast<complexd>();

  HamiltonianResidual out;
  auto condition1_of = [&](const VectorXd& grad) {
    VectorXcd v(2 * d);
    v.head(d) = xi_m.cast<complexd>();
    v.tail(d) = (alpha.cast<complexd>() - unit_i * grad.cast<complexd>());
    return (op * v - unit_i * v).cwiseAbs().maxCoeff();
  };
  out.condition1 = condition1_of(dmu);
  VectorXd fiber_grad = dmu;
  for (int a : sys.base_coords) {
    out.base_gradient = std::max(out.base_gradient, std::abs(fiber_grad[a]));
    fiber_grad[a] = 0.0;
  }
  out.condition1_fiber =
      sys.base_coords.empty() ? out.condition1 : condition1_of(fiber_grad);

  const ThreeForm twist = sys.chart.h_field(p);
  MatrixXd alpha_jac = fd_jacobian(
      [&](const VectorXd& x) {
        return VectorXd(sys.alpha_xi(xi, {p.chart, x}));
      },
      p.x, step);
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b) {
      double contraction = 0.0;
      for (int c = 0; c < d; ++c) contraction += xi_m[c] * twist.at(c, a, b);
      const double exterior = alpha_jac(b, a) - alpha_jac(a, b);
      out.condition2 = std::max(out.condition2, std::abs(contraction - exterior));
    }

  out.mu_invariance = std::abs(dmu.dot(xi_m));
  out.alpha_isotropy = std::abs(alpha.dot(xi_m));
  return out;
}

// ---- zero-set search --------------------------------------------------

struct ZeroSearchOptions {
  int n_starts = 200;
  int max_iterations = 60;
  double converge_tol = 1e-8;
  double cluster_radius = 1e-4;
  double link_radius_cap = 0.3;
  double value_tol = 1e-8;
  uint64_t seed = 0;
  std::string label = "zero-search";
};

struct CriticalComponent {
  std::vector<ChartPoint> members;  // deduplicated converged points
  ChartPoint representative;
  double field_norm = 0.0;    // |field| at the representative
  double value = 0.0;         // mean of the value function over members
  double value_spread = 0.0;  // max deviation from the mean
  int tangent_dim = 0;        // local PCA estimate around the representative
  int index = -1, coindex = -1, nullity = -1;  // filled by hessian_report
  bool hessian_agrees = false;                 // nullity == tangent_dim
};

namespace detail {

// Local PCA: members in a patch around the representative, singular values
// compared against a threshold proportional to the patch reach so that
// curvature of the component does not register as an extra dimension. The
// patch is the density ball widened, when members are sparse, to the dozen
// nearest members; a patch with fewer points cannot expose the dimension.
inline int local_tangent_dimension(const std::vector<ChartPoint>& members,
                                   const ChartPoint& rep,
                                   double sigma_factor = 0.2) {
  std::vector<double> dists;
  for (const ChartPoint& q : members) {
    if (q.chart != rep.chart) continue;
    const double dist = (q.x - rep.x).norm();
    if (dist > 0.0) dists.push_back(dist);
  }
  if (dists.empty()) return 0;
  std::sort(dists.begin(), dists.end());
  double ball_radius = std::clamp(4.0 * dists.front(), 0.2, 1.0);
  const size_t want = std::min<size_t>(dists.size(), 12);
  ball_radius = std::max(ball_radius, dists[want - 1]);
  std::vector<VectorXd> local;
  double reach = 0.0;
  for (const ChartPoint& q : members) {
    if (q.chart != rep.chart) continue;
    const double dist = (q.x - rep.x).norm();
    if (dist > ball_radius) continue;
    local.push_back(q.x);
    reach = std::max(reach, dist);
  }
  if (local.size() < 2 || reach <= 0.0) return 0;
  VectorXd mean = VectorXd::Zero(rep.x.size());
  for (const VectorXd& x : local) mean += x;
  mean /= static_cast<double>(local.size());
  MatrixXd centered(local.size(), rep.x.size());
  for (size_t r = 0; r < local.size(); ++r)
    centered.row(r) = (local[r] - mean).transpose();
  centered /= std::sqrt(static_cast<double>(local.size()));
  Eigen::JacobiSVD<MatrixXd> svd(centered);
  int dim = 0;
  for (int k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()[k] > sigma_factor * reach) ++dim;
  return dim;
}

struct ConvergedPoint {
  ChartPoint p;
  double field_norm;
};

}  // namespace detail

// Multistart damped least-squares descent on |field|^2, deduplication by
// cluster radius, then linking of clusters into components. When a value
// function is supplied, clusters are linked only across matching values and
// the link radius is halved until every component has small value spread.
inline std::vector<CriticalComponent> find_zero_set(
    const ChartModel& chart,
    const std::function<VectorXd(const ChartPoint&)>& field,
    const std::function<double(const ChartPoint&)>& value,
    const ZeroSearchOptions& opts) {
  const int d = chart.d;
  std::vector<detail::ConvergedPoint> hits(opts.n_starts,
                                           {{0, VectorXd()}, -1.0});

  parallel_for(opts.n_starts, [&](int start) {
    Rng rng(derive_seed(opts.seed, opts.label, static_cast<uint64_t>(start)));
    ChartPoint p = chart.sample(rng);
    double lambda = 1e-3;
    VectorXd f = field(p);
    // Polish well past the acceptance tolerance; near a zero the damped
    // iteration converges quadratically and the extra digits keep the value
    // function essentially exact on each component.
    const double polish_tol = std::min(opts.converge_tol, 1e-12);
    for (int iter = 0; iter < opts.max_iterations && f.norm() > polish_tol;
         ++iter) {
      const double step = fd_default_step(p.x);
      MatrixXd jac = fd_jacobian(
          [&](const VectorXd& x) { return VectorXd(field({p.chart, x})); }, p.x,
          step);
      const MatrixXd gram = jac.transpose() * jac;
      const VectorXd grad = jac.transpose() * f;
      bool moved = false;
      for (int damp = 0; damp < 24; ++damp) {
        VectorXd delta =
            (gram + lambda * MatrixXd::Identity(d, d)).ldlt().solve(-grad);
        ChartPoint trial{p.chart, p.x + delta};
        VectorXd ft = field(trial);
        if (ft.norm() < f.norm()) {
          p = chart.canonical(trial);
          f = field(p);
          lambda = std::max(lambda / 3.0, 1e-12);
          moved = true;
          break;
        }
        lambda *= 4.0;
      }
      if (!moved) break;
    }
    if (f.norm() <= opts.converge_tol) hits[start] = {p, f.norm()};
  });

  // Deduplicate in seed order for determinism.
  std::vector<detail::ConvergedPoint> reps;
  for (const auto& hit : hits) {
    if (hit.field_norm < 0) continue;
    bool merged = false;
    for (auto& rep : reps) {
      if (chart.distance(rep.p, hit.p) < opts.cluster_radius) {
        if (hit.field_norm < rep.field_norm) rep = hit;
        merged = true;
        break;
      }
    }
    if (!merged) reps.push_back(hit);
  }
  if (reps.empty()) return {};

  std::vector<double> values(reps.size(), 0.0);
  if (value)
    for (size_t i = 0; i < reps.size(); ++i) values[i] = value(reps[i].p);

  // Link radius: starts at the cap, which sits between the largest
  // along-component sampling gap and the smallest separation of distinct
  // components at desk scale. The value guard and the spread-driven
  // halving below refine it when components would merge wrongly.
  double link_radius =
      std::max(opts.link_radius_cap, 2.0 * opts.cluster_radius);

  auto build = [&](double radius) {
    std::vector<int> parent(reps.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find_root = [&](int a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    for (size_t i = 0; i < reps.size(); ++i)
      for (size_t j = i + 1; j < reps.size(); ++j) {
        if (chart.distance(reps[i].p, reps[j].p) > radius) continue;
        if (value && std::abs(values[i] - values[j]) > 100 * opts.value_tol)
          continue;
        parent[find_root(static_cast<int>(i))] = find_root(static_cast<int>(j));
      }
    std::vector<CriticalComponent> comps;
    std::vector<int> root_slot(reps.size(), -1);
    for (size_t i = 0; i < reps.size(); ++i) {
      int root = find_root(static_cast<int>(i));
      if (root_slot[root] < 0) {
        root_slot[root] = static_cast<int>(comps.size());
        comps.emplace_back();
      }
      CriticalComponent& comp = comps[root_slot[root]];
      comp.members.push_back(reps[i].p);
      if (comp.members.size() == 1 || reps[i].field_norm < comp.field_norm) {
        comp.representative = reps[i].p;
        comp.field_norm = reps[i].field_norm;
      }
    }
    return comps;
  };

  auto annotate = [&](std::vector<CriticalComponent>& list) {
    double worst = 0.0;
    for (CriticalComponent& comp : list) {
      double mean = 0.0;
      std::vector<double> vals;
      for (const ChartPoint& q : comp.members) vals.push_back(value(q));
      for (double v : vals) mean += v;
      mean /= static_cast<double>(vals.size());
      comp.value = mean;
      comp.value_spread = 0.0;
      for (double v : vals)
        comp.value_spread = std::max(comp.value_spread, std::abs(v - mean));
      worst = std::max(worst, comp.value_spread);
    }
    return worst;
  };

  std::vector<CriticalComponent> comps = build(link_radius);
  if (value) {
    // Halve the link radius while that actually reduces the worst value
    // spread; stopping on no improvement avoids shattering components whose
    // residual spread is convergence noise rather than wrong merging.
    double worst = annotate(comps);
    for (int attempt = 0;
         attempt < 24 && worst > opts.value_tol && link_radius >= opts.cluster_radius;
         ++attempt) {
      link_radius /= 2.0;
      std::vector<CriticalComponent> trial = build(link_radius);
      const double trial_worst = annotate(trial);
      if (trial_worst >= 0.999 * worst) break;
      comps = std::move(trial);
      worst = trial_worst;
    }
  }
  for (CriticalComponent& comp : comps) {
    comp.representative = chart.canonical(comp.representative);
    comp.tangent_dim =
        detail::local_tangent_dimension(comp.members, comp.representative);
    if (value && comp.members.size() == 1) comp.value = value(comp.members[0]);
  }
  // Deterministic order: by value, then by first coordinate.
  std::sort(comps.begin(), comps.end(),
            [](const CriticalComponent& a, const CriticalComponent& b) {
              if (std::abs(a.value - b.value) > 1e-12) return a.value < b.value;
              return a.representative.x[0] < b.representative.x[0];
            });
  return comps;
}

// ---- weak nondegeneracy ----------------------------------------------

struct ZeroSetDescription {
  bool whole_chart = false;
  std::vector<CriticalComponent> components;
  bool empty() const { return !whole_chart && components.empty(); }
};

inline ZeroSetDescription classify_zero_set(
    const ChartModel& chart,
    const std::function<VectorXd(const ChartPoint&)>& field,
    const std::function<double(const ChartPoint&)>& value,
    const ZeroSearchOptions& opts) {
  Rng rng(derive_seed(opts.seed, opts.label + "/membership"));
  const int probes = 200;
  std::vector<ChartPoint> zeros;
  for (int i = 0; i < probes; ++i) {
    ChartPoint p = chart.sample(rng);
    if (field(p).norm() < 1e-10) zeros.push_back(p);
  }
  ZeroSetDescription out;
  if (static_cast<int>(zeros.size()) >= probes - 1) {
    out.whole_chart = true;
    CriticalComponent comp;
    comp.members = std::move(zeros);
    comp.representative = chart.canonical(comp.members.front());
    comp.tangent_dim =
        detail::local_tangent_dimension(comp.members, comp.representative);
    if (value) {
      double mean = 0.0;
      for (const ChartPoint& q : comp.members) mean += value(q);
      mean /= static_cast<double>(comp.members.size());
      comp.value = mean;
      for (const ChartPoint& q : comp.members)
        comp.value_spread =
            std::max(comp.value_spread, std::abs(value(q) - mean));
    }
    out.components.push_back(std::move(comp));
    return out;
  }
  out.components = find_zero_set(chart, field, value, opts);
  return out;
}

struct WeakNondegeneracyReport {
  ZeroSetDescription critical;  // zeros of dmu^xi
  ZeroSetDescription fixed;     // zeros of xi_M
  double hausdorff = std::numeric_limits<double>::quiet_NaN();
  bool equal = false;
  bool rank_fact_holds = false;  // rank dmu == rank of generator map, sampled
  int rank_points = 0;
};

namespace detail {

inline int numeric_rank(const MatrixXd& m) {
  Eigen::JacobiSVD<MatrixXd> svd(m);
  if (svd.singularValues().size() == 0) return 0;
  const double top = svd.singularValues()[0];
  if (top <= 0.0) return 0;
  int rank = 0;
  for (int k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()[k] > kRankCut * top) ++rank;
  return rank;
}

inline double member_hausdorff(const ChartModel& chart,
                               const std::vector<CriticalComponent>& a,
                               const std::vector<CriticalComponent>& b) {
  auto one_sided = [&](const std::vector<CriticalComponent>& from,
                       const std::vector<CriticalComponent>& to) {
    double worst = 0.0;
    for (const CriticalComponent& ca : from)
      for (const ChartPoint& p : ca.members) {
        double best = std::numeric_limits<double>::infinity();
        for (const CriticalComponent& cb : to)
          for (const ChartPoint& q : cb.members)
            best = std::min(best, chart.distance(p, q));
        worst = std::max(worst, best);
      }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace detail

inline WeakNondegeneracyReport weak_nondegeneracy_report(const MomentSystem& sys,
                                                         const VectorXd& xi,
                                                         uint64_t seed = 0) {
  WeakNondegeneracyReport out;
  ZeroSearchOptions crit_opts;
  crit_opts.seed = seed;
  crit_opts.label = "weak-nondeg/critical";
  auto value = [&](const ChartPoint& p) { return sys.mu_xi(xi, p); };
  out.critical = classify_zero_set(
      sys.chart, [&](const ChartPoint& p) { return sys.dmu_xi(xi, p); }, value,
      crit_opts);

  ZeroSearchOptions fix_opts;
  fix_opts.seed = seed;
  fix_opts.label = "weak-nondeg/fixed";
  out.fixed = classify_zero_set(
      sys.chart, [&](const ChartPoint& p) { return sys.xi_m(xi, p); }, value,
      fix_opts);

  if (out.critical.whole_chart || out.fixed.whole_chart) {
    out.equal = out.critical.whole_chart && out.fixed.whole_chart;
  } else if (out.critical.empty() || out.fixed.empty()) {
    out.equal = out.critical.empty() && out.fixed.empty();
  } else {
    out.hausdorff = detail::member_hausdorff(sys.chart, out.critical.components,
                                             out.fixed.components);
    out.equal = out.hausdorff < 1e-6;
  }

  Rng rng(derive_seed(seed, "weak-nondeg/rank"));
  out.rank_points = 20;
  out.rank_fact_holds = true;
  for (int i = 0; i < out.rank_points; ++i) {
    ChartPoint p = sys.chart.sample(rng);
    if (detail::numeric_rank(sys.mu_jacobian(p)) !=
        detail::numeric_rank(sys.xi_basis(p)))
      out.rank_fact_holds = false;
  }
  return out;
}

// ---- Hessian classification -------------------------------------------

// Chart Hessian of mu^xi at a critical representative (there it agrees with
// the covariant Hessian), eigenvalue signature, and the tangent-dimension
// cross check.
inline CriticalComponent hessian_report(const MomentSystem& sys,
                                        const VectorXd& xi,
                                        CriticalComponent component,
                                        double step = 0.0) {
  const ChartPoint p = component.representative;
  if (step <= 0.0) step = fd_default_step(p.x);
  MatrixXd hess = fd_jacobian(
      [&](const VectorXd& x) { return VectorXd(sys.dmu_xi(xi, {p.chart, x})); },
      p.x, step);
  hess = 0.5 * (hess + hess.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(hess);
  const VectorXd ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  const double cut = 1e-6 * std::max(top, 1e-30);
  component.index = component.coindex = 0;
  for (int k = 0; k < ev.size(); ++k) {
    if (ev[k] < -cut) ++component.index;
    if (ev[k] > cut) ++component.coindex;
  }
  component.nullity = sys.chart.d - component.index - component.coindex;
  component.hessian_agrees = (component.nullity == component.tangent_dim);
  component.value = sys.mu_xi(xi, p);
  return component;
}

// Nonzero eigenvalues must pair up: cluster by value at 1e-6 relative and
// require even cluster sizes. Returns the largest odd cluster size found
// (0 when all clusters are even).
inline int hessian_pairing_defect(const MomentSystem& sys, const VectorXd& xi,
                                  const ChartPoint& p, double step = 0.0) {
  if (step <= 0.0) step = fd_default_step(p.x);
  MatrixXd hess = fd_jacobian(
      [&](const VectorXd& x) { return VectorXd(sys.dmu_xi(xi, {p.chart, x})); },
      p.x, step);
  hess = 0.5 * (hess + hess.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(hess);
  std::vector<double> ev(es.eigenvalues().data(),
                         es.eigenvalues().data() + es.eigenvalues().size());
  const double top =
      std::max(std::abs(ev.front()), std::abs(ev.back()));
  if (top <= 0.0) return 0;
  std::sort(ev.begin(), ev.end());
  int defect = 0;
  size_t i = 0;
  while (i < ev.size()) {
    if (std::abs(ev[i]) <= 1e-6 * top) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j + 1 < ev.size() && std::abs(ev[j + 1] - ev[i]) <= 1e-6 * top) ++j;
    const int size = static_cast<int>(j - i + 1);
    if (size % 2 == 1) defect = std::max(defect, size);
    i = j + 1;
  }
  return defect;
}

// ---- restricted (level-slice) Bott-Morse data --------------------------

struct RestrictedComponent {
  ChartPoint representative;  // chart coordinates (without multipliers)
  VectorXd multipliers;       // Lagrange multipliers of the slice condition
  double value = 0.0;         // mu_m at the component
  double value_spread = 0.0;
  int tangent_dim = 0;  // dimension inside the extended search space
  int index = -1, coindex = -1, nullity = -1;
};

// Critical components of mu_m restricted to the slice mu_1..mu_{m-1} = a,
// via the square system [dmu_m + sum_i c_i dmu_i ; mu_i - a_i] over
// (point, multipliers). The Hessian of the combination is restricted to the
// tangent space of the slice.
inline std::vector<RestrictedComponent> restricted_hessian_report(
    const MomentSystem& sys, const VectorXd& level, uint64_t seed = 0,
    double multiplier_box = 4.0) {
  const int d = sys.chart.d;
  const int m = sys.m;
  const int k = m - 1;
  if (static_cast<int>(level.size()) != k)
    throw std::invalid_argument("level must fix all but the last component");

  ChartModel ext;
  ext.name = sys.chart.name + "/slice";
  ext.d = d + k;
  ext.charts = sys.chart.charts;
  ext.sample = [&, k](Rng& rng) {
    ChartPoint base = sys.chart.sample(rng);
    VectorXd x(d + k);
    x.head(d) = base.x;
    for (int i = 0; i < k; ++i)
      x[d + i] = rng.uniform(-multiplier_box, multiplier_box);
    return ChartPoint{base.chart, x};
  };
  ext.canonical = [&, d, k](const ChartPoint& p) {
    ChartPoint base = sys.chart.canonical({p.chart, p.x.head(d)});
    VectorXd x(d + k);
    x.head(d) = base.x;
    x.tail(k) = p.x.tail(k);
    return ChartPoint{base.chart, x};
  };
  ext.distance = [&, d, k](const ChartPoint& a, const ChartPoint& b) {
    const double base = sys.chart.distance({a.chart, a.x.head(d)},
                                           {b.chart, b.x.head(d)});
    return std::hypot(base, (a.x.tail(k) - b.x.tail(k)).norm());
  };
  ext.in_domain = [&, d](const ChartPoint& p) {
    return sys.chart.in_domain({p.chart, p.x.head(d)});
  };

  auto field = [&, d, k](const ChartPoint& p) {
    const ChartPoint base{p.chart, p.x.head(d)};
    const MatrixXd jac = sys.mu_jacobian(base);
    VectorXd xi_eff = VectorXd::Zero(m);
    xi_eff[m - 1] = 1.0;
    xi_eff.head(k) = p.x.tail(k);
    VectorXd f(d + k);
    f.head(d) = jac.transpose() * xi_eff;
    f.tail(k) = sys.mu(base).head(k) - level;
    return f;
  };
  auto value = [&, d](const ChartPoint& p) {
    return sys.mu({p.chart, p.x.head(d)})[m - 1];
  };

  ZeroSearchOptions opts;
  opts.seed = seed;
  opts.label = "restricted-hessian";
  std::vector<CriticalComponent> comps = find_zero_set(ext, field, value, opts);

  std::vector<RestrictedComponent> out;
  for (const CriticalComponent& comp : comps) {
    RestrictedComponent r;
    const ChartPoint rep = comp.representative;
    const ChartPoint base{rep.chart, rep.x.head(d)};
    r.representative = base;
    r.multipliers = rep.x.tail(k);
    r.value = comp.value;
    r.value_spread = comp.value_spread;
    r.tangent_dim = comp.tangent_dim;

    VectorXd xi_eff = VectorXd::Zero(m);
    xi_eff[m - 1] = 1.0;
    xi_eff.head(k) = r.multipliers;
    const double step = fd_default_step(base.x);
    MatrixXd hess = fd_jacobian(
        [&](const VectorXd& x) {
          return VectorXd(sys.dmu_xi(xi_eff, {base.chart, x}));
        },
        base.x, step);
    hess = 0.5 * (hess + hess.transpose()).eval();

    const MatrixXd constraints = sys.mu_jacobian(base).topRows(k);
    Eigen::JacobiSVD<MatrixXd> svd(constraints, Eigen::ComputeFullV);
    int rank = 0;
    for (int s = 0; s < svd.singularValues().size(); ++s)
      if (svd.singularValues()[s] > kRankCut * svd.singularValues()[0]) ++rank;
    const MatrixXd tangent = svd.matrixV().rightCols(d - rank);
    const MatrixXd restricted = tangent.transpose() * hess * tangent;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(restricted);
    const VectorXd ev = es.eigenvalues();
    const double top = ev.cwiseAbs().maxCoeff();
    const double cut = 1e-6 * std::max(top, 1e-30);
    r.index = r.coindex = 0;
    for (int s = 0; s < ev.size(); ++s) {
      if (ev[s] < -cut) ++r.index;
      if (ev[s] > cut) ++r.coindex;
    }
    r.nullity = static_cast<int>(ev.size()) - r.index - r.coindex;
    out.push_back(std::move(r));
  }
  return out;
}

// ---- structural identities ---------------------------------------------

struct StructuralResiduals {
  double eq_decomposition = 0.0;  // xi_M vs (omega_+^{-1} - omega_-^{-1}) dmu
  double lie_hessian = 0.0;       // linearized action vs (J_+ - J_-) Hessian
  double commutation = 0.0;       // [Hessian, J_+ - J_-]
};

// step == 0 uses the analytic moment gradient; step > 0 recomputes the
// gradient by central differences at that step (for refinement studies).
inline StructuralResiduals structural_identity_residuals(const MomentSystem& sys,
                                                         const VectorXd& xi,
                                                         const ChartPoint& p,
                                                         double step = 0.0) {
  if (!sys.chart.has_quadruple())
    throw std::invalid_argument("chart model carries no quadruple");
  const Quadruple q = sys.chart.quadruple(p);
  const int d = sys.chart.d;
  const double h = step > 0.0 ? step : fd_default_step(p.x);

  VectorXd dmu;
  if (step > 0.0) {
    dmu = fd_gradient(
        [&](const VectorXd& x) { return sys.mu_xi(xi, {p.chart, x}); }, p.x, h);
  } else {
    dmu = sys.dmu_xi(xi, p);
  }

  const MatrixXd wplus = q.g * q.jplus;
  const MatrixXd wminus = q.g * q.jminus;
  const VectorXd recon =
      0.5 * (wplus.inverse() - wminus.inverse()) * dmu;
  StructuralResiduals out;
  out.eq_decomposition = (sys.xi_m(xi, p) - recon).cwiseAbs().maxCoeff();

  MatrixXd hess = fd_jacobian(
      [&](const VectorXd& x) { return VectorXd(sys.dmu_xi(xi, {p.chart, x})); },
      p.x, h);
  hess = 0.5 * (hess + hess.transpose()).eval();
  MatrixXd action_lin = -fd_jacobian(
      [&](const VectorXd& x) { return VectorXd(sys.xi_m(xi, {p.chart, x})); },
      p.x, h);
  const MatrixXd jdiff = q.jplus - q.jminus;
  out.lie_hessian =
      (action_lin - 0.5 * jdiff * hess).cwiseAbs().maxCoeff();
  out.commutation = (hess * jdiff - jdiff * hess).cwiseAbs().maxCoeff();
  (void)d;
  return out;
}

}  // namespace gcx
