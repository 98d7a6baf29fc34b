#pragma once

// Mixed-degree complex forms on the 2^d subset basis, the Clifford action of
// V + V*, annihilators and purity, and the correspondence between structures
// and their canonical spinor lines.
//
// Basis index convention: bit j of a mask means the covector e^{j+1} is
// present; coefficients are stored at coeff[mask], monomials in increasing
// index order.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "gcx/genlin.hpp"

namespace gcx {

struct MultiForm {
  int d = 0;
  VectorXcd coeff;  // size 1 << d

  static MultiForm zero(int d) {
    return {d, VectorXcd::Zero(int64_t(1) << d)};
  }
  static MultiForm scalar(int d, complexd c) {
    MultiForm f = zero(d);
    f.coeff[0] = c;
    return f;
  }
  double max_abs() const { return coeff.cwiseAbs().maxCoeff(); }
};

inline int parity_below(uint32_t mask, int j) {
  return std::popcount(mask & ((1u << j) - 1u)) & 1 ? -1 : 1;
}

// e^{j+1} ^ phi.
inline MultiForm wedge_covector(int j, const MultiForm& phi) {
  MultiForm out = MultiForm::zero(phi.d);
  const uint32_t bit = 1u << j;
  for (uint32_t m = 0; m < phi.coeff.size(); ++m) {
    if (phi.coeff[m] == complexd(0, 0) || (m & bit)) continue;
    out.coeff[m | bit] += double(parity_below(m, j)) * phi.coeff[m];
  }
  return out;
}

// i_{e_{j+1}} phi.
inline MultiForm interior_vector(int j, const MultiForm& phi) {
  MultiForm out = MultiForm::zero(phi.d);
  const uint32_t bit = 1u << j;
  for (uint32_t m = 0; m < phi.coeff.size(); ++m) {
    if (phi.coeff[m] == complexd(0, 0) || !(m & bit)) continue;
    out.coeff[m & ~bit] += double(parity_below(m, j)) * phi.coeff[m];
  }
  return out;
}

// (X + alpha) . phi = i_X phi + alpha ^ phi for v = (X, alpha) in C^{2d}.
inline MultiForm clifford_act(const VectorXcd& v, const MultiForm& phi) {
  const int d = phi.d;
  if (v.size() != 2 * d)
    throw std::invalid_argument("clifford_act: element has " +
                                std::to_string(v.size()) +
                                " components, expected " +
                                std::to_string(2 * d));
  MultiForm out = MultiForm::zero(d);
  for (int j = 0; j < d; ++j) {
    if (v[j] != complexd(0, 0)) {
      MultiForm t = interior_vector(j, phi);
      out.coeff += v[j] * t.coeff;
    }
    if (v[d + j] != complexd(0, 0)) {
      MultiForm t = wedge_covector(j, phi);
      out.coeff += v[d + j] * t.coeff;
    }
  }
  return out;
}

inline MultiForm wedge(const MultiForm& a, const MultiForm& b) {
  MultiForm out = MultiForm::zero(a.d);
  for (uint32_t ma = 0; ma < a.coeff.size(); ++ma) {
    if (a.coeff[ma] == complexd(0, 0)) continue;
    for (uint32_t mb = 0; mb < b.coeff.size(); ++mb) {
      if (b.coeff[mb] == complexd(0, 0) || (ma & mb)) continue;
      // Sign of sorting the concatenation: count pairs (i in a, j in b), i > j.
      int inversions = 0;
      uint32_t rest = ma;
      while (rest) {
        int i = std::countr_zero(rest);
        rest &= rest - 1;
        inversions += std::popcount(mb & ((1u << i) - 1u));
      }
      double sign = (inversions & 1) ? -1.0 : 1.0;
      out.coeff[ma | mb] += sign * a.coeff[ma] * b.coeff[mb];
    }
  }
  return out;
}

inline MultiForm conjugate(const MultiForm& f) { return {f.d, f.coeff.conjugate()}; }

// Coefficient matrix t_ab (a < b entries used) -> the 2-form sum.
inline MultiForm two_form(const Eigen::MatrixXcd& t) {
  const int d = static_cast<int>(t.rows());
  MultiForm f = MultiForm::zero(d);
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      f.coeff[(1u << a) | (1u << b)] = t(a, b);
  return f;
}

// e^{B + i omega} ^ Omega (finite sum). B, omega are real coefficient
// matrices of 2-forms.
inline MultiForm spinor_exp(const MatrixXd& B, const MatrixXd& omega,
                            const MultiForm& Omega) {
  const int d = Omega.d;
  MultiForm t = two_form(B.cast<complexd>() + complexd(0, 1) * omega.cast<complexd>());
  MultiForm result = Omega;
  MultiForm power = Omega;
  double factorial = 1.0;
  for (int j = 1; 2 * j <= d; ++j) {
    power = wedge(t, power);
    factorial *= j;
    result.coeff += power.coeff / factorial;
  }
  return result;
}

// Nullspace of v -> v . phi, phi != 0.
inline ComplexSubspace annihilator(const MultiForm& phi) {
  if (!(phi.max_abs() > 0.0))
    throw std::invalid_argument("annihilator: zero form");
  const int d = phi.d;
  const int64_t n = phi.coeff.size();
  MatrixXcd act(n, 2 * d);
  for (int k = 0; k < 2 * d; ++k) {
    VectorXcd gen = VectorXcd::Zero(2 * d);
    gen[k] = 1.0;
    act.col(k) = clifford_act(gen, phi).coeff;
  }
  Eigen::JacobiSVD<MatrixXcd> svd(act, Eigen::ComputeFullV);
  VectorXd sing = svd.singularValues();
  double cut = sing.size() > 0 ? kRankCut * sing.maxCoeff() : 0.0;
  int null_dim = 0;
  for (int i = 0; i < sing.size(); ++i)
    if (sing[i] <= cut) ++null_dim;
  MatrixXcd basis = svd.matrixV().rightCols(null_dim);
  return {basis};
}

struct SpinorReport {
  int ann_dim = 0;
  bool is_pure = false;
  bool nondegenerate = false;
  int type_k = 0;        // lowest nonzero homogeneous degree
  double reality = 0.0;  // smallest singular value of [L | conj L]
};

inline SpinorReport purity_report(const MultiForm& phi) {
  SpinorReport r;
  ComplexSubspace ann = annihilator(phi);
  r.ann_dim = ann.dim();
  r.is_pure = (r.ann_dim == phi.d);
  double top = phi.max_abs();
  r.type_k = phi.d;
  for (uint32_t m = 0; m < phi.coeff.size(); ++m) {
    if (std::abs(phi.coeff[m]) > 1e-12 * top) {
      int deg = std::popcount(m);
      if (deg < r.type_k) r.type_k = deg;
    }
  }
  if (r.is_pure) {
    r.reality = reality_gap(ann);
    Eigen::JacobiSVD<MatrixXcd> svd(ann.basis);
    r.nondegenerate = r.reality > kRankCut * 1.0;
  }
  return r;
}

// Realifies i P_L - i P_{conj L} where L = ann(phi); phi must be pure and
// nondegenerate.
inline GeneralizedStructure structure_from_spinor(const MultiForm& phi) {
  ComplexSubspace l = annihilator(phi);
  const int d = phi.d;
  if (l.dim() != d)
    throw std::invalid_argument(
        "structure_from_spinor: form is not pure (annihilator dimension " +
        std::to_string(l.dim()) + ", expected " + std::to_string(d) + ")");
  const double gap = reality_gap(l);
  if (!(gap > kRankCut))
    throw std::invalid_argument(
        "structure_from_spinor: form is degenerate, L meets conj(L) "
        "(reality gap " +
        format_value(gap) + ")");
  MatrixXcd w(2 * d, 2 * d);
  w << l.basis, l.basis.conjugate();
  MatrixXcd diag = MatrixXcd::Zero(2 * d, 2 * d);
  diag.topLeftCorner(d, d) = complexd(0, 1) * MatrixXcd::Identity(d, d);
  diag.bottomRightCorner(d, d) = complexd(0, -1) * MatrixXcd::Identity(d, d);
  MatrixXcd s = w * diag * w.inverse();
  return {s.real()};
}

// Generator of the joint kernel of the Clifford actions of an L-basis,
// normalized so the largest coefficient is exactly 1 (ties resolved to the
// lowest basis index).
inline MultiForm spinor_of_structure(const GeneralizedStructure& s) {
  const int d = s.dim();
  const int64_t n = int64_t(1) << d;
  ComplexSubspace l = i_eigenspace(s);
  MatrixXcd stacked(d * n, n);
  for (int i = 0; i < d; ++i) {
    for (int64_t m = 0; m < n; ++m) {
      MultiForm delta = MultiForm::zero(d);
      delta.coeff[m] = 1.0;
      stacked.block(i * n, m, n, 1) = clifford_act(l.basis.col(i), delta).coeff;
    }
  }
  Eigen::JacobiSVD<MatrixXcd> svd(stacked, Eigen::ComputeFullV);
  const VectorXd sing = svd.singularValues();
  int kernel = 0;
  for (int i = 0; i < sing.size(); ++i)
    if (sing[i] <= kRankCut * sing.maxCoeff()) ++kernel;
  if (kernel != 1)
    throw std::runtime_error(
        "spinor_of_structure: joint kernel dimension is " +
        std::to_string(kernel) + ", expected 1 (smallest singular values " +
        format_value(sing[sing.size() - 1]) + ", " +
        format_value(sing.size() > 1 ? sing[sing.size() - 2] : 0.0) + ")");
  MultiForm phi{d, svd.matrixV().col(n - 1)};
  double top = phi.max_abs();
  int pick = 0;
  for (int64_t m = 0; m < n; ++m) {
    if (std::abs(phi.coeff[m]) >= top * (1.0 - 1e-12)) {
      pick = static_cast<int>(m);
      break;
    }
  }
  phi.coeff /= phi.coeff[pick];
  return phi;
}

// Top-degree coefficient of omega^e ^ Omega ^ conj(Omega); with
// e = d/2 - type(Omega) this is nonzero exactly for nondegenerate spinors
// e^{B + i omega} ^ Omega.
inline complexd form_nondegeneracy_coefficient(const MatrixXd& omega,
                                               const MultiForm& Omega,
                                               int exponent) {
  const int d = Omega.d;
  MultiForm w = two_form(omega.cast<complexd>());
  MultiForm power = MultiForm::scalar(d, 1.0);
  for (int j = 0; j < exponent; ++j) power = wedge(power, w);
  MultiForm full = wedge(wedge(power, Omega), conjugate(Omega));
  return full.coeff[full.coeff.size() - 1];
}

}  // namespace gcx
