#pragma once

// Pointwise linear algebra of the double space V + V*: almost generalized
// complex structures, their i-eigenspaces, B-field shifts, and the polar
// construction of a commuting compatible pair with its (g, b, J+, J-) data.
//
// Conventions used throughout the library:
//  - basis order is e_1..e_d then e^1..e^d; elements of V + V* are length-2d
//    real (or complex) column vectors.
//  - the split pairing is eta = [[0, I/2], [I/2, 0]].
//  - a 2-form w is passed by its coefficient matrix w_ab = w(e_a, e_b); the
//    induced map X -> i_X w then has matrix w^T acting on columns.
//  - the dual action of an endomorphism J on covectors is -J^T.

#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "gcx/common.hpp"

namespace gcx {

struct DoubleSpace {
  int d = 0;
  MatrixXd eta;  // 2d x 2d
};

inline MatrixXd eta_pairing(int d) {
  MatrixXd eta = MatrixXd::Zero(2 * d, 2 * d);
  eta.topRightCorner(d, d) = 0.5 * MatrixXd::Identity(d, d);
  eta.bottomLeftCorner(d, d) = 0.5 * MatrixXd::Identity(d, d);
  return eta;
}

inline DoubleSpace double_space(int d) { return DoubleSpace{d, eta_pairing(d)}; }

// Short numeric rendering for diagnostic messages.
inline std::string format_value(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

struct GeneralizedStructure {
  MatrixXd mat;  // 2d x 2d real
  int dim() const { return static_cast<int>(mat.rows()) / 2; }
};

struct StructureValidation {
  double square_residual = 0.0;   // ||S^2 + I||_inf
  double pairing_residual = 0.0;  // ||S^T eta S - eta||_inf
  bool ok(double tol = kAxiomTol) const {
    return square_residual < tol && pairing_residual < tol;
  }
};

inline StructureValidation validate_structure(const GeneralizedStructure& s) {
  const int n = static_cast<int>(s.mat.rows());
  MatrixXd eta = eta_pairing(n / 2);
  StructureValidation v;
  v.square_residual =
      (s.mat * s.mat + MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  v.pairing_residual =
      (s.mat.transpose() * eta * s.mat - eta).cwiseAbs().maxCoeff();
  return v;
}

// [[J, 0], [0, -J^T]]. J must square to -I.
inline GeneralizedStructure from_complex_structure(const MatrixXd& J) {
  const int d = static_cast<int>(J.rows());
  const double residual =
      (J * J + MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
  if (!(residual < kAxiomTol))
    throw std::invalid_argument(
        "from_complex_structure: J^2 != -I (residual " +
        format_value(residual) + ")");
  MatrixXd m = MatrixXd::Zero(2 * d, 2 * d);
  m.topLeftCorner(d, d) = J;
  m.bottomRightCorner(d, d) = -J.transpose();
  return {m};
}

// [[0, -W^-1], [W, 0]] with W = omega^T the map X -> i_X omega.
// omega is the coefficient matrix of an invertible 2-form.
inline GeneralizedStructure from_symplectic(const MatrixXd& omega) {
  const int d = static_cast<int>(omega.rows());
  const double skew = (omega + omega.transpose()).cwiseAbs().maxCoeff();
  if (!(skew < kAxiomTol))
    throw std::invalid_argument("from_symplectic: form is not skew (residual " +
                                format_value(skew) + ")");
  Eigen::JacobiSVD<MatrixXd> svd(omega);
  const VectorXd sing = svd.singularValues();
  if (sing.size() == 0 || !(sing.minCoeff() > kRankCut * sing.maxCoeff()))
    throw std::invalid_argument("from_symplectic: form is singular");
  MatrixXd W = omega.transpose();
  MatrixXd m = MatrixXd::Zero(2 * d, 2 * d);
  m.topRightCorner(d, d) = -W.inverse();
  m.bottomLeftCorner(d, d) = W;
  return {m};
}

// Conjugation by the shear [[I, 0], [B, I]]; B skew (map convention).
inline GeneralizedStructure b_field_shift(const GeneralizedStructure& s,
                                          const MatrixXd& B) {
  const int d = s.dim();
  const double skew = (B + B.transpose()).cwiseAbs().maxCoeff();
  if (!(skew < kAxiomTol))
    throw std::invalid_argument("b_field_shift: B is not skew (residual " +
                                format_value(skew) + ")");
  MatrixXd shear = MatrixXd::Identity(2 * d, 2 * d);
  shear.bottomLeftCorner(d, d) = B;
  MatrixXd unshear = MatrixXd::Identity(2 * d, 2 * d);
  unshear.bottomLeftCorner(d, d) = -B;
  return {shear * s.mat * unshear};
}

struct ComplexSubspace {
  MatrixXcd basis;  // 2d x k, orthonormal columns
  int dim() const { return static_cast<int>(basis.cols()); }
  int ambient() const { return static_cast<int>(basis.rows()); }
};

// i-eigenspace of S, computed from the projector (I - iS)/2 with
// column-pivoted QR so the basis is deterministic in phase and order.
inline ComplexSubspace i_eigenspace(const GeneralizedStructure& s) {
  const int n = static_cast<int>(s.mat.rows());
  MatrixXcd proj =
      0.5 * (MatrixXcd::Identity(n, n) - complexd(0, 1) * s.mat.cast<complexd>());
  Eigen::ColPivHouseholderQR<MatrixXcd> qr(proj);
  MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(n, n / 2);
  return {q};
}

// Max |eta(c_i, c_j)| over column pairs, complex-bilinear pairing.
inline double isotropy_residual(const ComplexSubspace& sub) {
  MatrixXcd eta = eta_pairing(sub.ambient() / 2).cast<complexd>();
  MatrixXcd gram = sub.basis.transpose() * eta * sub.basis;
  return gram.cwiseAbs().maxCoeff();
}

// Smallest singular value of [B | conj(B)]; positive iff L and conj(L) are
// transverse, which is the realness condition for the structure.
inline double reality_gap(const ComplexSubspace& sub) {
  MatrixXcd stacked(sub.ambient(), 2 * sub.dim());
  stacked << sub.basis, sub.basis.conjugate();
  Eigen::JacobiSVD<MatrixXcd> svd(stacked);
  return svd.singularValues().minCoeff();
}

// Type = d - rank of the vector-part projection of the i-eigenspace,
// i.e. the codimension of pi(L) in the complexified V.
inline int type_of(const GeneralizedStructure& s) {
  const int d = s.dim();
  ComplexSubspace l = i_eigenspace(s);
  MatrixXcd top = l.basis.topRows(d);
  Eigen::JacobiSVD<MatrixXcd> svd(top);
  VectorXd sing = svd.singularValues();
  int rank = 0;
  if (sing.size() > 0 && sing[0] > 0) {
    for (int i = 0; i < sing.size(); ++i)
      if (sing[i] > kRankCut * sing[0]) ++rank;
  }
  int type = d - rank;
  if (type < 0) type = 0;
  if (type > d) type = d;
  return type;
}

// Operator distance between the projectors of two subspaces of equal ambient
// dimension; zero iff the subspaces coincide.
inline double subspace_distance(const ComplexSubspace& a,
                                const ComplexSubspace& b) {
  MatrixXcd pa = a.basis * a.basis.adjoint();
  MatrixXcd pb = b.basis * b.basis.adjoint();
  return (pa - pb).cwiseAbs().maxCoeff();
}

// Eigenvalues of the eta-symmetrized form of an operator G, i.e. of
// sym(eta * G). G is positive w.r.t. eta exactly when all are positive.
inline VectorXd pairing_form_eigenvalues(const MatrixXd& op) {
  const int d = static_cast<int>(op.rows()) / 2;
  MatrixXd form = eta_pairing(d) * op;
  MatrixXd sym = 0.5 * (form + form.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
  return es.eigenvalues();
}

// Space-separated eigenvalue list for diagnostic messages.
inline std::string format_spectrum(const VectorXd& values) {
  std::string out;
  for (int i = 0; i < values.size(); ++i) {
    if (i > 0) out += " ";
    out += format_value(values[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commuting compatible pairs.

struct Quadruple {
  MatrixXd g;       // SPD metric
  MatrixXd b;       // skew 2-form, map convention
  MatrixXd jplus;   // g-orthogonal complex structure
  MatrixXd jminus;  // g-orthogonal complex structure
  int dim() const { return static_cast<int>(g.rows()); }
};

struct QuadrupleValidation {
  double g_symmetry = 0.0;
  double g_min_eigenvalue = 0.0;  // must be > 0
  double b_skew = 0.0;
  double j_square = 0.0;       // max over both signs of ||J^2 + I||
  double j_isometry = 0.0;     // max over both signs of ||J^T g J - g||
  bool ok(double tol = kAxiomTol) const {
    return g_symmetry < tol && g_min_eigenvalue > 0 && b_skew < tol &&
           j_square < tol && j_isometry < tol;
  }
};

inline QuadrupleValidation validate_quadruple(const Quadruple& q) {
  const int d = q.dim();
  QuadrupleValidation v;
  v.g_symmetry = (q.g - q.g.transpose()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (q.g + q.g.transpose()));
  v.g_min_eigenvalue = es.eigenvalues().minCoeff();
  v.b_skew = (q.b + q.b.transpose()).cwiseAbs().maxCoeff();
  MatrixXd id = MatrixXd::Identity(d, d);
  for (const MatrixXd* j : {&q.jplus, &q.jminus}) {
    v.j_square = std::max(v.j_square, ((*j) * (*j) + id).cwiseAbs().maxCoeff());
    v.j_isometry = std::max(
        v.j_isometry, (j->transpose() * q.g * (*j) - q.g).cwiseAbs().maxCoeff());
  }
  return v;
}

// Polar companion of S w.r.t. the metric g: with G = [[0, g^-1], [g, 0]]
// (an involution), A = G S is skew for the G-metric, and
// S' = (sqrt(A A*))^-1 A is the unique commuting structure with -S S'
// positive. The square root is taken by eigendecomposition in a
// G-orthonormal frame.
inline GeneralizedStructure compatible_polar(const GeneralizedStructure& s,
                                             const MatrixXd& g) {
  const int d = s.dim();
  const double sym_gap = (g - g.transpose()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<MatrixXd> ges(0.5 * (g + g.transpose()));
  if (!(sym_gap < kAxiomTol) || !(ges.eigenvalues().minCoeff() > 0.0))
    throw std::invalid_argument(
        "compatible_polar: metric is not symmetric positive definite "
        "(symmetry gap " +
        format_value(sym_gap) + ", eigenvalues " +
        format_spectrum(ges.eigenvalues()) + ")");
  MatrixXd ginv = g.inverse();
  MatrixXd G = MatrixXd::Zero(2 * d, 2 * d);
  G.topRightCorner(d, d) = ginv;
  G.bottomLeftCorner(d, d) = g;
  MatrixXd A = G * s.mat;  // G^-1 = G

  // Metric of the G-inner product: M = G^T eta = diag(g, g^-1)/2, SPD.
  MatrixXd M = MatrixXd::Zero(2 * d, 2 * d);
  M.topLeftCorner(d, d) = 0.5 * g;
  M.bottomRightCorner(d, d) = 0.5 * ginv;

  Eigen::LLT<MatrixXd> llt(M);
  MatrixXd L = llt.matrixL();
  // Frame where the M-adjoint is the plain transpose.
  MatrixXd B = L.transpose() * A * L.transpose().inverse();
  MatrixXd P = B * B.transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (P + P.transpose()));
  if (!(es.eigenvalues().minCoeff() > 0.0))
    throw std::runtime_error(
        "compatible_polar: square-root spectrum is not positive: " +
        format_spectrum(es.eigenvalues()));
  MatrixXd root = es.eigenvectors() *
                  es.eigenvalues().cwiseSqrt().asDiagonal() *
                  es.eigenvectors().transpose();
  MatrixXd Jb = root.llt().solve(MatrixXd::Identity(2 * d, 2 * d)) * B;
  // llt on root is valid: root is SPD. Undo the frame change.
  MatrixXd Sp = L.transpose().inverse() * Jb * L.transpose();
  return {Sp};
}

// Reads (g, b, J+, J-) off a commuting pair with G = -S1 S2 positive:
// the top-right block of G is g^-1, the bottom-right block is b g^-1, and
// J_pm X is the vector part of S1 (X + (b pm g) X).
inline Quadruple quadruple_extract(const GeneralizedStructure& s1,
                                   const GeneralizedStructure& s2) {
  const int d = s1.dim();
  const double commutator =
      (s1.mat * s2.mat - s2.mat * s1.mat).cwiseAbs().maxCoeff();
  if (!(commutator < 100.0 * kAxiomTol))
    throw std::invalid_argument(
        "quadruple_extract: structures do not commute (||[S1,S2]|| = " +
        format_value(commutator) + ")");
  MatrixXd G = -s1.mat * s2.mat;
  const VectorXd pairing = pairing_form_eigenvalues(G);
  if (!(pairing.minCoeff() > 0.0))
    throw std::invalid_argument(
        "quadruple_extract: -S1 S2 is indefinite (pairing eigenvalues " +
        format_spectrum(pairing) + ")");
  MatrixXd g = G.topRightCorner(d, d).inverse();
  MatrixXd b = G.bottomRightCorner(d, d) * g;
  Quadruple q;
  q.g = 0.5 * (g + g.transpose());
  q.b = 0.5 * (b - b.transpose());
  MatrixXd plus = b + g;
  MatrixXd minus = b - g;
  MatrixXd jp(d, d), jm(d, d);
  for (int k = 0; k < d; ++k) {
    VectorXd x = VectorXd::Unit(d, k);
    VectorXd up(2 * d), um(2 * d);
    up << x, plus * x;
    um << x, minus * x;
    jp.col(k) = (s1.mat * up).head(d);
    jm.col(k) = (s1.mat * um).head(d);
  }
  q.jplus = jp;
  q.jminus = jm;
  return q;
}

// The commuting pair determined by (g, b, J+, J-); first of the pair carries
// the (J+ + J-) block, second the (J+ - J-) block.
inline std::pair<GeneralizedStructure, GeneralizedStructure>
assemble_from_quadruple(const Quadruple& q) {
  const int d = q.dim();
  const QuadrupleValidation check = validate_quadruple(q);
  if (!check.ok(1e-9))
    throw std::invalid_argument(
        "assemble_from_quadruple: invalid quadruple (g symmetry " +
        format_value(check.g_symmetry) + ", g min eigenvalue " +
        format_value(check.g_min_eigenvalue) + ", b skew " +
        format_value(check.b_skew) + ", J^2+I " +
        format_value(check.j_square) + ", isometry gap " +
        format_value(check.j_isometry) + ")");
  MatrixXd wp = q.g * q.jplus;   // omega_pm as maps
  MatrixXd wm = q.g * q.jminus;
  MatrixXd wpi = wp.inverse();
  MatrixXd wmi = wm.inverse();
  auto core = [&](double sign) {
    MatrixXd c(2 * d, 2 * d);
    c.topLeftCorner(d, d) = q.jplus + sign * q.jminus;
    c.topRightCorner(d, d) = -(wpi - sign * wmi);
    c.bottomLeftCorner(d, d) = wp - sign * wm;
    c.bottomRightCorner(d, d) =
        -(q.jplus.transpose() + sign * q.jminus.transpose());
    return MatrixXd(0.5 * c);
  };
  MatrixXd shear = MatrixXd::Identity(2 * d, 2 * d);
  shear.bottomLeftCorner(d, d) = q.b;
  MatrixXd unshear = MatrixXd::Identity(2 * d, 2 * d);
  unshear.bottomLeftCorner(d, d) = -q.b;
  GeneralizedStructure s1{shear * core(1.0) * unshear};
  GeneralizedStructure s2{shear * core(-1.0) * unshear};
  return {s1, s2};
}

// ---------------------------------------------------------------------------
// Standard models and random generators (used by tests and the CLI).

// Block-diagonal [[0,1],[-1,0]] coefficient blocks on (x1,y1,x2,y2,...).
inline MatrixXd standard_symplectic_form(int d) {
  MatrixXd w = MatrixXd::Zero(d, d);
  for (int k = 0; k + 1 < d; k += 2) {
    w(k, k + 1) = 1.0;
    w(k + 1, k) = -1.0;
  }
  return w;
}

// J e_x = e_y on each (x_j, y_j) pair.
inline MatrixXd standard_complex_structure(int d) {
  MatrixXd j = MatrixXd::Zero(d, d);
  for (int k = 0; k + 1 < d; k += 2) {
    j(k, k + 1) = -1.0;
    j(k + 1, k) = 1.0;
  }
  return j;
}

inline MatrixXd random_skew(int d, Rng& rng, double scale = 1.0) {
  MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = rng.uniform(-scale, scale);
  return 0.5 * (m - m.transpose());
}

inline MatrixXd random_spd(int d, Rng& rng, double scale = 0.4) {
  MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = rng.uniform(-scale, scale);
  return MatrixXd::Identity(d, d) + m * m.transpose();
}

// Random element of the pairing-preserving group, as exp of a Lie algebra
// element [[A, B], [C, -A^T]] with B, C skew.
inline MatrixXd random_pairing_isometry(int d, Rng& rng, double scale = 0.35) {
  MatrixXd A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = rng.uniform(-scale, scale);
  MatrixXd X = MatrixXd::Zero(2 * d, 2 * d);
  X.topLeftCorner(d, d) = A;
  X.bottomRightCorner(d, d) = -A.transpose();
  X.topRightCorner(d, d) = random_skew(d, rng, scale);
  X.bottomLeftCorner(d, d) = random_skew(d, rng, scale);
  return X.exp();
}

// Random valid structure of generic type: a pairing isometry conjugate of a
// standard seed. Conjugation keeps both axioms exactly.
inline GeneralizedStructure random_structure(int d, Rng& rng) {
  GeneralizedStructure seed = (rng.uniform() < 0.5)
                                  ? from_symplectic(standard_symplectic_form(d))
                                  : from_complex_structure(standard_complex_structure(d));
  MatrixXd Q = random_pairing_isometry(d, rng);
  return {Q * seed.mat * Q.inverse()};
}

// Random g-orthogonal complex structure: polar of a random invertible skew
// matrix in a g-orthonormal frame.
inline MatrixXd random_orthogonal_complex_structure(int d, const MatrixXd& g,
                                                    Rng& rng) {
  Eigen::LLT<MatrixXd> llt(g);
  MatrixXd Lt = MatrixXd(llt.matrixL()).transpose();
  MatrixXd K = random_skew(d, rng, 1.0) +
               0.2 * standard_symplectic_form(d);  // keeps K invertible
  MatrixXd P = K * K.transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(P);
  MatrixXd root_inv = es.eigenvectors() *
                      es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                      es.eigenvectors().transpose();
  MatrixXd W = root_inv * K;  // orthogonal and skew, so W^2 = -I
  return Lt.inverse() * W * Lt;
}

inline Quadruple random_quadruple(int d, Rng& rng) {
  Quadruple q;
  q.g = random_spd(d, rng);
  q.b = random_skew(d, rng);
  q.jplus = random_orthogonal_complex_structure(d, q.g, rng);
  q.jminus = random_orthogonal_complex_structure(d, q.g, rng);
  return q;
}

}  // namespace gcx
