#ifndef MONOPRO_MATRIX_HPP_
#define MONOPRO_MATRIX_HPP_

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

#include "monopro/errors.hpp"
#include "monopro/util.hpp"

namespace monopro {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;   // element of B = M_d(C)
using CVec = Eigen::VectorXcd;

// Default tolerances (see also per-function parameters).
inline constexpr double kPositivityTol = 1e-10;   // min-eigenvalue slack
inline constexpr double kHermRelTol = 1e-8;       // relative Hermitian defect
inline constexpr double kResidualTol = 1e-9;      // theorem-check residuals
inline constexpr double kPsdTol = 1e-8;           // Gram PSD slack
inline constexpr double kEqTol = 1e-10;           // series equality

//==========================================================================
// Vectorization. Column-stacking is fixed project-wide:
//   vec(b)[i + d*j] = b(i, j),  slot 1 = leftmost Kronecker factor.
//==========================================================================

inline CVec vec(const Mat& b) {
  return Eigen::Map<const CVec>(b.data(), b.size());
}

inline Mat unvec(const CVec& v, int d) {
  if (v.size() != static_cast<Eigen::Index>(d) * d)
    throw DimensionMismatch("unvec: size " + std::to_string(v.size()));
  return Eigen::Map<const Mat>(v.data(), d, d);
}

Mat kron(const Mat& a, const Mat& b);

// d^2 x d^4 matrix M with M * (vec(a) (x) vec(b)) = vec(a*b).
Mat mul_tensor(int d);

// vec(c*x) = lmul_matrix(c) * vec(x);  vec(x*c) = rmul_matrix(c) * vec(x).
inline Mat lmul_matrix(const Mat& c) {
  return kron(Mat::Identity(c.rows(), c.cols()), c);
}
inline Mat rmul_matrix(const Mat& c) {
  return kron(c.transpose(), Mat::Identity(c.rows(), c.cols()));
}

//==========================================================================
// Positivity
//==========================================================================

inline double herm_defect(const Mat& a) { return (a - a.adjoint()).norm(); }

// Smallest eigenvalue of the Hermitian part (a + a*)/2.
double min_eigenvalue(const Mat& a);

// True iff min eigenvalue of (a+a*)/2 >= -tol.  Requires a Hermitian within
// herm_tol (default 1e-8 * ||a||); throws NonHermitian otherwise.
bool is_positive(const Mat& a, double tol = kPositivityTol,
                 double herm_tol = -1.0);

//==========================================================================
// Random instances (deterministic per seed)
//==========================================================================

Mat random_matrix(int d, Rng& rng);
Mat random_selfadjoint(int d, std::uint64_t seed);
Mat random_selfadjoint(int d, Rng& rng);

inline double max_abs(const Mat& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace monopro

#endif  // MONOPRO_MATRIX_HPP_
