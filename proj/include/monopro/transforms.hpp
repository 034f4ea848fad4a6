#ifndef MONOPRO_TRANSFORMS_HPP_
#define MONOPRO_TRANSFORMS_HPP_

#include <utility>
#include <vector>

#include "monopro/cfree.hpp"
#include "monopro/element.hpp"
#include "monopro/matrix.hpp"
#include "monopro/mfs.hpp"

namespace monopro {

// Truncated power series in the formal parameter t with Mat(d) coefficients;
// c[n] is the t^n coefficient.  Transforms restricted to the ray z = t z0
// (and to image curves of other transforms) live here.
struct TSeries {
  int d = 0;
  std::vector<Mat> c;

  static TSeries zero(int d, int order);
  static TSeries ray(const Mat& z0, int order);  // t * z0
  int order() const { return static_cast<int>(c.size()) - 1; }
};

TSeries ts_add(const TSeries& a, const TSeries& b);
TSeries ts_mul(const TSeries& a, const TSeries& b);
// (1 + s)^{-1} for s with s.c[0] = 0.
TSeries ts_one_plus_inverse(const TSeries& s);
double ts_residual(const TSeries& a, const TSeries& b);

// Word shapes of the scalar-parameter transforms:
//   kH:     sum_n Phi((wX)^n w)        (h)
//   kTheta: sum_{n>=1} Phi((wX)^n)     (vartheta)
//   kRho:   sum_{n>=1} Phi((Xw)^n)     (varrho)
enum class WordShape { kH, kTheta, kRho };

// Evaluates the chosen transform of X along the curve w(t) (a TSeries with
// zero constant term), truncated at `order`.
TSeries transform_curve(const ElementHandle& x, const TSeries& w,
                        WordShape shape, int order);

TSeries h_series(const ElementHandle& x, const Mat& z0, int order);
// The printed definition (1 - z Phi(X))^{-1} z, which only sees Phi(X); kept
// for the record, agrees with h_series when X is deterministic.
TSeries h_naive(const ElementHandle& x, const Mat& z0, int order);

TSeries theta_series(const ElementHandle& x, const Mat& z0, int order);
std::pair<TSeries, TSeries> theta_kappa_series(const ElementHandle& x,
                                               const Mat& z0, int order);
TSeries varrho_series(const ElementHandle& x, const Mat& z0, int order);
TSeries rho_series(const ElementHandle& x, const Mat& z0, int order);

TSeries kappa_curve(const ElementHandle& x, const TSeries& w, int order);
TSeries rho_curve(const ElementHandle& x, const TSeries& w, int order);

// Multilinear-series transforms.
Series extract_H(const ElementHandle& x, int order);
std::pair<Series, Series> extract_beta_gamma(const ElementHandle& x, int order);
// (K_X, r_X) = ((1+beta)^{-1} beta, gamma (1+gamma)^{-1})
std::pair<Series, Series> kappa_r_mfs(const ElementHandle& x, int order);

//==========================================================================
// Theorem verifiers.  Each returns the max coefficient residual; the
// composition-order reports carry both candidate orders (see the kappa/rho
// order question resolved empirically by the suite).
//==========================================================================

double verify_h_composition(const ElementHandle& x, const ElementHandle& y,
                            const ElementHandle& x_plus_y, const Mat& z0,
                            int order);
double verify_mfs_h_composition(const ElementHandle& x, const ElementHandle& y,
                                const ElementHandle& x_plus_y, int order);

struct CompositionReport {
  double u_after_v = 0.0;  // residual of T_U o T_V
  double v_after_u = 0.0;  // residual of T_V o T_U
};

// kappa_{VU} against kappa_U o kappa_V (u_after_v) and kappa_V o kappa_U.
CompositionReport verify_kappa_composition(const ElementHandle& u,
                                           const ElementHandle& v,
                                           const ElementHandle& vu,
                                           const Mat& z0, int order);
// rho_{UV} against rho_U o rho_V (u_after_v) and rho_V o rho_U.
CompositionReport verify_rho_composition(const ElementHandle& u,
                                         const ElementHandle& v,
                                         const ElementHandle& uv,
                                         const Mat& z0, int order);
CompositionReport verify_mfs_kappa_composition(const ElementHandle& u,
                                               const ElementHandle& v,
                                               const ElementHandle& vu,
                                               int order);
CompositionReport verify_mfs_r_composition(const ElementHandle& u,
                                           const ElementHandle& v,
                                           const ElementHandle& uv, int order);

}  // namespace monopro

#endif  // MONOPRO_TRANSFORMS_HPP_
