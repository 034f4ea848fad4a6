#ifndef MONOPRO_MFS_HPP_
#define MONOPRO_MFS_HPP_

#include <vector>

#include "monopro/matrix.hpp"

namespace monopro {

// Degree-n term of a multilinear function series: a multilinear map
// B^n -> B stored as a d^2 x d^(2n) matrix acting on vec(b_1)(x)...(x)vec(b_n)
// with slot 1 the leftmost (slowest-varying) Kronecker factor.  Degree 0 is
// the d^2 x 1 column vec(F_0).
Mat eval_multimap(const Mat& term, const std::vector<Mat>& slots, int d);

// Kronecker column vector vec(b_1)(x)...(x)vec(b_n).
CVec slot_kron(const std::vector<Mat>& slots);

// Truncated formal multilinear function series (F_0, ..., F_N) over M_d(C).
// Every operation discards degrees above the truncation order.
class Series {
 public:
  Series(int d, int order);  // zero series

  static Series one(int d, int order);       // (I, 0, 0, ...)
  static Series identity(int d, int order);  // (0, id_B, 0, ...)
  static Series constant(const Mat& f0, int order);
  static Series random(int d, int order, Rng& rng, bool zero_constant = false);

  int dim() const { return d_; }
  int order() const { return order_; }

  const Mat& term(int n) const { return terms_[n]; }
  Mat& term(int n) { return terms_[n]; }
  Mat constant_term() const { return unvec(terms_[0], d_); }
  Mat eval_term(int n, const std::vector<Mat>& slots) const;

  Series restricted(int order) const;
  Series operator-() const;

  // Max absolute entry difference over shared degrees.
  double residual(const Series& other) const;
  bool approx_equal(const Series& other, double tol = kEqTol) const {
    return residual(other) <= tol;
  }

 private:
  int d_;
  int order_;
  std::vector<Mat> terms_;  // terms_[n]: d^2 x d^(2n)
};

Series series_add(const Series& f, const Series& g);
Series series_mul(const Series& f, const Series& g);
// Requires g.constant_term() == 0 (within 1e-12); throws NonzeroConstantTerm.
Series series_compose(const Series& f, const Series& g);
// Requires invertible F_0; throws SingularConstantTerm.
Series series_mul_inverse(const Series& f);
// Requires F_0 = 0 and invertible F_1; throws NonzeroConstantTerm /
// SingularLinearTerm.
Series series_comp_inverse(const Series& f);

// All ordered tuples of positive integers summing to n, in lexicographic
// order of discovery.
std::vector<std::vector<int>> compositions(int n);

}  // namespace monopro

#endif  // MONOPRO_MFS_HPP_
