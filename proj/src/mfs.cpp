#include "monopro/mfs.hpp"

#include <Eigen/LU>

#include <functional>

namespace monopro {

CVec slot_kron(const std::vector<Mat>& slots) {
  CVec v = CVec::Ones(1);
  for (const Mat& b : slots) {
    CVec vb = vec(b);
    CVec next(v.size() * vb.size());
    for (Eigen::Index i = 0; i < v.size(); ++i)
      next.segment(i * vb.size(), vb.size()) = v(i) * vb;
    v = std::move(next);
  }
  return v;
}

Mat eval_multimap(const Mat& term, const std::vector<Mat>& slots, int d) {
  return unvec(term * slot_kron(slots), d);
}

Series::Series(int d, int order) : d_(d), order_(order) {
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;
  Eigen::Index cols = 1;
  for (int n = 0; n <= order; ++n) {
    terms_.push_back(Mat::Zero(d2, cols));
    cols *= d2;
  }
}

Series Series::one(int d, int order) {
  Series s(d, order);
  s.terms_[0] = vec(Mat::Identity(d, d));
  return s;
}

Series Series::identity(int d, int order) {
  Series s(d, order);
  if (order >= 1) s.terms_[1] = Mat::Identity(d * d, d * d);
  return s;
}

Series Series::constant(const Mat& f0, int order) {
  Series s(static_cast<int>(f0.rows()), order);
  s.terms_[0] = vec(f0);
  return s;
}

Series Series::random(int d, int order, Rng& rng, bool zero_constant) {
  Series s(d, order);
  for (int n = zero_constant ? 1 : 0; n <= order; ++n) {
    Mat& t = s.terms_[n];
    for (Eigen::Index j = 0; j < t.cols(); ++j)
      for (Eigen::Index i = 0; i < t.rows(); ++i)
        t(i, j) = Complex(rng.gaussian(), rng.gaussian());
  }
  return s;
}

Mat Series::eval_term(int n, const std::vector<Mat>& slots) const {
  return eval_multimap(terms_[n], slots, d_);
}

Series Series::restricted(int order) const {
  Series s(d_, std::min(order, order_));
  for (int n = 0; n <= s.order_; ++n) s.terms_[n] = terms_[n];
  return s;
}

Series Series::operator-() const {
  Series s = *this;
  for (Mat& t : s.terms_) t = -t;
  return s;
}

double Series::residual(const Series& other) const {
  if (d_ != other.d_) throw DimensionMismatch("series residual");
  double r = 0.0;
  for (int n = 0; n <= std::min(order_, other.order_); ++n)
    r = std::max(r, max_abs(terms_[n] - other.terms_[n]));
  return r;
}

Series series_add(const Series& f, const Series& g) {
  if (f.dim() != g.dim()) throw DimensionMismatch("series_add");
  Series s(f.dim(), std::min(f.order(), g.order()));
  for (int n = 0; n <= s.order(); ++n) s.term(n) = f.term(n) + g.term(n);
  return s;
}

Series series_mul(const Series& f, const Series& g) {
  if (f.dim() != g.dim()) throw DimensionMismatch("series_mul");
  const int d = f.dim();
  const Mat mul = mul_tensor(d);
  Series s(d, std::min(f.order(), g.order()));
  for (int n = 0; n <= s.order(); ++n) {
    Mat acc = Mat::Zero(d * d, s.term(n).cols());
    for (int k = 0; k <= n; ++k) acc += mul * kron(f.term(k), g.term(n - k));
    s.term(n) = acc;
  }
  return s;
}

std::vector<std::vector<int>> compositions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  // iterative stack-based enumeration
  std::function<void(int)> rec = [&](int rest) {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (int p = 1; p <= rest; ++p) {
      cur.push_back(p);
      rec(rest - p);
      cur.pop_back();
    }
  };
  rec(n);
  return out;
}

namespace {

Mat kron_terms(const Series& g, const std::vector<int>& parts) {
  Mat acc = g.term(parts[0]);
  for (std::size_t j = 1; j < parts.size(); ++j) acc = kron(acc, g.term(parts[j]));
  return acc;
}

}  // namespace

Series series_compose(const Series& f, const Series& g) {
  if (f.dim() != g.dim()) throw DimensionMismatch("series_compose");
  if (max_abs(g.term(0)) > 1e-12)
    throw NonzeroConstantTerm("composition needs G_0 = 0");
  const int d = f.dim();
  Series s(d, std::min(f.order(), g.order()));
  s.term(0) = f.term(0);
  for (int n = 1; n <= s.order(); ++n) {
    Mat acc = Mat::Zero(d * d, s.term(n).cols());
    for (const auto& parts : compositions(n)) {
      const int k = static_cast<int>(parts.size());
      acc += f.term(k) * kron_terms(g, parts);
    }
    s.term(n) = acc;
  }
  return s;
}

Series series_mul_inverse(const Series& f) {
  const int d = f.dim();
  const Mat f0 = f.constant_term();
  Eigen::FullPivLU<Mat> lu(f0);
  if (!lu.isInvertible())
    throw SingularConstantTerm("F_0 not invertible");
  const Mat f0inv = lu.inverse();
  const Mat mul = mul_tensor(d);
  const Mat lminv = lmul_matrix(f0inv);
  Series g(d, f.order());
  g.term(0) = vec(f0inv);
  for (int n = 1; n <= f.order(); ++n) {
    Mat acc = Mat::Zero(d * d, g.term(n).cols());
    for (int k = 1; k <= n; ++k) acc += mul * kron(f.term(k), g.term(n - k));
    g.term(n) = -lminv * acc;
  }
  return g;
}

Series series_comp_inverse(const Series& f) {
  if (max_abs(f.term(0)) > 1e-12)
    throw NonzeroConstantTerm("compositional inverse needs F_0 = 0");
  const int d = f.dim();
  Eigen::FullPivLU<Mat> lu(f.term(1));
  if (!lu.isInvertible())
    throw SingularLinearTerm("F_1 not invertible in L_1(B)");
  Series g(d, f.order());
  g.term(1) = lu.inverse();
  for (int n = 2; n <= f.order(); ++n) {
    Mat acc = Mat::Zero(d * d, g.term(n).cols());
    for (const auto& parts : compositions(n)) {
      const int k = static_cast<int>(parts.size());
      if (k < 2) continue;  // k = 1 is the F_1 G_n term being solved for
      acc += f.term(k) * kron_terms(g, parts);
    }
    g.term(n) = -g.term(1) * acc;
  }
  return g;
}

}  // namespace monopro
