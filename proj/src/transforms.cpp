#include "monopro/transforms.hpp"

namespace monopro {

//==========================================================================
// TSeries
//==========================================================================

TSeries TSeries::zero(int d, int order) {
  TSeries s;
  s.d = d;
  s.c.assign(order + 1, Mat::Zero(d, d));
  return s;
}

TSeries TSeries::ray(const Mat& z0, int order) {
  TSeries s = zero(static_cast<int>(z0.rows()), order);
  if (order >= 1) s.c[1] = z0;
  return s;
}

TSeries ts_add(const TSeries& a, const TSeries& b) {
  TSeries s = TSeries::zero(a.d, std::min(a.order(), b.order()));
  for (int n = 0; n <= s.order(); ++n) s.c[n] = a.c[n] + b.c[n];
  return s;
}

TSeries ts_mul(const TSeries& a, const TSeries& b) {
  TSeries s = TSeries::zero(a.d, std::min(a.order(), b.order()));
  for (int n = 0; n <= s.order(); ++n)
    for (int k = 0; k <= n; ++k) s.c[n] += a.c[k] * b.c[n - k];
  return s;
}

TSeries ts_one_plus_inverse(const TSeries& s) {
  if (max_abs(s.c[0]) != 0.0)
    throw NonzeroConstantTerm("ts_one_plus_inverse needs s(0) = 0");
  // g with (1+s) g = 1: g_0 = I, g_n = -sum_{k>=1} s_k g_{n-k}.
  TSeries g = TSeries::zero(s.d, s.order());
  g.c[0] = Mat::Identity(s.d, s.d);
  for (int n = 1; n <= s.order(); ++n) {
    Mat acc = Mat::Zero(s.d, s.d);
    for (int k = 1; k <= n; ++k) acc += s.c[k] * g.c[n - k];
    g.c[n] = -acc;
  }
  return g;
}

double ts_residual(const TSeries& a, const TSeries& b) {
  double r = 0.0;
  for (int n = 0; n <= std::min(a.order(), b.order()); ++n)
    r = std::max(r, max_abs(a.c[n] - b.c[n]));
  return r;
}

//==========================================================================
// Scalar-parameter transforms along curves
//==========================================================================

namespace {

// Enumerates degree tuples (deg_1..deg_k), deg_j >= 1, sum <= order, calling
// fn(tuple) for each.
void for_each_degree_tuple(int k, int order,
                           const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> cur(k, 1);
  std::function<void(int, int)> rec = [&](int pos, int used) {
    if (pos == k) {
      fn(cur);
      return;
    }
    for (int deg = 1; used + deg + (k - pos - 1) <= order; ++deg) {
      cur[pos] = deg;
      rec(pos + 1, used + deg);
    }
  };
  rec(0, 0);
}

}  // namespace

TSeries transform_curve(const ElementHandle& x, const TSeries& w,
                        WordShape shape, int order) {
  if (max_abs(w.c[0]) != 0.0)
    throw NonzeroConstantTerm("curve must vanish at t = 0");
  const int d = x.dim();
  const Mat id = Mat::Identity(d, d);
  TSeries out = TSeries::zero(d, order);

  const int max_factors = (shape == WordShape::kH) ? order - 1 : order;
  if (max_factors > x.moment_budget())
    throw DepthBudgetExceeded("transform_curve order " + std::to_string(order));

  if (shape == WordShape::kH) {
    for (int n = 1; n <= order; ++n) out.c[n] += w.c[n];  // zero-factor term
    for (int n = 1; n + 1 <= order; ++n) {
      for_each_degree_tuple(n + 1, order, [&](const std::vector<int>& degs) {
        std::vector<Mat> coeffs;
        coeffs.reserve(n + 1);
        int total = 0;
        for (int deg : degs) {
          coeffs.push_back(w.c[deg]);
          total += deg;
        }
        out.c[total] += x.phi_word(coeffs);
      });
    }
    return out;
  }

  for (int n = 1; n <= order; ++n) {
    for_each_degree_tuple(n, order, [&](const std::vector<int>& degs) {
      std::vector<Mat> coeffs;
      coeffs.reserve(n + 1);
      int total = 0;
      if (shape == WordShape::kRho) coeffs.push_back(id);
      for (int deg : degs) {
        coeffs.push_back(w.c[deg]);
        total += deg;
      }
      if (shape == WordShape::kTheta) coeffs.push_back(id);
      out.c[total] += x.phi_word(coeffs);
    });
  }
  return out;
}

TSeries h_series(const ElementHandle& x, const Mat& z0, int order) {
  return transform_curve(x, TSeries::ray(z0, order), WordShape::kH, order);
}

TSeries h_naive(const ElementHandle& x, const Mat& z0, int order) {
  const Mat phi_x = x.moment({});
  TSeries out = TSeries::zero(x.dim(), order);
  Mat pow = z0;  // (z0 Phi(X))^n z0 at coefficient n+1
  for (int n = 1; n <= order; ++n) {
    out.c[n] = pow;
    pow = z0 * phi_x * pow;
  }
  return out;
}

TSeries theta_series(const ElementHandle& x, const Mat& z0, int order) {
  return transform_curve(x, TSeries::ray(z0, order), WordShape::kTheta, order);
}

std::pair<TSeries, TSeries> theta_kappa_series(const ElementHandle& x,
                                               const Mat& z0, int order) {
  TSeries theta = theta_series(x, z0, order);
  TSeries kappa = ts_mul(ts_one_plus_inverse(theta), theta);
  return {theta, kappa};
}

TSeries varrho_series(const ElementHandle& x, const Mat& z0, int order) {
  return transform_curve(x, TSeries::ray(z0, order), WordShape::kRho, order);
}

TSeries rho_series(const ElementHandle& x, const Mat& z0, int order) {
  TSeries vr = varrho_series(x, z0, order);
  return ts_mul(vr, ts_one_plus_inverse(vr));
}

TSeries kappa_curve(const ElementHandle& x, const TSeries& w, int order) {
  TSeries theta = transform_curve(x, w, WordShape::kTheta, order);
  return ts_mul(ts_one_plus_inverse(theta), theta);
}

TSeries rho_curve(const ElementHandle& x, const TSeries& w, int order) {
  TSeries vr = transform_curve(x, w, WordShape::kRho, order);
  return ts_mul(vr, ts_one_plus_inverse(vr));
}

//==========================================================================
// Multilinear-series transforms
//==========================================================================

namespace {

// Fills term n by evaluating fn on every tuple of basis slots.
void fill_term(Mat& term, int d, int n,
               const std::function<Mat(const std::vector<Mat>&)>& fn) {
  const int d2 = d * d;
  std::vector<Mat> slots(n);
  std::vector<int> idx(n, 0);
  for (Eigen::Index col = 0; col < term.cols(); ++col) {
    Eigen::Index rem = col;
    for (int t = n - 1; t >= 0; --t) {
      idx[t] = static_cast<int>(rem % d2);
      rem /= d2;
    }
    for (int t = 0; t < n; ++t) {
      Mat e = Mat::Zero(d, d);
      e(idx[t] % d, idx[t] / d) = 1.0;
      slots[t] = e;
    }
    term.col(col) = vec(fn(slots));
  }
}

}  // namespace

Series extract_H(const ElementHandle& x, int order) {
  const int d = x.dim();
  if (order - 1 > x.moment_budget())
    throw DepthBudgetExceeded("extract_H order " + std::to_string(order));
  Series h(d, order);
  if (order >= 1) h.term(1) = Mat::Identity(d * d, d * d);
  for (int n = 2; n <= order; ++n) {
    fill_term(h.term(n), d, n, [&](const std::vector<Mat>& slots) {
      return x.phi_word(slots);  // Phi(b_1 X b_2 ... X b_n), n-1 factors
    });
  }
  return h;
}

std::pair<Series, Series> extract_beta_gamma(const ElementHandle& x, int order) {
  const int d = x.dim();
  if (order > x.moment_budget())
    throw DepthBudgetExceeded("extract_beta_gamma order " + std::to_string(order));
  const Mat id = Mat::Identity(d, d);
  Series beta(d, order), gamma(d, order);
  for (int n = 1; n <= order; ++n) {
    fill_term(beta.term(n), d, n, [&](const std::vector<Mat>& slots) {
      std::vector<Mat> coeffs = slots;
      coeffs.push_back(id);
      return x.phi_word(coeffs);  // Phi(b_1 X ... b_n X)
    });
    fill_term(gamma.term(n), d, n, [&](const std::vector<Mat>& slots) {
      std::vector<Mat> coeffs;
      coeffs.push_back(id);
      for (const Mat& b : slots) coeffs.push_back(b);
      return x.phi_word(coeffs);  // Phi(X b_1 ... X b_n)
    });
  }
  return {beta, gamma};
}

std::pair<Series, Series> kappa_r_mfs(const ElementHandle& x, int order) {
  auto [beta, gamma] = extract_beta_gamma(x, order);
  const Series one = Series::one(x.dim(), order);
  Series kappa = series_mul(series_mul_inverse(series_add(one, beta)), beta);
  Series r = series_mul(gamma, series_mul_inverse(series_add(one, gamma)));
  return {kappa, r};
}

//==========================================================================
// Theorem verifiers
//==========================================================================

double verify_h_composition(const ElementHandle& x, const ElementHandle& y,
                            const ElementHandle& x_plus_y, const Mat& z0,
                            int order) {
  TSeries lhs = h_series(x_plus_y, z0, order);
  TSeries hy = h_series(y, z0, order);
  TSeries rhs = transform_curve(x, hy, WordShape::kH, order);
  return ts_residual(lhs, rhs);
}

double verify_mfs_h_composition(const ElementHandle& x, const ElementHandle& y,
                                const ElementHandle& x_plus_y, int order) {
  Series lhs = extract_H(x_plus_y, order);
  Series rhs = series_compose(extract_H(x, order), extract_H(y, order));
  return lhs.residual(rhs);
}

CompositionReport verify_kappa_composition(const ElementHandle& u,
                                           const ElementHandle& v,
                                           const ElementHandle& vu,
                                           const Mat& z0, int order) {
  CompositionReport rep;
  TSeries lhs = theta_kappa_series(vu, z0, order).second;
  TSeries kv = theta_kappa_series(v, z0, order).second;
  TSeries ku = theta_kappa_series(u, z0, order).second;
  rep.u_after_v = ts_residual(lhs, kappa_curve(u, kv, order));
  rep.v_after_u = ts_residual(lhs, kappa_curve(v, ku, order));
  return rep;
}

CompositionReport verify_rho_composition(const ElementHandle& u,
                                         const ElementHandle& v,
                                         const ElementHandle& uv,
                                         const Mat& z0, int order) {
  CompositionReport rep;
  TSeries lhs = rho_series(uv, z0, order);
  TSeries rv = rho_series(v, z0, order);
  TSeries ru = rho_series(u, z0, order);
  rep.u_after_v = ts_residual(lhs, rho_curve(u, rv, order));
  rep.v_after_u = ts_residual(lhs, rho_curve(v, ru, order));
  return rep;
}

CompositionReport verify_mfs_kappa_composition(const ElementHandle& u,
                                               const ElementHandle& v,
                                               const ElementHandle& vu,
                                               int order) {
  CompositionReport rep;
  Series lhs = kappa_r_mfs(vu, order).first;
  Series ku = kappa_r_mfs(u, order).first;
  Series kv = kappa_r_mfs(v, order).first;
  rep.u_after_v = lhs.residual(series_compose(ku, kv));
  rep.v_after_u = lhs.residual(series_compose(kv, ku));
  return rep;
}

CompositionReport verify_mfs_r_composition(const ElementHandle& u,
                                           const ElementHandle& v,
                                           const ElementHandle& uv, int order) {
  CompositionReport rep;
  Series lhs = kappa_r_mfs(uv, order).second;
  Series ru = kappa_r_mfs(u, order).second;
  Series rv = kappa_r_mfs(v, order).second;
  rep.u_after_v = lhs.residual(series_compose(ru, rv));
  rep.v_after_u = lhs.residual(series_compose(rv, ru));
  return rep;
}

}  // namespace monopro
