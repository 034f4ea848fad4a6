#include "monopro/cpmap.hpp"

namespace monopro {

namespace {

Mat superop_from_kraus(int d, const std::vector<Mat>& kraus) {
  Mat m = Mat::Zero(d * d, d * d);
  // vec(K* b K) = (K^T (x) K*) vec(b)
  for (const Mat& k : kraus) m += kron(k.transpose(), k.conjugate());
  return m;
}

}  // namespace

CPMap CPMap::from_kraus(std::vector<Mat> kraus) {
  if (kraus.empty()) throw DimensionMismatch("empty Kraus family");
  const int d = static_cast<int>(kraus.front().rows());
  for (const Mat& k : kraus)
    if (k.rows() != d || k.cols() != d)
      throw DimensionMismatch("Kraus operator is not d x d");
  CPMap out;
  out.d_ = d;
  out.kraus_ = std::move(kraus);
  out.mat_ = superop_from_kraus(d, out.kraus_);
  return out;
}

CPMap CPMap::from_superop(const Mat& superop, double tol) {
  const int d2 = static_cast<int>(superop.rows());
  const int d = static_cast<int>(std::lround(std::sqrt(double(d2))));
  if (d * d != d2 || superop.cols() != d2)
    throw DimensionMismatch("superoperator must be d^2 x d^2");
  // Choi from superop: C[(i,j) block] = eta(E_ij).
  Mat choi = Mat::Zero(d2, d2);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Mat eij = Mat::Zero(d, d);
      eij(i, j) = 1.0;
      choi.block(i * d, j * d, d, d) = unvec(superop * vec(eij), d);
    }
  if (herm_defect(choi) > tol * std::max(1.0, choi.norm()))
    throw NonPositiveInput("Choi matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (choi + choi.adjoint()));
  if (es.eigenvalues().minCoeff() < -tol)
    throw NonPositiveInput("Choi matrix has eigenvalue " +
                           std::to_string(es.eigenvalues().minCoeff()));
  // Kraus from Choi: C = sum_s v_s v_s^* with v_s = sum_i e_i (x) (K_s* e_i),
  // so column i of K_s* is the i-th block of v_s.
  std::vector<Mat> kraus;
  for (int s = 0; s < d2; ++s) {
    const double lam = std::max(0.0, es.eigenvalues()(s));
    if (lam <= tol) continue;
    CVec v = std::sqrt(lam) * es.eigenvectors().col(s);
    Mat kadj(d, d);
    for (int i = 0; i < d; ++i) kadj.col(i) = v.segment(i * d, d);
    kraus.push_back(kadj.adjoint());
  }
  if (kraus.empty()) kraus.push_back(Mat::Zero(d, d));
  return from_kraus(std::move(kraus));
}

CPMap CPMap::identity(int d) { return from_kraus({Mat::Identity(d, d)}); }

CPMap CPMap::zero(int d) { return from_kraus({Mat::Zero(d, d)}); }

CPMap CPMap::random(int d, int n_kraus, Rng& rng) {
  std::vector<Mat> ks;
  for (int s = 0; s < n_kraus; ++s) ks.push_back(random_matrix(d, rng));
  return from_kraus(std::move(ks));
}

Mat CPMap::apply(const Mat& b) const {
  if (b.rows() != d_ || b.cols() != d_)
    throw DimensionMismatch("cp_apply: argument is not d x d");
  return unvec(mat_ * vec(b), d_);
}

Mat CPMap::choi() const {
  Mat c = Mat::Zero(d_ * d_, d_ * d_);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) {
      Mat eij = Mat::Zero(d_, d_);
      eij(i, j) = 1.0;
      c.block(i * d_, j * d_, d_, d_) = apply(eij);
    }
  return c;
}

}  // namespace monopro
