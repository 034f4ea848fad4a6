#include "monopro/matrix.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace monopro {

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat mul_tensor(int d) {
  const int d2 = d * d;
  Mat m = Mat::Zero(d2, d2 * d2);
  // Column (p, q) is vec(E_p * E_q) for matrix units E_p = unvec(e_p).
  // E_{i+d*j} = e_i e_j^T, so E_p E_q = delta(j_p, i_q) E_{i_p + d*j_q}.
  for (int p = 0; p < d2; ++p) {
    const int ip = p % d, jp = p / d;
    for (int q = 0; q < d2; ++q) {
      const int iq = q % d, jq = q / d;
      if (jp == iq) m(ip + d * jq, p * d2 + q) = 1.0;
    }
  }
  return m;
}

double min_eigenvalue(const Mat& a) {
  Mat h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_positive(const Mat& a, double tol, double herm_tol) {
  if (herm_tol < 0.0) herm_tol = kHermRelTol * std::max(1.0, a.norm());
  if (herm_defect(a) > herm_tol)
    throw NonHermitian("defect " + std::to_string(herm_defect(a)));
  return min_eigenvalue(a) >= -tol;
}

Mat random_matrix(int d, Rng& rng) {
  Mat g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  return g;
}

Mat random_selfadjoint(int d, Rng& rng) {
  Mat g = random_matrix(d, rng);
  return 0.5 * (g + g.adjoint());
}

Mat random_selfadjoint(int d, std::uint64_t seed) {
  Rng rng(seed);
  return random_selfadjoint(d, rng);
}

int thread_cap() {
  const char* env = std::getenv("MONOPRO_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int cap = std::min(thread_cap(), n);
  if (cap <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(cap);
  for (int t = 0; t < cap; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace monopro
