#ifndef MONOPRO_CPMAP_HPP_
#define MONOPRO_CPMAP_HPP_

#include <vector>

#include "monopro/matrix.hpp"

namespace monopro {

// Completely positive map b -> sum_s K_s* b K_s on M_d(C), stored by its
// Kraus family together with the cached d^2 x d^2 superoperator matrix.
class CPMap {
 public:
  CPMap() = default;

  static CPMap from_kraus(std::vector<Mat> kraus);
  // Validates that the given superoperator is Hermiticity-preserving and has
  // a PSD Choi matrix; throws NonPositiveInput otherwise.  Kraus operators
  // are recovered from the Choi eigendecomposition.
  static CPMap from_superop(const Mat& superop, double tol = kPsdTol);
  static CPMap identity(int d);
  static CPMap zero(int d);
  static CPMap random(int d, int n_kraus, Rng& rng);

  int dim() const { return d_; }
  const std::vector<Mat>& kraus() const { return kraus_; }
  // vec(apply(b)) = matrix() * vec(b)
  const Mat& matrix() const { return mat_; }

  Mat apply(const Mat& b) const;
  // Choi matrix C = sum_{ij} E_ij (x) eta(E_ij), PSD for every CPMap.
  Mat choi() const;

 private:
  int d_ = 0;
  std::vector<Mat> kraus_;
  Mat mat_;
};

}  // namespace monopro

#endif  // MONOPRO_CPMAP_HPP_
