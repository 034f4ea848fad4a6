#ifndef MONOPRO_ELEMENT_HPP_
#define MONOPRO_ELEMENT_HPP_

#include <vector>

#include "monopro/matrix.hpp"

namespace monopro {

// An algebra element X presented through its B-valued moments.  phi_word
// evaluates Phi(c_0 X c_1 X ... X c_n) for n = coeffs.size() - 1 factors of
// X; n = 0 returns c_0 (Phi restricted to B is the identity).
class ElementHandle {
 public:
  virtual ~ElementHandle() = default;
  virtual int dim() const = 0;
  // Largest number of X factors allowed in a single phi_word call.
  virtual int moment_budget() const = 0;
  virtual Mat phi_word(const std::vector<Mat>& coeffs) const = 0;

  // Phi(X b_1 X ... X b_{n-1} X): the n-th moment map.
  Mat moment(const std::vector<Mat>& mids) const {
    std::vector<Mat> coeffs;
    coeffs.push_back(Mat::Identity(dim(), dim()));
    for (const Mat& b : mids) coeffs.push_back(b);
    coeffs.push_back(Mat::Identity(dim(), dim()));
    return phi_word(coeffs);
  }
};

}  // namespace monopro

#endif  // MONOPRO_ELEMENT_HPP_
