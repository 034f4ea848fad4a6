#ifndef MONOPRO_CFREE_HPP_
#define MONOPRO_CFREE_HPP_

#include <functional>
#include <vector>

#include "monopro/element.hpp"
#include "monopro/matrix.hpp"
#include "monopro/mfs.hpp"

namespace monopro {

// Abstract B-probability space with one selfadjoint generator x, given by
// its moment maps m_n(b_1, ..., b_{n-1}) = Phi(x b_1 x ... x b_{n-1} x).
// B-bilinearity Phi(b w b') = b Phi(w) b' holds by construction.
class MomentSpec : public ElementHandle {
 public:
  MomentSpec(int d, int max_order);  // all moments zero (distribution of 0)

  // The expectation onto B: delta(b) = b, delta vanishes on generator words.
  static MomentSpec delta(int d, int max_order) { return MomentSpec(d, max_order); }
  static MomentSpec constant(const Mat& b, int max_order);
  // Moments of another handle, re-tabulated up to max_order.
  static MomentSpec from_handle(const ElementHandle& x, int max_order);

  int dim() const override { return d_; }
  int moment_budget() const override { return max_order_; }
  int max_order() const { return max_order_; }

  // Phi(c_0 x c_1 x ... x c_n); throws OrderExceeded past max_order.
  Mat phi_word(const std::vector<Mat>& coeffs) const override;
  // m_n(b_1, ..., b_{n-1})
  Mat moment_map(int n, const std::vector<Mat>& mids) const;

  const Mat& moment_matrix(int n) const { return m_.at(n - 1); }
  Mat& moment_matrix(int n) { return m_.at(n - 1); }

  // Max |Phi(w*) - Phi(w)*| over random coefficient words.
  double hermitian_symmetry_residual(int trials, std::uint64_t seed) const;

 private:
  int d_;
  int max_order_;
  std::vector<Mat> m_;  // m_[n-1]: d^2 x d^(2(n-1)), moment of order n
};

//==========================================================================
// Words of the two-sided (or K-sided) word algebra.  A word is
// c_0 x_{t_1} c_1 x_{t_2} ... x_{t_n} c_n: letters carry their left
// coefficient, the word carries the trailing one.  Letters are atomic;
// same-tag runs are merged only during evaluation.
//==========================================================================

struct Letter {
  int tag = 1;
  Mat left;
};

struct Word {
  std::vector<Letter> letters;
  Mat trailing;

  static Word scalar(const Mat& b);
  static Word generator(int tag, int d);
  int length() const { return static_cast<int>(letters.size()); }
  // (c_0 x ... x c_n)* = c_n* x c_{n-1}* ... x c_0* (generators selfadjoint)
  Word adjoint() const;
};

Word word_concat(const Word& a, const Word& b);
Word random_word(int d, int maxlen, int num_tags, Rng& rng);

//==========================================================================
// Product-state evaluators
//==========================================================================

// Monotonic product Phi_1 |> Phi_2: collapse every maximal tag-2 run through
// Phi_2, then evaluate Phi_1 on the remaining tag-1 word.
Mat monotone_eval(const Word& w, const MomentSpec& phi1, const MomentSpec& phi2);

// K algebras, tags 1..K, ordered monotonically: largest tag collapses first.
Mat monotone_eval_multi(const Word& w, const std::vector<MomentSpec>& phis);

// Amalgamated free product Psi_1 *_B Psi_2 (centered alternating words -> 0).
Mat free_eval(const Word& w, const MomentSpec& psi1, const MomentSpec& psi2);

// Conditionally free product Phi_1 *_{(Psi_1, Psi_2)} Phi_2: Psi-centered
// alternating words evaluate to the product of their letters' Phi values.
Mat cfree_eval(const Word& w, const MomentSpec& phi1, const MomentSpec& phi2,
               const MomentSpec& psi1, const MomentSpec& psi2);

// delta on tag-1 words: pure-B words pass through, generator words -> 0.
// Throws WrongAlgebra on any non-tag-1 letter.
Mat delta_eval(const Word& w);

// Max residual |monotone_eval - cfree_eval(., phi1, phi2, delta, phi2)| over
// random words.
double verify_monotone_equals_cfree(const MomentSpec& phi1,
                                    const MomentSpec& phi2, int trials,
                                    int maxlen, std::uint64_t seed);

// Def 2.1-style independence of the two generator algebras under the
// monotone product functional (tag 2 plays the collapsing middle role).
double monotone_independence_residual(const MomentSpec& phi1,
                                      const MomentSpec& phi2, int trials,
                                      int maxlen, std::uint64_t seed);

using WordEval = std::function<Mat(const Word&)>;

// Block Gram matrix [eval(w_i* w_j)]_{ij} over Mat(d).
Mat gram_matrix(const WordEval& eval, const std::vector<Word>& words, int d);

// True iff the Gram matrix is PSD within tol.  Input specs are vetted first
// with their own Gram test; throws NonPositiveInput on failure there.
bool gram_psd_check(const WordEval& eval, const std::vector<Word>& words,
                    int d, double tol,
                    const std::vector<const MomentSpec*>& input_specs);

// Positivity probe for a single spec: Gram of random one-algebra words.
bool spec_positive(const MomentSpec& spec, int n_words, int maxlen,
                   std::uint64_t seed, double tol = kPsdTol);

// The (n+m) x (n+m) block matrix of the mixed-product lemma:
//   A_ij = Phi_1(a_i* a_j) | Phi_1(a_i*) Phi_2(a_j)
//        | Phi_2(a_i*) Phi_1(a_j) | Phi_2(a_i* a_j)   by quadrant.
Mat mixed_gram(const MomentSpec& phi1, const MomentSpec& phi2,
               const std::vector<Word>& a_tag1, const std::vector<Word>& b_tag2);

}  // namespace monopro

#endif  // MONOPRO_CFREE_HPP_
