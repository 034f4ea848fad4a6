#include "monopro/cfree.hpp"

#include <algorithm>
#include <cstring>
#include <unordered_map>

namespace monopro {

//==========================================================================
// MomentSpec
//==========================================================================

MomentSpec::MomentSpec(int d, int max_order) : d_(d), max_order_(max_order) {
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;
  Eigen::Index cols = 1;
  for (int n = 1; n <= max_order; ++n) {
    m_.push_back(Mat::Zero(d2, cols));
    cols *= d2;
  }
}

MomentSpec MomentSpec::constant(const Mat& b, int max_order) {
  const int d = static_cast<int>(b.rows());
  MomentSpec spec(d, max_order);
  const int d2 = d * d;
  for (int n = 1; n <= max_order; ++n) {
    Mat& mn = spec.m_[n - 1];
    // column (j_1, ..., j_{n-1}) = vec(b E_{j_1} b ... E_{j_{n-1}} b)
    std::vector<int> idx(n - 1, 0);
    for (Eigen::Index col = 0; col < mn.cols(); ++col) {
      Eigen::Index rem = col;
      for (int t = n - 2; t >= 0; --t) {
        idx[t] = static_cast<int>(rem % d2);
        rem /= d2;
      }
      Mat acc = b;
      for (int t = 0; t < n - 1; ++t) {
        Mat e = Mat::Zero(d, d);
        e(idx[t] % d, idx[t] / d) = 1.0;
        acc = acc * e * b;
      }
      mn.col(col) = vec(acc);
    }
  }
  return spec;
}

MomentSpec MomentSpec::from_handle(const ElementHandle& x, int max_order) {
  if (max_order > x.moment_budget())
    throw DepthBudgetExceeded("from_handle: order " + std::to_string(max_order));
  const int d = x.dim();
  const int d2 = d * d;
  MomentSpec spec(d, max_order);
  for (int n = 1; n <= max_order; ++n) {
    Mat& mn = spec.m_[n - 1];
    std::vector<int> idx(n - 1, 0);
    std::vector<Mat> mids(n - 1);
    for (Eigen::Index col = 0; col < mn.cols(); ++col) {
      Eigen::Index rem = col;
      for (int t = n - 2; t >= 0; --t) {
        idx[t] = static_cast<int>(rem % d2);
        rem /= d2;
      }
      for (int t = 0; t < n - 1; ++t) {
        Mat e = Mat::Zero(d, d);
        e(idx[t] % d, idx[t] / d) = 1.0;
        mids[t] = e;
      }
      mn.col(col) = vec(x.moment(mids));
    }
  }
  return spec;
}

Mat MomentSpec::moment_map(int n, const std::vector<Mat>& mids) const {
  if (n < 1 || n > max_order_)
    throw OrderExceeded("moment of order " + std::to_string(n));
  return eval_multimap(m_[n - 1], mids, d_);
}

Mat MomentSpec::phi_word(const std::vector<Mat>& coeffs) const {
  if (coeffs.empty()) throw ConfigError("phi_word needs c_0");
  const int n = static_cast<int>(coeffs.size()) - 1;
  if (n == 0) return coeffs[0];
  if (n > max_order_) throw OrderExceeded("word length " + std::to_string(n));
  std::vector<Mat> mids(coeffs.begin() + 1, coeffs.end() - 1);
  return coeffs.front() * moment_map(n, mids) * coeffs.back();
}

double MomentSpec::hermitian_symmetry_residual(int trials,
                                               std::uint64_t seed) const {
  double r = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed, t);
    const int n = rng.uniform_int(1, max_order_);
    std::vector<Mat> coeffs;
    for (int j = 0; j <= n; ++j) coeffs.push_back(random_matrix(d_, rng));
    Mat val = phi_word(coeffs);
    std::vector<Mat> rev;
    for (int j = n; j >= 0; --j) rev.push_back(coeffs[j].adjoint());
    Mat adj_val = phi_word(rev);
    r = std::max(r, max_abs(adj_val - val.adjoint()));
  }
  return r;
}

//==========================================================================
// Words
//==========================================================================

Word Word::scalar(const Mat& b) {
  Word w;
  w.trailing = b;
  return w;
}

Word Word::generator(int tag, int d) {
  Word w;
  w.letters.push_back(Letter{tag, Mat::Identity(d, d)});
  w.trailing = Mat::Identity(d, d);
  return w;
}

Word Word::adjoint() const {
  Word out;
  const int n = length();
  if (n == 0) {
    out.trailing = trailing.adjoint();
    return out;
  }
  out.letters.push_back(Letter{letters[n - 1].tag, trailing.adjoint()});
  for (int j = n - 1; j >= 1; --j)
    out.letters.push_back(Letter{letters[j - 1].tag, letters[j].left.adjoint()});
  out.trailing = letters[0].left.adjoint();
  return out;
}

Word word_concat(const Word& a, const Word& b) {
  Word out = a;
  if (b.letters.empty()) {
    out.trailing = a.trailing * b.trailing;
    return out;
  }
  out.letters.reserve(a.letters.size() + b.letters.size());
  for (const Letter& l : b.letters) out.letters.push_back(l);
  out.letters[a.letters.size()].left = a.trailing * b.letters[0].left;
  out.trailing = b.trailing;
  return out;
}

Word random_word(int d, int maxlen, int num_tags, Rng& rng) {
  Word w;
  const int n = rng.uniform_int(0, maxlen);
  for (int j = 0; j < n; ++j)
    w.letters.push_back(Letter{rng.uniform_int(1, num_tags), random_matrix(d, rng)});
  w.trailing = random_matrix(d, rng);
  return w;
}

//==========================================================================
// Monotone product evaluator
//==========================================================================

namespace {

Mat eval_single_tag(const Word& w, const MomentSpec& spec) {
  std::vector<Mat> coeffs;
  coeffs.reserve(w.letters.size() + 1);
  for (const Letter& l : w.letters) coeffs.push_back(l.left);
  coeffs.push_back(w.trailing);
  return spec.phi_word(coeffs);
}

}  // namespace

Mat monotone_eval_multi(const Word& w, const std::vector<MomentSpec>& phis) {
  if (w.letters.empty()) return w.trailing;
  int max_tag = 0;
  int min_tag = 1 << 30;
  for (const Letter& l : w.letters) {
    if (l.tag < 1 || l.tag > static_cast<int>(phis.size()))
      throw WrongAlgebra("tag " + std::to_string(l.tag));
    max_tag = std::max(max_tag, l.tag);
    min_tag = std::min(min_tag, l.tag);
  }
  if (min_tag == max_tag) return eval_single_tag(w, phis[max_tag - 1]);

  // Collapse every maximal run of the largest tag through its expectation.
  Word reduced;
  const int n = w.length();
  int j = 0;
  while (j < n) {
    if (w.letters[j].tag != max_tag) {
      reduced.letters.push_back(w.letters[j]);
      ++j;
      continue;
    }
    int k = j;
    std::vector<Mat> coeffs;
    while (k < n && w.letters[k].tag == max_tag) {
      coeffs.push_back(w.letters[k].left);
      ++k;
    }
    coeffs.push_back(Mat::Identity(w.trailing.rows(), w.trailing.cols()));
    Mat v = phis[max_tag - 1].phi_word(coeffs);
    if (k < n) {
      Letter next = w.letters[k];
      next.left = v * next.left;
      reduced.letters.push_back(next);
      j = k + 1;
    } else {
      reduced.trailing = v * w.trailing;
      return monotone_eval_multi(reduced, phis);
    }
  }
  reduced.trailing = w.trailing;
  return monotone_eval_multi(reduced, phis);
}

Mat monotone_eval(const Word& w, const MomentSpec& phi1, const MomentSpec& phi2) {
  return monotone_eval_multi(w, {phi1, phi2});
}

//==========================================================================
// Free / conditionally free evaluator
//==========================================================================

namespace {

struct Segment {
  int tag;
  std::vector<Mat> coeffs;
};

struct AltWord {
  std::vector<Segment> segs;
  Mat trailing;
};

AltWord canonicalize(const Word& w) {
  AltWord out;
  out.trailing = w.trailing;
  for (const Letter& l : w.letters) {
    if (!out.segs.empty() && out.segs.back().tag == l.tag)
      out.segs.back().coeffs.push_back(l.left);
    else
      out.segs.push_back(Segment{l.tag, {l.left}});
  }
  return out;
}

std::string word_key(const AltWord& w) {
  std::string key;
  auto push_mat = [&key](const Mat& m) {
    const char* p = reinterpret_cast<const char*>(m.data());
    key.append(p, sizeof(Complex) * m.size());
  };
  for (const Segment& s : w.segs) {
    key.push_back(static_cast<char>(s.tag));
    key.push_back(static_cast<char>(s.coeffs.size()));
    for (const Mat& c : s.coeffs) push_mat(c);
  }
  key.push_back('|');
  push_mat(w.trailing);
  return key;
}

Mat segment_value(const Segment& s, const MomentSpec& spec, int d) {
  std::vector<Mat> coeffs = s.coeffs;
  coeffs.push_back(Mat::Identity(d, d));
  return spec.phi_word(coeffs);
}

class ProductEvaluator {
 public:
  // target = the functional being computed (Phi for c-free, Psi for free);
  // centering = the pair used to center letters; crule_product selects the
  // conditionally-free rule for fully centered alternating words.
  ProductEvaluator(const std::vector<const MomentSpec*>& target,
                   const std::vector<const MomentSpec*>& centering,
                   bool crule_product, int d)
      : target_(target), centering_(centering), crule_product_(crule_product),
        d_(d) {}

  Mat eval(const AltWord& w) {
    if (w.segs.empty()) return w.trailing;
    const std::string key = word_key(w);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    Mat result;
    const int r = static_cast<int>(w.segs.size());
    if (r == 1) {
      std::vector<Mat> coeffs = w.segs[0].coeffs;
      coeffs.push_back(w.trailing);
      result = target_[w.segs[0].tag - 1]->phi_word(coeffs);
    } else {
      // Fully centered alternating term.
      if (crule_product_) {
        Mat acc = Mat::Identity(d_, d_);
        for (const Segment& s : w.segs) {
          Mat phi_v = segment_value(s, *target_[s.tag - 1], d_);
          Mat psi_v = segment_value(s, *centering_[s.tag - 1], d_);
          acc = acc * (phi_v - psi_v);
        }
        result = acc * w.trailing;
      } else {
        result = Mat::Zero(d_, d_);
      }
      // Inclusion-exclusion over nonempty subsets of scalar-replaced segments.
      for (int mask = 1; mask < (1 << r); ++mask) {
        AltWord reduced;
        Mat pend;
        bool have_pend = false;
        for (int j = 0; j < r; ++j) {
          if (mask & (1 << j)) {
            Mat psi_v = segment_value(w.segs[j], *centering_[w.segs[j].tag - 1], d_);
            pend = have_pend ? Mat(pend * psi_v) : psi_v;
            have_pend = true;
          } else {
            Segment s = w.segs[j];
            if (have_pend) {
              s.coeffs[0] = pend * s.coeffs[0];
              have_pend = false;
            }
            if (!reduced.segs.empty() && reduced.segs.back().tag == s.tag) {
              for (Mat& c : s.coeffs)
                reduced.segs.back().coeffs.push_back(std::move(c));
            } else {
              reduced.segs.push_back(std::move(s));
            }
          }
        }
        reduced.trailing = have_pend ? Mat(pend * w.trailing) : w.trailing;
        const int bits = __builtin_popcount(static_cast<unsigned>(mask));
        const double sign = (bits % 2 == 1) ? 1.0 : -1.0;
        result += sign * eval(reduced);
      }
    }
    memo_[key] = result;
    return result;
  }

 private:
  std::vector<const MomentSpec*> target_;
  std::vector<const MomentSpec*> centering_;
  bool crule_product_;
  int d_;
  std::unordered_map<std::string, Mat> memo_;
};

}  // namespace

Mat free_eval(const Word& w, const MomentSpec& psi1, const MomentSpec& psi2) {
  ProductEvaluator ev({&psi1, &psi2}, {&psi1, &psi2}, false, psi1.dim());
  return ev.eval(canonicalize(w));
}

Mat cfree_eval(const Word& w, const MomentSpec& phi1, const MomentSpec& phi2,
               const MomentSpec& psi1, const MomentSpec& psi2) {
  ProductEvaluator ev({&phi1, &phi2}, {&psi1, &psi2}, true, phi1.dim());
  return ev.eval(canonicalize(w));
}

Mat delta_eval(const Word& w) {
  for (const Letter& l : w.letters)
    if (l.tag != 1) throw WrongAlgebra("delta is defined on the first algebra");
  if (!w.letters.empty())
    return Mat::Zero(w.trailing.rows(), w.trailing.cols());
  return w.trailing;
}

//==========================================================================
// Verification helpers
//==========================================================================

double verify_monotone_equals_cfree(const MomentSpec& phi1,
                                    const MomentSpec& phi2, int trials,
                                    int maxlen, std::uint64_t seed) {
  if (maxlen > phi1.max_order() || maxlen > phi2.max_order())
    throw OrderExceeded("maxlen beyond spec order");
  const int d = phi1.dim();
  const MomentSpec dlt = MomentSpec::delta(d, std::max(phi1.max_order(), 1));
  std::vector<double> res(trials, 0.0);
  parallel_for(trials, [&](int t) {
    Rng rng(seed, t);
    Word w = random_word(d, maxlen, 2, rng);
    Mat lhs = monotone_eval(w, phi1, phi2);
    Mat rhs = cfree_eval(w, phi1, phi2, dlt, phi2);
    res[t] = max_abs(lhs - rhs);
  });
  return *std::max_element(res.begin(), res.end());
}

double monotone_independence_residual(const MomentSpec& phi1,
                                      const MomentSpec& phi2, int trials,
                                      int maxlen, std::uint64_t seed) {
  const int d = phi1.dim();
  auto mono = [&](const Word& w) { return monotone_eval(w, phi1, phi2); };
  auto rand_letter_word = [&](int tag, Rng& rng) {
    Word w;
    const int n = rng.uniform_int(1, 2);
    for (int j = 0; j < n; ++j)
      w.letters.push_back(Letter{tag, random_matrix(d, rng)});
    w.trailing = random_matrix(d, rng);
    return w;
  };
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed, t);
    // (a): middle tag-2 factor collapses through Phi.
    Word xi = rand_letter_word(1, rng);
    Word xj = rand_letter_word(2, rng);
    Word xk = rand_letter_word(1, rng);
    Word a = random_word(d, std::max(0, (maxlen - 4) / 2), 2, rng);
    Word b = random_word(d, std::max(0, (maxlen - 4) / 2), 2, rng);
    Word lhs_w = word_concat(word_concat(word_concat(word_concat(a, xi), xj), xk), b);
    Word rhs_w = word_concat(
        word_concat(word_concat(word_concat(a, xi), Word::scalar(mono(xj))), xk),
        b);
    worst = std::max(worst, max_abs(mono(lhs_w) - mono(rhs_w)));

    // (b): ordered factorizations with indices from {1, 2}.
    Word x2 = rand_letter_word(2, rng);
    Word x1 = rand_letter_word(1, rng);
    Word x2b = rand_letter_word(2, rng);
    Mat dec = mono(word_concat(x2, x1));
    worst = std::max(worst, max_abs(dec - mono(x2) * mono(x1)));
    Mat inc = mono(word_concat(x1, x2));
    worst = std::max(worst, max_abs(inc - mono(x1) * mono(x2)));
    Mat mix = mono(word_concat(word_concat(x2, x1), x2b));
    worst = std::max(worst, max_abs(mix - mono(x2) * mono(x1) * mono(x2b)));
  }
  return worst;
}

Mat gram_matrix(const WordEval& eval, const std::vector<Word>& words, int d) {
  const int n = static_cast<int>(words.size());
  Mat g(n * d, n * d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g.block(i * d, j * d, d, d) = eval(word_concat(words[i].adjoint(), words[j]));
  return g;
}

bool spec_positive(const MomentSpec& spec, int n_words, int maxlen,
                   std::uint64_t seed, double tol) {
  Rng rng(seed);
  std::vector<Word> words;
  words.push_back(Word::scalar(Mat::Identity(spec.dim(), spec.dim())));
  for (int i = 1; i < n_words; ++i)
    words.push_back(random_word(spec.dim(), maxlen, 1, rng));
  auto eval = [&spec](const Word& w) { return eval_single_tag(w, spec); };
  Mat g = gram_matrix(eval, words, spec.dim());
  return min_eigenvalue(g) >= -tol;
}

bool gram_psd_check(const WordEval& eval, const std::vector<Word>& words,
                    int d, double tol,
                    const std::vector<const MomentSpec*>& input_specs) {
  int which = 0;
  for (const MomentSpec* spec : input_specs) {
    ++which;
    const int maxlen = std::max(1, spec->max_order() / 2 - 1);
    if (!spec_positive(*spec, 4, maxlen, 12345 + which))
      throw NonPositiveInput("input spec " + std::to_string(which) +
                             " fails its own Gram test");
  }
  Mat g = gram_matrix(eval, words, d);
  return min_eigenvalue(g) >= -tol;
}

Mat mixed_gram(const MomentSpec& phi1, const MomentSpec& phi2,
               const std::vector<Word>& a_tag1, const std::vector<Word>& b_tag2) {
  const int d = phi1.dim();
  const int n = static_cast<int>(a_tag1.size());
  const int m = static_cast<int>(b_tag2.size());
  auto phival = [&](const Word& w, const MomentSpec& spec) {
    return eval_single_tag(w, spec);
  };
  Mat g((n + m) * d, (n + m) * d);
  for (int i = 0; i < n + m; ++i) {
    for (int j = 0; j < n + m; ++j) {
      Mat block;
      if (i < n && j < n)
        block = phival(word_concat(a_tag1[i].adjoint(), a_tag1[j]), phi1);
      else if (i < n && j >= n)
        block = phival(a_tag1[i].adjoint(), phi1) * phival(b_tag2[j - n], phi2);
      else if (i >= n && j < n)
        block = phival(b_tag2[i - n].adjoint(), phi2) * phival(a_tag1[j], phi1);
      else
        block = phival(word_concat(b_tag2[i - n].adjoint(), b_tag2[j - n]), phi2);
      g.block(i * d, j * d, d, d) = block;
    }
  }
  return g;
}

}  // namespace monopro
