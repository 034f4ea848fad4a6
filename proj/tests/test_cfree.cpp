#include <doctest.h>

#include "monopro/cfree.hpp"
#include "monopro/runners.hpp"

using namespace monopro;

namespace {

Word letter(int tag, const Mat& left, const Mat& trailing) {
  Word w;
  w.letters.push_back(Letter{tag, left});
  w.trailing = trailing;
  return w;
}

}  // namespace

TEST_CASE("moment spec basics and bilinearity") {
  MomentSpec spec = fock_moment_spec(2, 5, 11);
  Rng rng(3);
  Mat c0 = random_matrix(2, rng);
  CHECK(max_abs(spec.phi_word({c0}) - c0) == 0.0);

  // B-bilinearity: Phi(b w b') = b Phi(w) b'
  Mat b = random_matrix(2, rng), bp = random_matrix(2, rng);
  std::vector<Mat> coeffs{random_matrix(2, rng), random_matrix(2, rng),
                          random_matrix(2, rng)};
  std::vector<Mat> framed = coeffs;
  framed.front() = b * framed.front();
  framed.back() = framed.back() * bp;
  CHECK(max_abs(spec.phi_word(framed) - b * spec.phi_word(coeffs) * bp) <=
        1e-10);

  CHECK(spec.hermitian_symmetry_residual(25, 5) <= 1e-9);
  CHECK_THROWS_AS(spec.phi_word(std::vector<Mat>(8, Mat::Identity(2, 2))),
                  OrderExceeded);
}

TEST_CASE("word adjoint and concatenation") {
  Rng rng(5);
  Word w = random_word(2, 3, 2, rng);
  Word ww = w.adjoint().adjoint();
  REQUIRE(ww.length() == w.length());
  for (int i = 0; i < w.length(); ++i) {
    CHECK(ww.letters[i].tag == w.letters[i].tag);
    CHECK(max_abs(ww.letters[i].left - w.letters[i].left) == 0.0);
  }
  CHECK(max_abs(ww.trailing - w.trailing) == 0.0);

  // spec consistency: Phi(w*) = Phi(w)* on a single-tag word
  MomentSpec spec = fock_moment_spec(2, 6, 13);
  Word v = random_word(2, 3, 1, rng);
  auto phiv = [&](const Word& u) {
    std::vector<Mat> coeffs;
    for (const Letter& l : u.letters) coeffs.push_back(l.left);
    coeffs.push_back(u.trailing);
    return spec.phi_word(coeffs);
  };
  CHECK(max_abs(phiv(v.adjoint()) - phiv(v).adjoint()) <= 1e-10);
}

TEST_CASE("monotone product evaluator") {
  MomentSpec phi1 = fock_moment_spec(2, 6, 17);
  MomentSpec phi2 = fock_moment_spec(2, 6, 19);
  Rng rng(7);
  const Mat id = Mat::Identity(2, 2);

  // empty word, pure coefficient
  Mat b = random_matrix(2, rng);
  CHECK(max_abs(monotone_eval(Word::scalar(b), phi1, phi2) - b) == 0.0);

  // w = a1 b a2 with a's the tag-1 generator: Phi_1(x Phi_2(b) x) with
  // Phi_2(b) = b for a pure coefficient
  Word w;
  w.letters.push_back(Letter{1, id});
  w.letters.push_back(Letter{1, b});
  w.trailing = id;
  CHECK(max_abs(monotone_eval(w, phi1, phi2) - phi1.phi_word({id, b, id})) ==
        0.0);

  // single tag-2 letter collapses through Phi_2
  Word w2 = letter(2, id, id);
  CHECK(max_abs(monotone_eval(w2, phi1, phi2) - phi2.phi_word({id, id})) ==
        0.0);

  // tag-2 runs collapse in the middle: x1 x2 x1 pattern
  Word w121 = word_concat(word_concat(Word::generator(1, 2), Word::generator(2, 2)),
                          Word::generator(1, 2));
  Mat phi_x2 = phi2.phi_word({id, id});
  Word w1b1;
  w1b1.letters.push_back(Letter{1, id});
  w1b1.letters.push_back(Letter{1, phi_x2});
  w1b1.trailing = id;
  CHECK(max_abs(monotone_eval(w121, phi1, phi2) -
                monotone_eval(w1b1, phi1, phi2)) <= 1e-12);
}

TEST_CASE("delta expectation") {
  Rng rng(11);
  Mat b = random_matrix(2, rng), bp = random_matrix(2, rng);
  CHECK(max_abs(delta_eval(Word::scalar(b)) - b) == 0.0);
  CHECK(max_abs(delta_eval(Word::generator(1, 2))) == 0.0);
  Word bxb = letter(1, b, bp);
  CHECK(max_abs(delta_eval(bxb)) == 0.0);
  CHECK_THROWS_AS(delta_eval(Word::generator(2, 2)), WrongAlgebra);
}

TEST_CASE("free product evaluator") {
  const int d = 2;
  const Mat id = Mat::Identity(d, d);
  // psi with zero mean: pure Gaussian generator
  MomentSpec psi1 = MomentSpec::from_handle(
      FockElement(std::make_shared<const ModuleSpec>(
                      ModuleSpec::identity_etas(d, 1, 6, FockMode::kWeaklyMonotone)),
                  FockOp::gauss(GenVec::zeta(1, d))),
      6);
  MomentSpec psi2 = fock_moment_spec(d, 6, 23);

  // single centered letter evaluates to zero
  CHECK(max_abs(free_eval(Word::generator(1, d), psi1, psi2)) <= 1e-14);

  // alternating centered letters vanish: center psi2's generator by hand
  Mat mean2 = psi2.phi_word({id, id});
  Word w;
  w.letters.push_back(Letter{1, id});
  w.letters.push_back(Letter{2, id});
  w.trailing = id;
  // Psi(x1 (x2 - mean2)) = Psi(x1 x2) - Psi(x1) mean2 = 0 - 0
  Mat v = free_eval(w, psi1, psi2);
  Word w1 = Word::generator(1, d);
  CHECK(max_abs(v - free_eval(w1, psi1, psi2) * mean2) <= 1e-12);

  // uncentered product: Psi(x1 x2) = Psi(x1) Psi(x2) (here Psi(x1) = 0)
  CHECK(max_abs(v) <= 1e-12);

  // general: free = cfree with (Psi, Psi)
  Rng rng(29);
  for (int t = 0; t < 30; ++t) {
    Word u = random_word(d, 5, 2, rng);
    CHECK(max_abs(free_eval(u, psi1, psi2) -
                  cfree_eval(u, psi1, psi2, psi1, psi2)) <= 1e-12);
  }
}

TEST_CASE("conditionally free evaluator") {
  const int d = 2;
  const Mat id = Mat::Identity(d, d);
  MomentSpec phi1 = fock_moment_spec(d, 6, 31);
  MomentSpec phi2 = fock_moment_spec(d, 6, 37);
  MomentSpec psi1 = fock_moment_spec(d, 6, 41);
  MomentSpec psi2 = fock_moment_spec(d, 6, 43);

  // single letter evaluates through Phi_j
  CHECK(max_abs(cfree_eval(Word::generator(1, d), phi1, phi2, psi1, psi2) -
                phi1.phi_word({id, id})) <= 1e-12);
  CHECK(max_abs(cfree_eval(Word::generator(2, d), phi1, phi2, psi1, psi2) -
                phi2.phi_word({id, id})) <= 1e-12);

  // Psi-centered alternating pair: Phi(a1 a2) = Phi(a1) Phi(a2)
  // realize centered letters via explicit subtraction identities:
  //   Phi(x1 x2) = Phi(å1 å2) + Phi(x1) psi2 + psi1 Phi(x2) - psi1 psi2
  Mat psi1v = psi1.phi_word({id, id});
  Mat psi2v = psi2.phi_word({id, id});
  Mat phi1v = phi1.phi_word({id, id});
  Mat phi2v = phi2.phi_word({id, id});
  Word w12 = word_concat(Word::generator(1, d), Word::generator(2, d));
  Mat lhs = cfree_eval(w12, phi1, phi2, psi1, psi2);
  Mat expected = (phi1v - psi1v) * (phi2v - psi2v) + phi1v * psi2v +
                 psi1v * phi2v - psi1v * psi2v;
  CHECK(max_abs(lhs - expected) <= 1e-12);
}

TEST_CASE("monotone product equals the (delta, Phi2) conditionally free product") {
  MomentSpec phi1 = fock_moment_spec(2, 6, 47);
  MomentSpec phi2 = fock_moment_spec(2, 6, 53);

  // words entirely in one algebra
  const MomentSpec dlt = MomentSpec::delta(2, 6);
  Rng rng(59);
  for (int t = 0; t < 10; ++t) {
    Word w = random_word(2, 4, 1, rng);
    CHECK(max_abs(monotone_eval(w, phi1, phi2) -
                  cfree_eval(w, phi1, phi2, dlt, phi2)) <= 1e-11);
  }

  CHECK(verify_monotone_equals_cfree(phi1, phi2, 80, 6, 61) <= 1e-9);
}

TEST_CASE("abstract Def-2.1 independence under the monotone product") {
  MomentSpec phi1 = fock_moment_spec(2, 8, 67);
  MomentSpec phi2 = fock_moment_spec(2, 8, 71);
  CHECK(monotone_independence_residual(phi1, phi2, 40, 8, 73) <= 1e-9);
}

TEST_CASE("B-bilinearity of the evaluators") {
  MomentSpec phi1 = fock_moment_spec(2, 6, 79);
  MomentSpec phi2 = fock_moment_spec(2, 6, 83);
  Rng rng(89);
  for (int t = 0; t < 10; ++t) {
    Word w = random_word(2, 4, 2, rng);
    Mat b = random_matrix(2, rng), bp = random_matrix(2, rng);
    Word framed = w;
    if (framed.letters.empty()) {
      framed.trailing = b * framed.trailing * bp;
    } else {
      framed.letters.front().left = b * framed.letters.front().left;
      framed.trailing = framed.trailing * bp;
    }
    CHECK(max_abs(monotone_eval(framed, phi1, phi2) -
                  b * monotone_eval(w, phi1, phi2) * bp) <= 1e-10);
    CHECK(max_abs(free_eval(framed, phi1, phi2) -
                  b * free_eval(w, phi1, phi2) * bp) <= 1e-10);
    CHECK(max_abs(cfree_eval(framed, phi1, phi2, phi1, phi2) -
                  b * cfree_eval(w, phi1, phi2, phi1, phi2) * bp) <= 1e-10);
  }
}

TEST_CASE("gram positivity") {
  const int d = 2;
  MomentSpec phi1 = fock_moment_spec(d, 6, 97);
  MomentSpec phi2 = fock_moment_spec(d, 6, 101);
  const Mat id = Mat::Identity(d, d);

  // words = {1}: Gram = [Phi(1)] = I
  auto mono = [&](const Word& w) { return monotone_eval(w, phi1, phi2); };
  Mat g1 = gram_matrix(mono, {Word::scalar(id)}, d);
  CHECK(max_abs(g1 - id) == 0.0);

  // words = {b}: [b* b]
  Rng rng(103);
  Mat b = random_matrix(d, rng);
  Mat gb = gram_matrix(mono, {Word::scalar(b)}, d);
  CHECK(max_abs(gb - b.adjoint() * b) <= 1e-13);

  // monotone product of positive specs: PSD over random words
  std::vector<Word> words{Word::scalar(id)};
  for (int i = 0; i < 7; ++i) words.push_back(random_word(d, 3, 2, rng));
  CHECK(gram_psd_check(mono, words, d, 1e-8, {&phi1, &phi2}));

  // tampered spec fails its own Gram test
  MomentSpec bad = phi1;
  bad.moment_matrix(2) = -10.0 * Mat::Identity(d * d, d * d);
  auto bad_eval = [&](const Word& w) { return monotone_eval(w, bad, phi2); };
  CHECK_THROWS_AS(gram_psd_check(bad_eval, words, d, 1e-8, {&bad, &phi2}),
                  NonPositiveInput);
}

TEST_CASE("mixed gram block matrix") {
  const int d = 2;
  MomentSpec phi1 = fock_moment_spec(d, 6, 107);
  MomentSpec phi2 = fock_moment_spec(d, 6, 109);
  const Mat id = Mat::Identity(d, d);
  Rng rng(113);

  // n = 1, m = 0: [Phi_1(a* a)] is PSD
  Word a = random_word(d, 2, 1, rng);
  Mat g = mixed_gram(phi1, phi2, {a}, {});
  CHECK(min_eigenvalue(g) >= -1e-10);

  // a = b = {1}: every block is the identity
  Word one = Word::scalar(id);
  Word one2 = one;
  Mat g2 = mixed_gram(phi1, phi2, {one}, {one2});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(max_abs(Mat(g2.block(i * d, j * d, d, d)) - id) <= 1e-13);

  // random instance, n = m = 3
  std::vector<Word> as, bs;
  for (int i = 0; i < 3; ++i) {
    as.push_back(random_word(d, 2, 1, rng));
    Word bw = random_word(d, 2, 1, rng);
    for (Letter& l : bw.letters) l.tag = 2;
    bs.push_back(bw);
  }
  Mat g3 = mixed_gram(phi1, phi2, as, bs);
  CHECK(min_eigenvalue(g3) >= -1e-8);
}
