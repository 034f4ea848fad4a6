#include <doctest.h>

#include "monopro/fock.hpp"
#include "monopro/runners.hpp"

using namespace monopro;

namespace {

ModulePtr weak_module(int d, int K, int L, std::uint64_t seed = 0) {
  if (seed == 0)
    return std::make_shared<const ModuleSpec>(
        ModuleSpec::identity_etas(d, K, L, FockMode::kWeaklyMonotone));
  Rng rng(seed);
  std::vector<CPMap> etas;
  for (int i = 0; i < K; ++i) etas.push_back(CPMap::random(d, 2, rng));
  return std::make_shared<const ModuleSpec>(d, K, L, FockMode::kWeaklyMonotone,
                                            etas);
}

ModulePtr mono_module(int d, int K, int L, std::uint64_t seed = 0) {
  if (seed == 0)
    return std::make_shared<const ModuleSpec>(
        ModuleSpec::identity_etas(d, K, L, FockMode::kMonotone));
  Rng rng(seed);
  std::vector<CPMap> etas;
  for (int i = 0; i < K; ++i) etas.push_back(CPMap::random(d, 2, rng));
  return std::make_shared<const ModuleSpec>(d, K, L, FockMode::kMonotone, etas);
}

FockVec gen_vector(ModulePtr spec, const GenVec& f) {
  return apply(FockOp::create(f), FockVec::vacuum(spec));
}

}  // namespace

TEST_CASE("vacuum normalization and single-generator inner product") {
  auto spec = weak_module(2, 2, 4);
  FockVec vac = FockVec::vacuum(spec);
  CHECK(max_abs(inner(vac, vac) - Mat::Identity(2, 2)) == 0.0);

  Rng rng(3);
  Mat a = random_matrix(2, rng), b = random_matrix(2, rng);
  FockVec va = gen_vector(spec, GenVec::elementary(1, a, Mat::Identity(2, 2)));
  FockVec vb = gen_vector(spec, GenVec::elementary(1, b, Mat::Identity(2, 2)));
  // eta = identity: <a zeta, b zeta> = a* b
  CHECK(max_abs(inner(va, vb) - a.adjoint() * b) <= 1e-12);
}

TEST_CASE("degenerate vector of the monotonic product") {
  // <f1, f1> = b* b with b f2 = 0 makes f1 (x) f2 null without being zero.
  auto spec = weak_module(2, 1, 4);
  Mat b = Mat::Zero(2, 2);
  b(0, 0) = 1.0;
  Mat u = Mat::Zero(2, 2);
  u(1, 1) = 1.0;  // b u = 0
  GenVec f1 = GenVec::elementary(1, b, Mat::Identity(2, 2));
  GenVec f2 = GenVec::elementary(1, u, Mat::Identity(2, 2));
  FockVec v = apply(FockOp::create(f1) * FockOp::create(f2), FockVec::vacuum(spec));
  CHECK(v.max_abs_coeff() > 0.5);           // the vector itself is nonzero
  CHECK(max_abs(inner(v, v)) <= 1e-14);     // but has zero length
}

TEST_CASE("creation rules by mode") {
  auto weak = weak_module(2, 2, 4);
  auto mono = mono_module(2, 2, 4);
  GenVec z1 = GenVec::zeta(1, 2), z2 = GenVec::zeta(2, 2);

  // a*(f) 1 = f
  FockVec created = apply(FockOp::create(z1), FockVec::vacuum(weak));
  CHECK(created.comps().count({1}) == 1);
  CHECK(created.comps().size() == 1);

  // weakly monotone: prepending a smaller index annihilates the component
  FockVec v2 = gen_vector(weak, z2);
  CHECK(apply(FockOp::create(z1), v2).max_abs_coeff() == 0.0);

  // weakly monotone allows repeats; strict monotone does not
  FockVec w2 = gen_vector(weak, z2);
  CHECK(apply(FockOp::create(z2), w2).comps().count({2, 2}) == 1);
  FockVec m2 = gen_vector(mono, z2);
  CHECK(apply(FockOp::create(z2), m2).max_abs_coeff() == 0.0);
  CHECK(apply(FockOp::create(z1), m2).max_abs_coeff() == 0.0);
  FockVec m1 = gen_vector(mono, z1);
  CHECK(apply(FockOp::create(z2), m1).comps().count({2, 1}) == 1);
}

TEST_CASE("annihilation rules") {
  auto spec = weak_module(2, 2, 4);
  GenVec z1 = GenVec::zeta(1, 2), z2 = GenVec::zeta(2, 2);

  CHECK(apply(FockOp::annihilate(z1), FockVec::vacuum(spec)).max_abs_coeff() ==
        0.0);

  FockVec v1 = gen_vector(spec, z1);
  FockVec out = apply(FockOp::annihilate(z1), v1);
  CHECK(max_abs(out.depth0() - Mat::Identity(2, 2)) <= 1e-14);

  // mismatched leading index
  FockVec v21 = apply(FockOp::create(z2), gen_vector(spec, z1));
  CHECK(v21.comps().count({2, 1}) == 1);
  CHECK(apply(FockOp::annihilate(z1), v21).max_abs_coeff() == 0.0);
}

TEST_CASE("adjointness of creation and annihilation") {
  for (auto mode_seed : {std::pair<int, int>{0, 101}, {1, 102}}) {
    auto spec = mode_seed.first == 0 ? weak_module(2, 3, 4, 5)
                                     : mono_module(2, 3, 4, 6);
    Rng rng(mode_seed.second);
    for (int t = 0; t < 20; ++t) {
      GenVec f = GenVec::random(rng.uniform_int(1, 3), 2, rng);
      FockVec v = FockVec::random(spec, 3, rng);
      FockVec w = FockVec::random(spec, 3, rng);
      Mat lhs = inner(apply(FockOp::create(f), v), w);
      Mat rhs = inner(v, apply(FockOp::annihilate(f), w));
      CHECK(max_abs(lhs - rhs) <= 1e-10 * std::max(1.0, max_abs(lhs)));
    }
  }
}

TEST_CASE("semi-inner-product axioms") {
  auto spec = weak_module(2, 2, 4, 7);
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    FockVec x = FockVec::random(spec, 3, rng);
    FockVec y = FockVec::random(spec, 3, rng);
    Complex alpha(rng.gaussian(), rng.gaussian());

    // (i) linearity in the second argument
    Mat lin = inner(x, y * alpha);
    CHECK(max_abs(lin - alpha * inner(x, y)) <= 1e-10);
    // (ii) right module action
    Mat a = random_matrix(2, rng);
    CHECK(max_abs(inner(x, rmul_vec(y, a)) - inner(x, y) * a) <= 1e-9);
    // (iii) conjugate symmetry
    CHECK(max_abs(inner(y, x) - inner(x, y).adjoint()) <= 1e-10);
    // (iv) positivity
    CHECK(min_eigenvalue(inner(x, x)) >= -1e-10);
  }
}

TEST_CASE("gaussian operator moments on the scalar module") {
  auto spec = weak_module(1, 1, 8);
  GenVec z = GenVec::zeta(1, 1);
  FockOp g = FockOp::gauss(z);

  // G(f) 1 = f
  FockVec gv = apply(g, FockVec::vacuum(spec));
  CHECK(gv.comps().count({1}) == 1);
  CHECK(max_abs(gv.depth0()) == 0.0);

  // Phi(G^{2k}) = Catalan numbers 1, 1, 2, 5; odd moments vanish
  FockOp word = FockOp::identity();
  std::vector<double> expect{1.0, 0.0, 1.0, 0.0, 2.0, 0.0, 5.0};
  for (int n = 0; n <= 6; ++n) {
    Mat phi = vacuum_phi(spec, word);
    CHECK(std::abs(phi(0, 0).real() - expect[n]) <= 1e-12);
    CHECK(std::abs(phi(0, 0).imag()) <= 1e-14);
    word = word * g;
  }
}

TEST_CASE("vacuum functional words") {
  auto spec = weak_module(2, 2, 6, 11);
  Rng rng(13);
  CHECK(max_abs(vacuum_phi(spec, FockOp::identity()) - Mat::Identity(2, 2)) ==
        0.0);

  // Phi(a(f) a*(g)) = <f, g>
  GenVec f = GenVec::random(1, 2, rng), g = GenVec::random(1, 2, rng);
  Mat lhs = vacuum_phi(spec, FockOp::annihilate(f) * FockOp::create(g));
  CHECK(max_abs(lhs - genvec_pair(*spec, f, g)) <= 1e-12);

  // odd mixed word vanishes: Phi(G1 G2 G1) = 0 (scalar module, identity eta)
  auto s1 = weak_module(1, 2, 6);
  FockOp g1 = FockOp::gauss(GenVec::zeta(1, 1));
  FockOp g2 = FockOp::gauss(GenVec::zeta(2, 1));
  CHECK(max_abs(vacuum_phi(s1, g1 * g2 * g1)) == 0.0);

  // budget refusal
  FockOp deep = FockOp::identity();
  for (int i = 0; i < 7; ++i) deep = deep * g1;
  CHECK_THROWS_AS(vacuum_phi(s1, deep), DepthBudgetExceeded);
}

TEST_CASE("truncation exactness within the depth budget") {
  // a moment of word length <= L matches the same moment on a deeper module
  Rng rng(17);
  auto shallow = weak_module(2, 2, 4, 19);
  auto deep = std::make_shared<const ModuleSpec>(2, 2, 9, FockMode::kWeaklyMonotone,
                                                 shallow->etas);
  FockOp word = FockOp::identity();
  for (int i = 0; i < 4; ++i) {
    word = word * FockOp::lmul(random_matrix(2, rng)) *
           FockOp::gauss(GenVec::random(rng.uniform_int(1, 2), 2, rng));
  }
  CHECK(max_abs(vacuum_phi(shallow, word) - vacuum_phi(deep, word)) == 0.0);
}

TEST_CASE("lambda embedding") {
  auto spec = mono_module(2, 3, 4, 23);
  const int d = 2;
  Rng rng(29);

  // identity SmallOp: identity on components with leading index <= i, zero above
  SmallOp id_op = SmallOp::identity(d);
  FockVec v(spec);
  Rng vr(31);
  v += FockVec::random(spec, 0, vr);  // vacuum component
  v += gen_vector(spec, GenVec::random(1, d, vr));
  v += gen_vector(spec, GenVec::random(2, d, vr));
  v += gen_vector(spec, GenVec::random(3, d, vr));
  FockVec out = apply(FockOp::lambda(2, id_op), v);
  for (const auto& [w, t] : v.comps()) {
    if (!w.empty() && w.front() > 2) {
      CHECK(out.comps().count(w) == 0);
    } else {
      REQUIRE(out.comps().count(w) == 1);
      CHECK(max_abs(CVec(out.comps().at(w) - t)) <= 1e-12);
    }
  }

  // lambda_1(A) kills components with leading index 2
  SmallOp a = SmallOp::random(d, rng);
  FockVec z2 = gen_vector(spec, GenVec::zeta(2, d));
  CHECK(apply(FockOp::lambda(1, a), z2).max_abs_coeff() == 0.0);

  // Phi(lambda_i(A)) = <1, A 1> = A_00
  Mat phi = vacuum_phi(spec, FockOp::lambda(2, a));
  CHECK(max_abs(phi - a.block[0][0]) <= 1e-13);

  // weakly monotone module rejects the embedding
  auto weak = weak_module(2, 2, 4);
  CHECK_THROWS_AS(apply(FockOp::lambda(1, a), FockVec::vacuum(weak)), ModeError);
}

TEST_CASE("E^wm(i) invariance and the vanishing lemma") {
  auto spec = weak_module(2, 3, 6, 37);
  Rng rng(41);

  // invariance: words with indices <= 2 stay <= 2 under the index-2 algebra
  FockVec v(spec);
  v += gen_vector(spec, GenVec::random(2, 2, rng));
  v += gen_vector(spec, GenVec::random(1, 2, rng));
  FockOp x = random_algebra_element(*spec, 2, 2, rng);
  FockVec xv = apply(x, v);
  for (const auto& [w, t] : xv.comps())
    for (int idx : w) CHECK(idx <= 2);

  // vanishing: X in the index-1 ideal kills F_0(E_2) (x) E^wm(k), k < 2
  FockVec v2 = gen_vector(spec, GenVec::random(2, 2, rng));
  FockVec v21 = apply(FockOp::create(GenVec::random(2, 2, rng)),
                      gen_vector(spec, GenVec::random(1, 2, rng)));
  FockOp ideal_word = FockOp::gauss(GenVec::random(1, 2, rng)) *
                      FockOp::gauss(GenVec::random(1, 2, rng));
  CHECK(apply(ideal_word, v2).max_abs_coeff() == 0.0);
  CHECK(apply(ideal_word, v21).max_abs_coeff() == 0.0);
}

TEST_CASE("monotone independence of both constructions") {
  auto weak = weak_module(2, 3, 6, 43);
  IndependenceReport weak_rep = check_monotone_independence(weak, 25, 47);
  CHECK(weak_rep.pass(1e-9));

  auto mono = mono_module(2, 3, 6, 53);
  IndependenceReport mono_rep = check_monotone_independence(mono, 25, 59);
  CHECK(mono_rep.pass(1e-9));
}

TEST_CASE("independence report is vacuous for a single algebra") {
  auto spec = weak_module(2, 1, 6, 61);
  IndependenceReport rep = check_monotone_independence(spec, 10, 67);
  CHECK(rep.max_violation_a == 0.0);
  CHECK(rep.max_violation() <= 1e-12);
}

TEST_CASE("normal form of creation/annihilation words") {
  auto spec = weak_module(2, 2, 6, 71);
  Rng rng(73);
  const int idx = 1;

  // P = a*(f): pure creation
  {
    GenVec f = GenVec::random(idx, 2, rng);
    // expand G-free directly: use the lemma path on the 1-factor product
    NormalFormResult nf = normal_form(*spec, {f});
    // G(f) = a(f) + a*(f): creation part {f}, annihilation part {f}
    CHECK(nf.creation.size() == 1);
    CHECK(nf.annihilation.size() == 1);
    CHECK(nf.mixed.empty());
    CHECK(max_abs(nf.scalar) == 0.0);
  }

  // P = G(f) G(g): Phi(P) = <f, g>, one of each part
  {
    GenVec f = GenVec::random(idx, 2, rng), g = GenVec::random(idx, 2, rng);
    NormalFormResult nf = normal_form(*spec, {f, g});
    CHECK(max_abs(nf.scalar - genvec_pair(*spec, f, g)) <= 1e-12);
    CHECK(nf.creation.size() == 1);      // a*(f) a*(g)
    CHECK(nf.annihilation.size() == 1);  // a(f) a(g)
    CHECK(nf.mixed.size() == 1);         // a*(f) a(g)
    CHECK(max_abs(nf.scalar - vacuum_phi(spec, FockOp::gauss(f) * FockOp::gauss(g))) <=
          1e-12);
  }

  // operator-sum equality on vectors supported in E^wm(idx)
  for (int t = 0; t < 5; ++t) {
    const int n = 3;
    std::vector<GenVec> fs;
    FockOp p = FockOp::identity();
    for (int l = 0; l < n; ++l) {
      fs.push_back(GenVec::random(idx, 2, rng));
      p = p * FockOp::gauss(fs[l]);
    }
    NormalFormResult nf = normal_form(*spec, fs);
    CHECK(max_abs(nf.scalar - vacuum_phi(spec, p)) <= 1e-10);

    auto sub = weak_module(2, 1, 6, 71);  // only index-1 words
    FockVec v = FockVec::random(sub, 2, rng);
    FockVec on_spec(spec);
    for (const auto& [w, tz] : v.comps()) on_spec.add_component(w, tz);
    FockVec lhs = apply(p, on_spec);
    FockVec rhs = apply(nf.as_op(), on_spec);
    CHECK(lhs.residual(rhs) <= 1e-9);
  }
}

TEST_CASE("strict middle-collapse identity (a') on random vectors") {
  for (bool weak : {true, false}) {
    auto spec = weak ? weak_module(2, 3, 7, 79) : mono_module(2, 3, 7, 83);
    Rng rng(89);
    for (int t = 0; t < 10; ++t) {
      FockOp xi = random_algebra_element(*spec, 1, 1, rng);
      FockOp xj = random_algebra_element(*spec, rng.uniform_int(2, 3), 1, rng);
      FockOp xk = random_algebra_element(*spec, 1, 1, rng);
      Mat phi_j = vacuum_phi(spec, xj);
      FockVec v = FockVec::random(spec, 4, rng);
      FockVec lhs = apply(xi * xj * xk, v);
      FockVec rhs = apply(xi * FockOp::lmul(phi_j) * xk, v);
      CHECK(lhs.residual(rhs) <= 1e-9 * std::max(1.0, lhs.max_abs_coeff()));
    }
  }
}
