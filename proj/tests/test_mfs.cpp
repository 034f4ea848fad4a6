#include <doctest.h>

#include "monopro/mfs.hpp"
#include "monopro/runners.hpp"

using namespace monopro;

namespace {

std::vector<Mat> random_slots(int d, int n, Rng& rng) {
  std::vector<Mat> slots;
  for (int i = 0; i < n; ++i) slots.push_back(random_matrix(d, rng));
  return slots;
}

}  // namespace

TEST_CASE("multimap evaluation is multilinear") {
  Rng rng(3);
  const int d = 2, n = 3;
  Series f = Series::random(d, n, rng);
  auto slots = random_slots(d, n, rng);
  Complex lambda(0.7, -0.2);
  auto scaled = slots;
  scaled[1] = lambda * slots[1];
  CHECK(max_abs(f.eval_term(n, scaled) - lambda * f.eval_term(n, slots)) <=
        1e-10);
  auto shifted = slots;
  Mat extra = random_matrix(d, rng);
  shifted[2] = slots[2] + extra;
  auto only_extra = slots;
  only_extra[2] = extra;
  CHECK(max_abs(f.eval_term(n, shifted) - f.eval_term(n, slots) -
                f.eval_term(n, only_extra)) <= 1e-9);
}

TEST_CASE("series_add examples and slot-evaluation oracle") {
  Rng rng(5);
  const int d = 2, order = 3;
  Series f = Series::random(d, order, rng);
  Series zero(d, order);
  CHECK(series_add(f, zero).residual(f) == 0.0);
  CHECK(series_add(f, -f).residual(zero) == 0.0);

  Series g = Series::random(d, order, rng);
  Series sum = series_add(f, g);
  for (int n = 1; n <= order; ++n) {
    auto slots = random_slots(d, n, rng);
    CHECK(max_abs(sum.eval_term(n, slots) - f.eval_term(n, slots) -
                  g.eval_term(n, slots)) <= 1e-9);
  }
}

TEST_CASE("formal product: identity element and degree-2 expansion") {
  Rng rng(7);
  const int d = 2, order = 4;
  Series f = Series::random(d, order, rng);
  Series one = Series::one(d, order);
  CHECK(series_mul(one, f).residual(f) <= 1e-14);
  CHECK(series_mul(f, one).residual(f) <= 1e-14);

  Series g = Series::random(d, order, rng);
  Series prod = series_mul(f, g);
  Mat b1 = random_matrix(d, rng), b2 = random_matrix(d, rng);
  Mat expanded = f.constant_term() * g.eval_term(2, {b1, b2}) +
                 f.eval_term(1, {b1}) * g.eval_term(1, {b2}) +
                 f.eval_term(2, {b1, b2}) * g.constant_term();
  CHECK(max_abs(prod.eval_term(2, {b1, b2}) - expanded) <= 1e-9);
}

TEST_CASE("composition identities") {
  Rng rng(11);
  const int d = 2, order = 4;
  Series f = Series::random(d, order, rng);
  Series g = Series::random(d, order, rng, /*zero_constant=*/true);
  Series id = Series::identity(d, order);
  CHECK(series_compose(f, id).residual(f) <= 1e-14);
  CHECK(series_compose(id, g).residual(g) <= 1e-14);
  CHECK_THROWS_AS(series_compose(f, Series::one(d, order)),
                  NonzeroConstantTerm);
}

TEST_CASE("composition associativity, order 4, d = 2") {
  Rng rng(13);
  const int d = 2, order = 4;
  Series e = Series::random(d, order, rng, true);
  Series f = Series::random(d, order, rng, true);
  Series g = Series::random(d, order, rng, true);
  Series lhs = series_compose(series_compose(e, f), g);
  Series rhs = series_compose(e, series_compose(f, g));
  CHECK(lhs.residual(rhs) <= 1e-10);
}

TEST_CASE("multiplicative inverse") {
  Rng rng(17);
  const int d = 2, order = 4;
  Series one = Series::one(d, order);
  CHECK(series_mul_inverse(one).residual(one) <= 1e-14);

  // (1 - E)^{-1} = 1 + sum E^k for E with zero constant term
  Series e = Series::random(d, order, rng, true);
  Series lhs = series_mul_inverse(series_add(one, -e));
  Series rhs = one;
  Series pw = one;
  for (int k = 1; k <= order; ++k) {
    pw = series_mul(pw, e);
    rhs = series_add(rhs, pw);
  }
  CHECK(lhs.residual(rhs) <= 1e-10);

  Series f = Series::random(d, order, rng);
  Series inv = series_mul_inverse(f);
  CHECK(series_mul(f, inv).residual(one) <= 1e-10);
  CHECK(series_mul(inv, f).residual(one) <= 1e-10);

  Series singular(d, order);  // constant term 0
  CHECK_THROWS_AS(series_mul_inverse(singular), SingularConstantTerm);
}

TEST_CASE("compositional inverse") {
  Rng rng(19);
  const int d = 2, order = 4;
  Series id = Series::identity(d, order);
  CHECK(series_comp_inverse(id).residual(id) <= 1e-14);

  // F with F_1 = id and only F_2: G_2 = -F_2 by the order-2 recurrence
  Series f(d, order);
  f.term(1) = Mat::Identity(d * d, d * d);
  {
    Rng r2(23);
    Series tmp = Series::random(d, order, r2);
    f.term(2) = tmp.term(2);
  }
  Series g = series_comp_inverse(f);
  CHECK(max_abs(g.term(2) + f.term(2)) <= 1e-12);

  Series h = Series::random(d, order, rng, true);
  Series hinv = series_comp_inverse(h);
  CHECK(series_compose(h, hinv).residual(id) <= 1e-10);
  CHECK(series_compose(hinv, h).residual(id) <= 1e-10);

  CHECK_THROWS_AS(series_comp_inverse(Series::random(d, order, rng)),
                  NonzeroConstantTerm);
  Series bad(d, order);  // F_1 = 0
  CHECK_THROWS_AS(series_comp_inverse(bad), SingularLinearTerm);
}

TEST_CASE("algebra law suite at small trial count") {
  for (int d : {1, 2}) {
    for (const std::string& law : mfs_law_tags()) {
      for (int t = 0; t < 5; ++t) {
        Rng rng(1000 * d + t, std::hash<std::string>{}(law));
        CHECK(mfs_law_residual(law, d, law == "compose-assoc" ? 4 : 5, rng) <=
              1e-10);
      }
    }
  }
}

TEST_CASE("truncation consistency: restrict after = compute at lower order") {
  Rng rng(29);
  const int d = 2;
  Series f5 = Series::random(d, 5, rng);
  Series g5 = Series::random(d, 5, rng, true);
  Series f3 = f5.restricted(3), g3 = g5.restricted(3);

  CHECK(series_mul(f5, g5).restricted(3).residual(series_mul(f3, g3)) == 0.0);
  CHECK(series_compose(f5, g5).restricted(3).residual(series_compose(f3, g3)) ==
        0.0);
  CHECK(series_mul_inverse(f5).restricted(3).residual(series_mul_inverse(f3)) ==
        0.0);
}
