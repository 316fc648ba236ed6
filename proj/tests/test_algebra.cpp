#include <doctest.h>

#include <random>

#include "toda_crystal/scalar.hpp"
#include "toda_crystal/series.hpp"

using namespace toda_crystal;

namespace {

// Random sparse series with small rational coefficients.
TruncatedSeries random_series(std::mt19937& rng, const SeriesContext& ctx,
                              bool zero_constant, int terms = 5) {
  std::uniform_int_distribution<int> coef(-5, 5), den(1, 4);
  std::uniform_int_distribution<int> qexp(0, ctx.NQ), slot(1, 2 * ctx.K);
  std::uniform_int_distribution<int> deg(0, ctx.D);
  TruncatedSeries f(ctx);
  for (int i = 0; i < terms; ++i) {
    Exponents e(ctx.num_slots(), 0);
    e[0] = qexp(rng);
    for (int d = deg(rng); d > 0; --d) ++e[slot(rng)];
    if (zero_constant && time_degree(e) == 0 && e[0] == 0) continue;
    Scalar c(coef(rng), den(rng));
    c.canonicalize();
    f.add_term(e, c);
  }
  return f;
}

Exponents ex(const SeriesContext& ctx, std::initializer_list<std::pair<Variable, int>> vs) {
  Exponents e(ctx.num_slots(), 0);
  for (auto [v, a] : vs) {
    int slot = v.family == VarFamily::kQ ? 0
               : v.family == VarFamily::kT ? v.index
                                           : ctx.K + v.index;
    e[slot] = a;
  }
  return e;
}

}  // namespace

TEST_CASE("scalar parsing and powers") {
  CHECK(parse_scalar("16/45") == Scalar(16, 45));
  CHECK(parse_scalar("-3/6") == Scalar(-1, 2));
  CHECK(parse_scalar("7") == Scalar(7));
  CHECK_THROWS_AS(parse_scalar("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scalar("a/2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scalar("1/-2"), std::invalid_argument);
  CHECK(to_string(Scalar(4, 9)) == "4/9");

  const Scalar p(1, 2);
  CHECK(qpow(p, 0) == 1);
  CHECK(qpow(p, 3) == Scalar(1, 8));
  CHECK(qpow(p, -1) == 2);
  CHECK_THROWS(require_valid_p(Scalar(1)));
  CHECK_THROWS(require_valid_p(Scalar(0)));
}

TEST_CASE("series_exp examples") {
  const SeriesContext ctx{2, 2, 1};
  CHECK(series_exp(TruncatedSeries(ctx)) == TruncatedSeries::constant(ctx, 1));

  const auto t1 = TruncatedSeries::variable(ctx, Variable::t(1));
  TruncatedSeries expected = TruncatedSeries::constant(ctx, 1) + t1;
  expected.add_term(ex(ctx, {{Variable::t(1), 2}}), Scalar(1, 2));
  CHECK(series_exp(t1) == expected);

  CHECK_THROWS_AS(series_exp(TruncatedSeries::constant(ctx, 1)), std::domain_error);
}

TEST_CASE("series_partial examples") {
  const SeriesContext ctx{2, 3, 4};
  const auto t1 = TruncatedSeries::variable(ctx, Variable::t(1));
  const auto th1 = TruncatedSeries::variable(ctx, Variable::t_hat(1));
  CHECK(series_partial(t1 * th1, Variable::t(1)) == th1);
  CHECK(series_partial(TruncatedSeries::constant(ctx, 1), Variable::t(2)).is_zero());

  const auto q3 = TruncatedSeries::monomial(ctx, ex(ctx, {{Variable::q(), 3}}), 1);
  CHECK(series_partial(q3, Variable::q()) ==
        TruncatedSeries::monomial(ctx, ex(ctx, {{Variable::q(), 2}}), 3));

  CHECK_THROWS_AS(series_partial(t1, Variable::t(3)), std::out_of_range);
  CHECK_THROWS_AS(series_partial(t1, Variable::t_hat(0)), std::out_of_range);
}

TEST_CASE("partial derivatives shrink the exact box") {
  const SeriesContext ctx{1, 3, 2};
  const auto t1 = TruncatedSeries::variable(ctx, Variable::t(1));
  auto f = series_exp(t1);
  CHECK(f.exact_degree() == 3);
  auto d = series_partial(f, Variable::t(1));
  CHECK(d.exact_degree() == 2);
  auto dq = series_partial(f, Variable::q());
  CHECK(dq.exact_q() == 1);
  // A product with a series of valuation >= 1 regains one order.
  CHECK((d * t1).exact_degree() == 3);
}

TEST_CASE("ring axioms on random instances") {
  std::mt19937 rng(20121);
  const SeriesContext ctx{2, 4, 3};
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = random_series(rng, ctx, false);
    const auto b = random_series(rng, ctx, false);
    const auto c = random_series(rng, ctx, false);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a - a).is_zero());
  }
}

TEST_CASE("truncation is an ideal quotient") {
  std::mt19937 rng(7);
  const SeriesContext wide{2, 6, 5};
  const SeriesContext narrow{2, 3, 2};
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = random_series(rng, wide, false, 8);
    const auto g = random_series(rng, wide, false, 8);
    CHECK((f * g).with_context(narrow) == f.with_context(narrow) * g.with_context(narrow));
  }
}

TEST_CASE("exp is a homomorphism") {
  std::mt19937 rng(99);
  const SeriesContext ctx{2, 4, 2};
  const auto one = TruncatedSeries::constant(ctx, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_series(rng, ctx, true, 4);
    const auto g = random_series(rng, ctx, true, 4);
    CHECK(series_exp(f) * series_exp(-f) == one);
    CHECK(series_exp(f + g) == series_exp(f) * series_exp(g));
  }
}

TEST_CASE("substitution and JSON") {
  const SeriesContext ctx{2, 3, 2};
  std::vector<TruncatedSeries> t_img, th_img;
  for (int k = 1; k <= 2; ++k) {
    t_img.push_back(TruncatedSeries::variable(ctx, Variable::t(k)) -
                    TruncatedSeries::variable(ctx, Variable::t_hat(k)));
    th_img.push_back(TruncatedSeries(ctx));
  }
  const auto t1 = TruncatedSeries::variable(ctx, Variable::t(1));
  const auto th1 = TruncatedSeries::variable(ctx, Variable::t_hat(1));
  const auto sq = substitute(t1 * t1, t_img, th_img);
  CHECK(sq == (t1 - th1) * (t1 - th1));

  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_series(rng, ctx, false, 6);
    const auto j = to_json(f);
    CHECK(series_from_json(j, ctx) == f);
    CHECK(series_from_json(nlohmann::ordered_json::parse(j.dump()), ctx).terms() ==
          f.terms());
  }

  auto key = monomial_key(ex(ctx, {{Variable::q(), 2}, {Variable::t(1), 1},
                                   {Variable::t_hat(2), 1}}), 2);
  CHECK(key == "Q^2 t1^1 th2^1");
  CHECK_THROWS_AS(parse_monomial_key("Q^1 t9^1", ctx), std::invalid_argument);
  CHECK_THROWS_AS(parse_monomial_key("t1^1", ctx), std::invalid_argument);
}

TEST_CASE("contexts are validated") {
  CHECK_THROWS_AS(TruncatedSeries(SeriesContext{0, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(TruncatedSeries(SeriesContext{1, -1, 1}), std::invalid_argument);
  const SeriesContext a{1, 1, 1}, b{1, 2, 1};
  CHECK_THROWS_AS(TruncatedSeries(a) + TruncatedSeries(b), std::invalid_argument);
}
