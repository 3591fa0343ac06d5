#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "safe/error.hpp"
#include "safe/evalstats.hpp"

using namespace safe;

using V = std::vector<double>;

TEST_CASE("accuracy") {
  std::vector<std::string> t = {"a", "b", "c", "a", "b", "c", "a", "b", "c", "a"};
  std::vector<std::string> p = t;
  CHECK(accuracy(p, t) == 1.0);
  p[0] = p[1] = p[2] = "z";
  CHECK(accuracy(p, t) == doctest::Approx(0.7));
  std::vector<std::string> none(10, "q");
  CHECK(accuracy(none, t) == 0.0);
  std::vector<std::string> shorter(3, "a");
  CHECK_THROWS_AS(accuracy(shorter, t), Error);
}

TEST_CASE("a12 identities") {
  const V a = {1, 2}, b = {1, 3};
  CHECK(vargha_delaney_a12(a, b) == 0.375);
  const V x = {3, 1, 4, 1, 5};
  CHECK(vargha_delaney_a12(x, x) == 0.5);
  const V hi = {10, 11}, lo = {1, 2, 3};
  CHECK(vargha_delaney_a12(hi, lo) == 1.0);
  CHECK(vargha_delaney_a12(lo, hi) == 0.0);
  CHECK_THROWS_AS(vargha_delaney_a12(V{}, lo), Error);

  std::mt19937_64 gen(61);
  std::normal_distribution<double> nd;
  for (int rep = 0; rep < 50; ++rep) {
    V xs(7), ys(9);
    for (auto& v : xs) v = std::round(nd(gen) * 3);
    for (auto& v : ys) v = std::round(nd(gen) * 3);
    CHECK(vargha_delaney_a12(xs, ys) + vargha_delaney_a12(ys, xs) == doctest::Approx(1.0));
    V ex, ey;
    for (double v : xs) ex.push_back(std::exp(v));
    for (double v : ys) ey.push_back(std::exp(v));
    CHECK(vargha_delaney_a12(ex, ey) == vargha_delaney_a12(xs, ys));
  }
}

TEST_CASE("mann whitney") {
  const V a = {1, 2, 3}, b = {4, 5, 6};
  auto r = mann_whitney_u(a, b);
  CHECK(r.u == 0.0);
  CHECK(oracle::exact_permutation_p(a, b) == doctest::Approx(0.1));
  CHECK(r.p_value == doctest::Approx(0.0809).epsilon(1e-3));

  const V same = {2, 4, 6, 8};
  auto s = mann_whitney_u(same, same);
  CHECK(s.u == 8.0);
  CHECK(s.p_value == doctest::Approx(1.0));

  V hi, lo;
  for (int i = 0; i < 10; ++i) {
    hi.push_back(100 + i);
    lo.push_back(i);
  }
  auto far = mann_whitney_u(hi, lo);
  CHECK(far.u == 100.0);
  CHECK(far.p_value < 0.001);

  const V flat = {1, 1, 1};
  auto d = mann_whitney_u(flat, flat);
  CHECK(d.degenerate);
  CHECK(d.p_value == 1.0);

  std::mt19937_64 gen(62);
  std::uniform_int_distribution<int> ud(0, 6);
  for (int rep = 0; rep < 100; ++rep) {
    V xs(1 + gen() % 8), ys(1 + gen() % 8);
    for (auto& v : xs) v = ud(gen);
    for (auto& v : ys) v = ud(gen);
    auto u = mann_whitney_u(xs, ys);
    CHECK(u.u == oracle::mw_u(xs, ys));
    CHECK(u.u + mann_whitney_u(ys, xs).u == double(xs.size() * ys.size()));
    CHECK(u.p_value >= 0.0);
    CHECK(u.p_value <= 1.0);
  }
}

TEST_CASE("compare samples") {
  const V a = {0.91, 0.92, 0.93}, b = {0.90, 0.89, 0.905};
  auto c = compare_samples(a, b);
  CHECK(c.a12 == 1.0);
  CHECK(c.n_x == 3);
  CHECK(c.u_statistic == 9.0);
}
