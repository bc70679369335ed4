#include "helpers.hpp"

#include "saferisk/copula.hpp"
#include "saferisk/error.hpp"

#include <doctest.h>

#include <random>

using namespace saferisk;

namespace {

RiskPairSample independent(std::size_t n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RiskPairSample p;
  for (std::size_t i = 0; i < n; ++i) {
    p.x.push_back(u(rng));
    p.y.push_back(u(rng));
  }
  return p;
}

RiskPairSample dependent(std::size_t n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  RiskPairSample p;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = z(rng);
    p.x.push_back(std::exp(a));
    p.y.push_back(a + 0.8 * z(rng));
  }
  return p;
}

} // namespace

TEST_SUITE("copula")
{
  TEST_CASE("kendall tau by hand")
  {
    CHECK(kendall_tau({ { 1, 2, 3 }, { 1, 3, 2 } }) == doctest::Approx(1.0 / 3.0));
    CHECK(kendall_tau({ { 1, 2, 3, 4 }, { 1, 2, 3, 4 } }) == 1.0);
    CHECK(kendall_tau({ { 1, 2, 3, 4 }, { 4, 3, 2, 1 } }) == -1.0);
    // one tie in x: 3 pairs, two concordant, tied pair counts as neither
    CHECK(kendall_tau({ { 1, 1, 2 }, { 1, 2, 3 } }) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(kendall_tau({ { 1 }, { 1 } }), ValidationError);
  }

  TEST_CASE("kendall tau equals the quadratic oracle")
  {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> small(0, 6);
    for (int t = 0; t < 40; ++t) {
      auto p = dependent(50 + 13 * t, t);
      if (t % 2 == 0)
        for (auto& v : p.x)
          v = std::round(v * 2); // force ties
      if (t % 3 == 0)
        for (auto& v : p.y)
          v = small(rng);
      CHECK(kendall_tau(p) == doctest::Approx(testutil::naive_tau(p.x, p.y)).epsilon(1e-12));
    }
  }

  TEST_CASE("tau flips sign when one margin is reversed")
  {
    auto p = dependent(500, 2);
    RiskPairSample q = p;
    for (auto& v : q.y)
      v = -v;
    CHECK(kendall_tau(q) == doctest::Approx(-kendall_tau(p)).epsilon(1e-14));
  }

  TEST_CASE("tail dependence special cases")
  {
    auto ind = independent(100000, 3);
    CHECK(std::abs(tail_dependence_summary(ind, 0.9) - 0.1) <= 0.02);
    RiskPairSample como{ ind.x, ind.x };
    CHECK(tail_dependence_summary(como, 0.9) == 1.0);
    RiskPairSample anti{ ind.x, {} };
    for (double u : ind.x)
      anti.y.push_back(1.0 - u);
    CHECK(tail_dependence_summary(anti, 0.9) == 0.0);
    CHECK_THROWS_AS(tail_dependence_summary(ind, 1.0), ValidationError);
    CHECK_THROWS_AS(tail_dependence_summary({ { 1, 2, 3 }, { 1, 2, 3 } }, 0.9), ValidationError);
  }

  TEST_CASE("grid layout and csv")
  {
    auto g = empirical_copula_density(independent(200, 1), 4);
    CHECK(g.m == 4);
    CHECK(g.coords == std::vector<double>{ 0.125, 0.375, 0.625, 0.875 });
    CHECK(g.density.size() == 16);
    CHECK(g.to_csv().rfind("u,v,density\n0.125,0.125,", 0) == 0);
    CHECK_THROWS_AS(empirical_copula_density(independent(200, 1), 1), ValidationError);
    CHECK_THROWS_AS(empirical_copula_density(independent(5, 1), 10), ValidationError);
  }

  TEST_CASE("independence is flat in the middle and integrates to one")
  {
    auto g = empirical_copula_density(independent(2000, 5));
    double s = 0;
    int n = 0;
    for (std::size_t k = 25; k < 76; ++k)
      for (std::size_t l = 25; l < 76; ++l, ++n)
        s += g.at(k, l);
    CHECK(s / n >= 0.95);
    CHECK(s / n <= 1.05);
    CHECK(g.integral() >= 0.97);
    CHECK(g.integral() <= 1.03);
  }

  TEST_CASE("comonotone inputs concentrate on the diagonal")
  {
    auto base = independent(2000, 6);
    auto g = empirical_copula_density({ base.x, base.x });
    double diag = 0, off = 0;
    int nd = 0, no = 0;
    for (std::size_t k = 0; k < g.m; ++k)
      for (std::size_t l = 0; l < g.m; ++l) {
        const auto d = k > l ? k - l : l - k;
        if (d <= 5) {
          diag += g.at(k, l);
          ++nd;
        } else {
          off += g.at(k, l);
          ++no;
        }
      }
    CHECK(diag / nd >= 5.0 * (off / no));
  }

  TEST_CASE("monotone transforms of a margin leave the grid bit-identical")
  {
    auto p = dependent(500, 7);
    auto a = empirical_copula_density(p, 31);
    RiskPairSample q = p;
    for (auto& v : q.x)
      v = std::log(v) * 3 + 1;
    for (auto& v : q.y)
      v = std::exp(v);
    auto b = empirical_copula_density(q, 31);
    CHECK(a.density == b.density);
  }

  TEST_CASE("swapping coordinates transposes the grid exactly")
  {
    auto p = dependent(400, 8);
    auto a = empirical_copula_density(p, 41);
    auto b = empirical_copula_density({ p.y, p.x }, 41);
    for (std::size_t k = 0; k < a.m; ++k)
      for (std::size_t l = 0; l < a.m; ++l)
        REQUIRE(a.at(k, l) == b.at(l, k));
  }
}
