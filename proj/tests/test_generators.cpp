#include <cmath>
#include <map>

#include "doctest.h"
#include "moran/generator.hpp"
#include "moran/io.hpp"

using namespace moran;

namespace {

std::vector<std::vector<Rational>> nondiag_example_rational() {
  return {{rat(-9), rat(7), rat(2)}, {rat(1), rat(-7), rat(6)}, {rat(5), rat(7), rat(-12)}};
}

// Oracle: rates of the N-fold product chain on [K]^N lumped through phi.
// Starting from the sorted word psi(eta), a single-particle move i -> k gives
// the lumped rate sum over particles at i of mu_{i,k}.
template <class F>
F lumped_rate(const MutationMatrix<F>& Q, const Composition& eta, const Composition& xi) {
  Word w = psi(eta);
  const int K = Q.K();
  F acc = field_traits<F>::from_long(0);
  for (std::size_t pos = 0; pos < w.size(); ++pos) {
    for (int k = 1; k <= K; ++k) {
      if (k == w[pos]) continue;
      Word moved = w;
      moved[pos] = k;
      if (phi(moved, K) == xi) acc += Q.rate(w[pos] - 1, k - 1);
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("mutation matrix validation") {
  CHECK_NOTHROW(MutationMatrix<Rational>::validate(nondiag_example_rational()));

  // an all-zero row makes that type absorbing, hence reducible
  std::vector<std::vector<Rational>> absorbing{
      {rat(0), rat(0)}, {rat(1), rat(0)}};
  CHECK_THROWS_AS(MutationMatrix<Rational>::validate(absorbing), validation_error);

  std::vector<std::vector<Rational>> negative{
      {rat(0), rat(-1)}, {rat(1), rat(0)}};
  CHECK_THROWS_AS(MutationMatrix<Rational>::validate(negative), validation_error);

  auto pi = build_parent_independent(std::vector<Rational>{rat(1), rat(2), rat(3)});
  CHECK(pi.rate(0, 0) == rat(-5));
  CHECK(pi.rate(0, 1) == rat(2));
  CHECK(pi.rate(0, 2) == rat(3));
  CHECK(pi.rate(2, 0) == rat(1));

  auto half = build_parent_independent(std::vector<Rational>{rat(1, 2), rat(1, 2)});
  CHECK(half.rate(0, 1) == rat(1, 2));
  CHECK(half.rate(0, 0) == rat(-1, 2));

  // complete graph model: all off-diagonals 1/K
  auto complete = build_parent_independent(
      std::vector<Rational>{rat(1, 4), rat(1, 4), rat(1, 4), rat(1, 4)});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) CHECK(complete.rate(i, j) == rat(1, 4));

  CHECK_THROWS_AS(build_parent_independent(std::vector<Rational>{rat(1), rat(0)}), argument_error);

  auto diag = pi.parent_independent_rates();
  REQUIRE(diag.has_value());
  CHECK((*diag)[2] == rat(3));
  auto notpi = MutationMatrix<Rational>::validate(nondiag_example_rational());
  CHECK(!notpi.parent_independent_rates().has_value());
}

TEST_CASE("mutation matrix from JSON") {
  nlohmann::json j = nlohmann::json::parse(R"({
    "K": 2,
    "rates": [[999, "1/3"], ["0.5", 999]]
  })");
  auto m = mutation_from_json<Rational>(j);
  CHECK(m.rate(0, 1) == rat(1, 3));
  CHECK(m.rate(1, 0) == rat(1, 2));
  CHECK(m.rate(0, 0) == rat(-1, 3));  // diagonal recomputed, input ignored

  auto d = mutation_from_json<double>(j);
  CHECK(d.rate(0, 1) == doctest::Approx(1.0 / 3));

  CHECK_THROWS_AS(mutation_from_json<double>(nlohmann::json::parse("{\"K\": 2}")),
                  validation_error);
}

TEST_CASE("mutation generator") {
  SUBCASE("single particle equals Q") {
    auto Q = MutationMatrix<Rational>::validate(
        {{rat(0), rat(2)}, {rat(3), rat(0)}});
    auto g = build_mutation_generator(Q, 1);
    // state order: (1,0), (0,1)
    CHECK(g.entry(0, 1) == rat(2));
    CHECK(g.entry(1, 0) == rat(3));
    CHECK(g.entry(0, 0) == rat(-2));
  }
  SUBCASE("rate is eta(i) mu_ij") {
    auto Q = MutationMatrix<Rational>::validate(
        {{rat(0), rat(5)}, {rat(7), rat(0)}});
    auto g = build_mutation_generator(Q, 2);
    const auto& s = *g.space;
    CHECK(g.entry(s.rank({2, 0}), s.rank({1, 1})) == rat(10));
  }
  SUBCASE("lumping of the product chain") {
    auto Q = MutationMatrix<Rational>::validate(nondiag_example_rational());
    for (int N = 1; N <= 4; ++N) {
      auto g = build_mutation_generator(Q, N);
      const auto& s = *g.space;
      for (std::int64_t r = 0; r < s.size(); ++r)
        for (std::int64_t c = 0; c < s.size(); ++c) {
          if (r == c) continue;
          CHECK(g.entry(r, c) == lumped_rate(Q, s.state(r), s.state(c)));
        }
    }
  }
}

TEST_CASE("reproduction generator") {
  auto g = build_reproduction_generator<Rational>(2, 2);
  const auto& s = *g.space;
  CHECK(g.entry(s.rank({1, 1}), s.rank({2, 0})) == rat(1));
  CHECK(g.entry(s.rank({2, 0}), s.rank({1, 1})) == rat(0));
  CHECK(g.exit_rate(s.rank({2, 0})) == rat(0));  // vertex states absorb

  for (int K = 2; K <= 4; ++K)
    for (int N = 2; N <= 6; ++N) {
      auto a = build_reproduction_generator<Rational>(K, N);
      for (std::int64_t r = 0; r < a.dim(); ++r) {
        Rational row_sum = rat(0);
        a.for_row(r, [&](std::int64_t, const Rational& v) { row_sum += v; });
        CHECK(row_sum == rat(0));
        CHECK(a.row_nnz(r) <= K * (K - 1) + 1);
      }
      // vertices are the only absorbing states
      int absorbing = 0;
      for (std::int64_t r = 0; r < a.dim(); ++r)
        if (a.exit_rate(r) == rat(0)) ++absorbing;
      CHECK(absorbing == K);
    }
}

TEST_CASE("full model generator") {
  auto Q = MutationMatrix<Rational>::validate({{rat(0), rat(1)}, {rat(1), rat(0)}});
  SUBCASE("p = 0 reduces to the mutation generator") {
    auto g0 = build_moran_generator(Q, 3, rat(0));
    auto gm = build_mutation_generator(Q, 3);
    for (std::int64_t r = 0; r < g0.dim(); ++r)
      for (std::int64_t c = 0; c < g0.dim(); ++c) CHECK(g0.entry(r, c) == gm.entry(r, c));
  }
  SUBCASE("plug-in rate") {
    auto g = build_moran_generator(Q, 2, rat(2));
    const auto& s = *g.space;
    CHECK(g.entry(s.rank({1, 1}), s.rank({0, 2})) == rat(2));  // 1 * (1 + (2/2) * 1)
  }
  SUBCASE("decomposition into mutation plus scaled reproduction") {
    auto Q3 = MutationMatrix<Rational>::validate(nondiag_example_rational());
    const int N = 4;
    const Rational p = rat(3, 2);
    auto full = build_moran_generator(Q3, N, p);
    auto mut = build_mutation_generator(Q3, N);
    auto rep = build_reproduction_generator<Rational>(3, N);
    for (std::int64_t r = 0; r < full.dim(); ++r)
      for (std::int64_t c = 0; c < full.dim(); ++c)
        CHECK(full.entry(r, c) == mut.entry(r, c) + p / rat(N) * rep.entry(r, c));
  }
  SUBCASE("alternative reproduction factor p/(N-1)") {
    auto g = build_moran_generator(Q, 3, rat(2), true);
    const auto& s = *g.space;
    // eta = (2,1): rate to (1,2) is 2 * (1 + (2/2) * 1) = 4 with the p/(N-1) factor
    CHECK(g.entry(s.rank({2, 1}), s.rank({1, 2})) == rat(4));
    CHECK_THROWS_AS(build_moran_generator(Q, 1, rat(1), true), argument_error);
  }
  SUBCASE("negative p rejected") {
    CHECK_THROWS_AS(build_moran_generator(Q, 2, rat(-1)), argument_error);
  }
}

TEST_CASE("generator invariants") {
  auto Q = MutationMatrix<Rational>::validate(nondiag_example_rational());

  SUBCASE("conservation and locality") {
    auto g = build_moran_generator(Q, 5, rat(1, 3));
    const auto& s = *g.space;
    for (std::int64_t r = 0; r < g.dim(); ++r) {
      Rational row_sum = rat(0);
      g.for_row(r, [&](std::int64_t c, const Rational& v) {
        row_sum += v;
        if (c != r) {
          CHECK(v >= rat(0));
          // xi = eta - e_i + e_j for exactly one pair (i, j)
          const auto& eta = s.state(r);
          const auto& xi = s.state(c);
          int plus = 0, minus = 0, other = 0;
          for (int k = 0; k < s.K(); ++k) {
            int d = xi[k] - eta[k];
            if (d == 1) ++plus;
            else if (d == -1) ++minus;
            else if (d != 0) ++other;
          }
          CHECK(plus == 1);
          CHECK(minus == 1);
          CHECK(other == 0);
        }
      });
      CHECK(row_sum == rat(0));
      CHECK(g.row_nnz(r) <= s.K() * (s.K() - 1) + 1);
    }
  }

  SUBCASE("scaling") {
    const Rational c = rat(7, 3);
    auto base = build_moran_generator(Q, 3, rat(2));
    auto scaled = build_moran_generator(Q.scaled(c), 3, Rational(rat(2) * c));
    for (std::int64_t r = 0; r < base.dim(); ++r)
      for (std::int64_t cc = 0; cc < base.dim(); ++cc)
        CHECK(scaled.entry(r, cc) == c * base.entry(r, cc));
  }
}

TEST_CASE("selection generator") {
  std::vector<Rational> mu{rat(1), rat(2)};
  std::vector<Rational> p{rat(1), rat(3)};
  auto g = build_selection_generator(mu, p, 2);
  const auto& s = *g.space;
  // eta = (1,1): rate to (0,2) is 1 * (mu_2 + p_2 * 1 / 2) = 2 + 3/2
  CHECK(g.entry(s.rank({1, 1}), s.rank({0, 2})) == rat(7, 2));
  CHECK_THROWS_AS(build_selection_generator(mu, std::vector<Rational>{rat(1)}, 2), argument_error);
}
