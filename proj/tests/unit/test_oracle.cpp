#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "mixvote/errors.hpp"
#include "mixvote/harmonic.hpp"
#include "mixvote/oracle.hpp"

using namespace mixvote;
using fixtures::q;

TEST_CASE("allocation enumeration counts") {
  const Instance three = fixtures::goods_instance(3, {{0}, {1, 2}}, 2);
  CHECK(enumerate_allocations(three).size() == 7);

  const Instance p4 = gen_construction({.name = "prop4", .beta = Rational(1)}).instance;
  CHECK(enumerate_allocations(p4).size() == 57);

  // Nine cells of 1/10; with no good a budget of 2 takes any cell subset
  // (2^9), with one good the budget 1 still does (2 * 2^9), with both goods
  // only the empty cake fits.
  const Instance fig = fixtures::fig1();
  const auto all = enumerate_allocations(fig, {.grid = 9});
  CHECK(all.size() == 512 + 2 * 512 + 1);
  std::set<std::string> distinct;
  for (const auto& b : all) {
    CHECK(bundle_size(b) <= fig.alpha());
    distinct.insert(describe(b, fig));
  }
  CHECK(distinct.size() == all.size());

  CHECK_THROWS_AS(enumerate_allocations(fig, {.grid = 9, .limit = 100}), CapacityError);
  CHECK_THROWS_AS(enumerate_allocations(fig, {.grid = 0}), DomainError);
}

TEST_CASE("no EJR-beta allocation") {
  const Instance p1 = gen_construction(
      {.name = "prop1", .beta = q("2/5"), .beta_prime = q("1/2"), .n = 4}).instance;
  CHECK(oracle_no_ejr_beta(p1, q("2/5"), Strictness::Weak));
  CHECK_FALSE(oracle_no_ejr_beta(p1, 1, Strictness::Weak));

  // One good everyone approves: {g1} gives utility exactly t = 1, enough
  // for weak EJR-0 but not for the strict version (> 1).
  const Instance one = fixtures::goods_instance(1, {{0}, {0}}, 1);
  CHECK_FALSE(oracle_no_ejr_beta(one, 0, Strictness::Weak));
  CHECK(oracle_no_ejr_beta(one, 0, Strictness::Strict));
}

TEST_CASE("max-min average satisfaction") {
  const Instance app = gen_construction(
      {.name = "appendix", .t = q("3/2"), .gamma = q("1/4"), .q = 4}).instance;
  const auto v = oracle_min_max_avg(app, q("3/2"));
  REQUIRE(v);
  CHECK(*v < q("1/2") + q("1/6") + q("1/4"));

  // Everyone approves the same two goods; taking both serves every group.
  const Instance same = fixtures::goods_instance(2, {{0, 1}, {0, 1}}, 2);
  CHECK(oracle_min_max_avg(same, 2) == Rational(2));

  CHECK_FALSE(oracle_min_max_avg(same, 3).has_value());
  CHECK_THROWS_AS(oracle_min_max_avg(same, 0), DomainError);
}

TEST_CASE("discretized optimum") {
  const Instance fig = fixtures::fig1();
  const OracleOptimum g = oracle_discretized_opt(fig, Objective::Gpav, {.grid = 9});
  CHECK(g.allocation.cake == fig.full_cake());
  CHECK(g.allocation.goods.size() == 1);
  CHECK(std::abs(g.gpav.value - (harmonic(1.9).value + harmonic(0.9).value)) < 1e-12);

  const Instance p4 = gen_construction({.name = "prop4", .beta = Rational(1)}).instance;
  const OracleOptimum n = oracle_discretized_opt(p4, Objective::Nash);
  CHECK(n.allocation == Bundle({}, {0, 3, 4, 5}));
  CHECK(n.nash_positive == 12);
  CHECK(n.nash_product == 1);
  CHECK(n.candidates == 57);

  // All-identical approvals: the optimum is a full-size bundle inside them.
  const Instance ident = fixtures::goods_instance(4, {{0, 2, 3}, {0, 2, 3}}, 2);
  const OracleOptimum i = oracle_discretized_opt(ident, Objective::Gpav);
  CHECK(i.allocation.goods.size() == 2);
  CHECK(is_subset(i.allocation, ident.approval(0)));
}
