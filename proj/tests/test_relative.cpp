#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "relsite/fixtures.hpp"
#include "relsite/relative.hpp"

using namespace relsite;

TEST_CASE("the three fixture problems are well formed") {
  CHECK(validate_problem(fixtures::identity_problem()).ok);
  CHECK(validate_problem(fixtures::neg_problem()).ok);
  CHECK(validate_problem(fixtures::pos_problem()).ok);
}

TEST_CASE("wiring mistakes in a problem are caught") {
  RelativeProblem prob = fixtures::identity_problem();
  prob.phi.components[0] = prob.base.category->arrow_index("f");
  CHECK_FALSE(validate_problem(prob).ok);

  RelativeProblem swapped = fixtures::identity_problem();
  swapped.p = constant_functor(swapped.left.category, swapped.base.category, 0);
  CHECK_FALSE(validate_problem(swapped).ok);
}

TEST_CASE("identity problem passes every route") {
  RelativeProblem prob = fixtures::identity_problem();
  CofinalityResult cof = check_cofinality(prob);
  CHECK(cof.surjectivity.ok);
  CHECK(cof.injectivity.ok);
  RelativeFilteredResult fil = check_relative_filtered(prob);
  CHECK(fil.ok());
  CHECK(check_fiberwise(prob).ok);
  CHECK(check_diagonal_density(prob).ok);
}

TEST_CASE("collapsing to the top of the arrow misses the bottom") {
  RelativeProblem prob = fixtures::neg_problem();

  CofinalityResult cof = check_cofinality(prob);
  CHECK_FALSE(cof.surjectivity.ok);
  CHECK(cof.surjectivity.witness.find("c=a") != std::string::npos);
  CHECK(cof.surjectivity.witness.find("chi=id:a") != std::string::npos);
  CHECK(cof.injectivity.ok);

  RelativeFilteredResult fil = check_relative_filtered(prob);
  CHECK_FALSE(fil.reach.ok);
  CHECK(&fil.first_failure() == &fil.reach);

  CHECK_FALSE(check_fiberwise(prob).ok);
  CHECK_FALSE(check_diagonal_density(prob).ok);
}

TEST_CASE("per-object reach isolates the failing base object") {
  RelativeProblem prob = fixtures::neg_problem();
  CHECK_FALSE(check_filtered_reach_at(prob, 0).ok);
  CHECK(check_filtered_reach_at(prob, 1).ok);
}

TEST_CASE("the section problem passes every route") {
  RelativeVerdict v = relative_verdict(fixtures::pos_problem(), true);
  CHECK(v.site_morphism.ok);
  CHECK(v.all_pass());
  CHECK(v.consistent());
  REQUIRE(v.oracle.has_value());
  CHECK(v.oracle->ok);
}

TEST_CASE("verdicts stay consistent even when all routes fail") {
  RelativeVerdict v = relative_verdict(fixtures::neg_problem(), true);
  CHECK(v.site_morphism.ok);  // fine as a plain morphism of sites
  CHECK_FALSE(v.cofinality.ok());
  CHECK_FALSE(v.filtered.ok());
  CHECK_FALSE(v.fiberwise.ok);
  CHECK_FALSE(v.diagonal.ok);
  REQUIRE(v.oracle.has_value());
  CHECK_FALSE(v.oracle->ok);
  CHECK(v.consistent());
  CHECK_FALSE(v.all_pass());
}

TEST_CASE("fiber comparison functors are honest functors") {
  RelativeProblem prob = fixtures::identity_problem();
  for (int c = 0; c < prob.base.category->num_objects(); ++c) {
    FiberFunctor fib = fiber_functor(prob, c);
    CHECK(validate_functor(fib.functor).ok);
    CHECK(fib.functor.source == fib.source.carrier);
    CHECK(fib.functor.target == fib.target.carrier);
  }
}

TEST_CASE("the global comparison functor respects projections to the base") {
  RelativeProblem prob = fixtures::identity_problem();
  GlobalFunctor g = global_functor(prob);
  REQUIRE(validate_functor(g.functor).ok);
  for (int o = 0; o < g.source.carrier->num_objects(); ++o)
    CHECK(g.source.object_tags[o].right == g.target.object_tags[g.functor.on_object(o)].right);
}

TEST_CASE("the diagonal site marks vertical comparisons and its topology validates") {
  DiagonalSite site = diagonal_category(fixtures::identity_problem());
  CHECK(validate_topology(site.ktilde).ok);
  int marked = 0;
  for (char d : site.diagonal) marked += d;
  CHECK(marked > 0);
  CHECK(marked < static_cast<int>(site.diagonal.size()) + 1);
  // every marked object carries a comparison arrow that is vertical over the base
  const FinCategory& base = *fixtures::c2();
  for (size_t o = 0; o < site.diagonal.size(); ++o) {
    if (!site.diagonal[o]) continue;
    int comp = site.comma.object_tags[o].arrow;
    CHECK(base.is_identity(site.global.target.arrow_tags[comp].right));
  }
}
