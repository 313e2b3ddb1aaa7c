#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "relsite/fixtures.hpp"
#include "relsite/indexed.hpp"

using namespace relsite;

TEST_CASE("the discrete two-level example assembles into four objects") {
  IndexedCategory ix = fixtures::discrete_indexed();
  REQUIRE(validate_indexed(ix).ok);
  TotalCategory total = grothendieck_construction(ix);
  CHECK(total.carrier->num_objects() == 4);
  CHECK(total.carrier->num_arrows() == 6);  // four identities, two lifts of f

  CHECK(total.find_object(0, 0) >= 0);
  CHECK(total.find_object(1, 1) >= 0);
  int x0a = total.find_object(0, 0);
  CHECK(total.object_tags[x0a].fiber_object == 0);
  CHECK(total.object_tags[x0a].base_object == 0);
  CHECK(validate_functor(total.projection).ok);
}

TEST_CASE("non-identity arrows of the discrete example are the cartesian lifts") {
  TotalCategory total = grothendieck_construction(fixtures::discrete_indexed());
  CatPtr base = total.projection.target;
  int f = base->arrow_index("f");
  int lifts = 0;
  for (int a = 0; a < total.carrier->num_arrows(); ++a) {
    if (total.carrier->is_identity(a)) {
      CHECK(total.cartesian[a]);
      continue;
    }
    ++lifts;
    CHECK(total.arrow_tags[a].base_arrow == f);
    CHECK(total.cartesian[a]);
    CHECK(is_cartesian(total.projection, a));
    // the lift connects matching fiber objects
    CHECK(total.object_tags[total.carrier->arrows[a].src].fiber_object ==
          total.object_tags[total.carrier->arrows[a].dst].fiber_object);
  }
  CHECK(lifts == 2);
}

TEST_CASE("identity transitions are required on identity arrows") {
  IndexedCategory ix = fixtures::discrete_indexed();
  // swap the two objects of the fiber over a along id:a
  FinFunctor swap;
  swap.source = ix.fibers[0];
  swap.target = ix.fibers[0];
  swap.object_map = {1, 0};
  swap.arrow_map = {ix.fibers[0]->identities[1], ix.fibers[0]->identities[0]};
  REQUIRE(validate_functor(swap).ok);
  ix.transitions[ix.base->identities[0]] = swap;
  CHECK_FALSE(validate_indexed(ix).ok);
}

TEST_CASE("projections of Grothendieck constructions are fibrations") {
  TotalCategory total = grothendieck_construction(fixtures::discrete_indexed());
  CHECK(check_fibration(total.projection).ok);
}

TEST_CASE("a constant functor onto the terminal object is not a fibration") {
  CatPtr c2 = fixtures::c2();
  CheckResult r = check_fibration(constant_functor(c2, c2, 1));
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.witness.empty());
}

TEST_CASE("the induced topology covers each object by lifts of base covers") {
  TotalCategory total = grothendieck_construction(fixtures::discrete_indexed());
  Topology j1 = fixtures::j_one();
  Topology g = giraud_topology(total, j1);
  REQUIRE(validate_topology(g).ok);

  // over b, the sieve generated by the lift of f covers
  for (int o = 0; o < total.carrier->num_objects(); ++o) {
    if (total.object_tags[o].base_object != 1) continue;
    std::vector<int> lift;
    for (int a : total.carrier->arrows_into(o))
      if (!total.carrier->is_identity(a)) lift.push_back(a);
    REQUIRE(lift.size() == 1);
    CHECK(g.covers_from_generators(o, lift));
    CHECK_FALSE(g.is_covering(Sieve{o, {}}));
  }
}

TEST_CASE("a trivial base topology induces the trivial topology") {
  TotalCategory total = grothendieck_construction(fixtures::discrete_indexed());
  Topology g = giraud_topology(total, fixtures::j_trivial());
  Topology triv = trivial_topology(total.carrier);
  CHECK(topology_leq(g, triv));
  CHECK(topology_leq(triv, g));
}

TEST_CASE("the identity is a morphism of fibrations") {
  TotalCategory total = grothendieck_construction(fixtures::discrete_indexed());
  FinFunctor A = identity_functor(total.carrier);
  NatTransform phi;
  phi.source = compose_functors(total.projection, A);
  phi.target = total.projection;
  CatPtr base = total.projection.target;
  for (int o = 0; o < total.carrier->num_objects(); ++o)
    phi.components.push_back(base->identities[total.projection.on_object(o)]);
  CHECK(check_fibration_morphism(total, total, A, phi).ok);
}

TEST_CASE("morphism wiring mistakes are reported") {
  TotalCategory total = grothendieck_construction(fixtures::discrete_indexed());
  CatPtr c2 = fixtures::c2();
  NatTransform phi;
  phi.source = identity_functor(c2);
  phi.target = identity_functor(c2);
  phi.components = {c2->identities[0], c2->identities[1]};
  CheckResult r = check_fibration_morphism(total, total, identity_functor(c2), phi);
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.witness.empty());
}
