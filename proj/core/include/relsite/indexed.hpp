#pragma once

#include "relsite/topology.hpp"

// Strict contravariant indexed categories over a finite base and their
// Grothendieck constructions.  Transition functors compose on the nose;
// cartesian arrows of a constructed total category are exactly the pairs
// with identity vertical component, and that set is recorded explicitly.

namespace relsite {

struct IndexedCategory {
  CatPtr base;
  std::vector<CatPtr> fibers;           // per base object
  std::vector<FinFunctor> transitions;  // per base arrow g : c -> c', functor fiber(c') -> fiber(c)
};

// fibers assigned everywhere, transitions functorial and strictly compatible:
// transition(id) = id and transition(g after f) = transition(f) o transition(g)
CheckResult validate_indexed(const IndexedCategory& ix);

struct TotalObject {
  int fiber_object;
  int base_object;
};

struct TotalArrow {
  int vertical;    // v : x -> D(g)(x') in fiber(c)
  int base_arrow;  // g : c -> c'
};

struct TotalCategory {
  CatPtr carrier;
  FinFunctor projection;  // carrier -> base
  std::vector<TotalObject> object_tags;
  std::vector<TotalArrow> arrow_tags;
  std::vector<char> cartesian;  // per carrier arrow

  int find_object(int fiber_object, int base_object) const;
};

// objects (x, c), arrows (v, g) : (x, c) -> (x', c') with v : x -> D(g)(x'),
// composed by (v', g') after (v, g) = (D(g)(v') after v, g' after g)
TotalCategory grothendieck_construction(const IndexedCategory& ix);

// universal-property cartesianness of f over its own projection
bool is_cartesian(const FinFunctor& p, int f);

// every arrow of the base into a projected object has a cartesian lift
CheckResult check_fibration(const FinFunctor& p);

// topology on the total category whose covers are the sieves containing
// cartesian arrows that project to a covering family
Topology giraud_topology(const TotalCategory& total, const Topology& base_topology);

// morphism of fibrations (A, phi) between total categories: phi has iso
// components and A sends (marked) cartesian arrows to universally cartesian
// arrows of the target fibration
CheckResult check_fibration_morphism(const TotalCategory& source, const TotalCategory& target,
                                     const FinFunctor& A, const NatTransform& phi);

}  // namespace relsite
