#pragma once

#include "relsite/comma.hpp"

// Sieves are stored extensionally as sorted arrow-index sets; a topology
// stores, for every object, the full set of its covering sieves.  Upward
// closure means a membership test against the stored set decides every
// "exists a covering sieve contained in ..." question that the checkers ask.

namespace relsite {

struct Sieve {
  int base = -1;
  std::vector<int> members;  // sorted, every member has dst == base

  bool contains(int a) const;
  auto operator<=>(const Sieve&) const = default;
};

Sieve generate_sieve(const FinCategory& cat, int base, const std::vector<int>& generators);
Sieve maximal_sieve(const FinCategory& cat, int base);
Sieve pullback_sieve(const FinCategory& cat, const Sieve& s, int h);  // along h with dst(h) == s.base

// every sieve on the object, i.e. every union of principal sieves; sorted
std::vector<Sieve> all_sieves_on(const FinCategory& cat, int base);

struct Topology {
  CatPtr category;
  std::vector<std::vector<Sieve>> covers;  // per object, sorted

  bool is_covering(const Sieve& s) const;
  // closes the generators into a sieve first
  bool covers_from_generators(int base, const std::vector<int>& generators) const;
};

Topology trivial_topology(const CatPtr& cat);

// maximality, stability and transitivity, each violation naming the axiom
// and the object / sieve / arrow involved
CheckResult validate_topology(const Topology& t);

// least topology whose covers include the given sieves, by worklist fixpoint
Topology generate_topology(const CatPtr& cat, const std::vector<Sieve>& basis);

// containment of cover sets; throws std::invalid_argument on carrier mismatch
bool topology_leq(const Topology& lhs, const Topology& rhs);

// topology on `carrier` whose covering sieves are those whose members project
// through Q to a covering family of K
Topology projected_topology(const CatPtr& carrier, const FinFunctor& Q, const Topology& K);

// Giraud-style topology on a comma category built by comma_over_object (fiber
// variant) or comma_over_identity (global variant): a sieve covers when the
// first components of its arrows cover in the domain of the comma's left leg
Topology comma_giraud_topology(const CommaCategory& comma, const Topology& K);

// every Grothendieck topology on the category, in deterministic order
std::vector<Topology> all_topologies(const CatPtr& cat);

}  // namespace relsite
