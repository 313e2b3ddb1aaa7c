#pragma once

#include <cstdint>
#include <functional>

#include "relsite/indexed.hpp"
#include "relsite/workspace.hpp"

// Instance generation for the property suites: exhaustive enumeration of
// small categories up to isomorphism, exhaustive functor and transformation
// search, and three corpora of relative problems (bounded-exhaustive, built
// from fibrations, and seeded random).  Everything here is deterministic for
// a fixed seed; no wall-clock state enters any output.

namespace relsite {

// visits every category with at most the given objects and arrows, one
// representative per isomorphism class, ordered by object count, arrow
// count, hom shape, then composition table; visit returns false to stop
void for_each_category(int max_objects, int max_arrows, const std::function<bool(const CatPtr&)>& visit);

// same, restricted to exactly the given object and arrow counts; lets a sweep
// pick its own bucket order
void for_each_category_sized(int objects, int arrows, const std::function<bool(const CatPtr&)>& visit);

std::vector<CatPtr> enumerate_categories(int max_objects, int max_arrows);

std::vector<FinFunctor> all_functors(const CatPtr& source, const CatPtr& target);

std::vector<NatTransform> all_nat_transforms(const FinFunctor& F, const FinFunctor& G);

struct CorpusBounds {
  int max_objects = 2;
  int max_arrows = 4;
  int max_fiber = 2;
};

// relative problems mixing a bounded-exhaustive phase over tiny sites, the
// fibration instances below, and seeded random instances at the outer bound;
// every returned problem satisfies its comorphism premises
std::vector<RelativeProblem> problem_corpus(int count, std::uint64_t seed, const CorpusBounds& bounds);

struct IndexedInstance {
  IndexedCategory ix;
  TotalCategory total;
};

// small Grothendieck constructions whose total categories stay within reach
// of exhaustive topology enumeration
std::vector<IndexedInstance> indexed_corpus(int count);

struct FibrationInstance {
  TotalCategory source;
  TotalCategory target;
  // projections as comorphisms, Giraud topologies on both sides, identity
  // comparison; A is induced by a strict fiberwise functor
  RelativeProblem problem;
};

std::vector<FibrationInstance> fibration_corpus(int count);

// workspaces wrapping first the enumerated categories (with their topology
// inventories), then the problem corpus; visit returns false to stop
void enumerate_instances(const CorpusBounds& bounds, std::uint64_t seed,
                         const std::function<bool(const Workspace&)>& visit);

// JSON report for the `corpus` CLI verb; byte-identical for equal inputs.
// exit_code receives 3 when a discrepancy was flagged, 0 otherwise.
std::string corpus_report(const CorpusBounds& bounds, std::uint64_t seed, bool assert_equivalences,
                          int* exit_code);

}  // namespace relsite
