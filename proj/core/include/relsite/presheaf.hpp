#pragma once

#include "relsite/relative.hpp"

// Finite presheaves with tabulated restriction maps, and the independent
// oracle route for the relative checkers: build the comparison morphism of
// presheaves explicitly, then decide whether it is a local isomorphism.
// This module shares the category, comma and topology data structures with
// the combinatorial checkers but none of their search routines.

namespace relsite {

struct FinPresheaf {
  CatPtr category;
  std::vector<std::vector<std::string>> elements;  // per object, labels in declared order
  std::vector<std::vector<int>> restriction;       // per arrow f, map elements(dst f) -> elements(src f)

  int size(int obj) const { return static_cast<int>(elements[obj].size()); }
  int restrict_elem(int f, int e) const { return restriction[f][e]; }
};

using PshPtr = std::shared_ptr<const FinPresheaf>;

CheckResult validate_presheaf(const FinPresheaf& P);

struct PresheafMorphism {
  PshPtr source;
  PshPtr target;
  std::vector<std::vector<int>> components;  // per object, map source -> target

  int at(int obj, int e) const { return components[obj][e]; }
};

CheckResult validate_presheaf_morphism(const PresheafMorphism& m);

// sections at x are the arrows x -> c, labelled by their ids
PshPtr representable(const CatPtr& cat, int c);

// composition with p on the index side: sections at d are P(p(d))
PshPtr restrict_along(const FinFunctor& p, const PshPtr& P);

struct ColimitOfRepresentables {
  PshPtr presheaf;
  // per object x, per class, the least pair (diagram object i, arrow h : x -> F(i))
  std::vector<std::vector<std::pair<int, int>>> reps;

  int class_of(int x, int i, int h) const;

private:
  friend ColimitOfRepresentables colimit_of_representables(const FinFunctor& diagram);
  std::vector<std::map<std::pair<int, int>, int>> index_;
};

// colimit of Y(F(i)) over the diagram F, glued by zig-zags
ColimitOfRepresentables colimit_of_representables(const FinFunctor& diagram);

// pointwise left Kan extension of P along A, as a presheaf on A's target:
// classes of triples (d, h : d' -> A(d), x in P(d))
PshPtr left_kan_presheaf(const FinFunctor& A, const PshPtr& P);

// the comparison morphism at base object c: from the colimit of
// representables of A restricted to (p down c) into Hom(p'(-), c)
PresheafMorphism build_phi_tilde(const RelativeProblem& prob, int c);

CheckResult is_locally_surjective(const PresheafMorphism& m, const Topology& t);
CheckResult is_locally_injective(const PresheafMorphism& m, const Topology& t);
CheckResult is_local_isomorphism(const PresheafMorphism& m, const Topology& t);

// sections are classes of matching families over covering sieves, identified
// when they agree on a common covering refinement
PshPtr plus_construction(const FinPresheaf& P, const Topology& t);
PresheafMorphism unit_to_plus(const PshPtr& P, const Topology& t);
PresheafMorphism plus_morphism(const PresheafMorphism& m, const Topology& t);

PshPtr sheafify(const FinPresheaf& P, const Topology& t);
PresheafMorphism sheafify_morphism(const PresheafMorphism& m, const Topology& t);

// unique amalgamation for every matching family over every cover
CheckResult is_sheaf(const FinPresheaf& P, const Topology& t);

}  // namespace relsite
