#pragma once

#include "relsite/category.hpp"

// Comma categories (F down G) for functors F : A -> C, G : B -> C, with the
// carrier materialized up front and tags recording, for every carrier object
// and arrow, the constituents it was built from.

namespace relsite {

struct CommaObject {
  int left;   // object of A
  int right;  // object of B
  int arrow;  // h : F(left) -> G(right) in C
};

struct CommaArrow {
  int left;   // arrow of A
  int right;  // arrow of B
};

struct CommaCategory {
  CatPtr carrier;
  FinFunctor left_leg;    // F
  FinFunctor right_leg;   // G
  std::vector<CommaObject> object_tags;
  std::vector<CommaArrow> arrow_tags;
  FinFunctor proj_left;   // carrier -> A
  FinFunctor proj_right;  // carrier -> B

  int find_object(int left, int right, int arrow) const;
};

CommaCategory comma_category(std::string name, const FinFunctor& F, const FinFunctor& G);

// (p down c): objects (d, u : p(d) -> c), arrows m with u' m-compatible.
// Implemented as comma(p, constant at c); tags: left = d, arrow = u.
CommaCategory comma_over_object(const FinFunctor& p, int c);

// (p down 1_C): objects (d, c, u : p(d) -> c), arrows (m, n).
// tags: left = d, right = c, arrow = u.
CommaCategory comma_over_identity(const FinFunctor& p);

// (d0 down F) for F : I -> D with d0 an object of D: objects (i, h : d0 -> F(i)),
// arrows those of I making the triangle commute.  tags: right = i, arrow = h.
CommaCategory arrow_comma(int d0, const FinFunctor& F);

}  // namespace relsite
