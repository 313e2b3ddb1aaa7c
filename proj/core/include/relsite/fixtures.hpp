#pragma once

#include "relsite/indexed.hpp"
#include "relsite/relative.hpp"

// Small named instances shared by the test suites: the walking arrow with its
// two interesting topologies, three relative problems with known verdicts,
// and a four-object Grothendieck construction with discrete fibers.  Each
// builder caches its result so repeated calls share carrier pointers.

namespace relsite::fixtures {

// objects a, b and a single non-identity arrow f : a -> b
CatPtr c2();

// the terminal category, named "1"
CatPtr point();

// only maximal sieves cover
Topology j_trivial();

// additionally, the sieve {f} covers b
Topology j_one();

// identity comparison of (C2, j_one) with itself; every check passes
RelativeProblem identity_problem();

// the point over b mapped into the identity fibration of C2 with trivial
// topologies; every route fails, first at base object a
RelativeProblem neg_problem();

// the point over b compared with itself; every check passes
RelativeProblem pos_problem();

// indexed over C2 with two-object discrete fibers; the total category has
// four objects
IndexedCategory discrete_indexed();

}  // namespace relsite::fixtures
