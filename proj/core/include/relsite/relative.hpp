#pragma once

#include <optional>

#include "relsite/sitecheck.hpp"

// Checkers deciding whether a functor A between two sites fibred over a
// common base site, together with a comparison transformation phi, induces a
// morphism of the relative toposes.  Four independent routes are provided:
// cofinality of the induced comma functors, the relative filtering
// conditions, fiberwise site-morphism checks, and denseness of the diagonal
// in the comma of the induced global functor.  Their pairwise agreement is
// the content of the theorems this workbench exercises, and relative_verdict
// reports any disagreement as a discrepancy rather than papering over it.

namespace relsite {

struct RelativeProblem {
  std::string name;
  SitePair base;   // (C, J)
  SitePair left;   // (D, K)
  SitePair right;  // (D', K')
  FinFunctor p;        // D -> C, comorphism of sites
  FinFunctor p_prime;  // D' -> C, comorphism of sites
  FinFunctor A;        // D -> D'
  NatTransform phi;    // p' A => p
};

// structural coherence, functoriality, naturality, and both comorphism
// conditions; topology validity is checked as well
CheckResult validate_problem(const RelativeProblem& prob);

struct FiberFunctor {
  CommaCategory source;  // (p down c)
  CommaCategory target;  // (p' down c)
  FinFunctor functor;    // (d, u) |-> (A(d), u after phi_d)
};

FiberFunctor fiber_functor(const RelativeProblem& prob, int c);

struct GlobalFunctor {
  CommaCategory source;  // (p down 1_C)
  CommaCategory target;  // (p' down 1_C)
  FinFunctor functor;    // (d, c, u) |-> (A(d), c, u after phi_d)
};

GlobalFunctor global_functor(const RelativeProblem& prob);

struct CofinalityResult {
  CheckResult surjectivity;  // every generalized element is reached locally
  CheckResult injectivity;   // parallel data merge locally in the comma
  bool ok() const { return surjectivity.ok && injectivity.ok; }
};

CofinalityResult check_cofinality(const RelativeProblem& prob);

struct RelativeFilteredResult {
  CheckResult reach;      // (a) arrows into the base object lift locally
  CheckResult merge;      // (b) pairs of arrows into images merge over the base
  CheckResult equalize;   // (c) parallel pairs equalized locally
  CheckResult covers;     // (d) A preserves covers
  bool ok() const { return reach.ok && merge.ok && equalize.ok && covers.ok; }
  const CheckResult& first_failure() const;
};

RelativeFilteredResult check_relative_filtered(const RelativeProblem& prob);

// condition (a) restricted to a single base object; agrees with local
// surjectivity of the comparison morphism built by the presheaf oracle
CheckResult check_filtered_reach_at(const RelativeProblem& prob, int c);

// every fiber functor a morphism of sites for the projected topologies
CheckResult check_fiberwise(const RelativeProblem& prob);

struct DiagonalSite {
  GlobalFunctor global;
  CommaCategory comma;          // (identity down A_C) over (p' down 1_C)
  std::vector<char> diagonal;   // marks objects whose comparison arrow is vertical over C
  Topology ktilde;              // covers iff the components in D' cover
};

// materializes the comma of the global functor; meant for fixture-sized
// problems, the density check below streams instead
DiagonalSite diagonal_category(const RelativeProblem& prob);

CheckResult check_diagonal_density(const RelativeProblem& prob);

struct RelativeVerdict {
  CheckResult site_morphism;  // A as a morphism of ordinary sites
  CofinalityResult cofinality;
  RelativeFilteredResult filtered;
  CheckResult fiberwise;
  CheckResult diagonal;
  std::optional<CheckResult> oracle;  // presheaf-level comparison, when requested
  std::vector<std::string> discrepancies;

  bool all_pass() const;
  bool consistent() const { return discrepancies.empty(); }
};

RelativeVerdict relative_verdict(const RelativeProblem& prob, bool with_oracle);

}  // namespace relsite
