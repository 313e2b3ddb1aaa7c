#pragma once

#include "relsite/topology.hpp"

// Absolute site conditions for functors between finite sites.  Each check
// computes, per challenge, the sieve of arrows admitting the required data
// and asks whether it covers; upward closure of topologies makes that single
// membership test equivalent to searching for a covering subsieve.

namespace relsite {

struct SitePair {
  CatPtr category;
  Topology topology;
};

// p : (D, K) -> (C, J) is a comorphism of sites: every J-covering sieve on
// p(d) contains the p-image of some K-covering sieve on d
CheckResult check_comorphism(const FinFunctor& p, const Topology& K, const Topology& J);

// images of K-covers generate K'-covers
CheckResult check_cover_preserving(const FinFunctor& A, const Topology& K, const Topology& K_prime);

struct FilteringResult {
  CheckResult f1;  // objects reached locally
  CheckResult f2;  // pairs of arrows into images merged locally
  CheckResult f3;  // parallel pairs equalized locally
  bool ok() const { return f1.ok && f2.ok && f3.ok; }
  const CheckResult& first_failure() const;
};

FilteringResult check_filtering(const FinFunctor& A, const Topology& K_prime);

CheckResult check_site_morphism(const FinFunctor& A, const Topology& K, const Topology& K_prime);

}  // namespace relsite
