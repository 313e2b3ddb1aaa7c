#include "relsite/sitecheck.hpp"

namespace relsite {

CheckResult check_comorphism(const FinFunctor& p, const Topology& K, const Topology& J) {
  const auto& D = *p.source;
  for (int d = 0; d < D.num_objects(); ++d) {
    int pd = p.object_map[d];
    for (const auto& s : J.covers[pd]) {
      // the largest sieve on d whose image lies inside s; any witness sieve
      // is contained in it, so it covers iff some witness does
      std::vector<int> pulled;
      for (int f : D.arrows_into(d)) {
        if (s.contains(p.arrow_map[f])) pulled.push_back(f);
      }
      if (!K.covers_from_generators(d, pulled)) {
        std::string sieve_ids;
        for (int m : s.members) sieve_ids += (sieve_ids.empty() ? "" : ",") + J.category->arrows[m].id;
        return {false, "object " + D.objects[d] + ", covering sieve {" + sieve_ids + "} on " +
                           J.category->objects[pd] + " admits no compatible cover"};
      }
    }
  }
  return {};
}

CheckResult check_cover_preserving(const FinFunctor& A, const Topology& K, const Topology& K_prime) {
  const auto& D = *A.source;
  for (int d = 0; d < D.num_objects(); ++d) {
    for (const auto& s : K.covers[d]) {
      std::vector<int> image;
      image.reserve(s.members.size());
      for (int m : s.members) image.push_back(A.arrow_map[m]);
      if (!K_prime.covers_from_generators(A.object_map[d], image)) {
        std::string sieve_ids;
        for (int m : s.members) sieve_ids += (sieve_ids.empty() ? "" : ",") + D.arrows[m].id;
        return {false, "image of the cover {" + sieve_ids + "} on " + D.objects[d] + " does not cover"};
      }
    }
  }
  return {};
}

const CheckResult& FilteringResult::first_failure() const {
  if (!f1.ok) return f1;
  if (!f2.ok) return f2;
  return f3;
}

FilteringResult check_filtering(const FinFunctor& A, const Topology& K_prime) {
  const auto& D = *A.source;
  const auto& Dp = *A.target;
  FilteringResult result;

  for (int dp = 0; dp < Dp.num_objects() && result.f1.ok; ++dp) {
    std::vector<int> solved;
    for (int g : Dp.arrows_into(dp)) {
      int y = Dp.arrows[g].src;
      for (int d = 0; d < D.num_objects(); ++d) {
        if (!Dp.hom(y, A.object_map[d]).empty()) {
          solved.push_back(g);
          break;
        }
      }
    }
    if (!K_prime.covers_from_generators(dp, solved))
      result.f1 = {false, "object " + Dp.objects[dp] + " is not reached locally"};
  }

  for (int dp = 0; dp < Dp.num_objects() && result.f2.ok; ++dp) {
    for (int d1 = 0; d1 < D.num_objects() && result.f2.ok; ++d1) {
      for (int d2 = 0; d2 < D.num_objects() && result.f2.ok; ++d2) {
        for (int u : Dp.hom(dp, A.object_map[d1])) {
          for (int v : Dp.hom(dp, A.object_map[d2])) {
            std::vector<int> solved;
            for (int g : Dp.arrows_into(dp)) {
              int y = Dp.arrows[g].src;
              bool found = false;
              for (int d = 0; d < D.num_objects() && !found; ++d) {
                for (int s : D.hom(d, d1)) {
                  for (int t : D.hom(d, d2)) {
                    for (int gamma : Dp.hom(y, A.object_map[d])) {
                      if (Dp.compose(A.arrow_map[s], gamma) == Dp.compose(u, g) &&
                          Dp.compose(A.arrow_map[t], gamma) == Dp.compose(v, g)) {
                        found = true;
                        break;
                      }
                    }
                    if (found) break;
                  }
                  if (found) break;
                }
              }
              if (found) solved.push_back(g);
            }
            if (!K_prime.covers_from_generators(dp, solved)) {
              result.f2 = {false, "arrows " + Dp.arrows[u].id + ", " + Dp.arrows[v].id + " out of " +
                                      Dp.objects[dp] + " do not merge locally"};
              break;
            }
          }
          if (!result.f2.ok) break;
        }
      }
    }
  }

  for (int d1 = 0; d1 < D.num_objects() && result.f3.ok; ++d1) {
    for (int d2 = 0; d2 < D.num_objects() && result.f3.ok; ++d2) {
      for (int f1 : D.hom(d1, d2)) {
        for (int f2 : D.hom(d1, d2)) {
          for (int dp = 0; dp < Dp.num_objects(); ++dp) {
            for (int g : Dp.hom(dp, A.object_map[d1])) {
              if (Dp.compose(A.arrow_map[f1], g) != Dp.compose(A.arrow_map[f2], g)) continue;
              std::vector<int> solved;
              for (int h : Dp.arrows_into(dp)) {
                int y = Dp.arrows[h].src;
                bool found = false;
                for (int d = 0; d < D.num_objects() && !found; ++d) {
                  for (int k : D.hom(d, d1)) {
                    if (D.compose(f1, k) != D.compose(f2, k)) continue;
                    for (int gamma : Dp.hom(y, A.object_map[d])) {
                      if (Dp.compose(A.arrow_map[k], gamma) == Dp.compose(g, h)) {
                        found = true;
                        break;
                      }
                    }
                    if (found) break;
                  }
                }
                if (found) solved.push_back(h);
              }
              if (!K_prime.covers_from_generators(dp, solved)) {
                result.f3 = {false, "parallel pair " + D.arrows[f1].id + ", " + D.arrows[f2].id +
                                        " with " + Dp.arrows[g].id + " is not equalized locally"};
                break;
              }
            }
            if (!result.f3.ok) break;
          }
          if (!result.f3.ok) break;
        }
        if (!result.f3.ok) break;
      }
    }
  }
  return result;
}

CheckResult check_site_morphism(const FinFunctor& A, const Topology& K, const Topology& K_prime) {
  auto cover = check_cover_preserving(A, K, K_prime);
  if (!cover.ok) return {false, "cover preservation: " + cover.witness};
  auto filt = check_filtering(A, K_prime);
  if (!filt.ok()) return {false, "filtering: " + filt.first_failure().witness};
  return {};
}

}  // namespace relsite
