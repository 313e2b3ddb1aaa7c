#include "relsite/topology.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>

namespace relsite {

bool Sieve::contains(int a) const { return std::binary_search(members.begin(), members.end(), a); }

Sieve generate_sieve(const FinCategory& cat, int base, const std::vector<int>& generators) {
  std::set<int> acc;
  for (int g : generators) {
    if (cat.arrows[g].dst != base) throw std::invalid_argument("generate_sieve: generator not into base");
    for (int f : cat.arrows_into(cat.arrows[g].src)) acc.insert(cat.compose(g, f));
  }
  return {base, {acc.begin(), acc.end()}};
}

Sieve maximal_sieve(const FinCategory& cat, int base) {
  Sieve s{base, cat.arrows_into(base)};
  std::sort(s.members.begin(), s.members.end());
  return s;
}

Sieve pullback_sieve(const FinCategory& cat, const Sieve& s, int h) {
  if (cat.arrows[h].dst != s.base) throw std::invalid_argument("pullback_sieve: arrow not into base");
  Sieve out{cat.arrows[h].src, {}};
  for (int f : cat.arrows_into(out.base)) {
    if (s.contains(cat.compose(h, f))) out.members.push_back(f);
  }
  std::sort(out.members.begin(), out.members.end());
  return out;
}

std::vector<Sieve> all_sieves_on(const FinCategory& cat, int base) {
  // every sieve is a union of principal sieves; close the principal sieves
  // under union, tracking membership as bitmasks over the incoming arrows
  const auto& in = cat.arrows_into(base);
  if (in.size() > 63) throw std::length_error("all_sieves_on: too many arrows into the object");
  std::vector<int> rank(cat.num_arrows(), -1);
  for (size_t i = 0; i < in.size(); ++i) rank[in[i]] = static_cast<int>(i);

  std::vector<std::uint64_t> principal;
  principal.reserve(in.size());
  for (int f : in) {
    std::uint64_t mask = 0;
    for (int m : generate_sieve(cat, base, {f}).members) mask |= 1ull << rank[m];
    principal.push_back(mask);
  }
  std::set<std::uint64_t> pool{0};
  std::vector<std::uint64_t> frontier{0};
  while (!frontier.empty()) {
    std::vector<std::uint64_t> next;
    for (auto m : frontier) {
      for (auto p : principal) {
        if (pool.insert(m | p).second) next.push_back(m | p);
      }
    }
    if (pool.size() > (1u << 20)) throw std::length_error("all_sieves_on: sieve lattice too large");
    frontier = std::move(next);
  }
  std::vector<Sieve> out;
  out.reserve(pool.size());
  for (auto mask : pool) {
    Sieve s{base, {}};
    for (size_t i = 0; i < in.size(); ++i) {
      if (mask & (1ull << i)) s.members.push_back(in[i]);
    }
    std::sort(s.members.begin(), s.members.end());
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Topology::is_covering(const Sieve& s) const {
  const auto& bucket = covers[s.base];
  return std::binary_search(bucket.begin(), bucket.end(), s);
}

bool Topology::covers_from_generators(int base, const std::vector<int>& generators) const {
  return is_covering(generate_sieve(*category, base, generators));
}

Topology trivial_topology(const CatPtr& cat) {
  Topology t{cat, {}};
  t.covers.resize(cat->num_objects());
  for (int c = 0; c < cat->num_objects(); ++c) t.covers[c].push_back(maximal_sieve(*cat, c));
  return t;
}

CheckResult validate_topology(const Topology& t) {
  const auto& cat = *t.category;
  if (static_cast<int>(t.covers.size()) != cat.num_objects())
    return {false, "cover table has wrong length"};
  for (int c = 0; c < cat.num_objects(); ++c) {
    for (const auto& s : t.covers[c]) {
      if (s.base != c) return {false, "sieve stored under " + cat.objects[c] + " has base mismatch"};
      for (int m : s.members) {
        if (cat.arrows[m].dst != c)
          return {false, "member " + cat.arrows[m].id + " of a sieve on " + cat.objects[c] + " has wrong target"};
        for (int f : cat.arrows_into(cat.arrows[m].src)) {
          if (!s.contains(cat.compose(m, f)))
            return {false, "sieve on " + cat.objects[c] + " not closed: misses " + cat.arrows[m].id +
                               " after " + cat.arrows[f].id};
        }
      }
    }
  }
  for (int c = 0; c < cat.num_objects(); ++c) {
    if (!t.is_covering(maximal_sieve(cat, c)))
      return {false, "maximality fails at " + cat.objects[c]};
  }
  for (int c = 0; c < cat.num_objects(); ++c) {
    for (const auto& s : t.covers[c]) {
      for (int h : cat.arrows_into(c)) {
        if (!t.is_covering(pullback_sieve(cat, s, h)))
          return {false, "stability fails at " + cat.objects[c] + " along " + cat.arrows[h].id};
      }
    }
  }
  for (int c = 0; c < cat.num_objects(); ++c) {
    for (const auto& s : all_sieves_on(cat, c)) {
      if (t.is_covering(s)) continue;
      for (const auto& r : t.covers[c]) {
        bool locally = true;
        for (int m : r.members) {
          if (!t.is_covering(pullback_sieve(cat, s, m))) {
            locally = false;
            break;
          }
        }
        if (locally)
          return {false, "transitivity fails at " + cat.objects[c] + ": a sieve locally covered by a cover is not covering"};
      }
    }
  }
  return {};
}

Topology generate_topology(const CatPtr& cat, const std::vector<Sieve>& basis) {
  std::vector<std::set<std::vector<int>>> covers(cat->num_objects());
  for (int c = 0; c < cat->num_objects(); ++c) covers[c].insert(maximal_sieve(*cat, c).members);
  for (const auto& s : basis) covers[s.base].insert(generate_sieve(*cat, s.base, s.members).members);

  std::vector<std::vector<Sieve>> sieves(cat->num_objects());
  for (int c = 0; c < cat->num_objects(); ++c) sieves[c] = all_sieves_on(*cat, c);

  bool changed = true;
  while (changed) {
    changed = false;
    // stability closure
    for (int c = 0; c < cat->num_objects(); ++c) {
      std::vector<std::vector<int>> snapshot(covers[c].begin(), covers[c].end());
      for (const auto& m : snapshot) {
        Sieve s{c, m};
        for (int h : cat->arrows_into(c)) {
          auto pb = pullback_sieve(*cat, s, h);
          if (covers[pb.base].insert(pb.members).second) changed = true;
        }
      }
    }
    // transitivity closure
    for (int c = 0; c < cat->num_objects(); ++c) {
      for (const auto& s : sieves[c]) {
        if (covers[c].count(s.members)) continue;
        bool forced = false;
        for (const auto& r : covers[c]) {
          bool locally = true;
          for (int m : r) {
            auto pb = pullback_sieve(*cat, s, m);
            if (!covers[pb.base].count(pb.members)) {
              locally = false;
              break;
            }
          }
          if (locally) {
            forced = true;
            break;
          }
        }
        if (forced) {
          covers[c].insert(s.members);
          changed = true;
        }
      }
    }
  }

  Topology t{cat, {}};
  t.covers.resize(cat->num_objects());
  for (int c = 0; c < cat->num_objects(); ++c) {
    for (const auto& m : covers[c]) t.covers[c].push_back({c, m});
    std::sort(t.covers[c].begin(), t.covers[c].end());
  }
  return t;
}

bool topology_leq(const Topology& lhs, const Topology& rhs) {
  if (lhs.category != rhs.category) throw std::invalid_argument("topology_leq: carrier mismatch");
  for (int c = 0; c < lhs.category->num_objects(); ++c) {
    for (const auto& s : lhs.covers[c]) {
      if (!rhs.is_covering(s)) return false;
    }
  }
  return true;
}

Topology projected_topology(const CatPtr& carrier, const FinFunctor& Q, const Topology& K) {
  if (Q.source != carrier || Q.target != K.category)
    throw std::invalid_argument("projected_topology: functor endpoints mismatch");
  Topology t{carrier, {}};
  t.covers.resize(carrier->num_objects());
  for (int x = 0; x < carrier->num_objects(); ++x) {
    for (const auto& s : all_sieves_on(*carrier, x)) {
      std::vector<int> proj;
      proj.reserve(s.members.size());
      for (int m : s.members) proj.push_back(Q.arrow_map[m]);
      if (K.covers_from_generators(Q.object_map[x], proj)) t.covers[x].push_back(s);
    }
    std::sort(t.covers[x].begin(), t.covers[x].end());
  }
  return t;
}

Topology comma_giraud_topology(const CommaCategory& comma, const Topology& K) {
  return projected_topology(comma.carrier, comma.proj_left, K);
}

std::vector<Topology> all_topologies(const CatPtr& cat) {
  // globally indexed sieve pool, in (object, sieve) order
  std::vector<Sieve> pool;
  for (int c = 0; c < cat->num_objects(); ++c) {
    for (auto& s : all_sieves_on(*cat, c)) pool.push_back(std::move(s));
  }

  std::vector<Topology> out;
  auto covered_by = [&](const Topology& t, const Sieve& s) { return t.is_covering(s); };

  // branch on the first sieve undecided by the closure of the forced-in set;
  // excluded sieves prune any branch whose closure reaches them
  std::function<void(std::vector<Sieve>, std::vector<char>)> rec =
      [&](std::vector<Sieve> forced, std::vector<char> excluded) {
        Topology closure = generate_topology(cat, forced);
        for (size_t i = 0; i < pool.size(); ++i) {
          if (excluded[i] && covered_by(closure, pool[i])) return;
        }
        int branch = -1;
        for (size_t i = 0; i < pool.size(); ++i) {
          if (!excluded[i] && !covered_by(closure, pool[i])) {
            branch = static_cast<int>(i);
            break;
          }
        }
        if (branch < 0) {
          out.push_back(std::move(closure));
          return;
        }
        auto forced2 = forced;
        forced2.push_back(pool[branch]);
        rec(std::move(forced2), excluded);
        excluded[branch] = 1;
        rec(std::move(forced), std::move(excluded));
      };
  rec({}, std::vector<char>(pool.size(), 0));
  return out;
}

}  // namespace relsite
