#include "relsite/indexed.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

namespace relsite {

CheckResult validate_indexed(const IndexedCategory& ix) {
  const auto& base = *ix.base;
  if (static_cast<int>(ix.fibers.size()) != base.num_objects()) return {false, "fiber list has wrong length"};
  if (static_cast<int>(ix.transitions.size()) != base.num_arrows())
    return {false, "transition list has wrong length"};
  for (int g = 0; g < base.num_arrows(); ++g) {
    const auto& t = ix.transitions[g];
    if (t.source != ix.fibers[base.arrows[g].dst] || t.target != ix.fibers[base.arrows[g].src])
      return {false, "transition along " + base.arrows[g].id + " has wrong endpoints"};
    auto ok = validate_functor(t);
    if (!ok.ok) return {false, "transition along " + base.arrows[g].id + ": " + ok.witness};
  }
  for (int c = 0; c < base.num_objects(); ++c) {
    if (!same_functor(ix.transitions[base.identities[c]], identity_functor(ix.fibers[c])))
      return {false, "transition along id:" + base.objects[c] + " is not the identity"};
  }
  for (int f = 0; f < base.num_arrows(); ++f) {
    for (int g = 0; g < base.num_arrows(); ++g) {
      if (!base.composable(g, f)) continue;
      if (!same_functor(ix.transitions[base.compose(g, f)],
                        compose_functors(ix.transitions[f], ix.transitions[g])))
        return {false, "transitions not strictly functorial at " + base.arrows[g].id + " after " + base.arrows[f].id};
    }
  }
  return {};
}

int TotalCategory::find_object(int fiber_object, int base_object) const {
  for (int i = 0; i < static_cast<int>(object_tags.size()); ++i) {
    if (object_tags[i].fiber_object == fiber_object && object_tags[i].base_object == base_object) return i;
  }
  return -1;
}

TotalCategory grothendieck_construction(const IndexedCategory& ix) {
  const auto& base = *ix.base;
  TotalCategory total;

  std::vector<std::string> obj_ids;
  std::map<std::pair<int, int>, int> obj_idx;
  for (int c = 0; c < base.num_objects(); ++c) {
    const auto& fib = *ix.fibers[c];
    for (int x = 0; x < fib.num_objects(); ++x) {
      obj_idx[{x, c}] = static_cast<int>(total.object_tags.size());
      total.object_tags.push_back({x, c});
      obj_ids.push_back("(" + fib.objects[x] + "@" + base.objects[c] + ")");
    }
  }

  const int n_obj = static_cast<int>(total.object_tags.size());
  std::vector<Arrow> arrows;
  std::vector<int> identities(n_obj, -1);
  std::map<std::tuple<int, int, int, int>, int> arr_idx;  // (src, dst, v, g)
  for (int s = 0; s < n_obj; ++s) {
    auto [x, c] = std::pair(total.object_tags[s].fiber_object, total.object_tags[s].base_object);
    const auto& fib = *ix.fibers[c];
    for (int d = 0; d < n_obj; ++d) {
      auto [x2, c2] = std::pair(total.object_tags[d].fiber_object, total.object_tags[d].base_object);
      for (int g : base.hom(c, c2)) {
        int gx2 = ix.transitions[g].object_map[x2];
        for (int v : fib.hom(x, gx2)) {
          int idx = static_cast<int>(arrows.size());
          arr_idx[{s, d, v, g}] = idx;
          arrows.push_back({"(" + fib.arrows[v].id + "|" + base.arrows[g].id + ")" + obj_ids[s] + ">" + obj_ids[d],
                            s, d});
          total.arrow_tags.push_back({v, g});
          total.cartesian.push_back(fib.is_identity(v) ? 1 : 0);
          if (s == d && v == fib.identities[x] && g == base.identities[c]) identities[s] = idx;
        }
      }
    }
  }

  const int n_arr = static_cast<int>(arrows.size());
  std::vector<int> table(static_cast<size_t>(n_arr) * n_arr, -1);
  for (int f = 0; f < n_arr; ++f) {
    for (int g = 0; g < n_arr; ++g) {
      if (arrows[f].dst != arrows[g].src) continue;
      int src = arrows[f].src, dst = arrows[g].dst;
      int c = total.object_tags[src].base_object;
      const auto& fib = *ix.fibers[c];
      int bf = total.arrow_tags[f].base_arrow, bg = total.arrow_tags[g].base_arrow;
      int composite_base = base.compose(bg, bf);
      // transport the second vertical back along the first base arrow
      int transported = ix.transitions[bf].arrow_map[total.arrow_tags[g].vertical];
      int composite_vertical = fib.compose(transported, total.arrow_tags[f].vertical);
      table[static_cast<size_t>(g) * n_arr + f] = arr_idx.at({src, dst, composite_vertical, composite_base});
    }
  }

  total.carrier = make_category("G(" + base.name + ")", std::move(obj_ids), std::move(arrows),
                                std::move(identities), std::move(table));
  FinFunctor proj{total.carrier, ix.base, {}, {}};
  for (const auto& t : total.object_tags) proj.object_map.push_back(t.base_object);
  for (const auto& t : total.arrow_tags) proj.arrow_map.push_back(t.base_arrow);
  total.projection = std::move(proj);
  return total;
}

bool is_cartesian(const FinFunctor& p, int f) {
  const auto& E = *p.source;
  const auto& B = *p.target;
  int y = E.arrows[f].src, x = E.arrows[f].dst;
  int pf = p.arrow_map[f];
  for (int yp = 0; yp < E.num_objects(); ++yp) {
    for (int fp : E.hom(yp, x)) {
      for (int w : B.hom(p.object_map[yp], p.object_map[y])) {
        if (B.compose(pf, w) != p.arrow_map[fp]) continue;
        int count = 0;
        for (int m : E.hom(yp, y)) {
          if (p.arrow_map[m] == w && E.compose(f, m) == fp) ++count;
        }
        if (count != 1) return false;
      }
    }
  }
  return true;
}

CheckResult check_fibration(const FinFunctor& p) {
  const auto& E = *p.source;
  const auto& B = *p.target;
  for (int x = 0; x < E.num_objects(); ++x) {
    for (int g : B.arrows_into(p.object_map[x])) {
      bool found = false;
      for (int y = 0; y < E.num_objects() && !found; ++y) {
        if (p.object_map[y] != B.arrows[g].src) continue;
        for (int f : E.hom(y, x)) {
          if (p.arrow_map[f] == g && is_cartesian(p, f)) {
            found = true;
            break;
          }
        }
      }
      if (!found)
        return {false, "no cartesian lift of " + B.arrows[g].id + " into " + E.objects[x]};
    }
  }
  return {};
}

Topology giraud_topology(const TotalCategory& total, const Topology& base_topology) {
  if (base_topology.category != total.projection.target)
    throw std::invalid_argument("giraud_topology: topology lives on the wrong category");
  const auto& carrier = *total.carrier;
  Topology t{total.carrier, {}};
  t.covers.resize(carrier.num_objects());
  for (int x = 0; x < carrier.num_objects(); ++x) {
    int c = total.projection.object_map[x];
    for (const auto& s : all_sieves_on(carrier, x)) {
      std::vector<int> proj;
      for (int m : s.members) {
        if (total.cartesian[m]) proj.push_back(total.projection.arrow_map[m]);
      }
      if (base_topology.covers_from_generators(c, proj)) t.covers[x].push_back(s);
    }
    std::sort(t.covers[x].begin(), t.covers[x].end());
  }
  return t;
}

CheckResult check_fibration_morphism(const TotalCategory& source, const TotalCategory& target,
                                     const FinFunctor& A, const NatTransform& phi) {
  if (A.source != source.carrier || A.target != target.carrier)
    return {false, "functor does not run between the given total categories"};
  auto fun_ok = validate_functor(A);
  if (!fun_ok.ok) return fun_ok;
  if (!same_functor(phi.source, compose_functors(target.projection, A)) ||
      !same_functor(phi.target, source.projection))
    return {false, "transformation is not p' A => p"};
  auto nat_ok = validate_nat_transform(phi);
  if (!nat_ok.ok) return nat_ok;
  const auto& base = *source.projection.target;
  for (int x = 0; x < source.carrier->num_objects(); ++x) {
    if (!base.is_iso(phi.components[x]))
      return {false, "component of phi at " + source.carrier->objects[x] + " is not an isomorphism"};
  }
  for (int f = 0; f < source.carrier->num_arrows(); ++f) {
    if (!source.cartesian[f]) continue;
    if (!is_cartesian(target.projection, A.arrow_map[f]))
      return {false, "cartesian arrow " + source.carrier->arrows[f].id + " is not sent to a cartesian arrow"};
  }
  return {};
}

}  // namespace relsite
