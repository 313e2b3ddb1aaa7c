#include "relsite/relative.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <utility>

#include "relsite/presheaf.hpp"

namespace relsite {

namespace {

// arrows of a comma carrier keyed by endpoints and constituent tags, so the
// induced functors below can locate images without searching
std::map<std::tuple<int, int, int, int>, int> comma_arrow_lookup(const CommaCategory& comma) {
  std::map<std::tuple<int, int, int, int>, int> out;
  const FinCategory& car = *comma.carrier;
  for (int a = 0; a < car.num_arrows(); ++a) {
    const CommaArrow& t = comma.arrow_tags[a];
    out[{car.arrows[a].src, car.arrows[a].dst, t.left, t.right}] = a;
  }
  return out;
}

std::string obj_id(const FinCategory& cat, int o) { return cat.objects[o]; }
std::string arr_id(const FinCategory& cat, int a) { return cat.arrows[a].id; }

}  // namespace

CheckResult validate_problem(const RelativeProblem& prob) {
  if (!prob.base.category || !prob.left.category || !prob.right.category)
    return {false, "missing category"};
  if (prob.p.source != prob.left.category || prob.p.target != prob.base.category)
    return {false, "p is not a functor from the left category to the base"};
  if (prob.p_prime.source != prob.right.category || prob.p_prime.target != prob.base.category)
    return {false, "p' is not a functor from the right category to the base"};
  if (prob.A.source != prob.left.category || prob.A.target != prob.right.category)
    return {false, "A is not a functor from the left category to the right"};

  for (const auto* pair : {&prob.base, &prob.left, &prob.right}) {
    if (pair->topology.category != pair->category)
      return {false, "topology attached to the wrong category"};
    if (CheckResult r = validate_topology(pair->topology); !r.ok) return r;
  }
  for (const auto* f : {&prob.p, &prob.p_prime, &prob.A})
    if (CheckResult r = validate_functor(*f); !r.ok) return r;

  if (!same_functor(prob.phi.source, compose_functors(prob.p_prime, prob.A)))
    return {false, "phi does not start at p' A"};
  if (!same_functor(prob.phi.target, prob.p))
    return {false, "phi does not end at p"};
  if (CheckResult r = validate_nat_transform(prob.phi); !r.ok) return r;

  if (CheckResult r = check_comorphism(prob.p, prob.left.topology, prob.base.topology); !r.ok)
    return {false, "p is not a comorphism of sites: " + r.witness};
  if (CheckResult r = check_comorphism(prob.p_prime, prob.right.topology, prob.base.topology); !r.ok)
    return {false, "p' is not a comorphism of sites: " + r.witness};
  return {};
}

FiberFunctor fiber_functor(const RelativeProblem& prob, int c) {
  const FinCategory& C = *prob.base.category;
  FiberFunctor out;
  out.source = comma_over_object(prob.p, c);
  out.target = comma_over_object(prob.p_prime, c);

  auto lookup = comma_arrow_lookup(out.target);
  const FinCategory& src = *out.source.carrier;

  FinFunctor F;
  F.source = out.source.carrier;
  F.target = out.target.carrier;
  F.object_map.resize(src.num_objects());
  for (int o = 0; o < src.num_objects(); ++o) {
    const CommaObject& t = out.source.object_tags[o];
    int u = C.compose(t.arrow, prob.phi.at(t.left));
    F.object_map[o] = out.target.find_object(prob.A.object_map[t.left], 0, u);
  }
  F.arrow_map.resize(src.num_arrows());
  for (int a = 0; a < src.num_arrows(); ++a) {
    const CommaArrow& t = out.source.arrow_tags[a];
    F.arrow_map[a] = lookup.at({F.object_map[src.arrows[a].src], F.object_map[src.arrows[a].dst],
                                prob.A.arrow_map[t.left], t.right});
  }
  out.functor = std::move(F);
  return out;
}

GlobalFunctor global_functor(const RelativeProblem& prob) {
  const FinCategory& C = *prob.base.category;
  GlobalFunctor out;
  out.source = comma_over_identity(prob.p);
  out.target = comma_over_identity(prob.p_prime);

  auto lookup = comma_arrow_lookup(out.target);
  const FinCategory& src = *out.source.carrier;

  FinFunctor F;
  F.source = out.source.carrier;
  F.target = out.target.carrier;
  F.object_map.resize(src.num_objects());
  for (int o = 0; o < src.num_objects(); ++o) {
    const CommaObject& t = out.source.object_tags[o];
    int u = C.compose(t.arrow, prob.phi.at(t.left));
    F.object_map[o] = out.target.find_object(prob.A.object_map[t.left], t.right, u);
  }
  F.arrow_map.resize(src.num_arrows());
  for (int a = 0; a < src.num_arrows(); ++a) {
    const CommaArrow& t = out.source.arrow_tags[a];
    F.arrow_map[a] = lookup.at({F.object_map[src.arrows[a].src], F.object_map[src.arrows[a].dst],
                                prob.A.arrow_map[t.left], t.right});
  }
  out.functor = std::move(F);
  return out;
}

namespace {

// sieve-of-solutions test shared by cofinality (over every base object) and
// the first relative filtering condition (at one base object): an arrow
// f : y -> d' qualifies when the challenge composite chi p'(f) factors as
// u1 phi_k p'(v) for some k, v : y -> A(k), u1 : p(k) -> c
CheckResult reach_at(const RelativeProblem& prob, int c) {
  const FinCategory& C = *prob.base.category;
  const FinCategory& D = *prob.left.category;
  const FinCategory& Dp = *prob.right.category;
  const Topology& Kp = prob.right.topology;

  std::map<int, std::set<int>> memo;  // y -> composites u1 phi_k p'(v)
  auto reach_set = [&](int y) -> const std::set<int>& {
    auto it = memo.find(y);
    if (it != memo.end()) return it->second;
    std::set<int> acc;
    for (int k = 0; k < D.num_objects(); ++k) {
      int ak = prob.A.object_map[k];
      for (int v : Dp.hom(y, ak)) {
        int leg = C.compose(prob.phi.at(k), prob.p_prime.arrow_map[v]);
        for (int u1 : C.hom(prob.p.object_map[k], c)) acc.insert(C.compose(u1, leg));
      }
    }
    return memo.emplace(y, std::move(acc)).first->second;
  };

  for (int dp = 0; dp < Dp.num_objects(); ++dp) {
    for (int chi : C.hom(prob.p_prime.object_map[dp], c)) {
      std::vector<int> gens;
      for (int f : Dp.arrows_into(dp)) {
        int e = C.compose(chi, prob.p_prime.arrow_map[f]);
        if (reach_set(Dp.arrows[f].src).count(e)) gens.push_back(f);
      }
      if (!Kp.covers_from_generators(dp, gens))
        return {false, "c=" + obj_id(C, c) + ", d'=" + obj_id(Dp, dp) + ", chi=" + arr_id(C, chi)};
    }
  }
  return {};
}

struct ArrowCommaInfo {
  CommaCategory ac;
  std::vector<int> comp_of;                 // carrier object -> connected component
  std::map<std::pair<int, int>, int> index;  // (indexing object, comparison arrow) -> carrier object
};

ArrowCommaInfo make_arrow_comma_info(int y, const FinFunctor& diagram) {
  ArrowCommaInfo info{arrow_comma(y, diagram), {}, {}};
  auto comps = connected_components(*info.ac.carrier);
  info.comp_of.assign(info.ac.carrier->num_objects(), -1);
  for (size_t ci = 0; ci < comps.size(); ++ci)
    for (int o : comps[ci]) info.comp_of[o] = static_cast<int>(ci);
  for (int o = 0; o < info.ac.carrier->num_objects(); ++o)
    info.index[{info.ac.object_tags[o].right, info.ac.object_tags[o].arrow}] = o;
  return info;
}

}  // namespace

CheckResult check_filtered_reach_at(const RelativeProblem& prob, int c) { return reach_at(prob, c); }

CofinalityResult check_cofinality(const RelativeProblem& prob) {
  const FinCategory& C = *prob.base.category;
  const FinCategory& Dp = *prob.right.category;
  const Topology& Kp = prob.right.topology;
  CofinalityResult out;

  for (int c = 0; c < C.num_objects() && out.surjectivity.ok; ++c)
    out.surjectivity = reach_at(prob, c);

  // two generalized elements with the same composite must be connected,
  // locally over d', inside the comma of p over c
  for (int c = 0; c < C.num_objects() && out.injectivity.ok; ++c) {
    CommaCategory pc = comma_over_object(prob.p, c);
    FinFunctor diagram = compose_functors(prob.A, pc.proj_left);  // (p down c) -> D'
    std::map<int, ArrowCommaInfo> memo;                           // per source object y
    auto info_at = [&](int y) -> const ArrowCommaInfo& {
      auto it = memo.find(y);
      if (it != memo.end()) return it->second;
      return memo.emplace(y, make_arrow_comma_info(y, diagram)).first->second;
    };

    for (int dp = 0; dp < Dp.num_objects() && out.injectivity.ok; ++dp) {
      struct Item {
        int comma_obj;  // object of (p down c), carries k and u1
        int v;          // d' -> A(k) in D'
        int composite;  // u1 phi_k p'(v) in C
      };
      std::vector<Item> items;
      for (int o = 0; o < pc.carrier->num_objects(); ++o) {
        const CommaObject& t = pc.object_tags[o];
        int leg = C.compose(t.arrow, prob.phi.at(t.left));
        for (int v : Dp.hom(dp, prob.A.object_map[t.left]))
          items.push_back({o, v, C.compose(leg, prob.p_prime.arrow_map[v])});
      }
      for (size_t i = 0; i < items.size() && out.injectivity.ok; ++i) {
        for (size_t j = i + 1; j < items.size(); ++j) {
          if (items[i].composite != items[j].composite) continue;
          std::vector<int> gens;
          for (int f : Dp.arrows_into(dp)) {
            const ArrowCommaInfo& info = info_at(Dp.arrows[f].src);
            int o1 = info.index.at({items[i].comma_obj, Dp.compose(items[i].v, f)});
            int o2 = info.index.at({items[j].comma_obj, Dp.compose(items[j].v, f)});
            if (info.comp_of[o1] == info.comp_of[o2]) gens.push_back(f);
          }
          if (!Kp.covers_from_generators(dp, gens)) {
            const CommaObject& t1 = pc.object_tags[items[i].comma_obj];
            const CommaObject& t2 = pc.object_tags[items[j].comma_obj];
            out.injectivity = {false, "c=" + obj_id(C, c) + ", d'=" + obj_id(Dp, dp) +
                                          ", v=" + arr_id(Dp, items[i].v) + ", u=" + arr_id(C, t1.arrow) +
                                          ", v'=" + arr_id(Dp, items[j].v) + ", u'=" + arr_id(C, t2.arrow)};
            break;
          }
        }
      }
    }
  }
  return out;
}

RelativeFilteredResult check_relative_filtered(const RelativeProblem& prob) {
  const FinCategory& C = *prob.base.category;
  const FinCategory& D = *prob.left.category;
  const FinCategory& Dp = *prob.right.category;
  const Topology& Kp = prob.right.topology;
  RelativeFilteredResult out;

  for (int c = 0; c < C.num_objects() && out.reach.ok; ++c) out.reach = reach_at(prob, c);

  // pairs of arrows into A-images with equal composites over the base must
  // merge locally through a common span in D
  for (int c = 0; c < C.num_objects() && out.merge.ok; ++c) {
    for (int d1 = 0; d1 < D.num_objects() && out.merge.ok; ++d1) {
      for (int h1 : C.hom(prob.p.object_map[d1], c)) {
        if (!out.merge.ok) break;
        for (int d2 = 0; d2 < D.num_objects() && out.merge.ok; ++d2) {
          for (int h2 : C.hom(prob.p.object_map[d2], c)) {
            if (!out.merge.ok) break;

            // spans (d, s : d -> d1, t : d -> d2) agreeing under p, computed
            // once per challenge pair since they do not involve d'
            std::vector<std::tuple<int, int, int>> spans;
            for (int d = 0; d < D.num_objects(); ++d)
              for (int s : D.hom(d, d1))
                for (int t : D.hom(d, d2))
                  if (C.compose(h1, prob.p.arrow_map[s]) == C.compose(h2, prob.p.arrow_map[t]))
                    spans.emplace_back(d, s, t);

            int leg1 = C.compose(h1, prob.phi.at(d1));
            int leg2 = C.compose(h2, prob.phi.at(d2));
            for (int dp = 0; dp < Dp.num_objects() && out.merge.ok; ++dp) {
              for (int u : Dp.hom(dp, prob.A.object_map[d1])) {
                if (!out.merge.ok) break;
                for (int v : Dp.hom(dp, prob.A.object_map[d2])) {
                  if (C.compose(leg1, prob.p_prime.arrow_map[u]) !=
                      C.compose(leg2, prob.p_prime.arrow_map[v]))
                    continue;
                  std::vector<int> gens;
                  for (int g : Dp.arrows_into(dp)) {
                    int y = Dp.arrows[g].src;
                    int ug = Dp.compose(u, g);
                    int vg = Dp.compose(v, g);
                    bool found = false;
                    for (const auto& [d, s, t] : spans) {
                      for (int gamma : Dp.hom(y, prob.A.object_map[d])) {
                        if (ug == Dp.compose(prob.A.arrow_map[s], gamma) &&
                            vg == Dp.compose(prob.A.arrow_map[t], gamma)) {
                          found = true;
                          break;
                        }
                      }
                      if (found) break;
                    }
                    if (found) gens.push_back(g);
                  }
                  if (!Kp.covers_from_generators(dp, gens)) {
                    out.merge = {false,
                                 "c=" + obj_id(C, c) + ", d1=" + obj_id(D, d1) + ", h1=" + arr_id(C, h1) +
                                     ", d2=" + obj_id(D, d2) + ", h2=" + arr_id(C, h2) + ", d'=" +
                                     obj_id(Dp, dp) + ", u=" + arr_id(Dp, u) + ", v=" + arr_id(Dp, v)};
                    break;
                  }
                }
              }
            }
          }
        }
      }
    }
  }

  out.equalize = check_filtering(prob.A, Kp).f3;
  out.covers = check_cover_preserving(prob.A, prob.left.topology, Kp);
  return out;
}

const CheckResult& RelativeFilteredResult::first_failure() const {
  if (!reach.ok) return reach;
  if (!merge.ok) return merge;
  if (!equalize.ok) return equalize;
  return covers;
}

CheckResult check_fiberwise(const RelativeProblem& prob) {
  const FinCategory& C = *prob.base.category;
  for (int c = 0; c < C.num_objects(); ++c) {
    FiberFunctor fib = fiber_functor(prob, c);
    Topology kc = comma_giraud_topology(fib.source, prob.left.topology);
    Topology kpc = comma_giraud_topology(fib.target, prob.right.topology);
    CheckResult r = check_site_morphism(fib.functor, kc, kpc);
    if (!r.ok) return {false, "c=" + obj_id(C, c) + ": " + r.witness};
  }
  return {};
}

DiagonalSite diagonal_category(const RelativeProblem& prob) {
  DiagonalSite out;
  out.global = global_functor(prob);
  out.comma = comma_category("diag(" + prob.name + ")",
                             identity_functor(out.global.target.carrier), out.global.functor);

  const FinCategory& C = *prob.base.category;
  const CommaCategory& gt = out.global.target;  // (p' down 1_C)
  out.diagonal.assign(out.comma.carrier->num_objects(), 0);
  for (int o = 0; o < out.comma.carrier->num_objects(); ++o) {
    int h = out.comma.object_tags[o].arrow;  // arrow of (p' down 1_C)
    if (C.is_identity(gt.arrow_tags[h].right)) out.diagonal[o] = 1;
  }
  out.ktilde = projected_topology(out.comma.carrier,
                                  compose_functors(gt.proj_left, out.comma.proj_left),
                                  prob.right.topology);
  return out;
}

CheckResult check_diagonal_density(const RelativeProblem& prob) {
  // Streams over the objects (chi, xi, h) of the comma of the global functor
  // instead of materializing it: an arrow (r, s) into such an object comes
  // from the diagonal when its source comparison arrow can be chosen vertical
  // over the base, and the covering test projects everything down to D'.
  GlobalFunctor g = global_functor(prob);
  const FinCategory& C = *prob.base.category;
  const FinCategory& S = *g.source.carrier;   // (p down 1_C)
  const FinCategory& T = *g.target.carrier;   // (p' down 1_C)
  const Topology& Kp = prob.right.topology;

  auto vertical = [&](int arrow_in_t) { return C.is_identity(g.target.arrow_tags[arrow_in_t].right); };

  for (int chi = 0; chi < T.num_objects(); ++chi) {
    int dp = g.target.object_tags[chi].left;
    for (int xi = 0; xi < S.num_objects(); ++xi) {
      int axi = g.functor.object_map[xi];
      for (int h : T.hom(chi, axi)) {
        std::vector<int> gens;
        for (int r : T.arrows_into(chi)) {
          int chi_i = T.arrows[r].src;
          int hr = T.compose(h, r);
          bool qualified = false;
          for (int s : S.arrows_into(xi)) {
            int axi_i = g.functor.object_map[S.arrows[s].src];
            int as = g.functor.arrow_map[s];
            for (int hi : T.hom(chi_i, axi_i)) {
              if (vertical(hi) && T.compose(as, hi) == hr) {
                qualified = true;
                break;
              }
            }
            if (qualified) break;
          }
          if (qualified) gens.push_back(g.target.arrow_tags[r].left);
        }
        if (!Kp.covers_from_generators(dp, gens))
          return {false, "chi=" + obj_id(T, chi) + ", xi=" + obj_id(S, xi) + ", h=" + arr_id(T, h)};
      }
    }
  }
  return {};
}

bool RelativeVerdict::all_pass() const {
  return cofinality.ok() && filtered.ok() && fiberwise.ok && diagonal.ok &&
         (!oracle.has_value() || oracle->ok);
}

RelativeVerdict relative_verdict(const RelativeProblem& prob, bool with_oracle) {
  RelativeVerdict v;
  v.site_morphism = check_site_morphism(prob.A, prob.left.topology, prob.right.topology);
  v.cofinality = check_cofinality(prob);
  v.filtered = check_relative_filtered(prob);
  v.fiberwise = check_fiberwise(prob);
  v.diagonal = check_diagonal_density(prob);

  if (with_oracle) {
    const FinCategory& C = *prob.base.category;
    CheckResult r;
    for (int c = 0; c < C.num_objects() && r.ok; ++c) {
      PresheafMorphism m = build_phi_tilde(prob, c);
      CheckResult lr = is_local_isomorphism(m, prob.right.topology);
      if (!lr.ok) r = {false, "c=" + obj_id(C, c) + ": " + lr.witness};
    }
    v.oracle = r;
  }

  auto tag = [](bool b) { return b ? std::string("passes") : std::string("fails"); };
  if (v.filtered.ok() != v.fiberwise.ok)
    v.discrepancies.push_back("relative filtering " + tag(v.filtered.ok()) +
                              " but the fiberwise site check " + tag(v.fiberwise.ok));
  if (v.site_morphism.ok) {
    if (v.cofinality.ok() != v.filtered.ok())
      v.discrepancies.push_back("cofinality " + tag(v.cofinality.ok()) + " but relative filtering " +
                                tag(v.filtered.ok()));
    if (v.filtered.ok() != v.diagonal.ok)
      v.discrepancies.push_back("relative filtering " + tag(v.filtered.ok()) +
                                " but diagonal denseness " + tag(v.diagonal.ok));
  }
  if (v.oracle.has_value() && v.oracle->ok != v.cofinality.ok())
    v.discrepancies.push_back("the presheaf comparison " + tag(v.oracle->ok) + " but cofinality " +
                              tag(v.cofinality.ok()));
  return v;
}

}  // namespace relsite
