#include "relsite/presheaf.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <tuple>

namespace relsite {

namespace {

// plain union-find, used for all the quotients in this module
struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  // dense class numbering in order of least member; fills member -> class
  int number_classes(std::vector<int>& cls) {
    cls.assign(parent.size(), -1);
    int next = 0;
    for (size_t i = 0; i < parent.size(); ++i) {
      int r = find(static_cast<int>(i));
      if (cls[r] < 0) cls[r] = next++;
      cls[i] = cls[r];
    }
    return next;
  }
};

std::vector<std::string> class_labels(int n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back("e" + std::to_string(i));
  return out;
}

int index_in(const std::vector<int>& list, int value) {
  for (size_t i = 0; i < list.size(); ++i) {
    if (list[i] == value) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

CheckResult validate_presheaf(const FinPresheaf& P) {
  const auto& cat = *P.category;
  if (static_cast<int>(P.elements.size()) != cat.num_objects() ||
      static_cast<int>(P.restriction.size()) != cat.num_arrows())
    return {false, "tables have wrong length"};
  for (int f = 0; f < cat.num_arrows(); ++f) {
    if (static_cast<int>(P.restriction[f].size()) != P.size(cat.arrows[f].dst))
      return {false, "restriction along " + cat.arrows[f].id + " has wrong domain"};
    for (int e : P.restriction[f]) {
      if (e < 0 || e >= P.size(cat.arrows[f].src))
        return {false, "restriction along " + cat.arrows[f].id + " lands out of range"};
    }
  }
  for (int x = 0; x < cat.num_objects(); ++x) {
    for (int e = 0; e < P.size(x); ++e) {
      if (P.restrict_elem(cat.identities[x], e) != e)
        return {false, "identity restriction moves " + P.elements[x][e] + " at " + cat.objects[x]};
    }
  }
  for (int f = 0; f < cat.num_arrows(); ++f) {
    for (int g = 0; g < cat.num_arrows(); ++g) {
      if (!cat.composable(g, f)) continue;
      int gf = cat.compose(g, f);
      for (int e = 0; e < P.size(cat.arrows[g].dst); ++e) {
        if (P.restrict_elem(f, P.restrict_elem(g, e)) != P.restrict_elem(gf, e))
          return {false, "functoriality fails along " + cat.arrows[g].id + " after " + cat.arrows[f].id};
      }
    }
  }
  return {};
}

CheckResult validate_presheaf_morphism(const PresheafMorphism& m) {
  if (m.source->category != m.target->category) return {false, "presheaves live on different categories"};
  const auto& cat = *m.source->category;
  if (static_cast<int>(m.components.size()) != cat.num_objects()) return {false, "component table wrong length"};
  for (int x = 0; x < cat.num_objects(); ++x) {
    if (static_cast<int>(m.components[x].size()) != m.source->size(x))
      return {false, "component at " + cat.objects[x] + " has wrong domain"};
    for (int e : m.components[x]) {
      if (e < 0 || e >= m.target->size(x)) return {false, "component at " + cat.objects[x] + " out of range"};
    }
  }
  for (int f = 0; f < cat.num_arrows(); ++f) {
    int x = cat.arrows[f].src, y = cat.arrows[f].dst;
    for (int e = 0; e < m.source->size(y); ++e) {
      if (m.components[x][m.source->restrict_elem(f, e)] != m.target->restrict_elem(f, m.components[y][e]))
        return {false, "naturality fails along " + cat.arrows[f].id};
    }
  }
  return {};
}

PshPtr representable(const CatPtr& cat, int c) {
  auto P = std::make_shared<FinPresheaf>();
  P->category = cat;
  P->elements.resize(cat->num_objects());
  for (int x = 0; x < cat->num_objects(); ++x) {
    for (int h : cat->hom(x, c)) P->elements[x].push_back(cat->arrows[h].id);
  }
  P->restriction.resize(cat->num_arrows());
  for (int f = 0; f < cat->num_arrows(); ++f) {
    int x = cat->arrows[f].src, y = cat->arrows[f].dst;
    for (int h : cat->hom(y, c)) P->restriction[f].push_back(index_in(cat->hom(x, c), cat->compose(h, f)));
  }
  return P;
}

PshPtr restrict_along(const FinFunctor& p, const PshPtr& P) {
  auto Q = std::make_shared<FinPresheaf>();
  Q->category = p.source;
  Q->elements.resize(p.source->num_objects());
  for (int d = 0; d < p.source->num_objects(); ++d) Q->elements[d] = P->elements[p.object_map[d]];
  Q->restriction.resize(p.source->num_arrows());
  for (int m = 0; m < p.source->num_arrows(); ++m) Q->restriction[m] = P->restriction[p.arrow_map[m]];
  return Q;
}

int ColimitOfRepresentables::class_of(int x, int i, int h) const {
  return index_[x].at({i, h});
}

ColimitOfRepresentables colimit_of_representables(const FinFunctor& diagram) {
  const auto& I = *diagram.source;
  const auto& T = *diagram.target;
  ColimitOfRepresentables out;
  auto P = std::make_shared<FinPresheaf>();
  P->category = diagram.target;
  P->elements.resize(T.num_objects());
  P->restriction.resize(T.num_arrows());
  out.reps.resize(T.num_objects());
  out.index_.resize(T.num_objects());

  for (int x = 0; x < T.num_objects(); ++x) {
    std::vector<std::pair<int, int>> pool;
    for (int i = 0; i < I.num_objects(); ++i) {
      for (int h : T.hom(x, diagram.object_map[i])) {
        out.index_[x][{i, h}] = static_cast<int>(pool.size());
        pool.emplace_back(i, h);
      }
    }
    UnionFind uf(static_cast<int>(pool.size()));
    for (int alpha = 0; alpha < I.num_arrows(); ++alpha) {
      int i = I.arrows[alpha].src, j = I.arrows[alpha].dst;
      for (int h : T.hom(x, diagram.object_map[i])) {
        uf.unite(out.index_[x].at({i, h}),
                 out.index_[x].at({j, T.compose(diagram.arrow_map[alpha], h)}));
      }
    }
    std::vector<int> cls;
    int n = uf.number_classes(cls);
    for (auto& [key, idx] : out.index_[x]) idx = cls[idx];
    P->elements[x] = class_labels(n);
    out.reps[x].assign(n, {-1, -1});
    int pos = 0;
    for (auto& entry : pool) {
      int c = cls[pos++];
      if (out.reps[x][c].first < 0) out.reps[x][c] = entry;
    }
  }
  for (int g = 0; g < T.num_arrows(); ++g) {
    int xp = T.arrows[g].src, x = T.arrows[g].dst;
    P->restriction[g].resize(P->elements[x].size());
    for (size_t c = 0; c < out.reps[x].size(); ++c) {
      auto [i, h] = out.reps[x][c];
      P->restriction[g][c] = out.index_[xp].at({i, T.compose(h, g)});
    }
  }
  out.presheaf = P;
  return out;
}

PshPtr left_kan_presheaf(const FinFunctor& A, const PshPtr& P) {
  const auto& D = *A.source;
  const auto& Dp = *A.target;
  auto Q = std::make_shared<FinPresheaf>();
  Q->category = A.target;
  Q->elements.resize(Dp.num_objects());
  Q->restriction.resize(Dp.num_arrows());

  // triples (d, h : d' -> A(d), x in P(d)) per object d', glued by
  // (d, h, P(m)(y)) ~ (e, A(m) h, y) for m : d -> e
  std::vector<std::map<std::tuple<int, int, int>, int>> index(Dp.num_objects());
  std::vector<std::vector<std::tuple<int, int, int>>> reps(Dp.num_objects());
  for (int dp = 0; dp < Dp.num_objects(); ++dp) {
    std::vector<std::tuple<int, int, int>> pool;
    for (int d = 0; d < D.num_objects(); ++d) {
      for (int h : Dp.hom(dp, A.object_map[d])) {
        for (int x = 0; x < P->size(d); ++x) {
          index[dp][{d, h, x}] = static_cast<int>(pool.size());
          pool.emplace_back(d, h, x);
        }
      }
    }
    UnionFind uf(static_cast<int>(pool.size()));
    for (int m = 0; m < D.num_arrows(); ++m) {
      int d = D.arrows[m].src, e = D.arrows[m].dst;
      for (int h : Dp.hom(dp, A.object_map[d])) {
        for (int y = 0; y < P->size(e); ++y) {
          uf.unite(index[dp].at({d, h, P->restrict_elem(m, y)}),
                   index[dp].at({e, Dp.compose(A.arrow_map[m], h), y}));
        }
      }
    }
    std::vector<int> cls;
    int n = uf.number_classes(cls);
    for (auto& [key, idx] : index[dp]) idx = cls[idx];
    Q->elements[dp] = class_labels(n);
    reps[dp].assign(n, {-1, -1, -1});
    int pos = 0;
    for (auto& entry : pool) {
      int c = cls[pos++];
      if (std::get<0>(reps[dp][c]) < 0) reps[dp][c] = entry;
    }
  }
  for (int g = 0; g < Dp.num_arrows(); ++g) {
    int src = Dp.arrows[g].src, dst = Dp.arrows[g].dst;
    Q->restriction[g].resize(Q->elements[dst].size());
    for (size_t c = 0; c < reps[dst].size(); ++c) {
      auto [d, h, x] = reps[dst][c];
      Q->restriction[g][c] = index[src].at({d, Dp.compose(h, g), x});
    }
  }
  return Q;
}

PresheafMorphism build_phi_tilde(const RelativeProblem& prob, int c) {
  const auto& C = *prob.base.category;
  const auto& Dp = *prob.right.category;
  auto comma = comma_over_object(prob.p, c);
  auto colim = colimit_of_representables(compose_functors(prob.A, comma.proj_left));
  auto target = restrict_along(prob.p_prime, representable(prob.base.category, c));

  PresheafMorphism m{colim.presheaf, target, {}};
  m.components.resize(Dp.num_objects());
  for (int x = 0; x < Dp.num_objects(); ++x) {
    const auto& hom_to_c = C.hom(prob.p_prime.object_map[x], c);
    for (const auto& [i, h] : colim.reps[x]) {
      int d = comma.object_tags[i].left;
      int u = comma.object_tags[i].arrow;
      int value = C.compose(C.compose(u, prob.phi.components[d]), prob.p_prime.arrow_map[h]);
      m.components[x].push_back(index_in(hom_to_c, value));
    }
  }
  return m;
}

CheckResult is_locally_surjective(const PresheafMorphism& m, const Topology& t) {
  const auto& cat = *m.source->category;
  std::vector<std::vector<char>> image(cat.num_objects());
  for (int x = 0; x < cat.num_objects(); ++x) {
    image[x].assign(m.target->size(x), 0);
    for (int e : m.components[x]) image[x][e] = 1;
  }
  for (int x = 0; x < cat.num_objects(); ++x) {
    for (int y = 0; y < m.target->size(x); ++y) {
      std::vector<int> hit;
      for (int f : cat.arrows_into(x)) {
        if (image[cat.arrows[f].src][m.target->restrict_elem(f, y)]) hit.push_back(f);
      }
      if (!t.covers_from_generators(x, hit))
        return {false, "section " + m.target->elements[x][y] + " at " + cat.objects[x] +
                           " is not hit locally"};
    }
  }
  return {};
}

CheckResult is_locally_injective(const PresheafMorphism& m, const Topology& t) {
  const auto& cat = *m.source->category;
  for (int x = 0; x < cat.num_objects(); ++x) {
    for (int e1 = 0; e1 < m.source->size(x); ++e1) {
      for (int e2 = e1 + 1; e2 < m.source->size(x); ++e2) {
        if (m.components[x][e1] != m.components[x][e2]) continue;
        std::vector<int> agree;
        for (int f : cat.arrows_into(x)) {
          if (m.source->restrict_elem(f, e1) == m.source->restrict_elem(f, e2)) agree.push_back(f);
        }
        if (!t.covers_from_generators(x, agree))
          return {false, "sections " + m.source->elements[x][e1] + ", " + m.source->elements[x][e2] +
                             " at " + cat.objects[x] + " are identified but do not agree locally"};
      }
    }
  }
  return {};
}

CheckResult is_local_isomorphism(const PresheafMorphism& m, const Topology& t) {
  auto surj = is_locally_surjective(m, t);
  if (!surj.ok) return surj;
  return is_locally_injective(m, t);
}

namespace {

// matching families for a sieve: one element per member, compatible with
// every factorization between members
std::vector<std::vector<int>> matching_families(const FinPresheaf& P, const Sieve& s) {
  const auto& cat = *P.category;
  const int n = static_cast<int>(s.members.size());
  // constraints[i]: (j, g) with members[j] == members[i] after g,
  // so any assignment must satisfy value[j] == P(g)(value[i])
  std::vector<std::vector<std::pair<int, int>>> constraints(n);
  for (int i = 0; i < n; ++i) {
    int src = cat.arrows[s.members[i]].src;
    for (int g : cat.arrows_into(src)) {
      int j = index_in(s.members, cat.compose(s.members[i], g));
      constraints[i].emplace_back(j, g);
    }
  }
  std::vector<std::vector<int>> out;
  std::vector<int> value(n, -1);
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      out.push_back(value);
      return;
    }
    int src = cat.arrows[s.members[i]].src;
    for (int e = 0; e < P.size(src); ++e) {
      value[i] = e;
      bool ok = true;
      for (int j = 0; j <= i && ok; ++j) {
        for (auto [k, g] : constraints[j]) {
          if (k <= i && value[k] != P.restrict_elem(g, value[j])) {
            ok = false;
            break;
          }
        }
      }
      if (ok) rec(i + 1);
    }
    value[i] = -1;
  };
  rec(0);
  return out;
}

struct PlusData {
  PshPtr plus;
  // per object: the families enumerated in (cover, values) order, and the
  // class every family landed in
  std::vector<std::vector<std::pair<const Sieve*, std::vector<int>>>> families;
  std::vector<std::map<std::pair<std::vector<int>, std::vector<int>>, int>> lookup;
};

PlusData build_plus(const FinPresheaf& P, const Topology& t) {
  const auto& cat = *P.category;
  PlusData data;
  data.families.resize(cat.num_objects());
  data.lookup.resize(cat.num_objects());
  auto Q = std::make_shared<FinPresheaf>();
  Q->category = P.category;
  Q->elements.resize(cat.num_objects());
  Q->restriction.resize(cat.num_arrows());

  std::vector<std::vector<int>> cls_of(cat.num_objects());
  for (int x = 0; x < cat.num_objects(); ++x) {
    for (const auto& s : t.covers[x]) {
      for (auto& vals : matching_families(P, s)) data.families[x].emplace_back(&s, std::move(vals));
    }
    const auto& fams = data.families[x];
    const int n = static_cast<int>(fams.size());
    UnionFind uf(n);
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (uf.find(a) == uf.find(b)) continue;
        // families agree when their common agreement sieve covers
        std::vector<int> agree;
        for (size_t i = 0; i < fams[a].first->members.size(); ++i) {
          int f = fams[a].first->members[i];
          int j = index_in(fams[b].first->members, f);
          if (j >= 0 && fams[b].second[j] == fams[a].second[i]) agree.push_back(f);
        }
        if (t.covers_from_generators(x, agree)) uf.unite(a, b);
      }
    }
    int classes = uf.number_classes(cls_of[x]);
    Q->elements[x] = class_labels(classes);
    for (int a = 0; a < n; ++a) data.lookup[x][{fams[a].first->members, fams[a].second}] = cls_of[x][a];
  }

  for (int f = 0; f < cat.num_arrows(); ++f) {
    int src = cat.arrows[f].src, dst = cat.arrows[f].dst;
    Q->restriction[f].assign(Q->elements[dst].size(), -1);
    for (size_t a = 0; a < data.families[dst].size(); ++a) {
      int c = cls_of[dst][a];
      if (Q->restriction[f][c] >= 0) continue;
      const auto& [sieve, vals] = data.families[dst][a];
      Sieve pulled = pullback_sieve(cat, *sieve, f);
      std::vector<int> pulled_vals;
      pulled_vals.reserve(pulled.members.size());
      for (int g : pulled.members)
        pulled_vals.push_back(vals[index_in(sieve->members, cat.compose(f, g))]);
      Q->restriction[f][c] = data.lookup[src].at({pulled.members, pulled_vals});
    }
  }
  data.plus = Q;
  return data;
}

}  // namespace

PshPtr plus_construction(const FinPresheaf& P, const Topology& t) { return build_plus(P, t).plus; }

PresheafMorphism unit_to_plus(const PshPtr& P, const Topology& t) {
  const auto& cat = *P->category;
  auto data = build_plus(*P, t);
  PresheafMorphism m{P, data.plus, {}};
  m.components.resize(cat.num_objects());
  for (int x = 0; x < cat.num_objects(); ++x) {
    Sieve top = maximal_sieve(cat, x);
    for (int e = 0; e < P->size(x); ++e) {
      std::vector<int> vals;
      vals.reserve(top.members.size());
      for (int f : top.members) vals.push_back(P->restrict_elem(f, e));
      m.components[x].push_back(data.lookup[x].at({top.members, vals}));
    }
  }
  return m;
}

PresheafMorphism plus_morphism(const PresheafMorphism& m, const Topology& t) {
  const auto& cat = *m.source->category;
  auto src = build_plus(*m.source, t);
  auto dst = build_plus(*m.target, t);
  PresheafMorphism out{src.plus, dst.plus, {}};
  out.components.resize(cat.num_objects());
  for (int x = 0; x < cat.num_objects(); ++x) {
    out.components[x].assign(src.plus->size(x), -1);
    for (size_t a = 0; a < src.families[x].size(); ++a) {
      const auto& [sieve, vals] = src.families[x][a];
      int c = src.lookup[x].at({sieve->members, vals});
      if (out.components[x][c] >= 0) continue;
      std::vector<int> mapped;
      mapped.reserve(vals.size());
      for (size_t i = 0; i < vals.size(); ++i)
        mapped.push_back(m.components[cat.arrows[sieve->members[i]].src][vals[i]]);
      out.components[x][c] = dst.lookup[x].at({sieve->members, mapped});
    }
  }
  return out;
}

PshPtr sheafify(const FinPresheaf& P, const Topology& t) {
  return plus_construction(*plus_construction(P, t), t);
}

PresheafMorphism sheafify_morphism(const PresheafMorphism& m, const Topology& t) {
  return plus_morphism(plus_morphism(m, t), t);
}

CheckResult is_sheaf(const FinPresheaf& P, const Topology& t) {
  const auto& cat = *P.category;
  for (int x = 0; x < cat.num_objects(); ++x) {
    for (const auto& s : t.covers[x]) {
      for (const auto& vals : matching_families(P, s)) {
        int amalgamations = 0;
        for (int e = 0; e < P.size(x); ++e) {
          bool glues = true;
          for (size_t i = 0; i < s.members.size(); ++i) {
            if (P.restrict_elem(s.members[i], e) != vals[i]) {
              glues = false;
              break;
            }
          }
          if (glues) ++amalgamations;
        }
        if (amalgamations != 1)
          return {false, "a matching family on " + cat.objects[x] + " has " +
                             std::to_string(amalgamations) + " amalgamations"};
      }
    }
  }
  return {};
}

}  // namespace relsite
