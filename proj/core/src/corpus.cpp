#include "relsite/corpus.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <random>
#include <set>

#include "json.hpp"
#include "relsite/sitecheck.hpp"

namespace relsite {

namespace {

// ---------------------------------------------------------------------------
// category enumeration
//
// One search per hom shape.  Arrows are numbered block by block with the
// identity first inside each diagonal block; the composition table is filled
// in a fixed scan order with associativity propagated eagerly.  A table is
// emitted only when it is lexicographically minimal among its relabelings,
// which the search enforces by carrying the set of still-viable relabelings
// and pruning as soon as one maps the determined prefix strictly lower.

struct TableSearch {
  int k = 0;  // objects
  int m = 0;  // arrows
  std::vector<std::vector<std::vector<int>>> block;  // block[i][j]: arrow ids i -> j
  std::vector<int> src, dst;
  std::vector<int> ident;      // per object
  std::vector<char> is_ident;  // per arrow

  struct Perm {
    std::vector<int> map, inv;
  };
  std::vector<Perm> perms;

  std::vector<std::pair<int, int>> cells;  // non-identity composable (g, f)
  std::vector<int> table;                  // g * m + f -> arrow or -1

  const std::function<bool(const TableSearch&)>* emit = nullptr;
  bool stopped = false;

  int flat(int g, int f) const { return g * m + f; }
  bool composable(int g, int f) const { return dst[f] == src[g]; }

  bool assign(int g, int f, int v, std::vector<int>& trail);
  bool filter_perms(const std::vector<const Perm*>& in, std::vector<const Perm*>& out) const;
  bool full_check() const;
  void dfs(size_t ci, const std::vector<const Perm*>& cands);
  void run();
};

bool TableSearch::assign(int g, int f, int v, std::vector<int>& trail) {
  int fl = flat(g, f);
  if (table[fl] != -1) return table[fl] == v;
  if (src[v] != src[f] || dst[v] != dst[g]) return false;
  table[fl] = v;
  trail.push_back(fl);

  // triples in which (g, f) is one of the two inner pairs
  for (int h = 0; h < m; ++h) {
    if (composable(h, g)) {
      int hg = table[flat(h, g)];
      if (hg != -1) {
        int lhs = table[flat(hg, f)];  // (h g) f
        int rhs = table[flat(h, v)];   // h (g f)
        if (lhs != -1 && rhs != -1) {
          if (lhs != rhs) return false;
        } else if (lhs != -1) {
          if (!assign(h, v, lhs, trail)) return false;
        } else if (rhs != -1) {
          if (!assign(hg, f, rhs, trail)) return false;
        }
      }
    }
    if (composable(f, h)) {
      int fh = table[flat(f, h)];
      if (fh != -1) {
        int lhs = table[flat(v, h)];   // (g f) h
        int rhs = table[flat(g, fh)];  // g (f h)
        if (lhs != -1 && rhs != -1) {
          if (lhs != rhs) return false;
        } else if (lhs != -1) {
          if (!assign(g, fh, lhs, trail)) return false;
        } else if (rhs != -1) {
          if (!assign(v, h, rhs, trail)) return false;
        }
      }
    }
  }

  // triples in which the new cell is an outer composite: v = (x y) paired
  // against f, or g paired against v = (y z)
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y) {
      if (!composable(x, y)) continue;
      int xy = table[flat(x, y)];
      if (xy == -1) continue;
      if (xy == g && composable(y, f)) {
        int yf = table[flat(y, f)];
        if (yf != -1) {
          int rhs = table[flat(x, yf)];
          if (rhs == -1) {
            if (!assign(x, yf, v, trail)) return false;
          } else if (rhs != v) {
            return false;
          }
        }
      }
      if (xy == f && composable(g, x)) {
        int gx = table[flat(g, x)];
        if (gx != -1) {
          int lhs = table[flat(gx, y)];
          if (lhs == -1) {
            if (!assign(gx, y, v, trail)) return false;
          } else if (lhs != v) {
            return false;
          }
        }
      }
    }
  }
  return true;
}

bool TableSearch::filter_perms(const std::vector<const Perm*>& in,
                               std::vector<const Perm*>& out) const {
  for (const Perm* p : in) {
    bool drop = false;
    for (const auto& [g, f] : cells) {
      int cur = table[flat(g, f)];
      if (cur == -1) break;
      int t0 = table[flat(p->inv[g], p->inv[f])];
      if (t0 == -1) break;  // cannot compare yet; keep conservatively
      int oth = p->map[t0];
      if (oth < cur) return false;  // a relabeling beats the current prefix
      if (oth > cur) {
        drop = true;
        break;
      }
    }
    if (!drop) out.push_back(p);
  }
  return true;
}

bool TableSearch::full_check() const {
  for (int g = 0; g < m; ++g)
    for (int f = 0; f < m; ++f) {
      if (!composable(g, f)) continue;
      int gf = table[flat(g, f)];
      if (gf == -1) return false;
      for (int e = 0; e < m; ++e) {
        if (!composable(f, e)) continue;
        if (table[flat(gf, e)] != table[flat(g, table[flat(f, e)])]) return false;
      }
    }
  return true;
}

void TableSearch::dfs(size_t ci, const std::vector<const Perm*>& cands) {
  if (stopped) return;
  while (ci < cells.size() && table[flat(cells[ci].first, cells[ci].second)] != -1) ++ci;
  if (ci == cells.size()) {
    if (full_check()) stopped = !(*emit)(*this);
    return;
  }
  auto [g, f] = cells[ci];
  for (int v : block[src[f]][dst[g]]) {
    std::vector<int> trail;
    if (assign(g, f, v, trail)) {
      std::vector<const Perm*> next;
      next.reserve(cands.size());
      if (filter_perms(cands, next)) dfs(ci + 1, next);
    }
    for (int fl : trail) table[fl] = -1;
    if (stopped) return;
  }
}

void position_perms(int size, bool pin_first, std::vector<std::vector<int>>& out) {
  std::vector<int> p(size);
  for (int i = 0; i < size; ++i) p[i] = i;
  do {
    if (!pin_first || size == 0 || p[0] == 0) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
}

void TableSearch::run() {
  table.assign(static_cast<size_t>(m) * m, -1);

  // identity-involving cells are forced
  for (int a = 0; a < m; ++a) {
    table[flat(ident[dst[a]], a)] = a;
    table[flat(a, ident[src[a]])] = a;
  }

  for (int g = 0; g < m; ++g) {
    if (is_ident[g]) continue;
    for (int f = 0; f < m; ++f)
      if (!is_ident[f] && composable(g, f)) cells.emplace_back(g, f);
  }

  // relabelings: shape-preserving object permutations combined with
  // bijections between matching hom blocks, identities pinned
  std::vector<int> sigma(k);
  for (int i = 0; i < k; ++i) sigma[i] = i;
  do {
    bool shape_ok = true;
    for (int i = 0; i < k && shape_ok; ++i)
      for (int j = 0; j < k && shape_ok; ++j)
        shape_ok = block[i][j].size() == block[sigma[i]][sigma[j]].size();
    if (!shape_ok) continue;

    std::vector<std::pair<int, int>> blocks;  // scan order
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (!block[i][j].empty()) blocks.emplace_back(i, j);

    std::vector<int> arrow_map(m, -1);
    std::function<void(size_t)> rec = [&](size_t bi) {
      if (bi == blocks.size()) {
        Perm p;
        p.map = arrow_map;
        p.inv.assign(m, -1);
        for (int a = 0; a < m; ++a) p.inv[p.map[a]] = a;
        bool is_id = true;
        for (int a = 0; a < m && is_id; ++a) is_id = p.map[a] == a;
        if (!is_id) perms.push_back(std::move(p));
        return;
      }
      auto [i, j] = blocks[bi];
      const auto& from = block[i][j];
      const auto& to = block[sigma[i]][sigma[j]];
      std::vector<std::vector<int>> pos;
      position_perms(static_cast<int>(from.size()), i == j, pos);
      for (const auto& pp : pos) {
        for (size_t t = 0; t < from.size(); ++t) arrow_map[from[t]] = to[pp[t]];
        rec(bi + 1);
      }
    };
    rec(0);
  } while (std::next_permutation(sigma.begin(), sigma.end()));

  std::vector<const Perm*> cands;
  cands.reserve(perms.size());
  for (const Perm& p : perms) cands.push_back(&p);
  dfs(0, cands);
}

// shapes with the diagonal at least one, total equal to m, minimal under
// simultaneous row and column permutation
std::vector<std::vector<std::vector<int>>> canonical_shapes(int k, int m) {
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<int> flatshape(static_cast<size_t>(k) * k, 0);

  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == k * k) {
      if (left != 0) return;
      for (int i = 0; i < k; ++i)
        if (flatshape[i * k + i] == 0) return;

      std::vector<int> sigma(k);
      for (int i = 0; i < k; ++i) sigma[i] = i;
      bool minimal = true;
      do {
        std::vector<int> permuted(static_cast<size_t>(k) * k);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) permuted[i * k + j] = flatshape[sigma[i] * k + sigma[j]];
        if (permuted < flatshape) {
          minimal = false;
          break;
        }
      } while (std::next_permutation(sigma.begin(), sigma.end()));
      if (!minimal) return;

      std::vector<std::vector<int>> shape(k, std::vector<int>(k));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) shape[i][j] = flatshape[i * k + j];
      out.push_back(std::move(shape));
      return;
    }
    for (int v = 0; v <= left; ++v) {
      flatshape[pos] = v;
      rec(pos + 1, left - v);
    }
    flatshape[pos] = 0;
  };
  rec(0, m);
  return out;
}

CatPtr category_from_table(const TableSearch& ts, const std::string& name) {
  std::vector<std::string> objects;
  for (int i = 0; i < ts.k; ++i) objects.push_back("o" + std::to_string(i));
  std::vector<Arrow> arrows(ts.m);
  for (int a = 0; a < ts.m; ++a) {
    arrows[a].src = ts.src[a];
    arrows[a].dst = ts.dst[a];
    arrows[a].id = ts.is_ident[a] ? "id:" + objects[ts.src[a]] : "m" + std::to_string(a);
  }
  return make_category(name, std::move(objects), std::move(arrows), ts.ident, ts.table);
}

}  // namespace

void for_each_category_sized(int objects, int arrows,
                             const std::function<bool(const CatPtr&)>& visit) {
  const int k = objects;
  const int m = arrows;
  if (k < 1 || m < k) return;
  int counter = 0;
  for (const auto& shape : canonical_shapes(k, m)) {
    TableSearch ts;
    ts.k = k;
    ts.m = m;
    ts.block.assign(k, std::vector<std::vector<int>>(k));
    int next = 0;
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        for (int t = 0; t < shape[i][j]; ++t) {
          ts.block[i][j].push_back(next);
          ts.src.push_back(i);
          ts.dst.push_back(j);
          ts.is_ident.push_back(i == j && t == 0);
          ++next;
        }
      }
    }
    ts.ident.resize(k);
    for (int i = 0; i < k; ++i) ts.ident[i] = ts.block[i][i][0];

    std::function<bool(const TableSearch&)> emit = [&](const TableSearch& done) {
      std::string name =
          "c" + std::to_string(k) + "m" + std::to_string(m) + "n" + std::to_string(counter++);
      return visit(category_from_table(done, name));
    };
    ts.emit = &emit;
    ts.run();
    if (ts.stopped) return;
  }
}

void for_each_category(int max_objects, int max_arrows,
                       const std::function<bool(const CatPtr&)>& visit) {
  bool stop = false;
  for (int k = 1; k <= max_objects && !stop; ++k)
    for (int m = k; m <= max_arrows && !stop; ++m)
      for_each_category_sized(k, m, [&](const CatPtr& c) {
        stop = !visit(c);
        return !stop;
      });
}

std::vector<CatPtr> enumerate_categories(int max_objects, int max_arrows) {
  std::vector<CatPtr> out;
  for_each_category(max_objects, max_arrows, [&](const CatPtr& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// functor and transformation search

namespace {

bool functor_prefix_ok(const FinCategory& S, const FinCategory& T, const std::vector<int>& amap) {
  for (int x = 0; x < S.num_arrows(); ++x) {
    if (amap[x] == -1) continue;
    for (int y = 0; y < S.num_arrows(); ++y) {
      if (amap[y] == -1 || !S.composable(x, y)) continue;
      int xy = S.compose(x, y);
      if (amap[xy] != -1 && T.compose(amap[x], amap[y]) != amap[xy]) return false;
    }
  }
  return true;
}

// shared driver: visits every functor; `shuffle` reorders candidate lists
// (used by the seeded variant), visit returns false to stop
void functor_search(const CatPtr& source, const CatPtr& target,
                    const std::function<void(std::vector<int>&)>& shuffle,
                    const std::function<bool(const FinFunctor&)>& visit) {
  const FinCategory& S = *source;
  const FinCategory& T = *target;
  std::vector<int> omap(S.num_objects(), -1), amap(S.num_arrows(), -1);
  std::vector<int> nonid;
  for (int a = 0; a < S.num_arrows(); ++a)
    if (!S.is_identity(a)) nonid.push_back(a);

  bool stop = false;
  std::function<void(size_t)> arrows_rec = [&](size_t idx) {
    if (stop) return;
    if (idx == nonid.size()) {
      FinFunctor F;
      F.source = source;
      F.target = target;
      F.object_map = omap;
      F.arrow_map = amap;
      stop = !visit(F);
      return;
    }
    int a = nonid[idx];
    std::vector<int> options = T.hom(omap[S.arrows[a].src], omap[S.arrows[a].dst]);
    shuffle(options);
    for (int b : options) {
      amap[a] = b;
      if (functor_prefix_ok(S, T, amap)) arrows_rec(idx + 1);
      amap[a] = -1;
      if (stop) return;
    }
  };

  std::function<void(int)> objects_rec = [&](int o) {
    if (stop) return;
    if (o == S.num_objects()) {
      for (int x = 0; x < S.num_objects(); ++x) amap[S.identities[x]] = T.identities[omap[x]];
      arrows_rec(0);
      for (int x = 0; x < S.num_objects(); ++x) amap[S.identities[x]] = -1;
      return;
    }
    std::vector<int> options(T.num_objects());
    for (int t = 0; t < T.num_objects(); ++t) options[t] = t;
    shuffle(options);
    for (int t : options) {
      omap[o] = t;
      objects_rec(o + 1);
      omap[o] = -1;
      if (stop) return;
    }
  };
  objects_rec(0);
}

void no_shuffle(std::vector<int>&) {}

}  // namespace

std::vector<FinFunctor> all_functors(const CatPtr& source, const CatPtr& target) {
  std::vector<FinFunctor> out;
  functor_search(source, target, no_shuffle, [&](const FinFunctor& F) {
    out.push_back(F);
    return true;
  });
  return out;
}

std::vector<NatTransform> all_nat_transforms(const FinFunctor& F, const FinFunctor& G) {
  std::vector<NatTransform> out;
  const FinCategory& S = *F.source;
  const FinCategory& T = *F.target;
  std::vector<int> comps(S.num_objects(), -1);

  auto natural_prefix = [&]() {
    for (int a = 0; a < S.num_arrows(); ++a) {
      int x = S.arrows[a].src, y = S.arrows[a].dst;
      if (comps[x] == -1 || comps[y] == -1) continue;
      if (T.compose(G.arrow_map[a], comps[x]) != T.compose(comps[y], F.arrow_map[a])) return false;
    }
    return true;
  };

  std::function<void(int)> rec = [&](int o) {
    if (o == S.num_objects()) {
      NatTransform t;
      t.source = F;
      t.target = G;
      t.components = comps;
      out.push_back(std::move(t));
      return;
    }
    for (int c : T.hom(F.object_map[o], G.object_map[o])) {
      comps[o] = c;
      if (natural_prefix()) rec(o + 1);
      comps[o] = -1;
    }
  };
  rec(0);
  return out;
}

// ---------------------------------------------------------------------------
// corpora

namespace {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  int below(int n) { return n <= 1 ? 0 : static_cast<int>(gen() % static_cast<std::uint64_t>(n)); }
  bool coin() { return (gen() & 1) != 0; }
};

std::vector<size_t> spread(size_t n, size_t cap) {
  std::vector<size_t> idx;
  if (n == 0 || cap == 0) return idx;
  if (n <= cap) {
    for (size_t i = 0; i < n; ++i) idx.push_back(i);
    return idx;
  }
  for (size_t t = 0; t < cap; ++t) idx.push_back(t * (n - 1) / (cap - 1));
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

std::optional<FinFunctor> random_functor(const CatPtr& source, const CatPtr& target, Rng& rng) {
  std::optional<FinFunctor> found;
  auto shuffle = [&](std::vector<int>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) std::swap(v[i], v[rng.below(i + 1)]);
  };
  functor_search(source, target, shuffle, [&](const FinFunctor& F) {
    found = F;
    return false;
  });
  return found;
}

Topology finest_topology(const CatPtr& cat) {
  Topology t;
  t.category = cat;
  t.covers.resize(cat->num_objects());
  for (int x = 0; x < cat->num_objects(); ++x) t.covers[x] = all_sieves_on(*cat, x);
  return t;
}

Topology random_topology(const CatPtr& cat, Rng& rng) {
  std::vector<Sieve> basis;
  for (int x = 0; x < cat->num_objects(); ++x) {
    if (!rng.coin()) continue;
    const auto& in = cat->arrows_into(x);
    if (in.empty()) continue;
    basis.push_back(generate_sieve(*cat, x, {in[rng.below(static_cast<int>(in.size()))]}));
  }
  return generate_topology(cat, basis);
}

// thin category of a random reachability preorder
CatPtr random_preorder(int n, Rng& rng, int arrow_cap) {
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) reach[i][i] = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.coin()) reach[i][j] = 1;
  for (int w = 0; w < n; ++w)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (reach[i][w] && reach[w][j]) reach[i][j] = 1;

  std::vector<std::string> objects;
  for (int i = 0; i < n; ++i) objects.push_back("o" + std::to_string(i));
  std::vector<Arrow> arrows;
  std::vector<int> ident(n, -1);
  std::map<std::pair<int, int>, int> pair_arrow;
  for (int i = 0; i < n; ++i) {
    ident[i] = static_cast<int>(arrows.size());
    pair_arrow[{i, i}] = ident[i];
    arrows.push_back({"id:" + objects[i], i, i});
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && reach[i][j]) {
        pair_arrow[{i, j}] = static_cast<int>(arrows.size());
        arrows.push_back({"r" + std::to_string(i) + "_" + std::to_string(j), i, j});
      }
  int m = static_cast<int>(arrows.size());
  if (m > arrow_cap) return nullptr;
  std::vector<int> table(static_cast<size_t>(m) * m, -1);
  for (int g = 0; g < m; ++g)
    for (int f = 0; f < m; ++f)
      if (arrows[f].dst == arrows[g].src)
        table[static_cast<size_t>(g) * m + f] = pair_arrow.at({arrows[f].src, arrows[g].dst});
  return make_category("pre" + std::to_string(n), std::move(objects), std::move(arrows), ident,
                       std::move(table));
}

// free category on a sparse random acyclic graph; arrows are paths
CatPtr random_path_category(int n, Rng& rng, int arrow_cap) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.below(3) == 0) edges.emplace_back(i, j);

  // paths keyed by their edge sequence
  std::map<std::vector<int>, int> path_index;
  std::vector<std::vector<int>> paths;
  std::vector<int> path_src, path_dst;
  std::function<void(int, std::vector<int>&)> grow = [&](int at, std::vector<int>& seq) {
    for (size_t e = 0; e < edges.size(); ++e) {
      if (edges[e].first != at) continue;
      seq.push_back(static_cast<int>(e));
      if (!path_index.count(seq)) {
        path_index[seq] = static_cast<int>(paths.size());
        paths.push_back(seq);
        path_src.push_back(edges[seq.front()].first);
        path_dst.push_back(edges[seq.back()].second);
      }
      grow(edges[e].second, seq);
      seq.pop_back();
    }
  };
  for (int i = 0; i < n; ++i) {
    std::vector<int> seq;
    grow(i, seq);
  }
  int m = n + static_cast<int>(paths.size());
  if (m > arrow_cap) return nullptr;

  std::vector<std::string> objects;
  for (int i = 0; i < n; ++i) objects.push_back("o" + std::to_string(i));
  std::vector<Arrow> arrows;
  std::vector<int> ident(n, -1);
  for (int i = 0; i < n; ++i) {
    ident[i] = static_cast<int>(arrows.size());
    arrows.push_back({"id:" + objects[i], i, i});
  }
  for (size_t p = 0; p < paths.size(); ++p) {
    std::string id = "p";
    for (int e : paths[p]) id += "_" + std::to_string(e);
    arrows.push_back({id, path_src[p], path_dst[p]});
  }
  std::vector<int> table(static_cast<size_t>(m) * m, -1);
  for (int g = 0; g < m; ++g)
    for (int f = 0; f < m; ++f) {
      if (arrows[f].dst != arrows[g].src) continue;
      if (f < n) {
        table[static_cast<size_t>(g) * m + f] = g;
      } else if (g < n) {
        table[static_cast<size_t>(g) * m + f] = f;
      } else {
        std::vector<int> seq = paths[f - n];
        seq.insert(seq.end(), paths[g - n].begin(), paths[g - n].end());
        table[static_cast<size_t>(g) * m + f] = n + path_index.at(seq);
      }
    }
  return make_category("dag" + std::to_string(n), std::move(objects), std::move(arrows), ident,
                       std::move(table));
}

RelativeProblem assemble_problem(std::string name, SitePair base, SitePair left, SitePair right,
                                 FinFunctor p, FinFunctor pp, FinFunctor A,
                                 std::vector<int> phi_components) {
  RelativeProblem prob;
  prob.name = std::move(name);
  prob.base = std::move(base);
  prob.left = std::move(left);
  prob.right = std::move(right);
  prob.p = std::move(p);
  prob.p_prime = std::move(pp);
  prob.A = std::move(A);
  prob.phi.source = compose_functors(prob.p_prime, prob.A);
  prob.phi.target = prob.p;
  prob.phi.components = std::move(phi_components);
  return prob;
}

}  // namespace

std::vector<IndexedInstance> indexed_corpus(int count) {
  std::vector<IndexedInstance> out;
  if (count <= 0) return out;

  std::vector<CatPtr> smalls = enumerate_categories(2, 3);
  std::vector<CatPtr> bases, fiber_pool;
  for (const CatPtr& c : smalls) {
    // bases: the point, a one-object monoid, and two-object categories
    if (c->num_objects() == 1 && c->num_arrows() <= 2 && bases.size() < 2) bases.push_back(c);
    if (c->num_objects() == 2 && bases.size() < 5) bases.push_back(c);
    // fibers stay tiny so total categories remain exhaustively checkable
    if (c->num_arrows() <= 2) fiber_pool.push_back(c);
  }

  std::map<std::pair<const FinCategory*, const FinCategory*>, std::vector<FinFunctor>> fcache;
  auto functors_between = [&](const CatPtr& a, const CatPtr& b) -> const std::vector<FinFunctor>& {
    auto key = std::make_pair(a.get(), b.get());
    auto it = fcache.find(key);
    if (it == fcache.end()) it = fcache.emplace(key, all_functors(a, b)).first;
    return it->second;
  };

  for (const CatPtr& base : bases) {
    // fiber assignments: product over base objects of the fiber pool
    int n_obj = base->num_objects();
    std::vector<int> pick(n_obj, 0);
    std::vector<std::vector<int>> assignments;
    std::function<void(int)> rec = [&](int o) {
      if (o == n_obj) {
        assignments.push_back(pick);
        return;
      }
      for (int t = 0; t < static_cast<int>(fiber_pool.size()); ++t) {
        pick[o] = t;
        rec(o + 1);
      }
    };
    rec(0);

    for (size_t ai : spread(assignments.size(), 6)) {
      IndexedCategory ix;
      ix.base = base;
      for (int o = 0; o < n_obj; ++o) ix.fibers.push_back(fiber_pool[assignments[ai][o]]);

      // transition assignments: product over non-identity base arrows
      std::vector<int> nonid;
      for (int g = 0; g < base->num_arrows(); ++g)
        if (!base->is_identity(g)) nonid.push_back(g);
      std::vector<std::vector<FinFunctor>> options;
      bool feasible = true;
      for (int g : nonid) {
        const auto& opts =
            functors_between(ix.fibers[base->arrows[g].dst], ix.fibers[base->arrows[g].src]);
        if (opts.empty()) feasible = false;
        options.push_back(opts);
      }
      if (!feasible) continue;

      std::vector<int> choice(nonid.size(), 0);
      std::vector<std::vector<int>> combos;
      std::function<void(size_t)> trec = [&](size_t i) {
        if (combos.size() >= 24) return;
        if (i == nonid.size()) {
          combos.push_back(choice);
          return;
        }
        for (size_t t = 0; t < options[i].size(); ++t) {
          choice[i] = static_cast<int>(t);
          trec(i + 1);
        }
      };
      trec(0);

      for (size_t ci : spread(combos.size(), 4)) {
        ix.transitions.assign(base->num_arrows(), FinFunctor{});
        for (int g = 0; g < base->num_arrows(); ++g)
          if (base->is_identity(g)) ix.transitions[g] = identity_functor(ix.fibers[base->arrows[g].src]);
        for (size_t i = 0; i < nonid.size(); ++i) ix.transitions[nonid[i]] = options[i][combos[ci][i]];

        if (!validate_indexed(ix).ok) continue;
        TotalCategory total = grothendieck_construction(ix);
        if (total.carrier->num_arrows() > 9) continue;
        out.push_back({ix, std::move(total)});
        if (static_cast<int>(out.size()) >= count) return out;
      }
    }
  }
  return out;
}

std::vector<FibrationInstance> fibration_corpus(int count) {
  std::vector<FibrationInstance> out;
  if (count <= 0) return out;
  std::vector<IndexedInstance> pool = indexed_corpus(18);

  std::map<const FinCategory*, std::vector<Topology>> tcache;
  auto tops_of = [&](const CatPtr& c) -> const std::vector<Topology>& {
    auto it = tcache.find(c.get());
    if (it == tcache.end()) it = tcache.emplace(c.get(), all_topologies(c)).first;
    return it->second;
  };

  for (size_t i1 = 0; i1 < pool.size(); ++i1) {
    for (size_t i2 = 0; i2 < pool.size(); ++i2) {
      const IndexedInstance& a = pool[i1];
      const IndexedInstance& b = pool[i2];
      if (a.ix.base != b.ix.base) continue;
      const CatPtr& base = a.ix.base;

      // strict fiberwise functors: one per base object, commuting with the
      // transitions on the nose
      std::vector<std::vector<FinFunctor>> options;
      bool feasible = true;
      for (int o = 0; o < base->num_objects() && feasible; ++o) {
        options.push_back(all_functors(a.ix.fibers[o], b.ix.fibers[o]));
        feasible = !options.back().empty();
      }
      if (!feasible) continue;

      std::vector<int> choice(base->num_objects(), 0);
      std::vector<std::vector<int>> strict;
      std::function<void(int)> rec = [&](int o) {
        if (strict.size() >= 6) return;
        if (o == base->num_objects()) {
          for (int g = 0; g < base->num_arrows(); ++g) {
            if (base->is_identity(g)) continue;
            int c = base->arrows[g].src, cp = base->arrows[g].dst;
            FinFunctor lhs = compose_functors(options[c][choice[c]], a.ix.transitions[g]);
            FinFunctor rhs = compose_functors(b.ix.transitions[g], options[cp][choice[cp]]);
            if (!same_functor(lhs, rhs)) return;
          }
          strict.push_back(choice);
          return;
        }
        for (size_t t = 0; t < options[o].size(); ++t) {
          choice[o] = static_cast<int>(t);
          rec(o + 1);
        }
      };
      rec(0);

      for (size_t si : spread(strict.size(), 2)) {
        // the induced functor on total categories
        const TotalCategory& ta = a.total;
        const TotalCategory& tb = b.total;
        std::vector<const FinFunctor*> F(base->num_objects());
        for (int o = 0; o < base->num_objects(); ++o) F[o] = &options[o][strict[si][o]];

        FinFunctor A;
        A.source = ta.carrier;
        A.target = tb.carrier;
        A.object_map.resize(ta.carrier->num_objects());
        for (int o = 0; o < ta.carrier->num_objects(); ++o) {
          const TotalObject& t = ta.object_tags[o];
          A.object_map[o] = tb.find_object(F[t.base_object]->object_map[t.fiber_object], t.base_object);
        }
        std::map<std::tuple<int, int, int, int>, int> lookup;
        for (int ar = 0; ar < tb.carrier->num_arrows(); ++ar)
          lookup[{tb.carrier->arrows[ar].src, tb.carrier->arrows[ar].dst, tb.arrow_tags[ar].vertical,
                  tb.arrow_tags[ar].base_arrow}] = ar;
        A.arrow_map.resize(ta.carrier->num_arrows());
        bool built = true;
        for (int ar = 0; ar < ta.carrier->num_arrows() && built; ++ar) {
          const TotalArrow& t = ta.arrow_tags[ar];
          int c = ta.object_tags[ta.carrier->arrows[ar].src].base_object;
          auto it = lookup.find({A.object_map[ta.carrier->arrows[ar].src],
                                 A.object_map[ta.carrier->arrows[ar].dst],
                                 F[c]->arrow_map[t.vertical], t.base_arrow});
          built = it != lookup.end();
          if (built) A.arrow_map[ar] = it->second;
        }
        if (!built) continue;

        for (size_t ji : spread(tops_of(base).size(), 3)) {
          const Topology& J = tops_of(base)[ji];
          std::vector<int> phi(ta.carrier->num_objects());
          for (int o = 0; o < ta.carrier->num_objects(); ++o)
            phi[o] = base->identities[ta.object_tags[o].base_object];
          FibrationInstance inst{ta, tb,
                                 assemble_problem("fib" + std::to_string(out.size()), {base, J},
                                                  {ta.carrier, giraud_topology(ta, J)},
                                                  {tb.carrier, giraud_topology(tb, J)},
                                                  ta.projection, tb.projection, A, phi)};
          out.push_back(std::move(inst));
          if (static_cast<int>(out.size()) >= count) return out;
        }
      }
    }
  }
  return out;
}

std::vector<RelativeProblem> problem_corpus(int count, std::uint64_t seed, const CorpusBounds& bounds) {
  std::vector<RelativeProblem> out;
  if (count <= 0) return out;

  int n_fib = count / 6;
  int n_rand = count / 3;
  int n_ex = count - n_fib - n_rand;

  // bounded-exhaustive phase over tiny sites
  std::vector<CatPtr> smalls = enumerate_categories(2, 4);
  std::vector<CatPtr> pool;
  {
    int ones = 0, twos = 0;
    for (const CatPtr& c : smalls) {
      if (c->num_objects() == 1 && c->num_arrows() <= 3 && ones < 4) {
        pool.push_back(c);
        ++ones;
      }
      if (c->num_objects() == 2 && c->num_arrows() <= 4 && twos < 5) {
        pool.push_back(c);
        ++twos;
      }
    }
  }
  std::vector<CatPtr> base_pool(pool.begin(), pool.begin() + std::min<size_t>(4, pool.size()));

  std::map<const FinCategory*, std::vector<Topology>> tcache;
  auto tops_of = [&](const CatPtr& c) -> const std::vector<Topology>& {
    auto it = tcache.find(c.get());
    if (it == tcache.end()) it = tcache.emplace(c.get(), all_topologies(c)).first;
    return it->second;
  };
  std::map<std::pair<const FinCategory*, const FinCategory*>, std::vector<FinFunctor>> fcache;
  auto functors_between = [&](const CatPtr& a, const CatPtr& b) -> const std::vector<FinFunctor>& {
    auto key = std::make_pair(a.get(), b.get());
    auto it = fcache.find(key);
    if (it == fcache.end()) it = fcache.emplace(key, all_functors(a, b)).first;
    return it->second;
  };
  auto compatible_topologies = [&](const FinFunctor& p, const Topology& J) {
    std::vector<const Topology*> ks;
    for (const Topology& K : tops_of(p.source))
      if (check_comorphism(p, K, J).ok) ks.push_back(&K);
    return ks;
  };

  std::vector<RelativeProblem> cand;
  bool full = false;
  for (const CatPtr& C : base_pool) {
    for (size_t ji : spread(tops_of(C).size(), 3)) {
      const Topology& J = tops_of(C)[ji];
      for (const CatPtr& D : pool) {
        const auto& ps = functors_between(D, C);
        for (size_t pi : spread(ps.size(), 3)) {
          const FinFunctor& p = ps[pi];
          auto ks = compatible_topologies(p, J);
          for (size_t ki : spread(ks.size(), 2)) {
            for (const CatPtr& Dp : pool) {
              const auto& pps = functors_between(Dp, C);
              for (size_t qi : spread(pps.size(), 2)) {
                const FinFunctor& pp = pps[qi];
                auto kps = compatible_topologies(pp, J);
                for (size_t li : spread(kps.size(), 2)) {
                  const auto& as = functors_between(D, Dp);
                  for (size_t aidx : spread(as.size(), 3)) {
                    const FinFunctor& A = as[aidx];
                    auto phis = all_nat_transforms(compose_functors(pp, A), p);
                    for (size_t phidx : spread(phis.size(), 2)) {
                      cand.push_back(assemble_problem("", {C, J}, {D, *ks[ki]}, {Dp, *kps[li]}, p,
                                                      pp, A, phis[phidx].components));
                      full = cand.size() >= 8000;
                      if (full) break;
                    }
                    if (full) break;
                  }
                  if (full) break;
                }
                if (full) break;
              }
              if (full) break;
            }
            if (full) break;
          }
          if (full) break;
        }
        if (full) break;
      }
      if (full) break;
    }
    if (full) break;
  }
  for (size_t i : spread(cand.size(), n_ex)) {
    cand[i].name = "ex" + std::to_string(out.size());
    out.push_back(cand[i]);
  }

  for (const FibrationInstance& inst : fibration_corpus(n_fib)) {
    RelativeProblem prob = inst.problem;
    prob.name = "fib" + std::to_string(out.size());
    out.push_back(std::move(prob));
  }

  // seeded random phase at the outer bound
  Rng rng(seed);
  int made = 0, attempts = 0;
  int arrow_cap = std::max(4, std::min(bounds.max_arrows + 5, 9));
  auto random_category = [&]() -> CatPtr {
    int flavor = rng.below(3);
    if (flavor == 0 && !smalls.empty()) return smalls[rng.below(static_cast<int>(smalls.size()))];
    int n = 2 + rng.below(std::max(1, bounds.max_objects - 1));
    if (flavor == 1) return random_preorder(n, rng, arrow_cap);
    return random_path_category(n, rng, arrow_cap);
  };
  auto pick_topology = [&](const FinFunctor& p, const Topology& J) -> std::optional<Topology> {
    for (int t = 0; t < 4; ++t) {
      Topology K = random_topology(p.source, rng);
      if (check_comorphism(p, K, J).ok) return K;
    }
    Topology K = finest_topology(p.source);
    if (check_comorphism(p, K, J).ok) return K;
    return std::nullopt;
  };
  while (made < n_rand && attempts < n_rand * 80) {
    ++attempts;
    CatPtr C = random_category();
    if (!C) continue;
    CatPtr D = random_category();
    CatPtr Dp = random_category();
    if (!D || !Dp) continue;
    Topology J = random_topology(C, rng);
    auto p = random_functor(D, C, rng);
    auto pp = random_functor(Dp, C, rng);
    if (!p || !pp) continue;
    auto K = pick_topology(*p, J);
    auto Kp = pick_topology(*pp, J);
    if (!K || !Kp) continue;
    auto A = random_functor(D, Dp, rng);
    if (!A) continue;
    auto phis = all_nat_transforms(compose_functors(*pp, *A), *p);
    if (phis.empty()) continue;
    const auto& phi = phis[rng.below(static_cast<int>(phis.size()))];
    out.push_back(assemble_problem("rnd" + std::to_string(made), {C, J}, {D, *K}, {Dp, *Kp}, *p,
                                   *pp, *A, phi.components));
    ++made;
  }
  return out;
}

void enumerate_instances(const CorpusBounds& bounds, std::uint64_t seed,
                         const std::function<bool(const Workspace&)>& visit) {
  bool stop = false;
  for_each_category(bounds.max_objects, bounds.max_arrows, [&](const CatPtr& cat) {
    Workspace ws;
    ws.categories.emplace(cat->name, cat);
    std::vector<Topology> tops = all_topologies(cat);
    for (size_t i = 0; i < tops.size(); ++i)
      ws.topologies.emplace("J" + std::to_string(i), std::move(tops[i]));
    stop = !visit(ws);
    return !stop;
  });
  if (stop) return;
  for (const RelativeProblem& prob : problem_corpus(40, seed, bounds)) {
    Workspace ws;
    add_problem(ws, prob.name, prob);
    if (!visit(ws)) return;
  }
}

std::string corpus_report(const CorpusBounds& bounds, std::uint64_t seed, bool assert_equivalences,
                          int* exit_code) {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["bounds"] = {{"max_objects", bounds.max_objects},
                 {"max_arrows", bounds.max_arrows},
                 {"max_fiber", bounds.max_fiber}};

  nlohmann::ordered_json cats = nlohmann::ordered_json::array();
  for_each_category(bounds.max_objects, bounds.max_arrows, [&](const CatPtr& cat) {
    cats.push_back({{"name", cat->name},
                    {"objects", cat->num_objects()},
                    {"arrows", cat->num_arrows()},
                    {"topologies", static_cast<int>(all_topologies(cat).size())}});
    return true;
  });
  j["categories"] = std::move(cats);

  int discrepancies = 0, passes = 0;
  nlohmann::ordered_json probs = nlohmann::ordered_json::array();
  for (const RelativeProblem& prob : problem_corpus(30, seed, bounds)) {
    RelativeVerdict v = relative_verdict(prob, assert_equivalences);
    nlohmann::ordered_json e;
    e["name"] = prob.name;
    e["checks"] = {{"site_morphism", v.site_morphism.ok},
                   {"cofinality", v.cofinality.ok()},
                   {"filtered", v.filtered.ok()},
                   {"fiberwise", v.fiberwise.ok},
                   {"diagonal", v.diagonal.ok}};
    if (v.oracle.has_value()) e["checks"]["oracle"] = v.oracle->ok;
    e["discrepancies"] = v.discrepancies;
    discrepancies += static_cast<int>(v.discrepancies.size());
    passes += v.all_pass() ? 1 : 0;
    probs.push_back(std::move(e));
  }
  j["problems"] = std::move(probs);
  j["summary"] = {{"categories", j["categories"].size()},
                  {"problems", j["problems"].size()},
                  {"all_pass", passes},
                  {"discrepancies", discrepancies}};
  if (exit_code) *exit_code = discrepancies > 0 ? 3 : 0;
  return j.dump(2) + "\n";
}

}  // namespace relsite
