#include "relsite/category.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace relsite {

void FinCategory::freeze() {
  object_idx_.clear();
  arrow_idx_.clear();
  for (int i = 0; i < num_objects(); ++i) object_idx_[objects[i]] = i;
  for (int i = 0; i < num_arrows(); ++i) arrow_idx_[arrows[i].id] = i;
  into_.assign(objects.size(), {});
  out_.assign(objects.size(), {});
  hom_.assign(objects.size() * objects.size(), {});
  for (int a = 0; a < num_arrows(); ++a) {
    into_[arrows[a].dst].push_back(a);
    out_[arrows[a].src].push_back(a);
    hom_[static_cast<size_t>(arrows[a].src) * objects.size() + arrows[a].dst].push_back(a);
  }
}

bool FinCategory::is_iso(int a) const {
  for (int b : hom(arrows[a].dst, arrows[a].src)) {
    if (compose(b, a) == identities[arrows[a].src] && compose(a, b) == identities[arrows[a].dst]) return true;
  }
  return false;
}

int FinCategory::object_index(const std::string& id) const {
  auto it = object_idx_.find(id);
  return it == object_idx_.end() ? -1 : it->second;
}

int FinCategory::arrow_index(const std::string& id) const {
  auto it = arrow_idx_.find(id);
  return it == arrow_idx_.end() ? -1 : it->second;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& v : violations) os << v.kind << ": " << v.detail << "\n";
  return os.str();
}

namespace {

// law checks shared by validate_category and the debug path of make_category
void check_laws(const FinCategory& c, ValidationReport& report) {
  const int n = c.num_arrows();
  for (int f = 0; f < n; ++f) {
    for (int g = 0; g < n; ++g) {
      if (!c.composable(g, f)) continue;
      int gf = c.compose(g, f);
      if (gf < 0) {
        report.violations.push_back({"MissingComposite", c.arrows[g].id + " after " + c.arrows[f].id});
        continue;
      }
      if (c.arrows[gf].src != c.arrows[f].src || c.arrows[gf].dst != c.arrows[g].dst) {
        report.violations.push_back({"BadComposite", c.arrows[g].id + " after " + c.arrows[f].id +
                                                         " = " + c.arrows[gf].id + " has wrong endpoints"});
      }
    }
  }
  if (!report.ok()) return;
  for (int x = 0; x < c.num_objects(); ++x) {
    int e = c.identities[x];
    if (e < 0 || c.arrows[e].src != x || c.arrows[e].dst != x) {
      report.violations.push_back({"BadIdentity", "object " + c.objects[x] + " lacks an identity arrow"});
      continue;
    }
    for (int f : c.arrows_out_of(x)) {
      if (c.compose(f, e) != f)
        report.violations.push_back({"BadIdentity", c.arrows[f].id + " after " + c.arrows[e].id +
                                                        " = " + c.arrows[c.compose(f, e)].id});
    }
    for (int f : c.arrows_into(x)) {
      if (c.compose(e, f) != f)
        report.violations.push_back({"BadIdentity", c.arrows[e].id + " after " + c.arrows[f].id +
                                                        " = " + c.arrows[c.compose(e, f)].id});
    }
  }
  if (!report.ok()) return;
  for (int f = 0; f < n; ++f) {
    for (int g = 0; g < n; ++g) {
      if (!c.composable(g, f)) continue;
      for (int h = 0; h < n; ++h) {
        if (!c.composable(h, g)) continue;
        if (c.compose(h, c.compose(g, f)) != c.compose(c.compose(h, g), f)) {
          report.violations.push_back({"NonAssociative", "(" + c.arrows[h].id + " after " + c.arrows[g].id +
                                                             ") after " + c.arrows[f].id});
          return;  // one witness suffices
        }
      }
    }
  }
}

}  // namespace

CategoryBuildResult validate_category(const CategoryData& data) {
  CategoryBuildResult result;
  auto& report = result.report;

  auto cat = std::make_shared<FinCategory>();
  cat->name = data.name;
  std::set<std::string> seen_objects;
  for (const auto& o : data.objects) {
    if (!seen_objects.insert(o).second) report.violations.push_back({"DuplicateId", "object " + o});
  }
  cat->objects = data.objects;

  std::map<std::string, int> obj_idx;
  for (int i = 0; i < cat->num_objects(); ++i) obj_idx[cat->objects[i]] = i;

  std::set<std::string> seen_arrows;
  auto add_arrow = [&](const std::string& id, const std::string& src, const std::string& dst) {
    if (!seen_arrows.insert(id).second) {
      report.violations.push_back({"DuplicateId", "arrow " + id});
      return;
    }
    auto s = obj_idx.find(src), d = obj_idx.find(dst);
    if (s == obj_idx.end()) report.violations.push_back({"UnresolvedReference", "arrow " + id + " src " + src});
    if (d == obj_idx.end()) report.violations.push_back({"UnresolvedReference", "arrow " + id + " dst " + dst});
    if (s == obj_idx.end() || d == obj_idx.end()) return;
    cat->arrows.push_back({id, s->second, d->second});
  };
  // identities first, in object order, so that fixture files need not list them
  for (const auto& o : data.objects) {
    bool declared = false;
    for (const auto& a : data.arrows)
      if (a[0] == "id:" + o) declared = true;
    if (!declared) add_arrow("id:" + o, o, o);
  }
  for (const auto& a : data.arrows) add_arrow(a[0], a[1], a[2]);
  if (!report.ok()) return result;

  std::map<std::string, int> arr_idx;
  for (int i = 0; i < cat->num_arrows(); ++i) arr_idx[cat->arrows[i].id] = i;

  cat->identities.assign(cat->num_objects(), -1);
  for (int x = 0; x < cat->num_objects(); ++x) {
    auto it = arr_idx.find("id:" + cat->objects[x]);
    if (it == arr_idx.end() || cat->arrows[it->second].src != x || cat->arrows[it->second].dst != x) {
      report.violations.push_back({"BadIdentity", "object " + cat->objects[x] + " has no arrow id:" + cat->objects[x]});
      continue;
    }
    cat->identities[x] = it->second;
  }
  if (!report.ok()) return result;

  const int n = cat->num_arrows();
  cat->table.assign(static_cast<size_t>(n) * n, -1);
  auto set_entry = [&](int g, int f, int gf, const std::string& where) {
    int& cell = cat->table[static_cast<size_t>(g) * n + f];
    if (cell >= 0 && cell != gf) {
      report.violations.push_back({"ConflictingComposite", where});
      return;
    }
    cell = gf;
  };
  // identity laws fill most of the table; explicit entries may restate them
  for (int a = 0; a < n; ++a) {
    set_entry(a, cat->identities[cat->arrows[a].src], a, cat->arrows[a].id);
    set_entry(cat->identities[cat->arrows[a].dst], a, a, cat->arrows[a].id);
  }
  for (const auto& e : data.compose) {
    int g = -1, f = -1, gf = -1;
    auto lookup = [&](const std::string& id, int& slot) {
      auto it = arr_idx.find(id);
      if (it == arr_idx.end())
        report.violations.push_back({"UnresolvedReference", "compose entry mentions " + id});
      else
        slot = it->second;
    };
    lookup(e[0], g);
    lookup(e[1], f);
    lookup(e[2], gf);
    if (g < 0 || f < 0 || gf < 0) continue;
    if (!cat->composable(g, f)) {
      report.violations.push_back({"BadComposite", e[0] + " after " + e[1] + " not composable"});
      continue;
    }
    set_entry(g, f, gf, e[0] + " after " + e[1]);
  }
  if (!report.ok()) return result;

  cat->freeze();
  check_laws(*cat, report);
  if (!report.ok()) return result;

  result.category = cat;
  return result;
}

CatPtr make_category(std::string name, std::vector<std::string> objects, std::vector<Arrow> arrows,
                     std::vector<int> identities, std::vector<int> table) {
  auto cat = std::make_shared<FinCategory>();
  cat->name = std::move(name);
  cat->objects = std::move(objects);
  cat->arrows = std::move(arrows);
  cat->identities = std::move(identities);
  cat->table = std::move(table);
  cat->freeze();
#ifndef NDEBUG
  ValidationReport report;
  check_laws(*cat, report);
  assert(report.ok() && "internally constructed category violates the laws");
#endif
  return cat;
}

CatPtr terminal_category(const std::string& name) {
  return make_category(name, {"*"}, {{"id:*", 0, 0}}, {0}, {0});
}

CatPtr empty_category(const std::string& name) { return make_category(name, {}, {}, {}, {}); }

CheckResult validate_functor(const FinFunctor& F) {
  const auto& s = *F.source;
  const auto& t = *F.target;
  if (static_cast<int>(F.object_map.size()) != s.num_objects() ||
      static_cast<int>(F.arrow_map.size()) != s.num_arrows())
    return {false, "object or arrow map has wrong length"};
  for (int x = 0; x < s.num_objects(); ++x) {
    if (F.object_map[x] < 0 || F.object_map[x] >= t.num_objects())
      return {false, "object " + s.objects[x] + " mapped out of range"};
  }
  for (int a = 0; a < s.num_arrows(); ++a) {
    int fa = F.arrow_map[a];
    if (fa < 0 || fa >= t.num_arrows()) return {false, "arrow " + s.arrows[a].id + " mapped out of range"};
    if (t.arrows[fa].src != F.object_map[s.arrows[a].src] || t.arrows[fa].dst != F.object_map[s.arrows[a].dst])
      return {false, "arrow " + s.arrows[a].id + " endpoints not preserved"};
  }
  for (int x = 0; x < s.num_objects(); ++x) {
    if (F.arrow_map[s.identities[x]] != t.identities[F.object_map[x]])
      return {false, "identity of " + s.objects[x] + " not preserved"};
  }
  for (int f = 0; f < s.num_arrows(); ++f) {
    for (int g = 0; g < s.num_arrows(); ++g) {
      if (!s.composable(g, f)) continue;
      if (F.arrow_map[s.compose(g, f)] != t.compose(F.arrow_map[g], F.arrow_map[f]))
        return {false, "composition " + s.arrows[g].id + " after " + s.arrows[f].id + " not preserved"};
    }
  }
  return {};
}

FinFunctor identity_functor(const CatPtr& c) {
  FinFunctor F{c, c, {}, {}};
  F.object_map.resize(c->num_objects());
  F.arrow_map.resize(c->num_arrows());
  for (int i = 0; i < c->num_objects(); ++i) F.object_map[i] = i;
  for (int i = 0; i < c->num_arrows(); ++i) F.arrow_map[i] = i;
  return F;
}

FinFunctor compose_functors(const FinFunctor& G, const FinFunctor& F) {
  if (F.target != G.source) throw std::invalid_argument("compose_functors: middle category mismatch");
  FinFunctor H{F.source, G.target, {}, {}};
  H.object_map.reserve(F.object_map.size());
  H.arrow_map.reserve(F.arrow_map.size());
  for (int x : F.object_map) H.object_map.push_back(G.object_map[x]);
  for (int a : F.arrow_map) H.arrow_map.push_back(G.arrow_map[a]);
  return H;
}

FinFunctor constant_functor(const CatPtr& source, const CatPtr& target, int c) {
  FinFunctor F{source, target, {}, {}};
  F.object_map.assign(source->num_objects(), c);
  F.arrow_map.assign(source->num_arrows(), target->identities[c]);
  return F;
}

bool same_functor(const FinFunctor& F, const FinFunctor& G) {
  return F.source == G.source && F.target == G.target && F.object_map == G.object_map &&
         F.arrow_map == G.arrow_map;
}

CheckResult validate_nat_transform(const NatTransform& t) {
  const auto& F = t.source;
  const auto& G = t.target;
  if (F.source != G.source || F.target != G.target) return {false, "functors not parallel"};
  const auto& dom = *F.source;
  const auto& cod = *F.target;
  if (static_cast<int>(t.components.size()) != dom.num_objects()) return {false, "component list has wrong length"};
  for (int x = 0; x < dom.num_objects(); ++x) {
    int cx = t.components[x];
    if (cx < 0 || cx >= cod.num_arrows()) return {false, "component at " + dom.objects[x] + " out of range"};
    if (cod.arrows[cx].src != F.object_map[x] || cod.arrows[cx].dst != G.object_map[x])
      return {false, "component at " + dom.objects[x] + " has wrong endpoints"};
  }
  for (int a = 0; a < dom.num_arrows(); ++a) {
    int x = dom.arrows[a].src, y = dom.arrows[a].dst;
    if (cod.compose(t.components[y], F.arrow_map[a]) != cod.compose(G.arrow_map[a], t.components[x]))
      return {false, "naturality fails at " + dom.arrows[a].id};
  }
  return {};
}

std::vector<std::vector<int>> connected_components(const FinCategory& cat) {
  std::vector<int> parent(cat.num_objects());
  for (int i = 0; i < cat.num_objects(); ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& a : cat.arrows) {
    int r1 = find(a.src), r2 = find(a.dst);
    if (r1 != r2) parent[std::max(r1, r2)] = std::min(r1, r2);
  }
  std::map<int, std::vector<int>> buckets;
  for (int i = 0; i < cat.num_objects(); ++i) buckets[find(i)].push_back(i);
  std::vector<std::vector<int>> comps;
  for (auto& [root, members] : buckets) comps.push_back(std::move(members));
  return comps;
}

int component_of(const std::vector<std::vector<int>>& comps, int obj) {
  for (int i = 0; i < static_cast<int>(comps.size()); ++i) {
    if (std::binary_search(comps[i].begin(), comps[i].end(), obj)) return i;
  }
  return -1;
}

}  // namespace relsite
