#include "relsite/workspace.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "relsite/presheaf.hpp"

namespace relsite {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct LoadError {
  std::string message;
};

[[noreturn]] void fail(const std::string& kind, const std::string& where, const std::string& detail) {
  throw LoadError{kind + ": " + where + ": " + detail};
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail("ParseError", where, std::string("missing key '") + key + "'");
  return obj.at(key);
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) fail("ParseError", where, "expected a string");
  return v.get<std::string>();
}

const json& as_object(const json& v, const std::string& where) {
  if (!v.is_object()) fail("ParseError", where, "expected an object");
  return v;
}

const json& as_array(const json& v, const std::string& where) {
  if (!v.is_array()) fail("ParseError", where, "expected an array");
  return v;
}

CatPtr resolve_category(const Workspace& ws, const std::string& name, const std::string& where) {
  auto it = ws.categories.find(name);
  if (it == ws.categories.end()) fail("UnresolvedReference", where, "unknown category '" + name + "'");
  return it->second;
}

int resolve_object(const FinCategory& cat, const std::string& id, const std::string& where) {
  int o = cat.object_index(id);
  if (o < 0) fail("UnresolvedReference", where, "unknown object '" + id + "' in category " + cat.name);
  return o;
}

int resolve_arrow(const FinCategory& cat, const std::string& id, const std::string& where) {
  int a = cat.arrow_index(id);
  if (a < 0) fail("UnresolvedReference", where, "unknown arrow '" + id + "' in category " + cat.name);
  return a;
}

// object and arrow assignments given by name; identity arrows may be omitted
FinFunctor functor_from_maps(const CatPtr& source, const CatPtr& target, const json& on_objects,
                             const json& on_arrows, const std::string& where) {
  FinFunctor F;
  F.source = source;
  F.target = target;
  F.object_map.assign(source->num_objects(), -1);
  for (int o = 0; o < source->num_objects(); ++o) {
    const std::string& id = source->objects[o];
    if (!on_objects.contains(id)) fail("ValidationError", where, "no image for object '" + id + "'");
    F.object_map[o] = resolve_object(*target, as_string(on_objects.at(id), where), where);
  }
  F.arrow_map.assign(source->num_arrows(), -1);
  for (int a = 0; a < source->num_arrows(); ++a) {
    const std::string& id = source->arrows[a].id;
    if (on_arrows.contains(id)) {
      F.arrow_map[a] = resolve_arrow(*target, as_string(on_arrows.at(id), where), where);
    } else if (source->is_identity(a)) {
      F.arrow_map[a] = target->identities[F.object_map[source->arrows[a].src]];
    } else {
      fail("ValidationError", where, "no image for arrow '" + id + "'");
    }
  }
  for (const auto& [key, value] : as_object(on_objects, where).items())
    if (source->object_index(key) < 0) fail("UnresolvedReference", where, "unknown object '" + key + "'");
  for (const auto& [key, value] : as_object(on_arrows, where).items())
    if (source->arrow_index(key) < 0) fail("UnresolvedReference", where, "unknown arrow '" + key + "'");
  if (CheckResult r = validate_functor(F); !r.ok) fail("ValidationError", where, r.witness);
  return F;
}

Sieve sieve_from_ids(const FinCategory& cat, int base, const json& ids, const std::string& where) {
  Sieve s;
  s.base = base;
  for (const auto& v : as_array(ids, where)) s.members.push_back(resolve_arrow(cat, as_string(v, where), where));
  std::sort(s.members.begin(), s.members.end());
  s.members.erase(std::unique(s.members.begin(), s.members.end()), s.members.end());
  return s;
}

void load_categories(Workspace& ws, const json& section, const std::string& origin) {
  for (const auto& [name, spec] : as_object(section, origin + ": categories").items()) {
    std::string where = origin + ": categories/" + name;
    CategoryData data;
    data.name = name;
    for (const auto& v : as_array(member(spec, "objects", where), where))
      data.objects.push_back(as_string(v, where));
    if (spec.contains("arrows")) {
      for (const auto& a : as_array(spec.at("arrows"), where)) {
        data.arrows.push_back({as_string(member(a, "id", where), where),
                               as_string(member(a, "src", where), where),
                               as_string(member(a, "dst", where), where)});
      }
    }
    if (spec.contains("compose")) {
      for (const auto& e : as_array(spec.at("compose"), where)) {
        const json& triple = as_array(e, where);
        if (triple.size() != 3) fail("ParseError", where, "compose entries are [g, f, gf] triples");
        data.compose.push_back({as_string(triple[0], where), as_string(triple[1], where),
                                as_string(triple[2], where)});
      }
    }
    CategoryBuildResult built = validate_category(data);
    if (!built.report.ok()) {
      const Violation& v = built.report.violations.front();
      fail(v.kind == "UnresolvedReference" ? "UnresolvedReference" : "ValidationError", where, v.detail);
    }
    ws.categories.emplace(name, built.category);
  }
}

void load_indexed(Workspace& ws, const json& section, const std::string& origin) {
  for (const auto& [name, spec] : as_object(section, origin + ": indexed").items()) {
    std::string where = origin + ": indexed/" + name;
    IndexedCategory ix;
    ix.base = resolve_category(ws, as_string(member(spec, "base", where), where), where);

    const json& fibers = as_object(member(spec, "fibers", where), where);
    ix.fibers.resize(ix.base->num_objects());
    for (int o = 0; o < ix.base->num_objects(); ++o) {
      const std::string& id = ix.base->objects[o];
      if (!fibers.contains(id)) fail("ValidationError", where, "no fiber over object '" + id + "'");
      ix.fibers[o] = resolve_category(ws, as_string(fibers.at(id), where), where);
    }

    json transitions = spec.contains("transitions") ? spec.at("transitions") : json::object();
    ix.transitions.resize(ix.base->num_arrows());
    for (int g = 0; g < ix.base->num_arrows(); ++g) {
      const CatPtr& from = ix.fibers[ix.base->arrows[g].dst];
      const CatPtr& to = ix.fibers[ix.base->arrows[g].src];
      const std::string& id = ix.base->arrows[g].id;
      if (transitions.contains(id)) {
        const json& t = transitions.at(id);
        std::string twhere = where + "/transitions/" + id;
        ix.transitions[g] = functor_from_maps(from, to,
                                              t.contains("on_objects") ? t.at("on_objects") : json::object(),
                                              t.contains("on_arrows") ? t.at("on_arrows") : json::object(),
                                              twhere);
      } else if (ix.base->is_identity(g)) {
        ix.transitions[g] = identity_functor(from);
      } else {
        fail("ValidationError", where, "no transition along arrow '" + id + "'");
      }
    }
    if (CheckResult r = validate_indexed(ix); !r.ok) fail("ValidationError", where, r.witness);

    TotalCategory total = grothendieck_construction(ix);
    if (ws.categories.count(name))
      fail("ValidationError", where, "name collides with an existing category");
    ws.categories.emplace(name, total.carrier);
    ws.functors.emplace(name + ".proj", total.projection);
    ws.indexed.emplace(name, std::move(ix));
    ws.totals.emplace(name, std::move(total));
  }
}

void load_functors(Workspace& ws, const json& section, const std::string& origin) {
  for (const auto& [name, spec] : as_object(section, origin + ": functors").items()) {
    std::string where = origin + ": functors/" + name;
    if (ws.functors.count(name)) fail("ValidationError", where, "duplicate functor name");
    CatPtr source = resolve_category(ws, as_string(member(spec, "source", where), where), where);
    CatPtr target = resolve_category(ws, as_string(member(spec, "target", where), where), where);
    ws.functors.emplace(name, functor_from_maps(source, target,
                                                spec.contains("on_objects") ? spec.at("on_objects") : json::object(),
                                                spec.contains("on_arrows") ? spec.at("on_arrows") : json::object(),
                                                where));
  }
}

void load_nat_transforms(Workspace& ws, const json& section, const std::string& origin) {
  for (const auto& [name, spec] : as_object(section, origin + ": nat_transforms").items()) {
    std::string where = origin + ": nat_transforms/" + name;
    std::string src_name = as_string(member(spec, "source", where), where);
    std::string tgt_name = as_string(member(spec, "target", where), where);
    auto fs = ws.functors.find(src_name);
    auto ft = ws.functors.find(tgt_name);
    if (fs == ws.functors.end()) fail("UnresolvedReference", where, "unknown functor '" + src_name + "'");
    if (ft == ws.functors.end()) fail("UnresolvedReference", where, "unknown functor '" + tgt_name + "'");
    NatTransform t;
    t.source = fs->second;
    t.target = ft->second;
    if (t.source.source != t.target.source || t.source.target != t.target.target)
      fail("ValidationError", where, "source and target functors are not parallel");
    const json& comps = as_object(member(spec, "components", where), where);
    const FinCategory& dom = *t.source.source;
    const FinCategory& cod = *t.source.target;
    t.components.assign(dom.num_objects(), -1);
    for (int o = 0; o < dom.num_objects(); ++o) {
      const std::string& id = dom.objects[o];
      if (!comps.contains(id)) fail("ValidationError", where, "no component at object '" + id + "'");
      t.components[o] = resolve_arrow(cod, as_string(comps.at(id), where), where);
    }
    if (CheckResult r = validate_nat_transform(t); !r.ok) fail("ValidationError", where, r.witness);
    ws.nat_transforms.emplace(name, std::move(t));
    ws.nat_refs.emplace(name, std::make_pair(src_name, tgt_name));
  }
}

void load_topologies(Workspace& ws, const json& section, const std::string& origin) {
  const json& entries = as_object(section, origin + ": topologies");
  // derived entries may name explicit ones in any key order, so the explicit
  // ones are registered in a first pass
  for (int pass = 0; pass < 2; ++pass)
  for (const auto& [name, spec] : entries.items()) {
    std::string where = origin + ": topologies/" + name;
    bool derived = spec.is_object() && spec.contains("giraud_of");
    if (derived != (pass == 1)) continue;
    if (derived) {
      std::string ix_name = as_string(spec.at("giraud_of"), where);
      auto it = ws.totals.find(ix_name);
      if (it == ws.totals.end()) fail("UnresolvedReference", where, "unknown indexed category '" + ix_name + "'");
      std::string base_top = as_string(member(spec, "base_topology", where), where);
      auto bt = ws.topologies.find(base_top);
      if (bt == ws.topologies.end()) fail("UnresolvedReference", where, "unknown topology '" + base_top + "'");
      if (bt->second.category != ws.indexed.at(ix_name).base)
        fail("ValidationError", where, "base topology lives on the wrong category");
      ws.topologies.emplace(name, giraud_topology(it->second, bt->second));
      continue;
    }

    CatPtr cat = resolve_category(ws, as_string(member(spec, "category", where), where), where);
    bool explicit_covers = spec.contains("covers");
    bool from_basis = spec.contains("basis");
    if (explicit_covers == from_basis)
      fail("ParseError", where, "expected exactly one of 'covers', 'basis' or 'giraud_of'");

    const json& table = as_object(spec.at(explicit_covers ? "covers" : "basis"), where);
    std::vector<Sieve> sieves;
    for (const auto& [obj, list] : table.items()) {
      int base = resolve_object(*cat, obj, where);
      for (const auto& ids : as_array(list, where)) {
        Sieve s = sieve_from_ids(*cat, base, ids, where);
        sieves.push_back(from_basis ? generate_sieve(*cat, base, s.members) : s);
      }
    }

    if (from_basis) {
      ws.topologies.emplace(name, generate_topology(cat, sieves));
    } else {
      Topology t;
      t.category = cat;
      t.covers.resize(cat->num_objects());
      for (Sieve& s : sieves) t.covers[s.base].push_back(std::move(s));
      for (auto& per_object : t.covers) std::sort(per_object.begin(), per_object.end());
      if (CheckResult r = validate_topology(t); !r.ok) fail("ValidationError", where, r.witness);
      ws.topologies.emplace(name, std::move(t));
    }
  }
}

const Topology& resolve_topology(const Workspace& ws, const std::string& name, const CatPtr& expect,
                                 const std::string& where) {
  auto it = ws.topologies.find(name);
  if (it == ws.topologies.end()) fail("UnresolvedReference", where, "unknown topology '" + name + "'");
  if (it->second.category != expect)
    fail("ValidationError", where, "topology '" + name + "' lives on the wrong category");
  return it->second;
}

const FinFunctor& resolve_functor(const Workspace& ws, const std::string& name, const CatPtr& source,
                                  const CatPtr& target, const std::string& where) {
  auto it = ws.functors.find(name);
  if (it == ws.functors.end()) fail("UnresolvedReference", where, "unknown functor '" + name + "'");
  if (it->second.source != source || it->second.target != target)
    fail("ValidationError", where, "functor '" + name + "' has the wrong endpoints");
  return it->second;
}

void load_problems(Workspace& ws, const json& section, const std::string& origin) {
  for (const auto& [name, spec] : as_object(section, origin + ": problems").items()) {
    std::string where = origin + ": problems/" + name;
    ProblemRefs refs;
    RelativeProblem prob;
    prob.name = name;

    const json& base = as_object(member(spec, "base", where), where);
    refs.base_category = as_string(member(base, "category", where), where);
    refs.base_topology = as_string(member(base, "topology", where), where);
    prob.base.category = resolve_category(ws, refs.base_category, where);
    prob.base.topology = resolve_topology(ws, refs.base_topology, prob.base.category, where);

    const json& left = as_object(member(spec, "left", where), where);
    refs.left_category = as_string(member(left, "category", where), where);
    refs.left_topology = as_string(member(left, "topology", where), where);
    refs.left_comorphism = as_string(member(left, "comorphism", where), where);
    prob.left.category = resolve_category(ws, refs.left_category, where);
    prob.left.topology = resolve_topology(ws, refs.left_topology, prob.left.category, where);
    prob.p = resolve_functor(ws, refs.left_comorphism, prob.left.category, prob.base.category, where);

    const json& right = as_object(member(spec, "right", where), where);
    refs.right_category = as_string(member(right, "category", where), where);
    refs.right_topology = as_string(member(right, "topology", where), where);
    refs.right_comorphism = as_string(member(right, "comorphism", where), where);
    prob.right.category = resolve_category(ws, refs.right_category, where);
    prob.right.topology = resolve_topology(ws, refs.right_topology, prob.right.category, where);
    prob.p_prime = resolve_functor(ws, refs.right_comorphism, prob.right.category, prob.base.category, where);

    refs.functor = as_string(member(spec, "A", where), where);
    prob.A = resolve_functor(ws, refs.functor, prob.left.category, prob.right.category, where);

    refs.comparison = as_string(member(spec, "phi", where), where);
    auto nt = ws.nat_transforms.find(refs.comparison);
    if (nt == ws.nat_transforms.end())
      fail("UnresolvedReference", where, "unknown nat transform '" + refs.comparison + "'");
    FinFunctor composite = compose_functors(prob.p_prime, prob.A);
    if (!same_functor(nt->second.source, composite) || !same_functor(nt->second.target, prob.p))
      fail("ValidationError", where, "phi does not compare p' A with p");
    prob.phi.source = std::move(composite);
    prob.phi.target = prob.p;
    prob.phi.components = nt->second.components;

    if (CheckResult r = validate_problem(prob); !r.ok) fail("ValidationError", where, r.witness);
    ws.problems.emplace(name, std::move(prob));
    ws.problem_refs.emplace(name, std::move(refs));
  }
}

}  // namespace

LoadResult parse_workspace(const std::string& text, const std::string& origin) {
  LoadResult out;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    out.error = std::string("ParseError: ") + origin + ": " + e.what();
    return out;
  }

  auto ws = std::make_shared<Workspace>();
  try {
    if (!doc.is_object()) fail("ParseError", origin, "top level is not an object");
    static const char* known[] = {"categories", "indexed", "functors",
                                  "nat_transforms", "topologies", "problems"};
    for (const auto& [key, value] : doc.items()) {
      bool ok = false;
      for (const char* k : known) ok = ok || key == k;
      if (!ok) fail("ParseError", origin, "unknown section '" + key + "'");
    }
    if (doc.contains("categories")) load_categories(*ws, doc.at("categories"), origin);
    if (doc.contains("indexed")) load_indexed(*ws, doc.at("indexed"), origin);
    if (doc.contains("functors")) load_functors(*ws, doc.at("functors"), origin);
    if (doc.contains("nat_transforms")) load_nat_transforms(*ws, doc.at("nat_transforms"), origin);
    if (doc.contains("topologies")) load_topologies(*ws, doc.at("topologies"), origin);
    if (doc.contains("problems")) load_problems(*ws, doc.at("problems"), origin);
  } catch (const LoadError& e) {
    out.error = e.message;
    return out;
  }
  out.workspace = std::move(ws);
  return out;
}

LoadResult load_workspace(const std::string& path) {
  std::ifstream in(path);
  if (!in) return {nullptr, "ParseError: " + path + ": cannot open file"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_workspace(buf.str(), path);
}

namespace {

std::string intern_category(Workspace& ws, const std::string& hint, const CatPtr& cat) {
  for (const auto& [n, c] : ws.categories)
    if (c == cat) return n;
  std::string name = hint;
  for (int k = 2; ws.categories.count(name); ++k) name = hint + "_" + std::to_string(k);
  ws.categories.emplace(name, cat);
  return name;
}

std::string intern_functor(Workspace& ws, const std::string& hint, const FinFunctor& F) {
  for (const auto& [n, g] : ws.functors)
    if (g.source == F.source && g.target == F.target && same_functor(g, F)) return n;
  std::string name = hint;
  for (int k = 2; ws.functors.count(name); ++k) name = hint + "_" + std::to_string(k);
  ws.functors.emplace(name, F);
  return name;
}

std::string intern_topology(Workspace& ws, const std::string& hint, const Topology& t) {
  for (const auto& [n, u] : ws.topologies)
    if (u.category == t.category && u.covers == t.covers) return n;
  std::string name = hint;
  for (int k = 2; ws.topologies.count(name); ++k) name = hint + "_" + std::to_string(k);
  ws.topologies.emplace(name, t);
  return name;
}

std::string intern_nat(Workspace& ws, const std::string& hint, const NatTransform& t,
                       const std::string& src_name, const std::string& tgt_name) {
  for (const auto& [n, u] : ws.nat_transforms)
    if (u.components == t.components && same_functor(u.source, t.source) && same_functor(u.target, t.target))
      return n;
  std::string name = hint;
  for (int k = 2; ws.nat_transforms.count(name); ++k) name = hint + "_" + std::to_string(k);
  ws.nat_transforms.emplace(name, t);
  ws.nat_refs.emplace(name, std::make_pair(src_name, tgt_name));
  return name;
}

}  // namespace

void add_problem(Workspace& ws, const std::string& name, const RelativeProblem& prob) {
  ProblemRefs refs;
  refs.base_category = intern_category(ws, name + ".C", prob.base.category);
  refs.left_category = intern_category(ws, name + ".D", prob.left.category);
  refs.right_category = intern_category(ws, name + ".Dp", prob.right.category);
  refs.base_topology = intern_topology(ws, name + ".J", prob.base.topology);
  refs.left_topology = intern_topology(ws, name + ".K", prob.left.topology);
  refs.right_topology = intern_topology(ws, name + ".Kp", prob.right.topology);
  refs.left_comorphism = intern_functor(ws, name + ".p", prob.p);
  refs.right_comorphism = intern_functor(ws, name + ".pp", prob.p_prime);
  refs.functor = intern_functor(ws, name + ".A", prob.A);
  std::string src = intern_functor(ws, name + ".pA", prob.phi.source);
  std::string tgt = intern_functor(ws, name + ".p", prob.phi.target);
  refs.comparison = intern_nat(ws, name + ".phi", prob.phi, src, tgt);
  ws.problems.emplace(name, prob);
  ws.problem_refs.emplace(name, std::move(refs));
}

std::string serialize_workspace(const Workspace& ws) {
  ordered_json doc;
  std::map<const FinCategory*, std::string> cat_names;
  for (const auto& [name, cat] : ws.categories) cat_names.emplace(cat.get(), name);

  ordered_json cats = ordered_json::object();
  for (const auto& [name, cat] : ws.categories) {
    if (ws.indexed.count(name)) continue;  // reconstructed from its indexed entry
    ordered_json spec;
    spec["objects"] = cat->objects;
    ordered_json arrows = ordered_json::array();
    for (int a = 0; a < cat->num_arrows(); ++a) {
      if (cat->is_identity(a)) continue;
      arrows.push_back({{"id", cat->arrows[a].id},
                        {"src", cat->objects[cat->arrows[a].src]},
                        {"dst", cat->objects[cat->arrows[a].dst]}});
    }
    spec["arrows"] = std::move(arrows);
    ordered_json compose = ordered_json::array();
    for (int g = 0; g < cat->num_arrows(); ++g) {
      if (cat->is_identity(g)) continue;
      for (int f = 0; f < cat->num_arrows(); ++f) {
        if (cat->is_identity(f) || !cat->composable(g, f)) continue;
        compose.push_back({cat->arrows[g].id, cat->arrows[f].id, cat->arrows[cat->compose(g, f)].id});
      }
    }
    spec["compose"] = std::move(compose);
    cats[name] = std::move(spec);
  }
  doc["categories"] = std::move(cats);

  ordered_json indexed = ordered_json::object();
  for (const auto& [name, ix] : ws.indexed) {
    ordered_json spec;
    spec["base"] = cat_names.at(ix.base.get());
    ordered_json fibers = ordered_json::object();
    for (int o = 0; o < ix.base->num_objects(); ++o)
      fibers[ix.base->objects[o]] = cat_names.at(ix.fibers[o].get());
    spec["fibers"] = std::move(fibers);
    ordered_json transitions = ordered_json::object();
    for (int g = 0; g < ix.base->num_arrows(); ++g) {
      if (ix.base->is_identity(g)) continue;
      const FinFunctor& t = ix.transitions[g];
      ordered_json on_objects = ordered_json::object();
      for (int o = 0; o < t.source->num_objects(); ++o)
        on_objects[t.source->objects[o]] = t.target->objects[t.object_map[o]];
      ordered_json on_arrows = ordered_json::object();
      for (int a = 0; a < t.source->num_arrows(); ++a)
        if (!t.source->is_identity(a)) on_arrows[t.source->arrows[a].id] = t.target->arrows[t.arrow_map[a]].id;
      transitions[ix.base->arrows[g].id] = {{"on_objects", std::move(on_objects)},
                                            {"on_arrows", std::move(on_arrows)}};
    }
    spec["transitions"] = std::move(transitions);
    indexed[name] = std::move(spec);
  }
  doc["indexed"] = std::move(indexed);

  ordered_json functors = ordered_json::object();
  for (const auto& [name, F] : ws.functors) {
    bool derived = false;
    for (const auto& [ix_name, ix] : ws.indexed) derived = derived || name == ix_name + ".proj";
    if (derived) continue;
    ordered_json spec;
    spec["source"] = cat_names.at(F.source.get());
    spec["target"] = cat_names.at(F.target.get());
    ordered_json on_objects = ordered_json::object();
    for (int o = 0; o < F.source->num_objects(); ++o)
      on_objects[F.source->objects[o]] = F.target->objects[F.object_map[o]];
    spec["on_objects"] = std::move(on_objects);
    ordered_json on_arrows = ordered_json::object();
    for (int a = 0; a < F.source->num_arrows(); ++a)
      if (!F.source->is_identity(a)) on_arrows[F.source->arrows[a].id] = F.target->arrows[F.arrow_map[a]].id;
    spec["on_arrows"] = std::move(on_arrows);
    functors[name] = std::move(spec);
  }
  doc["functors"] = std::move(functors);

  ordered_json nats = ordered_json::object();
  for (const auto& [name, t] : ws.nat_transforms) {
    ordered_json spec;
    const auto& refs = ws.nat_refs.at(name);
    spec["source"] = refs.first;
    spec["target"] = refs.second;
    ordered_json comps = ordered_json::object();
    const FinCategory& dom = *t.source.source;
    const FinCategory& cod = *t.source.target;
    for (int o = 0; o < dom.num_objects(); ++o) comps[dom.objects[o]] = cod.arrows[t.components[o]].id;
    spec["components"] = std::move(comps);
    nats[name] = std::move(spec);
  }
  doc["nat_transforms"] = std::move(nats);

  ordered_json tops = ordered_json::object();
  for (const auto& [name, t] : ws.topologies) {
    ordered_json spec;
    spec["category"] = cat_names.at(t.category.get());
    ordered_json covers = ordered_json::object();
    for (int o = 0; o < t.category->num_objects(); ++o) {
      ordered_json list = ordered_json::array();
      for (const Sieve& s : t.covers[o]) {
        ordered_json ids = ordered_json::array();
        for (int a : s.members) ids.push_back(t.category->arrows[a].id);
        list.push_back(std::move(ids));
      }
      covers[t.category->objects[o]] = std::move(list);
    }
    spec["covers"] = std::move(covers);
    tops[name] = std::move(spec);
  }
  doc["topologies"] = std::move(tops);

  ordered_json problems = ordered_json::object();
  for (const auto& [name, prob] : ws.problems) {
    const ProblemRefs& refs = ws.problem_refs.at(name);
    ordered_json spec;
    spec["base"] = {{"category", refs.base_category}, {"topology", refs.base_topology}};
    spec["left"] = {{"category", refs.left_category},
                    {"topology", refs.left_topology},
                    {"comorphism", refs.left_comorphism}};
    spec["right"] = {{"category", refs.right_category},
                     {"topology", refs.right_topology},
                     {"comorphism", refs.right_comorphism}};
    spec["A"] = refs.functor;
    spec["phi"] = refs.comparison;
    problems[name] = std::move(spec);
  }
  doc["problems"] = std::move(problems);

  return doc.dump(2) + "\n";
}

std::string Report::render_text() const {
  std::ostringstream out;
  out << "problem: " << problem << "\n";
  out << "mode: " << mode << "\n";
  if (!error.empty()) {
    out << "error: " << error << "\n";
    return out.str();
  }
  for (const auto& [name, r] : checks) {
    out << "check " << name << ": " << (r.ok ? "pass" : "FAIL");
    if (!r.ok) out << " (" << r.witness << ")";
    out << "\n";
  }
  for (const std::string& d : discrepancies) out << "discrepancy: " << d << "\n";
  out << "result: " << (ok ? "pass" : "fail") << "\n";
  return out.str();
}

std::string Report::render_json(bool with_timings) const {
  ordered_json j;
  j["problem"] = problem;
  j["mode"] = mode;
  j["error"] = error;
  j["ok"] = ok;
  ordered_json arr = ordered_json::array();
  for (const auto& [name, r] : checks)
    arr.push_back({{"name", name}, {"ok", r.ok}, {"witness", r.witness}});
  j["checks"] = std::move(arr);
  j["discrepancies"] = discrepancies;
  if (with_timings) j["timings"] = {{"elapsed_ms", elapsed_ms}};
  return j.dump(2) + "\n";
}

Report run_check(const Workspace& ws, const std::string& problem_name, const std::string& mode) {
  Report report;
  report.problem = problem_name;
  report.mode = mode;

  auto it = ws.problems.find(problem_name);
  if (it == ws.problems.end()) {
    report.error = "UnknownProblem: no problem named '" + problem_name + "'";
    return report;
  }
  static const char* modes[] = {"cofinality", "filtered", "fiberwise", "diagonal", "oracle", "all"};
  bool known = false;
  for (const char* m : modes) known = known || mode == m;
  if (!known) {
    report.error = "UnknownMode: '" + mode + "'";
    return report;
  }

  const RelativeProblem& prob = it->second;
  auto start = std::chrono::steady_clock::now();
  if (CheckResult v = validate_problem(prob); !v.ok) {
    report.error = "ValidationError: " + v.witness;
    return report;
  }

  if (mode == "cofinality") {
    CofinalityResult c = check_cofinality(prob);
    report.checks = {{"cofinality.surjectivity", c.surjectivity}, {"cofinality.injectivity", c.injectivity}};
    report.ok = c.ok();
  } else if (mode == "filtered") {
    RelativeFilteredResult f = check_relative_filtered(prob);
    report.checks = {{"filtered.reach", f.reach},
                     {"filtered.merge", f.merge},
                     {"filtered.equalize", f.equalize},
                     {"filtered.covers", f.covers}};
    report.ok = f.ok();
  } else if (mode == "fiberwise") {
    CheckResult r = check_fiberwise(prob);
    report.checks = {{"fiberwise", r}};
    report.ok = r.ok;
  } else if (mode == "diagonal") {
    CheckResult r = check_diagonal_density(prob);
    report.checks = {{"diagonal", r}};
    report.ok = r.ok;
  } else if (mode == "oracle") {
    CheckResult r;
    const FinCategory& C = *prob.base.category;
    for (int c = 0; c < C.num_objects() && r.ok; ++c) {
      PresheafMorphism m = build_phi_tilde(prob, c);
      CheckResult lr = is_local_isomorphism(m, prob.right.topology);
      if (!lr.ok) r = {false, "c=" + C.objects[c] + ": " + lr.witness};
    }
    report.checks = {{"oracle", r}};
    report.ok = r.ok;
  } else {  // all
    RelativeVerdict v = relative_verdict(prob, true);
    report.checks = {{"site_morphism", v.site_morphism},
                     {"cofinality.surjectivity", v.cofinality.surjectivity},
                     {"cofinality.injectivity", v.cofinality.injectivity},
                     {"filtered.reach", v.filtered.reach},
                     {"filtered.merge", v.filtered.merge},
                     {"filtered.equalize", v.filtered.equalize},
                     {"filtered.covers", v.filtered.covers},
                     {"fiberwise", v.fiberwise},
                     {"diagonal", v.diagonal},
                     {"oracle", *v.oracle}};
    report.discrepancies = v.discrepancies;
    report.ok = v.all_pass();
  }

  auto end = std::chrono::steady_clock::now();
  report.elapsed_ms = std::chrono::duration<double, std::milli>(end - start).count();
  return report;
}

int report_exit_code(const Report& r) {
  if (!r.error.empty()) return 2;
  if (!r.discrepancies.empty()) return 3;
  if (!r.ok) return 1;
  return 0;
}

}  // namespace relsite
