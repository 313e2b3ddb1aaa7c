#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

// Finite categories with explicit composition tables.  Objects and arrows
// carry stable textual identifiers; all iteration follows declaration order,
// so every search in the library is deterministic.

namespace relsite {

struct Arrow {
  std::string id;
  int src = -1;
  int dst = -1;
};

class FinCategory {
public:
  std::string name;
  std::vector<std::string> objects;
  std::vector<Arrow> arrows;
  std::vector<int> identities;  // object index -> arrow index

  // flat composition table, entry(g, f) = g*n + f; -1 where dst(f) != src(g)
  std::vector<int> table;

  int num_objects() const { return static_cast<int>(objects.size()); }
  int num_arrows() const { return static_cast<int>(arrows.size()); }

  bool composable(int g, int f) const { return arrows[f].dst == arrows[g].src; }

  // g after f; only valid when composable(g, f)
  int compose(int g, int f) const { return table[static_cast<size_t>(g) * arrows.size() + f]; }

  bool is_identity(int a) const { return identities[arrows[a].src] == a && arrows[a].src == arrows[a].dst; }
  bool is_iso(int a) const;

  int object_index(const std::string& id) const;  // -1 if absent
  int arrow_index(const std::string& id) const;

  const std::vector<int>& arrows_into(int obj) const { return into_[obj]; }
  const std::vector<int>& arrows_out_of(int obj) const { return out_[obj]; }
  const std::vector<int>& hom(int x, int y) const { return hom_[static_cast<size_t>(x) * objects.size() + y]; }

  // called once after the fields above are filled in
  void freeze();

private:
  std::map<std::string, int> object_idx_, arrow_idx_;
  std::vector<std::vector<int>> into_, out_;
  std::vector<std::vector<int>> hom_;
};

using CatPtr = std::shared_ptr<const FinCategory>;

struct Violation {
  std::string kind;    // e.g. "MissingComposite", "NonAssociative"
  std::string detail;  // human-readable witness, names ids involved
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

// Raw, possibly inconsistent description as it appears in workspace files.
// Identity arrows follow the "id:<object>" naming convention and may be
// omitted; they are synthesized during validation.  Composition entries are
// triples [g, f, g_after_f]; entries involving identities may be omitted.
struct CategoryData {
  std::string name;
  std::vector<std::string> objects;
  std::vector<std::array<std::string, 3>> arrows;   // id, src, dst
  std::vector<std::array<std::string, 3>> compose;  // g, f, g*f
};

struct CategoryBuildResult {
  CatPtr category;  // null unless report.ok()
  ValidationReport report;
};

// Checks identifier resolution, totality of composition, identity laws and
// associativity; every violation names the offending ids.
CategoryBuildResult validate_category(const CategoryData& data);

// trusted constructor for categories produced by internal constructions;
// runs the same law checks through assertions in debug builds only
CatPtr make_category(std::string name, std::vector<std::string> objects,
                     std::vector<Arrow> arrows, std::vector<int> identities,
                     std::vector<int> table);

CatPtr terminal_category(const std::string& name = "1");
CatPtr empty_category(const std::string& name = "0");

struct FinFunctor {
  CatPtr source;
  CatPtr target;
  std::vector<int> object_map;
  std::vector<int> arrow_map;

  int on_object(int x) const { return object_map[x]; }
  int on_arrow(int a) const { return arrow_map[a]; }
};

struct CheckResult {
  bool ok = true;
  std::string witness;  // empty when ok; otherwise replayable description
};

CheckResult validate_functor(const FinFunctor& F);

FinFunctor identity_functor(const CatPtr& c);
// G after F; requires F.target == G.source (same carrier pointer)
FinFunctor compose_functors(const FinFunctor& G, const FinFunctor& F);
// constant functor from `source` at object c of `target`
FinFunctor constant_functor(const CatPtr& source, const CatPtr& target, int c);

bool same_functor(const FinFunctor& F, const FinFunctor& G);

struct NatTransform {
  FinFunctor source;
  FinFunctor target;
  std::vector<int> components;  // per object of source.source, arrow in target cat

  int at(int x) const { return components[x]; }
};

CheckResult validate_nat_transform(const NatTransform& t);

// partition of the objects into zig-zag connected components, each sorted,
// ordered by least member
std::vector<std::vector<int>> connected_components(const FinCategory& cat);
int component_of(const std::vector<std::vector<int>>& comps, int obj);

}  // namespace relsite
