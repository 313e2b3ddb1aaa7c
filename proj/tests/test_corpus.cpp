#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "relsite/corpus.hpp"
#include "relsite/fixtures.hpp"

using namespace relsite;

namespace {

// direct law check, independent of the construction path
bool laws_hold(const FinCategory& c) {
  for (int x = 0; x < c.num_objects(); ++x) {
    int e = c.identities[x];
    if (c.arrows[e].src != x || c.arrows[e].dst != x) return false;
  }
  for (int f = 0; f < c.num_arrows(); ++f) {
    if (c.compose(c.identities[c.arrows[f].dst], f) != f) return false;
    if (c.compose(f, c.identities[c.arrows[f].src]) != f) return false;
  }
  for (int g = 0; g < c.num_arrows(); ++g)
    for (int f = 0; f < c.num_arrows(); ++f) {
      if (!c.composable(g, f)) continue;
      int gf = c.compose(g, f);
      if (c.arrows[gf].src != c.arrows[f].src || c.arrows[gf].dst != c.arrows[g].dst) return false;
      for (int e = 0; e < c.num_arrows(); ++e)
        if (c.composable(f, e) && c.compose(gf, e) != c.compose(g, c.compose(f, e))) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("enumeration counts match the known ladder of small categories") {
  CHECK(enumerate_categories(1, 1).size() == 1);
  CHECK(enumerate_categories(1, 2).size() == 3);   // 1 + 2 monoids of order two
  CHECK(enumerate_categories(1, 3).size() == 10);  // + 7 of order three
  CHECK(enumerate_categories(1, 4).size() == 45);  // + 35 of order four
  CHECK(enumerate_categories(2, 4).size() == 65);  // + 1 + 3 + 16 with two objects
}

TEST_CASE("sized enumeration partitions the bounded enumeration") {
  size_t total = 0;
  for (int k = 1; k <= 2; ++k)
    for (int m = k; m <= 4; ++m)
      for_each_category_sized(k, m, [&](const CatPtr&) {
        ++total;
        return true;
      });
  CHECK(total == 65);
}

TEST_CASE("every enumerated category satisfies the laws") {
  for (const CatPtr& c : enumerate_categories(2, 4)) {
    CHECK(laws_hold(*c));
    CHECK(c->num_objects() <= 2);
    CHECK(c->num_arrows() <= 4);
  }
}

TEST_CASE("enumerated names are distinct and the visitor can stop early") {
  std::set<std::string> names;
  for (const CatPtr& c : enumerate_categories(2, 4)) CHECK(names.insert(c->name).second);

  int seen = 0;
  for_each_category(2, 4, [&](const CatPtr&) { return ++seen < 10; });
  CHECK(seen == 10);
}

TEST_CASE("functor search finds exactly the structure maps") {
  CatPtr c2 = fixtures::c2();
  CatPtr one = fixtures::point();
  CHECK(all_functors(c2, c2).size() == 3);  // two constants and the identity
  CHECK(all_functors(one, c2).size() == 2);
  CHECK(all_functors(c2, one).size() == 1);
  CHECK(all_functors(one, one).size() == 1);
  for (const FinFunctor& F : all_functors(c2, c2)) CHECK(validate_functor(F).ok);
}

TEST_CASE("transformation search respects naturality") {
  CatPtr c2 = fixtures::c2();
  FinFunctor id = identity_functor(c2);
  FinFunctor at_b = constant_functor(c2, c2, 1);
  FinFunctor at_a = constant_functor(c2, c2, 0);
  CHECK(all_nat_transforms(id, id).size() == 1);
  CHECK(all_nat_transforms(id, at_b).size() == 1);
  CHECK(all_nat_transforms(at_b, id).size() == 0);
  CHECK(all_nat_transforms(at_a, id).size() == 1);
  for (const NatTransform& t : all_nat_transforms(id, at_b))
    CHECK(validate_nat_transform(t).ok);
}

TEST_CASE("generated problems are well formed and reproducible") {
  CorpusBounds bounds;
  std::vector<RelativeProblem> a = problem_corpus(24, 99, bounds);
  CHECK(a.size() == 24);
  for (const RelativeProblem& prob : a) CHECK(validate_problem(prob).ok);

  std::vector<RelativeProblem> b = problem_corpus(24, 99, bounds);
  REQUIRE(b.size() == a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].name == b[i].name);
    RelativeVerdict va = relative_verdict(a[i], false);
    RelativeVerdict vb = relative_verdict(b[i], false);
    CHECK(va.cofinality.ok() == vb.cofinality.ok());
    CHECK(va.filtered.ok() == vb.filtered.ok());
    CHECK(va.cofinality.surjectivity.witness == vb.cofinality.surjectivity.witness);
  }
}

TEST_CASE("a different seed changes only the random tail") {
  CorpusBounds bounds;
  std::vector<RelativeProblem> a = problem_corpus(18, 1, bounds);
  std::vector<RelativeProblem> b = problem_corpus(18, 2, bounds);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].name.rfind("rnd", 0) != 0) CHECK(a[i].name == b[i].name);
}

TEST_CASE("indexed instances are valid fibrations with small totals") {
  for (const IndexedInstance& inst : indexed_corpus(8)) {
    CHECK(validate_indexed(inst.ix).ok);
    CHECK(inst.total.carrier->num_arrows() <= 9);
    CHECK(check_fibration(inst.total.projection).ok);
  }
}

TEST_CASE("fibration instances carry identity comparisons over their base") {
  std::vector<FibrationInstance> insts = fibration_corpus(12);
  CHECK(insts.size() == 12);
  for (const FibrationInstance& inst : insts) {
    CHECK(validate_problem(inst.problem).ok);
    const CatPtr& base = inst.problem.base.category;
    for (int comp : inst.problem.phi.components) CHECK(base->is_identity(comp));
  }
}

TEST_CASE("instance workspaces carry their topology inventories") {
  CorpusBounds bounds;
  bounds.max_objects = 1;
  bounds.max_arrows = 2;
  int category_ws = 0, problem_ws = 0, topologies = 0;
  enumerate_instances(bounds, 5, [&](const Workspace& ws) {
    if (ws.problems.empty()) {
      ++category_ws;
      topologies += static_cast<int>(ws.topologies.size());
    } else {
      ++problem_ws;
    }
    return problem_ws < 3;
  });
  CHECK(category_ws == 3);  // the point and the two monoids of order two
  CHECK(topologies == 2 + 2 + 3);
  CHECK(problem_ws == 3);
}

TEST_CASE("corpus reports are byte stable") {
  CorpusBounds bounds;
  int code1 = -1, code2 = -1;
  std::string a = corpus_report(bounds, 42, false, &code1);
  std::string b = corpus_report(bounds, 42, false, &code2);
  CHECK(a == b);
  CHECK(code1 == code2);
  CHECK(a.find("\"summary\"") != std::string::npos);

  std::string c = corpus_report(bounds, 43, false, nullptr);
  CHECK(c != a);
}
