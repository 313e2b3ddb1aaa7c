#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "relsite/fixtures.hpp"
#include "relsite/workspace.hpp"

using namespace relsite;

namespace {

const char* kSmallWorkspace = R"({
  "categories": {
    "C": {
      "objects": ["a", "b"],
      "arrows": [{"id": "f", "src": "a", "dst": "b"}]
    },
    "P": {"objects": ["*"]}
  },
  "indexed": {
    "ix": {
      "base": "C",
      "fibers": {"a": "P", "b": "P"},
      "transitions": {"f": {"on_objects": {"*": "*"}}}
    }
  },
  "functors": {
    "p": {
      "source": "C", "target": "C",
      "on_objects": {"a": "a", "b": "b"},
      "on_arrows": {"f": "f"}
    }
  },
  "nat_transforms": {
    "eta": {"source": "p", "target": "p", "components": {"a": "id:a", "b": "id:b"}}
  },
  "topologies": {
    "J": {"category": "C", "basis": {"b": [["f"]]}},
    "K": {"category": "C", "covers": {"a": [["id:a"]], "b": [["id:b", "f"], ["f"]]}},
    "G": {"giraud_of": "ix", "base_topology": "J"}
  },
  "problems": {
    "idprob": {
      "base": {"category": "C", "topology": "K"},
      "left": {"category": "C", "topology": "K", "comorphism": "p"},
      "right": {"category": "C", "topology": "K", "comorphism": "p"},
      "A": "p",
      "phi": "eta"
    }
  }
})";

}  // namespace

TEST_CASE("a full workspace parses and resolves cross references") {
  LoadResult res = parse_workspace(kSmallWorkspace, "small");
  REQUIRE(res.ok());
  const Workspace& ws = *res.workspace;
  CHECK(ws.categories.count("C") == 1);
  CHECK(ws.categories.count("ix") == 1);  // total category registered under the entry name
  CHECK(ws.functors.count("ix.proj") == 1);
  CHECK(ws.topologies.count("G") == 1);
  CHECK(ws.problems.count("idprob") == 1);

  // the basis entry was closed into the arrow topology
  const Topology& j = ws.topologies.at("J");
  const CatPtr& c = ws.categories.at("C");
  CHECK(j.covers_from_generators(1, {c->arrow_index("f")}));
  CHECK(validate_problem(ws.problems.at("idprob")).ok);
}

TEST_CASE("parsing accepts only known sections") {
  LoadResult res = parse_workspace(R"({"catgories": {}})", "typo");
  REQUIRE_FALSE(res.ok());
  CHECK(res.error.find("ParseError") == 0);
  CHECK(res.error.find("catgories") != std::string::npos);
}

TEST_CASE("non-json input reports a parse error with the origin") {
  LoadResult res = parse_workspace("{", "broken");
  REQUIRE_FALSE(res.ok());
  CHECK(res.error.find("ParseError") == 0);
  CHECK(res.error.find("broken") != std::string::npos);
}

TEST_CASE("unknown arrows surface as unresolved references") {
  LoadResult res = parse_workspace(R"({
    "categories": {"C": {"objects": ["a"], "arrows": [{"id": "f", "src": "a", "dst": "q"}]}}
  })", "dangling");
  REQUIRE_FALSE(res.ok());
  CHECK(res.error.find("UnresolvedReference") == 0);
  CHECK(res.error.find("categories/C") != std::string::npos);
}

TEST_CASE("topology violations name the axiom in the error") {
  LoadResult res = parse_workspace(R"({
    "categories": {"C": {"objects": ["a", "b"], "arrows": [{"id": "f", "src": "a", "dst": "b"}]}},
    "topologies": {"bad": {"category": "C", "covers": {"a": [["id:a"]], "b": [["f"]]}}}
  })", "axiom");
  REQUIRE_FALSE(res.ok());
  CHECK(res.error.find("ValidationError") == 0);
  CHECK(res.error.find("maximality") != std::string::npos);
}

TEST_CASE("missing files give a parse error with the path") {
  LoadResult res = load_workspace("/definitely/not/here.json");
  REQUIRE_FALSE(res.ok());
  CHECK(res.error == "ParseError: /definitely/not/here.json: cannot open file");
}

TEST_CASE("serialization round trips byte for byte") {
  Workspace ws;
  add_problem(ws, "identity", fixtures::identity_problem());
  add_problem(ws, "collapse", fixtures::neg_problem());
  add_problem(ws, "section", fixtures::pos_problem());
  std::string text = serialize_workspace(ws);

  LoadResult res = parse_workspace(text, "roundtrip");
  REQUIRE(res.ok());
  CHECK(serialize_workspace(*res.workspace) == text);
  CHECK(res.workspace->problems.size() == 3);
}

TEST_CASE("workspaces with indexed entries round trip through the total category") {
  LoadResult first = parse_workspace(kSmallWorkspace, "small");
  REQUIRE(first.ok());
  std::string text = serialize_workspace(*first.workspace);
  LoadResult second = parse_workspace(text, "small2");
  REQUIRE(second.ok());
  CHECK(serialize_workspace(*second.workspace) == text);
  // the giraud topology survives as explicit covers on the total category
  CHECK(second.workspace->topologies.count("G") == 1);
}

TEST_CASE("checks run through the report machinery") {
  Workspace ws;
  add_problem(ws, "identity", fixtures::identity_problem());

  Report all = run_check(ws, "identity", "all");
  CHECK(all.ok);
  CHECK(all.error.empty());
  REQUIRE(all.checks.size() == 10);
  CHECK(all.checks[0].first == "site_morphism");
  CHECK(all.checks[9].first == "oracle");
  CHECK(report_exit_code(all) == 0);

  Report cof = run_check(ws, "identity", "cofinality");
  CHECK(cof.checks.size() == 2);
  Report fil = run_check(ws, "identity", "filtered");
  CHECK(fil.checks.size() == 4);
  for (const char* m : {"fiberwise", "diagonal", "oracle"})
    CHECK(run_check(ws, "identity", m).checks.size() == 1);
}

TEST_CASE("failing problems keep their witnesses in the report") {
  Workspace ws;
  add_problem(ws, "collapse", fixtures::neg_problem());
  Report r = run_check(ws, "collapse", "all");
  CHECK_FALSE(r.ok);
  CHECK(report_exit_code(r) == 1);
  std::string text = r.render_text();
  CHECK(text.find("result: fail") != std::string::npos);
  CHECK(text.find("c=a") != std::string::npos);
  CHECK(text.find("chi=id:a") != std::string::npos);
}

TEST_CASE("unknown problems and modes exit through the input error path") {
  Workspace ws;
  add_problem(ws, "identity", fixtures::identity_problem());
  Report missing = run_check(ws, "ghost", "all");
  CHECK(missing.error.find("UnknownProblem") == 0);
  CHECK(report_exit_code(missing) == 2);
  Report sideways = run_check(ws, "identity", "sideways");
  CHECK(sideways.error.find("UnknownMode") == 0);
  CHECK(report_exit_code(sideways) == 2);
}

TEST_CASE("json reports include timings only on request") {
  Workspace ws;
  add_problem(ws, "identity", fixtures::identity_problem());
  Report r = run_check(ws, "identity", "cofinality");
  std::string plain = r.render_json(false);
  CHECK(plain.find("elapsed") == std::string::npos);
  std::string timed = r.render_json(true);
  CHECK(timed.find("elapsed") != std::string::npos);

  // identical runs render identical deterministic output
  Report again = run_check(ws, "identity", "cofinality");
  CHECK(again.render_json(false) == plain);
  CHECK(again.render_text() == r.render_text());
}
