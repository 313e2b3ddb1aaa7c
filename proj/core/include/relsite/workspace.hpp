#pragma once

#include <map>

#include "relsite/indexed.hpp"
#include "relsite/relative.hpp"

// Named collections of categories, functors, transformations, topologies,
// indexed categories and relative problems, loaded from JSON files and
// serialized back in an explicit normal form.  Reports produced by run_check
// carry every verdict and witness and render identically across runs.

namespace relsite {

// names a problem's constituents as they appeared in the source file, so
// serialization can emit references instead of reverse-searching
struct ProblemRefs {
  std::string base_category, base_topology;
  std::string left_category, left_topology, left_comorphism;
  std::string right_category, right_topology, right_comorphism;
  std::string functor;      // A
  std::string comparison;   // phi
};

struct Workspace {
  std::map<std::string, CatPtr> categories;  // includes total categories of indexed entries
  std::map<std::string, FinFunctor> functors;  // includes "<name>.proj" projections
  std::map<std::string, NatTransform> nat_transforms;
  std::map<std::string, Topology> topologies;
  std::map<std::string, IndexedCategory> indexed;
  std::map<std::string, TotalCategory> totals;  // keyed like `indexed`
  std::map<std::string, RelativeProblem> problems;

  std::map<std::string, ProblemRefs> problem_refs;
  // declared source and target functor names per transformation
  std::map<std::string, std::pair<std::string, std::string>> nat_refs;
};

struct LoadResult {
  std::shared_ptr<Workspace> workspace;  // null when error is set
  std::string error;                     // "<Kind>: <location>: <detail>"
  bool ok() const { return workspace != nullptr; }
};

LoadResult parse_workspace(const std::string& text, const std::string& origin);
LoadResult load_workspace(const std::string& path);

// registers every constituent of the problem under names derived from `name`,
// reusing entries that already match, and records the reference structure
void add_problem(Workspace& ws, const std::string& name, const RelativeProblem& prob);

// explicit-covers normal form; parsing the output reproduces the workspace
std::string serialize_workspace(const Workspace& ws);

struct Report {
  std::string problem;
  std::string mode;
  std::string error;  // UnknownProblem / UnknownMode / ValidationError; empty when the checks ran
  bool ok = false;
  std::vector<std::pair<std::string, CheckResult>> checks;  // named verdicts in fixed order
  std::vector<std::string> discrepancies;
  double elapsed_ms = 0.0;

  std::string render_text() const;
  // timings are opt-in so that reports meant for byte comparison stay stable
  std::string render_json(bool with_timings) const;
};

// mode is one of: cofinality, filtered, fiberwise, diagonal, oracle, all.
// mode "all" computes every route plus the presheaf comparison and activates
// the discrepancy detector.
Report run_check(const Workspace& ws, const std::string& problem_name, const std::string& mode);

// 0 all pass, 1 some check failed, 2 input or validation error, 3 discrepancy
int report_exit_code(const Report& r);

}  // namespace relsite
