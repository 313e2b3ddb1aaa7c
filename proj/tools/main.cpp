#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "relsite/corpus.hpp"
#include "relsite/workspace.hpp"

// Exit codes: 0 pass, 1 check failed, 2 input or validation error,
// 3 a cross-validation discrepancy was flagged.

int main(int argc, char** argv) {
  CLI::App app{"finite site workbench: decide whether a functor between sites over a "
               "common base induces a morphism of relative toposes"};
  app.require_subcommand(1);

  std::string file;
  std::string problem;
  std::string mode = "all";
  std::string format = "text";
  bool timings = false;

  CLI::App* validate = app.add_subcommand("validate", "parse a workspace file and validate it");
  validate->add_option("file", file, "workspace JSON file")->required();

  CLI::App* check = app.add_subcommand("check", "run a checker on one problem of a workspace");
  check->add_option("file", file, "workspace JSON file")->required();
  check->add_option("--problem", problem, "problem name inside the workspace")->required();
  check->add_option("--mode", mode,
                    "one of cofinality, filtered, fiberwise, diagonal, oracle, all");
  check->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  check->add_flag("--timings", timings, "include wall-clock timings in JSON output");

  CLI::App* corpus = app.add_subcommand("corpus", "generate instances and report agreement");
  int max_objects = 2, max_arrows = 4;
  std::uint64_t seed = 0;
  bool assert_equivalences = false;
  corpus->add_option("--max-objects", max_objects, "category enumeration bound");
  corpus->add_option("--max-arrows", max_arrows, "category enumeration bound");
  corpus->add_option("--seed", seed, "seed for the randomized corpus phase");
  corpus->add_flag("--assert-equivalences", assert_equivalences,
                   "also run the presheaf oracle on every problem");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (validate->parsed()) {
    relsite::LoadResult res = relsite::load_workspace(file);
    if (!res.ok()) {
      std::fprintf(stderr, "%s\n", res.error.c_str());
      return 2;
    }
    const relsite::Workspace& ws = *res.workspace;
    std::printf("workspace ok: %zu categories, %zu functors, %zu transformations, "
                "%zu topologies, %zu indexed, %zu problems\n",
                ws.categories.size(), ws.functors.size(), ws.nat_transforms.size(),
                ws.topologies.size(), ws.indexed.size(), ws.problems.size());
    return 0;
  }

  if (check->parsed()) {
    relsite::LoadResult res = relsite::load_workspace(file);
    if (!res.ok()) {
      std::fprintf(stderr, "%s\n", res.error.c_str());
      return 2;
    }
    relsite::Report report = relsite::run_check(*res.workspace, problem, mode);
    std::string rendered = format == "json" ? report.render_json(timings) : report.render_text();
    std::fputs(rendered.c_str(), stdout);
    return relsite::report_exit_code(report);
  }

  relsite::CorpusBounds bounds;
  bounds.max_objects = max_objects;
  bounds.max_arrows = max_arrows;
  int code = 0;
  std::string report = relsite::corpus_report(bounds, seed, assert_equivalences, &code);
  std::fputs(report.c_str(), stdout);
  return code;
}
