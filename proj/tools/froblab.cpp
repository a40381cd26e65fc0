// froblab: run finite-field experiments from JSON job files.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "froblab/cli.hpp"
#include "froblab/errors.hpp"

namespace fc = froblab::cli;

namespace {

int fail(const std::exception& e) {
  std::cerr << fc::error_json(e) << "\n";
  return fc::exit_code_for(e);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw froblab::ValidationError("cannot write '" + out_path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"froblab: Frobenius-twisted point counts, difference-polynomial bounds, dynamics and Chebotarev statistics"};
  app.require_subcommand(1);
  std::string out_path, format = "csv";
  std::uint64_t budget = 0, seed = 0;
  unsigned workers = 0;
  auto* budget_opt = app.add_option("--budget", budget, "Cap on evaluation steps");
  auto* workers_opt = app.add_option("--workers", workers, "Worker threads");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for sampling diagnostics");
  app.add_option("--out", out_path, "Write output here instead of standard output");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::string job_path, grid_path;
  auto* run = app.add_subcommand("run", "Run one job file");
  run->add_option("job", job_path, "Job file (JSON)")->required();
  run->fallthrough();
  auto* grid = app.add_subcommand("grid", "Run a template over the cartesian product of parameter ranges");
  grid->add_option("spec", grid_path, "Grid file (JSON with template and ranges)")->required();
  grid->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(froblab::ValidationError(std::string("command line: ") + e.what()));
  }

  fc::Overrides o;
  if (*budget_opt) o.budget = budget;
  if (*workers_opt) o.workers = workers;
  if (*seed_opt) o.seed = seed;

  try {
    if (*run) {
      fc::Job job = fc::load_job(job_path, o);
      fc::JobResult r = fc::execute(job);
      emit(fc::render(job, r, fc::parse_format(format)), out_path);
      if (r.property_failure) return fail(froblab::PropertyViolation(*r.property_failure));
      return 0;
    }
    std::ifstream in(grid_path);
    if (!in) throw froblab::ValidationError("cannot read grid file '" + grid_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    if (format != "csv") throw froblab::ValidationError("grid output is CSV only");
    fc::Json spec = fc::parse_json_text(ss.str(), "grid file '" + grid_path + "'");
    fc::GridReport rep = fc::run_grid(spec, o, out_path.empty() ? std::nullopt : std::optional<std::string>(out_path), std::cout);
    std::cerr << fc::Json{{"computed", rep.computed}, {"skipped", rep.skipped}, {"failed", rep.failed}}.dump() << "\n";
    return rep.exit_code;
  } catch (const std::exception& e) {
    return fail(e);
  }
}
