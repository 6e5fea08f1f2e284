// Command-line front end: solve | norm | verify | reproduce.
//
// Exit codes: 0 success (solve converged / checks passed), 1 configuration
// or usage error, 2 solver hit the iteration cap, 3 saturated or mis-posed
// data, 4 a verify/reproduce check failed.

#include <cstdint>
#include <string>

#include <CLI11.hpp>

#include <varex/run_config.hpp>

int main(int argc, char** argv) {
  CLI::App app{
      "variable-exponent modulars, Luxemburg norms and Dirichlet energies"};
  app.require_subcommand(1);

  std::string solve_cfg;
  CLI::App* solve = app.add_subcommand(
      "solve", "minimize a Dirichlet energy described by a JSON config");
  solve->add_option("config", solve_cfg, "path to the JSON configuration")
      ->required();

  std::string norm_cfg;
  CLI::App* norm = app.add_subcommand(
      "norm", "evaluate a Luxemburg norm described by a JSON config");
  norm->add_option("config", norm_cfg, "path to the JSON configuration")
      ->required();

  std::string suite;
  std::uint64_t verify_seed = 12345;
  long verify_n = 0;
  std::string verify_out = ".";
  CLI::App* verify =
      app.add_subcommand("verify", "run a named property-check suite");
  verify
      ->add_option("suite", suite,
                   "clarkson | ucstar | lemmas | gradientcheck | monotonicity")
      ->required();
  verify->add_option("--seed", verify_seed, "RNG seed for the checks");
  verify->add_option("--n", verify_n,
                     "samples per check (0 uses the suite default)");
  verify->add_option("--out", verify_out, "directory for report.json");

  std::string example;
  long repro_j = 12;
  int repro_k = 3;
  int repro_smax = 12;
  int repro_resolution = 256;
  std::string repro_out = ".";
  CLI::App* reproduce =
      app.add_subcommand("reproduce", "re-run a named analytic example");
  reproduce
      ->add_option("example", example, "remark | v0-example | pimpliesq")
      ->required();
  reproduce->add_option("--j", repro_j, "sequence index for 'remark'");
  reproduce->add_option("--k", repro_k, "tail start for 'v0-example'");
  reproduce->add_option("--smax", repro_smax, "layer depth for 'v0-example'");
  reproduce->add_option("--resolution", repro_resolution,
                        "quadrature cells per support interval");
  reproduce->add_option("--out", repro_out, "directory for report.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : varex::cli::kExitConfig;
  }

  if (*solve) return varex::cli::cmd_solve(solve_cfg);
  if (*norm) return varex::cli::cmd_norm(norm_cfg);
  if (*verify) {
    return varex::cli::cmd_verify(suite, verify_seed, verify_n, verify_out);
  }
  if (*reproduce) {
    return varex::cli::cmd_reproduce(example, repro_j, repro_k, repro_smax,
                                     repro_resolution, repro_out);
  }
  return varex::cli::kExitConfig;
}
