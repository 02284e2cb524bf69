#include <iostream>

#include "CLI11.hpp"
#include "fvf/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fvf: verifier and interpreter for a small separation-logic language"};
  app.require_subcommand(1);

  std::string file;
  fvf::cli::VerifyOptions vopts;
  std::string smtlib_dir;
  auto* verify = app.add_subcommand("verify", "symbolically verify every routine and main");
  verify->add_option("FILE", file, "program file")->required();
  verify->add_flag("--trace", vopts.trace, "print the full symbolic log of every routine");
  verify->add_option("--smtlib-dir", smtlib_dir, "write every prover query as an SMT-LIB2 file");
  verify->add_option("--jobs", vopts.jobs, "worker threads (0: one per core)");

  fvf::cli::RunOptions ropts;
  std::string choices;
  std::uint64_t seed = 0;
  int trials = 0;
  auto* run = app.add_subcommand("run", "execute main concretely");
  run->add_option("FILE", file, "program file")->required();
  run->add_option("--depth", ropts.depth, "execution depth bound")->required();
  auto* choices_opt = run->add_option("--choices", choices, "comma-separated values for nondeterministic choices");
  auto* seed_opt = run->add_option("--seed", seed, "seed for random choices (mt19937_64)");
  choices_opt->excludes(seed_opt);
  auto* trials_opt = run->add_option("--trials", trials, "number of seeded runs")->needs(seed_opt);
  run->add_flag("--trace", ropts.trace, "print every state");

  std::string routine;
  auto* trace = app.add_subcommand("trace", "print the symbolic execution tree of one routine");
  trace->add_option("FILE", file, "program file")->required();
  trace->add_option("--routine", routine, "routine name, or main")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : fvf::cli::kExitInput;
  }

  if (*verify) {
    if (!smtlib_dir.empty()) vopts.smtlib_dir = smtlib_dir;
    return fvf::cli::cmd_verify(file, vopts, std::cout, std::cerr);
  }
  if (*run) {
    if (*choices_opt) ropts.choices = choices;
    if (*seed_opt) ropts.seed = seed;
    if (*trials_opt) ropts.trials = trials;
    return fvf::cli::cmd_run(file, ropts, std::cout, std::cerr);
  }
  return fvf::cli::cmd_trace(file, routine, std::cout, std::cerr);
}
