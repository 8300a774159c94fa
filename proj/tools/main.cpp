// micromacro: run coupled micro-macro traffic scenarios, verify the model's
// guarantees, or measure convergence against the exact Riemann solution.

#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mm/runner.hpp"
#include "mm/verify.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitCfl = 3;
constexpr int kExitInvariant = 4;
constexpr int kExitIo = 5;

struct Config {
  std::string scenario;
  std::optional<double> dx;
  std::optional<double> cfl;
  std::optional<double> t_end;
  std::optional<double> output_every;
  std::string out = "out";
  int levels = 4;
};

int do_run(const Config& cfg) {
  const mm::Scenario scenario = mm::load_scenario(cfg.scenario);
  mm::RunOptions opt;
  opt.dx = cfg.dx;
  opt.cfl = cfg.cfl;
  opt.t_end = cfg.t_end;
  opt.output_every = cfg.output_every;
  const mm::RunResult result = mm::run_scenario(scenario, opt);
  mm::write_outputs(result.history, cfg.out);
  std::printf("wrote %zu snapshots to %s (%ld steps, max dt %.3e)\n",
              result.history.size(), cfg.out.c_str(), result.steps, result.max_dt);
  return 0;
}

int do_verify(const Config& cfg) {
  mm::VerifyOptions opt;
  opt.scenario_dir = cfg.scenario.empty() ? "scenarios" : cfg.scenario;
  if (cfg.cfl) opt.cfl = *cfg.cfl;
  int failures = 0;
  for (const auto& check : mm::run_verification(opt)) {
    std::printf("[%s] %-28s %s\n", check.passed ? "PASS" : "FAIL",
                check.name.c_str(), check.detail.c_str());
    failures += !check.passed;
  }
  if (failures > 0) std::printf("%d suite(s) failed\n", failures);
  return failures > 0 ? 1 : 0;
}

int do_converge(const Config& cfg) {
  const mm::SpeedLaw law = mm::SpeedLaw::greenshields(1.0);
  const double cfl = cfg.cfl.value_or(0.9);
  const double dx0 = cfg.dx.value_or(5e-3);
  const double t_end = cfg.t_end.value_or(1.0);
  std::printf("case,dx,l1_error,order\n");
  for (auto [rl, rr, tag] : {std::tuple<double, double, const char*>{0.2, 0.8, "shock"},
                             {1.0, 0.0, "rarefaction"}}) {
    for (const auto& row :
         mm::riemann_convergence(law, rl, rr, t_end, cfg.levels, dx0, cfl))
      std::printf("%s,%.10g,%.10g,%.4f\n", tag, row.dx, row.error, row.order);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coupled micro-macro traffic flow simulator"};
  app.require_subcommand(1);

  Config cfg;
  auto add_common = [&cfg](CLI::App* cmd) {
    cmd->add_option("--dx", cfg.dx, "space mesh override (positive)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--cfl", cfg.cfl, "CFL factor (default 0.9)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--t-end", cfg.t_end, "final time override")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--output-every", cfg.output_every, "output cadence override")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", cfg.out, "output directory (default: out)");
  };

  CLI::App* run = app.add_subcommand("run", "integrate a scenario and write CSV outputs");
  run->add_option("--scenario", cfg.scenario, "scenario JSON file")->required();
  add_common(run);

  CLI::App* verify = app.add_subcommand("verify", "run the verification suites");
  verify->add_option("--scenario", cfg.scenario,
                     "directory with the bundled scenarios (default: scenarios)");
  verify->add_option("--cfl", cfg.cfl, "CFL factor fed to every suite");

  CLI::App* converge =
      app.add_subcommand("converge", "L1 error table against the exact Riemann fan");
  converge->add_option("--levels", cfg.levels, "number of refinement levels (>= 2)")
      ->check(CLI::Range(2, 12));
  add_common(converge);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return do_run(cfg);
    if (verify->parsed()) return do_verify(cfg);
    return do_converge(cfg);
  } catch (const mm::ParseError& e) {
    std::fprintf(stderr, "scenario error: %s\n", e.what());
    return kExitParse;
  } catch (const mm::CflError& e) {
    std::fprintf(stderr, "stability error: %s\n", e.what());
    return kExitCfl;
  } catch (const mm::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "invariant breach: %s\n", e.what());
    return kExitInvariant;
  }
}
