#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "steinlab/divergences.hpp"
#include "steinlab/scenario.hpp"

namespace {

int cmd_divergence(const std::string& kind, const std::vector<double>& pw,
                   const std::vector<double>& qw, double eps) {
  using namespace steinlab;
  if (pw.empty() || pw.size() != qw.size()) {
    std::fprintf(stderr, "--p and --q need the same positive length\n");
    return 2;
  }
  try {
    Alphabet a = Alphabet::of_size(static_cast<int>(pw.size()));
    Distribution P(a, pw);
    Distribution Q(a, qw);
    double value = 0.0;
    if (kind == "kl") {
      value = kl(P, Q);
    } else if (kind == "dmax") {
      value = d_max(P, Q);
    } else if (kind == "dmax-smooth") {
      DivergenceReport r = d_max_smooth(P, Q, eps);
      value = r.status == SolverStatus::optimal ? r.value : kInfValue;
    } else if (kind == "dhyp") {
      DivergenceReport r = d_hyp(P, Q, eps);
      value = r.status == SolverStatus::optimal ? r.value : kInfValue;
    } else {
      std::fprintf(stderr, "unknown kind: %s (use kl, dmax, dmax-smooth, dhyp)\n",
                   kind.c_str());
      return 2;
    }
    if (is_inf_value(value)) std::printf("inf %s\n", unit_name().c_str());
    else std::printf("%.12g %s\n", value, unit_name().c_str());
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  steinlab::init_log_base_from_env();

  CLI::App app{"stein-lab: desk-scale checks for composite testing exponents"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = "out";
  int jobs = 0;
  std::uint64_t seed = 0;
  CLI::App* run = app.add_subcommand("run", "run a scenario config, write CSV and JSON reports");
  run->add_option("config", config, "scenario JSON file")->required();
  run->add_option("--out", out_dir, "output directory (default: out)");
  run->add_option("--jobs", jobs, "parallel check workers (default: all cores)");
  CLI::Option* seed_opt = run->add_option("--seed", seed, "override the scenario seed");

  CLI::App* list = app.add_subcommand("list-checks", "list runnable checks with descriptions");

  std::string kind;
  std::vector<double> pw, qw;
  double eps = 0.1;
  CLI::App* div = app.add_subcommand("divergence", "evaluate a divergence between two points");
  div->add_option("--kind", kind, "kl, dmax, dmax-smooth, dhyp")->required();
  div->add_option("--p", pw, "weights of P, comma separated")->required()->delimiter(',');
  div->add_option("--q", qw, "weights of Q, comma separated")->required()->delimiter(',');
  div->add_option("--eps", eps, "smoothing / type-I level (default 0.1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed())
    return steinlab::run_scenario_files(config, out_dir, jobs, seed_opt->count() > 0, seed);
  if (list->parsed()) {
    for (const steinlab::CheckInfo& info : steinlab::check_registry())
      std::printf("%-26s %s\n", info.id.c_str(), info.description.c_str());
    return 0;
  }
  return cmd_divergence(kind, pw, qw, eps);
}
