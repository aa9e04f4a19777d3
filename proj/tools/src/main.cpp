#include <iostream>

#include <CLI11.hpp>

#include "ras/error.hpp"
#include "ras_cli/commands.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

void emit(const ras::cli::CommandOutput& out, const std::string& json_out, bool json_stdout) {
  if (!json_out.empty()) ras::cli::write_json(json_out, out.json);
  if (json_stdout) {
    std::cout << out.json.dump(2) << '\n';
  } else {
    std::cout << out.summary;
  }
}

void add_ordering_options(CLI::App* cmd, ras::cli::OrderingArgs& args) {
  cmd->add_option("--orderings", args.orderings, "crra, full, or a JSON file of orderings")->capture_default_str();
  cmd->add_option("--lotteries", args.lotteries, "Lottery JSON used for CRRA orderings");
  cmd->add_option("--outside", args.outside, "Label of the always-considered outside option");
  cmd->add_flag("--no-outside", args.no_outside, "Treat the outside option as a regular item");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random attention span estimation and testing"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string json_out;
  bool json_stdout = false;
  app.add_option("--json-out", json_out, "Write the machine-readable result to this file");
  app.add_flag("--json", json_stdout, "Print JSON to stdout instead of the summary");

  ras::cli::ClusterArgs cluster;
  auto* c = app.add_subcommand("cluster", "Cluster stopping times into periods");
  c->add_option("--input", cluster.input, "Raw CSV respondent_id,stopping_time,choice")->required();
  c->add_option("--periods", cluster.periods, "Number of periods, including the zero-time period")->capture_default_str();
  c->add_option("--out", cluster.out, "Output choice-probability CSV")->required();
  c->add_option("--counts-out", cluster.counts_out, "Output period counts CSV");
  c->add_option("--items", cluster.items, "Menu labels in column order")->delimiter(',');
  c->add_flag("--allow-empty-first", cluster.allow_empty_first, "Allow data without zero-time observations");

  ras::cli::SurviveArgs survive;
  auto* s = app.add_subcommand("survive", "Orderings that survive the homogeneous-preference test");
  s->add_option("--pi", survive.pi, "Choice-probability CSV")->required();
  s->add_option("--tol", survive.tol, "Tolerance on tail-sum increases")->capture_default_str();
  bool no_never_chosen = false;
  s->add_flag("--no-never-chosen", no_never_chosen, "Disable the never-chosen pruning rule");

  ras::cli::EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "Simulation estimate of the preference distribution");
  e->add_option("--pi", est.pi, "Choice-probability CSV")->required();
  add_ordering_options(e, est.ordering);
  e->add_option("--sims", est.sims, "Number of simulated attention rules")->capture_default_str();
  e->add_option("--seed", est.seed, "Random seed")->capture_default_str();
  e->add_option("--threads", est.threads, "Worker threads (0 = all cores)");
  e->add_option("--rule-out", est.rule_out, "Write the best attention rule as CSV");
  e->add_option("--distances-out", est.distances_out, "Write every simulation's distance as CSV");

  ras::cli::TestArgs test;
  auto* t = app.add_subcommand("test", "Bootstrap specification test");
  t->add_option("--pi", test.pi, "Choice-probability CSV")->required();
  t->add_option("--counts", test.counts, "Period counts CSV")->required();
  add_ordering_options(t, test.ordering);
  t->add_option("--sims", test.sims, "Simulated rules used to pick the tested rule")->capture_default_str();
  t->add_option("--boot", test.boot, "Bootstrap replications")->capture_default_str();
  t->add_option("--alpha", test.alpha, "Nominal level")->capture_default_str();
  t->add_option("--tau", test.tau, "Tuning parameter tau_n, or auto")->capture_default_str();
  t->add_option("--seed", test.seed, "Random seed")->capture_default_str();
  t->add_flag("--no-simplex-sum", test.no_simplex_sum, "Drop the sum-to-one constraint in the statistic");
  t->add_option("--threads", test.threads, "Worker threads (0 = all cores)");
  t->add_option("--bootstrap-out", test.bootstrap_out, "Write the bootstrap statistics as CSV");

  ras::cli::GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Synthetic choice data from an attention model");
  g->add_option("--model", gen.model, "topn, mm, satisficing or diffusion")
      ->required()
      ->check(CLI::IsMember({"topn", "mm", "satisficing", "diffusion"}));
  g->add_option("--config", gen.config, "Model configuration JSON")->required()->check(CLI::ExistingFile);
  g->add_option("--out", gen.out, "Output choice-probability CSV")->required();
  g->add_option("--counts-out", gen.counts_out, "Output period counts CSV");
  g->add_option("--rule-out", gen.rule_out, "Write the attention rule as CSV");

  ras::cli::CrraTableArgs crra;
  auto* r = app.add_subcommand("crra-table", "CRRA orderings of lotteries by risk aversion");
  r->add_option("--lotteries", crra.lotteries, "Lottery JSON (default: the experiment's lotteries)");
  r->add_option("--outside", crra.outside, "Lottery left out of the ranking");
  r->add_option("--step", crra.step, "Grid step in sigma")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (c->parsed()) emit(ras::cli::cmd_cluster(cluster), json_out, json_stdout);
    if (s->parsed()) {
      survive.never_chosen = !no_never_chosen;
      emit(ras::cli::cmd_survive(survive), json_out, json_stdout);
    }
    if (e->parsed()) emit(ras::cli::cmd_estimate(est), json_out, json_stdout);
    if (t->parsed()) emit(ras::cli::cmd_test(test), json_out, json_stdout);
    if (g->parsed()) emit(ras::cli::cmd_generate(gen), json_out, json_stdout);
    if (r->parsed()) emit(ras::cli::cmd_crra_table(crra), json_out, json_stdout);
  } catch (const ras::NumericalError& err) {
    std::cerr << "numerical failure: " << err.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
