#include "ras_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "ras/clustering.hpp"
#include "ras/crra.hpp"
#include "ras/error.hpp"
#include "ras/estimator.hpp"
#include "ras/generators.hpp"
#include "ras/homogeneous.hpp"
#include "ras/hyptest.hpp"
#include "ras/matrix.hpp"

namespace ras::cli {
namespace {

constexpr std::size_t kMaxFullOrderingItems = 6;

using nlohmann::json;

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

json header(const std::string& command) { return {{"schema_version", kSchemaVersion}, {"command", command}}; }

std::optional<std::size_t> find_label(const std::vector<std::string>& items, const std::string& label) {
  const auto it = std::find(items.begin(), items.end(), label);
  if (it == items.end()) return std::nullopt;
  return std::size_t(it - items.begin());
}

LotterySet lotteries_for(const OrderingArgs& args) {
  return args.lotteries ? read_lotteries_json(*args.lotteries) : experiment_lotteries();
}

json orderings_json(const OrderingSet& orderings, const Menu& menu) {
  json j = json::array();
  for (const auto& o : orderings) j.push_back(ordering_labels(o, menu));
  return j;
}

std::string fmt(double x, int precision = 6) {
  std::ostringstream s;
  s << std::setprecision(precision) << x;
  return s.str();
}

}  // namespace

Problem build_problem(const std::vector<std::string>& items, const OrderingArgs& args) {
  std::optional<std::string> outside = args.outside;
  std::vector<std::vector<std::string>> labels;

  if (args.orderings == "crra") {
    const LotterySet lots = lotteries_for(args);
    if (!outside && !lots.outside.empty()) outside = lots.outside;
    if (!outside) throw ConfigError("CRRA orderings need an outside option (set --outside)");
    std::vector<Lottery> ranked;
    std::vector<std::size_t> exclude;
    for (std::size_t i = 0; i < lots.lotteries.size(); ++i) {
      if (!find_label(items, lots.lotteries[i].label)) {
        throw ConfigError("lottery " + lots.lotteries[i].label + " is not a column of the choice data");
      }
      if (lots.lotteries[i].label == *outside) exclude.push_back(i);
    }
    if (exclude.size() != 1) throw ConfigError("outside option " + *outside + " is not among the lotteries");
    if (lots.lotteries.size() != items.size()) throw ConfigError("choice data columns and lotteries differ");
    CrraTableOptions opts;
    opts.exclude = exclude;
    for (const auto& interval : crra_ordering_table(lots.lotteries, opts)) {
      std::vector<std::string> l;
      for (std::size_t i : interval.ordering) l.push_back(lots.lotteries[i].label);
      l.push_back(*outside);
      labels.push_back(std::move(l));
    }
  } else if (args.orderings == "full") {
    if (items.size() > kMaxFullOrderingItems) {
      throw ConfigError("'full' orderings are limited to " + std::to_string(kMaxFullOrderingItems) + " items");
    }
  } else {
    labels = read_orderings_json(args.orderings);
  }

  std::optional<std::size_t> outside_index;
  if (outside) {
    outside_index = find_label(items, *outside);
    if (!outside_index) throw ConfigError("outside option " + *outside + " is not a column of the choice data");
  }
  Menu menu(items, outside_index);
  const bool outside_mode = outside_index.has_value() && !args.no_outside;
  SetIndex sets(menu, outside_mode);

  if (args.orderings == "full") return {menu, sets, OrderingSet::all(items.size())};
  std::vector<PreferenceOrdering> orderings;
  for (const auto& l : labels) orderings.push_back(ordering_from_labels(menu, l));
  return {menu, sets, OrderingSet(std::move(orderings))};
}

CommandOutput cmd_cluster(const ClusterArgs& args) {
  const auto observations = read_raw_csv(args.input);
  std::vector<std::string> items = args.items;
  if (items.empty()) {
    std::set<std::string> seen;
    for (const auto& o : observations) seen.insert(o.choice);
    items.assign(seen.begin(), seen.end());
  }
  const Menu menu(items);
  ClusterOptions opts;
  opts.periods = args.periods;
  opts.allow_empty_first = args.allow_empty_first;
  const auto [clustering, pi] = cluster_times(observations, menu, opts);

  write_pi_csv(args.out, items, pi);
  if (args.counts_out) write_counts_csv(*args.counts_out, pi);

  CommandOutput out{header("cluster"), {}};
  out.json["observations"] = observations.size();
  out.json["items"] = items;
  out.json["periods"] = pi.periods();
  out.json["period_counts"] = pi.period_counts();
  out.json["lower"] = clustering.lower;
  out.json["upper"] = clustering.upper;
  out.json["centroids"] = clustering.centroids;
  std::ostringstream s;
  s << observations.size() << " observations -> " << pi.periods() << " periods\n";
  for (std::size_t t = 0; t < pi.periods(); ++t) {
    s << "  period " << t + 1 << ": n=" << pi.period_counts()[t] << "  times [" << clustering.lower[t] << ", "
      << clustering.upper[t] << "]\n";
  }
  out.summary = s.str();
  return out;
}

CommandOutput cmd_survive(const SurviveArgs& args) {
  const PiTable table = read_pi_csv(args.pi);
  const Menu menu(table.items);
  SurvivorOptions opts;
  opts.tol = args.tol;
  opts.never_chosen_rule = args.never_chosen;
  const SurvivorReport report = survivor_search(table.data, opts);

  CommandOutput out{header("survive"), {}};
  out.json["items"] = table.items;
  out.json["tol"] = args.tol;
  out.json["never_chosen_rule"] = args.never_chosen;
  json survivors = json::array();
  std::ostringstream s;
  s << report.survivors.size() << " surviving ordering(s)\n";
  for (const auto& o : report.survivors) {
    survivors.push_back(ordering_labels(o, menu));
    s << "  " << o.to_string(menu) << '\n';
  }
  out.json["survivors"] = survivors;
  json rejected = json::array();
  for (const auto& r : report.rejected) {
    std::vector<std::string> prefix;
    for (std::size_t a : r.prefix) prefix.push_back(menu.label(a));
    json entry{{"prefix", prefix},
               {"reason", r.reason == RejectedPrefix::Reason::kContour ? "contour" : "never_chosen"}};
    if (r.witness) {
      entry["witness"] = {{"position", r.witness->position},
                          {"period", r.witness->t + 1},
                          {"later_period", r.witness->t_later + 1},
                          {"sum", r.witness->sum_t},
                          {"later_sum", r.witness->sum_t_later}};
    }
    rejected.push_back(entry);
  }
  out.json["rejected_prefixes"] = rejected;
  s << report.rejected.size() << " prefix(es) pruned\n";
  out.summary = s.str();
  return out;
}

CommandOutput cmd_estimate(const EstimateArgs& args) {
  const PiTable table = read_pi_csv(args.pi);
  const Problem problem = build_problem(table.items, args.ordering);
  EstimateOptions opts;
  opts.simulations = args.sims;
  opts.seed = args.seed;
  opts.threads = args.threads;
  const EstimationResult res = estimate(table.data, problem.sets, problem.orderings, opts);

  if (args.rule_out) write_rule_csv(*args.rule_out, *res.best_rule, problem.menu);
  if (args.distances_out) {
    std::ofstream f(*args.distances_out);
    if (!f) throw ConfigError("cannot write " + args.distances_out->string());
    f << std::setprecision(17) << "simulation,distance\n";
    for (std::size_t k = 0; k < res.per_sim_distances.size(); ++k) f << k << ',' << res.per_sim_distances[k] << '\n';
  }

  CommandOutput out{header("estimate"), {}};
  out.json["items"] = table.items;
  out.json["outside_mode"] = problem.sets.outside_mode();
  out.json["consideration_sets"] = problem.sets.size();
  out.json["orderings"] = orderings_json(problem.orderings, problem.menu);
  out.json["p_hat"] = to_json(res.best_p->p());
  out.json["best_distance"] = res.best_distance;
  out.json["best_index"] = res.best_index;
  out.json["simulations"] = res.simulations;
  out.json["failures"] = res.failures;
  out.json["seed"] = res.seed;
  std::ostringstream s;
  s << "best distance " << fmt(res.best_distance, 8) << " (simulation " << res.best_index << " of "
    << res.simulations << ", " << res.failures << " failed)\n";
  for (std::size_t i = 0; i < problem.orderings.size(); ++i) {
    s << "  " << std::setw(10) << fmt((*res.best_p)[i], 5) << "  " << problem.orderings[i].to_string(problem.menu)
      << '\n';
  }
  out.summary = s.str();
  return out;
}

CommandOutput cmd_test(const TestArgs& args) {
  const PiTable raw = read_pi_csv(args.pi);
  const PiTable table = with_counts(raw, read_counts_csv(args.counts, raw.data.period_labels()));
  const Problem problem = build_problem(table.items, args.ordering);

  EstimateOptions eopts;
  eopts.simulations = args.sims;
  eopts.seed = args.seed;
  eopts.threads = args.threads;
  const EstimationResult est = estimate(table.data, problem.sets, problem.orderings, eopts);

  TestConfig cfg;
  if (args.tau != "auto") {
    try {
      std::size_t used = 0;
      cfg.tau_n = std::stod(args.tau, &used);
      if (used != args.tau.size()) throw std::invalid_argument(args.tau);
    } catch (const std::logic_error&) {
      throw ConfigError("--tau must be 'auto' or a number");
    }
  }
  cfg.replications = args.boot;
  cfg.alpha = args.alpha;
  cfg.seed = derive_seed(args.seed, {0x7E57ull});
  cfg.simplex_sum = !args.no_simplex_sum;
  cfg.threads = args.threads;
  const ChoiceTransform transform = build_choice_transform(problem.sets, problem.orderings);
  const TestResult res = bootstrap_test(table.data, *est.best_rule, transform, cfg);

  if (args.bootstrap_out) {
    std::ofstream f(*args.bootstrap_out);
    if (!f) throw ConfigError("cannot write " + args.bootstrap_out->string());
    f << std::setprecision(17) << "replication,statistic\n";
    for (std::size_t l = 0; l < res.bootstrap_statistics.size(); ++l) f << l << ',' << res.bootstrap_statistics[l] << '\n';
  }

  CommandOutput out{header("test"), {}};
  out.json["t_n"] = res.t_n;
  out.json["critical_value"] = res.critical_value;
  out.json["p_value"] = res.p_value;
  out.json["decision"] = res.reject ? "reject" : "fail_to_reject";
  out.json["alpha"] = res.alpha;
  out.json["tau_n"] = res.tau_n;
  out.json["replications"] = res.replications;
  out.json["simplex_sum"] = cfg.simplex_sum;
  out.json["degenerate_weights"] = res.degenerate;
  out.json["p_tau"] = to_json(res.p_tau);
  out.json["eta_hat"] = to_json(res.eta_hat);
  out.json["estimation"] = {{"simulations", est.simulations},
                            {"best_distance", est.best_distance},
                            {"best_index", est.best_index},
                            {"p_hat", to_json(est.best_p->p())}};
  out.json["seed"] = args.seed;
  std::ostringstream s;
  s << "T_n = " << fmt(res.t_n) << ", critical value " << fmt(res.critical_value) << " at alpha " << res.alpha
    << ", p-value " << fmt(res.p_value, 4) << " -> " << (res.reject ? "reject" : "fail to reject") << '\n';
  if (res.degenerate) s << "warning: every variance weight is zero\n";
  out.summary = s.str();
  return out;
}

namespace {

std::vector<std::size_t> indices_of(const Menu& menu, const std::vector<std::string>& labels) {
  std::vector<std::size_t> out;
  for (const auto& l : labels) out.push_back(menu.index_of(l));
  return out;
}

std::vector<ThresholdDist> thresholds_from_json(const json& cfg, std::size_t periods) {
  if (cfg.contains("thresholds")) {
    std::vector<ThresholdDist> out;
    for (const auto& t : cfg.at("thresholds")) {
      if (t.contains("value")) {
        out.push_back(ThresholdDist::point_mass(t.at("value").get<double>()));
      } else {
        out.push_back(ThresholdDist::normal(t.at("mean").get<double>(), t.at("sd").get<double>()));
      }
    }
    if (out.size() != periods) throw ConfigError("need one threshold distribution per period");
    return out;
  }
  return linear_normal_thresholds(periods, cfg.value("threshold_start", 0.0), cfg.value("threshold_slope", 0.5),
                                  cfg.value("threshold_sd", 1.0));
}

}  // namespace

CommandOutput cmd_generate(const GenerateArgs& args) {
  json cfg = read_json(args.config);
  try {
    const auto items = cfg.at("items").get<std::vector<std::string>>();
    std::optional<std::size_t> outside;
    if (cfg.contains("outside") && !cfg["outside"].is_null()) {
      const auto it = std::find(items.begin(), items.end(), cfg["outside"].get<std::string>());
      if (it == items.end()) throw ConfigError("outside option is not an item");
      outside = std::size_t(it - items.begin());
    }
    const Menu menu(items, outside);
    const SetIndex sets(menu, outside.has_value());
    const auto periods = cfg.value("periods", std::size_t(3));

    std::optional<AttentionRule> rule;
    std::optional<ChoiceDataset> pi;
    std::vector<PreferenceOrdering> orderings;
    if (cfg.contains("orderings")) {
      for (const auto& o : cfg["orderings"]) orderings.push_back(ordering_from_labels(menu, o.get<std::vector<std::string>>()));
    }

    if (args.model == "satisficing") {
      SatisficingConfig sc;
      sc.utilities = doubles_from_json(cfg.at("utilities"));
      sc.thresholds = thresholds_from_json(cfg, periods);
      if (!cfg.contains("search") || cfg["search"] == "uniform") {
        sc.search = uniform_search_orders(items.size());
      } else {
        for (const auto& s : cfg["search"]) {
          sc.search.push_back({indices_of(menu, s.at("order").get<std::vector<std::string>>()),
                               s.at("probability").get<double>()});
        }
      }
      sc.draws_per_period = cfg.value("draws", std::size_t(10000));
      sc.seed = cfg.value("seed", std::uint64_t(0));
      SatisficingSample sample = gen_satisficing(menu, sc);
      orderings = {sample.preference};
      rule = sample.rule;
      pi = sample.choices;
    } else {
      if (orderings.empty()) {
        std::vector<std::size_t> rank(items.size());
        for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
        orderings.emplace_back(rank);
      }
      const std::size_t d = orderings.size();
      if (args.model == "topn") {
        std::vector<std::size_t> order = cfg.contains("search_order")
                                             ? indices_of(menu, cfg["search_order"].get<std::vector<std::string>>())
                                             : orderings.front().rank();
        rule = gen_topn(sets, periods, order, d);
      } else if (args.model == "mm") {
        rule = gen_mm(sets, GammaSchedule(matrix_from_json(cfg.at("gamma"))), d);
      } else if (args.model == "diffusion") {
        rule = gen_diffusion(sets, doubles_from_json(cfg.at("drifts")), cfg.value("sigma", 1.0),
                             matrix_from_json(cfg.at("thresholds")), d);
      } else {
        throw ConfigError("unknown model '" + args.model + "' (topn, mm, satisficing, diffusion)");
      }
      const Eigen::VectorXd p = cfg.contains("p") ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
                                                         doubles_from_json(cfg["p"]).data(), Eigen::Index(d)))
                                                   : Eigen::VectorXd::Constant(Eigen::Index(d), 1.0 / double(d));
      if (cfg.contains("p") && cfg["p"].size() != d) throw ConfigError("p needs one weight per ordering");
      const ChoiceTransform transform = build_choice_transform(sets, OrderingSet(orderings));
      const ChoiceDataset exact = predict_choices(*rule, transform, PreferenceDistribution(p));
      std::vector<double> counts;
      if (cfg.contains("counts")) counts.assign(exact.periods(), cfg["counts"].get<double>());
      pi = ChoiceDataset(exact.pi(), counts);
    }

    write_pi_csv(args.out, items, *pi);
    if (args.counts_out) write_counts_csv(*args.counts_out, *pi);
    if (args.rule_out) write_rule_csv(*args.rule_out, *rule, menu);

    CommandOutput out{header("generate"), {}};
    out.json["model"] = args.model;
    out.json["items"] = items;
    out.json["periods"] = pi->periods();
    out.json["orderings"] = orderings_json(OrderingSet(orderings), menu);
    out.json["monotone"] = check_time_monotonicity(*rule).pass;
    out.json["pi"] = to_json(pi->pi());
    std::ostringstream s;
    s << args.model << ": " << pi->periods() << " periods, " << items.size() << " items, " << orderings.size()
      << " preference(s) -> " << args.out.string() << '\n';
    out.summary = s.str();
    return out;
  } catch (const json::exception& e) {
    throw ConfigError(args.config.string() + ": " + e.what());
  }
}

CommandOutput cmd_crra_table(const CrraTableArgs& args) {
  const LotterySet lots = args.lotteries ? read_lotteries_json(*args.lotteries) : experiment_lotteries();
  const std::string outside = args.outside ? *args.outside : lots.outside;
  CrraTableOptions opts;
  opts.grid_step = args.step;
  for (std::size_t i = 0; i < lots.lotteries.size(); ++i) {
    if (!outside.empty() && lots.lotteries[i].label == outside) opts.exclude.push_back(i);
  }
  if (!outside.empty() && opts.exclude.empty()) throw ConfigError("outside option " + outside + " is not a lottery");
  const auto table = crra_ordering_table(lots.lotteries, opts);

  CommandOutput out{header("crra-table"), {}};
  out.json["outside"] = outside;
  json rows = json::array();
  std::ostringstream s;
  for (std::size_t r = 0; r < table.size(); ++r) {
    std::vector<std::string> labels;
    for (std::size_t i : table[r].ordering) labels.push_back(lots.lotteries[i].label);
    rows.push_back({{"lower", table[r].lower}, {"upper", table[r].upper}, {"ordering", labels}});
    s << std::setw(2) << r + 1 << "  " << std::left << std::setw(28) << join(labels, " > ") << std::right << " sigma in ["
      << std::fixed << std::setprecision(4) << table[r].lower << ", " << table[r].upper << "]\n"
      << std::defaultfloat;
  }
  out.json["intervals"] = rows;
  out.summary = s.str();
  return out;
}

}  // namespace ras::cli
