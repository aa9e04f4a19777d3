#pragma once

// The ras subcommands as library functions, so tests can drive them without
// spawning a process.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ras/core.hpp"
#include "ras_cli/io.hpp"

namespace ras::cli {

struct CommandOutput {
  nlohmann::json json;
  std::string summary;
};

struct ClusterArgs {
  std::filesystem::path input;
  std::size_t periods = 6;
  std::filesystem::path out;
  std::optional<std::filesystem::path> counts_out;
  bool allow_empty_first = false;
  std::vector<std::string> items;  // menu order; default is sorted choice labels
};

struct SurviveArgs {
  std::filesystem::path pi;
  double tol = 1e-9;
  bool never_chosen = true;
};

struct OrderingArgs {
  std::string orderings = "crra";  // crra | full | path to a JSON file
  std::optional<std::filesystem::path> lotteries;
  std::optional<std::string> outside;
  bool no_outside = false;
};

struct Problem {
  Menu menu;
  SetIndex sets;
  OrderingSet orderings;
};

Problem build_problem(const std::vector<std::string>& items, const OrderingArgs& args);

struct EstimateArgs {
  std::filesystem::path pi;
  OrderingArgs ordering;
  std::size_t sims = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::optional<std::filesystem::path> rule_out;
  std::optional<std::filesystem::path> distances_out;
};

struct TestArgs {
  std::filesystem::path pi;
  std::filesystem::path counts;
  OrderingArgs ordering;
  std::size_t sims = 1000;
  std::size_t boot = 999;
  double alpha = 0.05;
  std::string tau = "auto";
  std::uint64_t seed = 0;
  bool no_simplex_sum = false;
  unsigned threads = 0;
  std::optional<std::filesystem::path> bootstrap_out;
};

struct GenerateArgs {
  std::string model;  // topn | mm | satisficing | diffusion
  std::filesystem::path config;
  std::filesystem::path out;
  std::optional<std::filesystem::path> counts_out;
  std::optional<std::filesystem::path> rule_out;
};

struct CrraTableArgs {
  std::optional<std::filesystem::path> lotteries;
  std::optional<std::string> outside;
  double step = 1e-4;
};

CommandOutput cmd_cluster(const ClusterArgs& args);
CommandOutput cmd_survive(const SurviveArgs& args);
CommandOutput cmd_estimate(const EstimateArgs& args);
CommandOutput cmd_test(const TestArgs& args);
CommandOutput cmd_generate(const GenerateArgs& args);
CommandOutput cmd_crra_table(const CrraTableArgs& args);

}  // namespace ras::cli
