// Timing harness for the action-profile enumeration kernel.  Solves the same
// batch of pseudo-random instances twice -- once on a single worker (the
// serial reference path) and once with the full worker team -- verifies that
// values and witnesses agree bit for bit, and reports wall times.

#include <chrono>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "contracts/benchmarks.hpp"
#include "contracts/errors.hpp"
#include "contracts/instance.hpp"

#ifdef CONTRACTS_HAVE_OPENMP
#include <omp.h>
#endif

namespace {

using contracts::Instance;
using contracts::make_rat;
using contracts::Rat;

Rat random_step(std::mt19937_64& rng, int denominator) {
  std::uniform_int_distribution<int> dist(0, denominator - 1);
  return make_rat(dist(rng), denominator);
}

/// Valid instance with sorted random costs/rewards and composition forecasts.
Instance random_instance(std::mt19937_64& rng, int types, int actions, int outcomes) {
  std::vector<Rat> costs{Rat(0)};
  for (int i = 1; i < actions; ++i) costs.push_back(costs.back() + random_step(rng, 8));
  std::vector<Rat> rewards{Rat(0)};
  for (int j = 1; j < outcomes; ++j) rewards.push_back(rewards.back() + random_step(rng, 8) * 4);

  std::uniform_int_distribution<int> weight(0, 9);
  std::vector<std::vector<std::vector<Rat>>> forecasts(types);
  for (int t = 0; t < types; ++t) {
    for (int i = 0; i < actions; ++i) {
      std::vector<int> numerators(outcomes);
      long total = 0;
      for (int j = 0; j < outcomes; ++j) total += numerators[j] = weight(rng);
      if (total == 0) {
        numerators[0] = 1;
        total = 1;
      }
      std::vector<Rat> row;
      for (int j = 0; j < outcomes; ++j) row.push_back(make_rat(numerators[j], total));
      forecasts[t].push_back(std::move(row));
    }
  }
  return contracts::make_shared_cost_instance(std::move(costs), std::move(rewards),
                                              std::move(forecasts));
}

double run_batch(const std::vector<Instance>& batch, contracts::BenchmarkKind kind,
                 int workers, std::vector<Rat>* values) {
  const auto start = std::chrono::steady_clock::now();
  for (const Instance& instance : batch) {
    contracts::SolveOptions options;
    options.workers = workers;
    const auto result = kind == contracts::BenchmarkKind::Single
                            ? contracts::opt_single(instance, options)
                            : contracts::opt_menu(instance, options);
    values->push_back(result.value);
  }
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  int types = 3;
  int actions = 5;
  int outcomes = 4;
  int repeat = 5;
  unsigned long seed = 20240817;
  CLI::App app{"Serial-vs-parallel timing of the profile enumeration kernel"};
  app.add_option("--types", types)->capture_default_str();
  app.add_option("--actions", actions)->capture_default_str();
  app.add_option("--outcomes", outcomes)->capture_default_str();
  app.add_option("--repeat", repeat, "Instances per batch")->capture_default_str();
  app.add_option("--seed", seed)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

#ifdef CONTRACTS_HAVE_OPENMP
  std::cout << "OpenMP team size: " << omp_get_max_threads() << "\n";
#else
  std::cout << "built without OpenMP; both runs are serial\n";
#endif

  std::mt19937_64 rng(seed);
  std::vector<Instance> batch;
  for (int i = 0; i < repeat; ++i) batch.push_back(random_instance(rng, types, actions, outcomes));
  std::cout << repeat << " instances, " << types << " types x " << actions << " actions x "
            << outcomes << " outcomes\n";

  for (const auto kind : {contracts::BenchmarkKind::Single, contracts::BenchmarkKind::Menu}) {
    const char* name = kind == contracts::BenchmarkKind::Single ? "opt_single" : "opt_menu";
    std::vector<Rat> serial_values;
    std::vector<Rat> team_values;
    const double serial = run_batch(batch, kind, 1, &serial_values);
    const double team = run_batch(batch, kind, 0, &team_values);
    if (serial_values != team_values) {
      std::cerr << name << ": serial and parallel values disagree\n";
      return 1;
    }
    std::printf("%-10s serial %.3fs  parallel %.3fs  speedup %.2fx  (values identical)\n", name,
                serial, team, team > 0 ? serial / team : 0.0);
  }
  return 0;
}
