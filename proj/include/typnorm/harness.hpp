#pragma once

// Desk-scale experiments: each one evaluates a construction or reduction,
// emits the raw series, and states pass/fail verdicts for its claims.

#include "typnorm/reductions.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace typnorm {

struct HarnessConfig {
  std::uint64_t cap = kDefaultCap;         // streaming materialization cap
  std::uint64_t freq_cap = 10'000'000;     // cap for frequency-table runs (m = 3)
  std::uint64_t seed = 42;
};

struct Claim {
  std::string id;
  std::string anchor;  // the statement being checked
  bool pass = false;
  std::string evidence;
};

struct CheckpointRow {
  unsigned n = 0;
  BigInt position;
  BigInt exact_L;
  HighPrec log2_position;
  HighPrec ratio;
};

struct CheckpointReport {
  std::string experiment;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  std::vector<CheckpointRow> rows;
  nlohmann::ordered_json series = nlohmann::ordered_json::array();  // other evidence rows
  std::vector<Claim> claims;
  nlohmann::ordered_json tolerances = nlohmann::ordered_json::object();
  std::uint64_t cap = 0;
  std::uint64_t seed = 0;

  bool passed() const;
  const Claim& claim(const std::string& id) const;
};

CheckpointReport verify_champernowne(const HarnessConfig& cfg = {});
CheckpointReport verify_y(const HarnessConfig& cfg = {});
CheckpointReport verify_z(unsigned a, const HarnessConfig& cfg = {});
CheckpointReport verify_omega(const HarnessConfig& cfg = {});
CheckpointReport verify_omega_prime(const HarnessConfig& cfg = {});
CheckpointReport verify_reduction_f(const std::vector<NatSeqDescriptor>& cases, const HarnessConfig& cfg = {});
CheckpointReport verify_reduction_f(const HarnessConfig& cfg = {});  // default cases
CheckpointReport verify_phi(const HarnessConfig& cfg = {});

/// Longest run of ones in n bits (64-bit words, most significant bit first).
using WordSource = std::function<std::uint64_t()>;

struct MonteCarloSummary {
  std::uint64_t trials = 0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  double mean = 0;
  double stddev = 0;
  double min = 0;
  double max = 0;
  std::vector<std::uint64_t> runs;  // L_n per trial
  bool pass = false;
};

/// Uniform bits from mt19937_64 seeded with `seed`.
MonteCarloSummary monte_carlo_erdos_renyi(std::uint64_t trials, std::uint64_t n, std::uint64_t seed);
/// Same statistic over an arbitrary word source (used for sanity inversions).
MonteCarloSummary monte_carlo_erdos_renyi(std::uint64_t trials, std::uint64_t n, std::uint64_t seed,
                                          const WordSource& source);
CheckpointReport verify_erdos_renyi(const HarnessConfig& cfg = {}, std::uint64_t trials = 500,
                                    std::uint64_t n = std::uint64_t{1} << 20);

std::vector<std::string> experiment_names();
/// Runs one named experiment ("all" is handled by run_experiments).
CheckpointReport run_experiment(const std::string& name, const HarnessConfig& cfg, unsigned z_a = 2);
std::vector<CheckpointReport> run_experiments(const std::string& name, const HarnessConfig& cfg, unsigned z_a = 2);

nlohmann::ordered_json to_json(const CheckpointReport& r);
std::string to_text(const CheckpointReport& r);

}  // namespace typnorm
