// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qamsep/separation.hpp"

namespace qamsep {

// One Monte-Carlo campaign: the cartesian product of snr_db and n_samples
// points, n_trials trials per point, every configured algorithm run on the
// same per-trial data (paired comparisons).
struct ExperimentConfig {
  int n_tx = 5;
  int n_rx = 7;
  std::vector<int> n_samples = {500};
  std::vector<double> snr_db = {30.0};
  int constellation_order = 16;
  std::vector<AlgorithmConfig> algorithms;
  int n_trials = 1;
  std::uint64_t base_seed = 1;
  double condition_bound = 100.0;
  std::string output_path;
  bool identity_channel = false;  // diagnostic: fixed identity mixing, needs n_rx == n_tx
  int threads = 1;
};

struct TrialRecord {
  int trial_index = 0;
  std::uint64_t seed = 0;
  std::string algorithm;
  double snr_db = 0.0;
  int n_samples = 0;
  double sinr_db = 0.0;
  double ser = 0.0;
  int sweeps_used = 0;
  std::vector<double> cost_trajectory;
  double wall_seconds = 0.0;  // not serialized: records files must be reproducible
  bool failed = false;
  std::string error;
};

struct SummaryRow {
  double snr_db = 0.0;
  int n_samples = 0;
  std::string algorithm;
  int n_ok = 0;
  int n_failed = 0;
  double mean_sinr_db = 0.0;  // NaN when no trial succeeded
  double mean_ser = 0.0;
};

// Runs every (point, trial, algorithm) combination. Channel, sources and noise
// are drawn once per (point, trial) from a seed derived deterministically from
// base_seed and shared across algorithms. Per-trial failures are captured in
// the record's error flag; configuration errors throw.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg);

// Aggregates by (snr_db, n_samples, algorithm) in deterministic order,
// excluding failed trials from the means.
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

// Delimited text, one record per line, fixed header and field order.
void write_records(const std::vector<TrialRecord>& records, const std::string& path);
void write_summary(const std::vector<SummaryRow>& rows, const std::string& path);

// JSON document mirroring the ExperimentConfig field names. Scalars are
// accepted where lists are expected; "inf" is a valid snr_db entry.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

}  // namespace qamsep
