// SPDX-License-Identifier: Apache-2.0
#include "qamsep/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "qamsep/errors.hpp"
#include "qamsep/metrics.hpp"
#include "qamsep/rng.hpp"

namespace qamsep {

namespace {

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

struct TrialData {
  ChannelInstance channel;
  SampleBlock sources;
  SampleBlock received;
};

TrialData make_trial_data(const ExperimentConfig& cfg, const ConstellationSpec& spec,
                          double snr_db, int n_samples, std::uint64_t seed) {
  TrialData td;
  if (cfg.identity_channel) {
    td.channel.mixing = Eigen::MatrixXcd::Identity(cfg.n_rx, cfg.n_tx);
    td.channel.condition_bound = 1.0;
  } else {
    td.channel = draw_channel(cfg.n_rx, cfg.n_tx, cfg.condition_bound, mix_seed(seed, 1));
  }
  td.sources = draw_sources(spec, cfg.n_tx, n_samples, mix_seed(seed, 2));
  td.received = transmit(td.channel, td.sources, snr_db, mix_seed(seed, 3));
  return td;
}

TrialRecord run_one(const ExperimentConfig& cfg, const ConstellationSpec& spec,
                    const TrialData& td, const AlgorithmConfig& acfg, int trial, double snr_db,
                    int n_samples, std::uint64_t seed) {
  TrialRecord rec;
  rec.trial_index = trial;
  rec.seed = seed;
  rec.algorithm = algorithm_name(acfg.algorithm);
  rec.snr_db = snr_db;
  rec.n_samples = n_samples;
  try {
    const SeparationReport report = separate(td.received, cfg.n_tx, acfg, spec);
    const GlobalSystem sys = resolve_ambiguity(report.combined_w, td.channel.mixing);
    rec.sinr_db = compute_sinr(sys, td.sources, report.combined_w, td.channel.noise_variance);
    rec.ser = demap_and_ser(sys, report.separated, td.sources, spec);
    rec.sweeps_used = report.sweeps_used;
    rec.cost_trajectory = report.cost_per_sweep;
    rec.wall_seconds = report.wall_seconds;
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.error = e.what();
  }
  return rec;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.n_tx <= 0 || cfg.n_rx < cfg.n_tx)
    throw std::invalid_argument("config: need n_rx >= n_tx > 0");
  if (cfg.n_trials <= 0) throw std::invalid_argument("config: n_trials must be positive");
  if (cfg.n_samples.empty() || cfg.snr_db.empty())
    throw std::invalid_argument("config: n_samples and snr_db must be non-empty");
  for (int ns : cfg.n_samples)
    if (ns <= 0) throw std::invalid_argument("config: n_samples entries must be positive");
  if (cfg.algorithms.empty()) throw std::invalid_argument("config: no algorithms configured");
  if (cfg.identity_channel && cfg.n_rx != cfg.n_tx)
    throw std::invalid_argument("config: identity_channel needs n_rx == n_tx");
  if (!(cfg.condition_bound >= 1.0))
    throw std::invalid_argument("config: condition_bound must be >= 1");
}

}  // namespace

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const ConstellationSpec spec = build_constellation(cfg.constellation_order);

  struct Job {
    int point_index;
    int trial;
    double snr_db;
    int n_samples;
  };
  std::vector<Job> jobs;
  int point_index = 0;
  for (double snr : cfg.snr_db)
    for (int ns : cfg.n_samples) {
      for (int t = 0; t < cfg.n_trials; ++t) jobs.push_back({point_index, t, snr, ns});
      ++point_index;
    }

  const auto n_algos = cfg.algorithms.size();
  std::vector<TrialRecord> records(jobs.size() * n_algos);

  auto worker_body = [&](std::size_t job_index) {
    const Job& job = jobs[job_index];
    const std::uint64_t seed =
        mix_seed(cfg.base_seed, static_cast<std::uint64_t>(job.point_index),
                 static_cast<std::uint64_t>(job.trial));
    TrialData td;
    bool data_ok = true;
    std::string data_error;
    try {
      td = make_trial_data(cfg, spec, job.snr_db, job.n_samples, seed);
    } catch (const std::exception& e) {
      data_ok = false;
      data_error = e.what();
    }
    for (std::size_t a = 0; a < n_algos; ++a) {
      TrialRecord& rec = records[job_index * n_algos + a];
      if (data_ok) {
        rec = run_one(cfg, spec, td, cfg.algorithms[a], job.trial, job.snr_db, job.n_samples,
                      seed);
      } else {
        rec.trial_index = job.trial;
        rec.seed = seed;
        rec.algorithm = algorithm_name(cfg.algorithms[a].algorithm);
        rec.snr_db = job.snr_db;
        rec.n_samples = job.n_samples;
        rec.failed = true;
        rec.error = data_error;
      }
    }
  };

  const int n_threads = std::max(1, std::min<int>(cfg.threads, static_cast<int>(jobs.size())));
  if (n_threads == 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) worker_body(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t j = next.fetch_add(1); j < jobs.size(); j = next.fetch_add(1))
          worker_body(j);
      });
    for (auto& th : pool) th.join();
  }
  return records;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  std::vector<SummaryRow> rows;
  auto find_row = [&](const TrialRecord& rec) -> SummaryRow& {
    for (auto& row : rows)
      if (row.snr_db == rec.snr_db && row.n_samples == rec.n_samples &&
          row.algorithm == rec.algorithm)
        return row;
    rows.push_back({rec.snr_db, rec.n_samples, rec.algorithm, 0, 0, 0.0, 0.0});
    return rows.back();
  };
  for (const auto& rec : records) {
    SummaryRow& row = find_row(rec);
    if (rec.failed) {
      ++row.n_failed;
    } else {
      ++row.n_ok;
      row.mean_sinr_db += rec.sinr_db;
      row.mean_ser += rec.ser;
    }
  }
  for (auto& row : rows) {
    if (row.n_ok > 0) {
      row.mean_sinr_db /= row.n_ok;
      row.mean_ser /= row.n_ok;
    } else {
      row.mean_sinr_db = std::numeric_limits<double>::quiet_NaN();
      row.mean_ser = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return rows;
}

void write_records(const std::vector<TrialRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << "trial_index,seed,algorithm,snr_db,n_samples,sinr_db,ser,sweeps_used,"
         "cost_trajectory,failed,error\n";
  for (const auto& r : records) {
    out << r.trial_index << ',' << r.seed << ',' << r.algorithm << ',' << fmt_double(r.snr_db)
        << ',' << r.n_samples << ',' << fmt_double(r.sinr_db) << ',' << fmt_double(r.ser) << ','
        << r.sweeps_used << ',';
    for (std::size_t i = 0; i < r.cost_trajectory.size(); ++i) {
      if (i) out << ';';
      out << fmt_double(r.cost_trajectory[i]);
    }
    out << ',' << (r.failed ? 1 : 0) << ',' << sanitize(r.error) << '\n';
  }
}

void write_summary(const std::vector<SummaryRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open summary file: " + path);
  out << "snr_db,n_samples,algorithm,n_ok,n_failed,mean_sinr_db,mean_ser\n";
  for (const auto& r : rows)
    out << fmt_double(r.snr_db) << ',' << r.n_samples << ',' << r.algorithm << ',' << r.n_ok
        << ',' << r.n_failed << ',' << fmt_double(r.mean_sinr_db) << ','
        << fmt_double(r.mean_ser) << '\n';
}

namespace {

double parse_snr(const nlohmann::json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity")
      return std::numeric_limits<double>::infinity();
    throw std::invalid_argument("config: bad snr_db entry '" + s + "'");
  }
  return v.get<double>();
}

AlgorithmConfig parse_algorithm(const nlohmann::json& j) {
  AlgorithmConfig base;
  if (j.is_string()) return default_config(algorithm_from_name(j.get<std::string>()));
  base = default_config(algorithm_from_name(j.at("algorithm").get<std::string>()));
  if (j.contains("n_sweeps")) base.n_sweeps = j["n_sweeps"].get<int>();
  if (j.contains("n_warmstart")) base.n_warmstart = j["n_warmstart"].get<int>();
  if (j.contains("solver_mode")) {
    const auto s = j["solver_mode"].get<std::string>();
    if (s == "exact")
      base.solver_mode = SolverMode::exact;
    else if (s == "approximate")
      base.solver_mode = SolverMode::approximate;
    else
      throw std::invalid_argument("config: bad solver_mode '" + s + "'");
  }
  if (j.contains("whitening_mode")) {
    const auto s = j["whitening_mode"].get<std::string>();
    if (s == "covariance_whitening")
      base.whitening_mode = WhitenMode::covariance_whitening;
    else if (s == "subspace_projection")
      base.whitening_mode = WhitenMode::subspace_projection;
    else
      throw std::invalid_argument("config: bad whitening_mode '" + s + "'");
  }
  if (j.contains("trace_rotations")) base.trace_rotations = j["trace_rotations"].get<bool>();
  return base;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }

  ExperimentConfig cfg;
  try {
    if (j.contains("n_tx")) cfg.n_tx = j["n_tx"].get<int>();
    if (j.contains("n_rx")) cfg.n_rx = j["n_rx"].get<int>();
    if (j.contains("n_samples")) {
      cfg.n_samples.clear();
      if (j["n_samples"].is_array())
        for (const auto& v : j["n_samples"]) cfg.n_samples.push_back(v.get<int>());
      else
        cfg.n_samples.push_back(j["n_samples"].get<int>());
    }
    if (j.contains("snr_db")) {
      cfg.snr_db.clear();
      if (j["snr_db"].is_array())
        for (const auto& v : j["snr_db"]) cfg.snr_db.push_back(parse_snr(v));
      else
        cfg.snr_db.push_back(parse_snr(j["snr_db"]));
    }
    if (j.contains("constellation_order"))
      cfg.constellation_order = j["constellation_order"].get<int>();
    if (j.contains("algorithms"))
      for (const auto& v : j["algorithms"]) cfg.algorithms.push_back(parse_algorithm(v));
    if (j.contains("n_trials")) cfg.n_trials = j["n_trials"].get<int>();
    if (j.contains("base_seed")) cfg.base_seed = j["base_seed"].get<std::uint64_t>();
    if (j.contains("condition_bound")) cfg.condition_bound = j["condition_bound"].get<double>();
    if (j.contains("output_path")) cfg.output_path = j["output_path"].get<std::string>();
    if (j.contains("identity_channel")) cfg.identity_channel = j["identity_channel"].get<bool>();
    if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace qamsep
