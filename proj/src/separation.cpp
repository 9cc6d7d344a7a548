// SPDX-License-Identifier: Apache-2.0
#include "qamsep/separation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "qamsep/mma_solvers.hpp"

namespace qamsep {

namespace {

double clamp_hyperbolic(RotationParams rp, double max_gamma = 1.0) {
  const double gamma = std::asinh(rp.s);
  return std::clamp(gamma, -max_gamma, max_gamma);
}

RotationParams clamped_hyperbolic(RotationParams rp) {
  const double gamma = clamp_hyperbolic(rp);
  return {std::cosh(gamma), std::sinh(gamma)};
}

struct SweepContext {
  RealStackedBlock& data;
  StructuredSeparator& sep;
  const AlgorithmConfig& cfg;
  double dispersion;     // multimodulus target of this variant
  double half_spacing;   // alphabet half spacing for the alphabet-matched phase
  std::vector<double>* trace = nullptr;
  bool am_phase = false;

  void apply(RotationKind kind, PairPattern pattern, int p, int q, RotationParams rp) {
    const auto [a, b] = make_pair_rotations(kind, pattern, data.n_streams(), p, q, rp.c, rp.s);
    apply_rotation_pair(data, sep, a, b);
    if (trace)
      trace->push_back(am_phase ? ama_cost(data, half_spacing) : mm_cost(data, dispersion));
  }
};

// One multimodulus sweep over the triangular schedule: for p == q the single
// (p, p+n) rotation, otherwise the direct pair followed by the cross pair,
// optionally preceded by the hyperbolic rotation of the same pattern.
void mma_sweep(SweepContext& ctx, bool hyperbolic, bool normalize) {
  const int n = ctx.data.n_streams();
  for (int p = 0; p < n; ++p) {
    for (int q = p; q < n; ++q) {
      if (p == q) {
        const auto form = accumulate_givens_form(ctx.data, p, p + n, false);
        ctx.apply(RotationKind::givens, PairPattern::diagonal, p, p, solve_givens_theta(form));
        continue;
      }
      for (const PairPattern pattern : {PairPattern::direct, PairPattern::cross}) {
        const int q_row = pattern == PairPattern::direct ? q : q + n;
        if (hyperbolic) {
          const auto sys = accumulate_hyperbolic_system(ctx.data, p, q_row);
          const RotationParams rp = ctx.cfg.solver_mode == SolverMode::exact
                                        ? solve_hyperbolic_exact(sys)
                                        : solve_hyperbolic_approx(sys);
          ctx.apply(RotationKind::hyperbolic, pattern, p, q, clamped_hyperbolic(rp));
        }
        const auto form = accumulate_givens_form(ctx.data, p, q_row, true);
        ctx.apply(RotationKind::givens, pattern, p, q, solve_givens_theta(form));
      }
    }
  }
  if (normalize) {
    apply_normalization(ctx.data, ctx.sep, compute_normalization(ctx.data));
    if (ctx.trace) ctx.trace->push_back(mm_cost(ctx.data, ctx.dispersion));
  }
}

// One alphabet-matched sweep over the strictly triangular schedule (no
// diagonal rotation): per pair the hyperbolic parameter first when enabled,
// then the givens angle, for the direct and then the cross pattern.
void ama_sweep(SweepContext& ctx, bool hyperbolic) {
  const int n = ctx.data.n_streams();
  const AmaMode mode =
      ctx.cfg.solver_mode == SolverMode::exact ? AmaMode::exact : AmaMode::approximate;
  for (int p = 0; p < n - 1; ++p) {
    for (int q = p + 1; q < n; ++q) {
      for (const PairPattern pattern : {PairPattern::direct, PairPattern::cross}) {
        const int q_row = pattern == PairPattern::direct ? q : q + n;
        const HyperbolicPair hp =
            pattern == PairPattern::direct ? HyperbolicPair::pair1 : HyperbolicPair::pair2;
        if (hyperbolic) {
          const RotationParams rp =
              solve_ama_hyperbolic(ctx.data, p, q_row, ctx.half_spacing, hp, mode);
          ctx.apply(RotationKind::hyperbolic, pattern, p, q, clamped_hyperbolic(rp));
        }
        const RotationParams rp = solve_ama_givens(ctx.data, p, q_row, ctx.half_spacing, mode);
        ctx.apply(RotationKind::givens, pattern, p, q, rp);
      }
    }
  }
}

SeparationReport run_sweeps(RealStackedBlock& data, const AlgorithmConfig& cfg,
                            const ConstellationSpec& spec) {
  if (cfg.n_sweeps <= 0) throw std::invalid_argument("n_sweeps must be positive");
  const bool am_variant = cfg.algorithm == Algorithm::g_ama || cfg.algorithm == Algorithm::hg_ama;
  if (am_variant && (cfg.n_warmstart < 0 || cfg.n_warmstart > cfg.n_sweeps))
    throw std::invalid_argument("need 0 <= n_warmstart <= n_sweeps");

  const auto start = std::chrono::steady_clock::now();

  SeparationReport report;
  report.separator = StructuredSeparator::identity(data.n_streams());

  // The hyperbolic multimodulus variant normalizes outputs toward unit
  // dispersion, the givens-only ones keep the alphabet's own dispersion.
  const double dispersion = cfg.algorithm == Algorithm::hg_mma ? 1.0 : spec.dispersion;

  SweepContext ctx{data, report.separator, cfg, dispersion, spec.half_spacing,
                   cfg.trace_rotations ? &report.rotation_costs : nullptr, false};

  for (int sweep = 0; sweep < cfg.n_sweeps; ++sweep) {
    switch (cfg.algorithm) {
      case Algorithm::g_mma:
        mma_sweep(ctx, false, false);
        break;
      case Algorithm::hg_mma:
        // First sweep stays givens-only: shear estimates taken before the
        // unitary stage has picked a basin are sample noise, and deferring
        // them one sweep measurably improves the separation statistics.
        mma_sweep(ctx, sweep > 0, true);
        break;
      case Algorithm::g_ama:
        ctx.am_phase = sweep >= cfg.n_warmstart;
        ctx.am_phase ? ama_sweep(ctx, false) : mma_sweep(ctx, false, false);
        break;
      case Algorithm::hg_ama:
        ctx.am_phase = sweep >= cfg.n_warmstart;
        ctx.am_phase ? ama_sweep(ctx, true) : mma_sweep(ctx, false, false);
        break;
    }
    report.separator.resymmetrize();
    report.cost_per_sweep.push_back(ctx.am_phase ? ama_cost(data, spec.half_spacing)
                                                 : mm_cost(data, dispersion));
  }

  report.sweeps_used = cfg.n_sweeps;
  report.separated = unstack(data);
  report.complex_separator = report.separator.to_complex();
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

AlgorithmConfig default_config(Algorithm algorithm) {
  AlgorithmConfig cfg;
  cfg.algorithm = algorithm;
  const bool am_variant = algorithm == Algorithm::g_ama || algorithm == Algorithm::hg_ama;
  cfg.n_sweeps = am_variant ? 8 : 5;
  cfg.n_warmstart = 5;
  return cfg;
}

std::string algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::g_mma: return "g_mma";
    case Algorithm::hg_mma: return "hg_mma";
    case Algorithm::g_ama: return "g_ama";
    case Algorithm::hg_ama: return "hg_ama";
  }
  return "unknown";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "g_mma") return Algorithm::g_mma;
  if (name == "hg_mma") return Algorithm::hg_mma;
  if (name == "g_ama") return Algorithm::g_ama;
  if (name == "hg_ama") return Algorithm::hg_ama;
  throw std::invalid_argument("unknown algorithm: " + name);
}

SeparationReport run_g_mma(RealStackedBlock& data, const AlgorithmConfig& cfg,
                           const ConstellationSpec& spec) {
  require(cfg.algorithm == Algorithm::g_mma, "config is not g_mma");
  return run_sweeps(data, cfg, spec);
}

SeparationReport run_hg_mma(RealStackedBlock& data, const AlgorithmConfig& cfg,
                            const ConstellationSpec& spec) {
  require(cfg.algorithm == Algorithm::hg_mma, "config is not hg_mma");
  return run_sweeps(data, cfg, spec);
}

SeparationReport run_g_ama(RealStackedBlock& data, const AlgorithmConfig& cfg,
                           const ConstellationSpec& spec) {
  require(cfg.algorithm == Algorithm::g_ama, "config is not g_ama");
  return run_sweeps(data, cfg, spec);
}

SeparationReport run_hg_ama(RealStackedBlock& data, const AlgorithmConfig& cfg,
                            const ConstellationSpec& spec) {
  require(cfg.algorithm == Algorithm::hg_ama, "config is not hg_ama");
  return run_sweeps(data, cfg, spec);
}

SeparationReport run_algorithm(RealStackedBlock& data, const AlgorithmConfig& cfg,
                               const ConstellationSpec& spec) {
  return run_sweeps(data, cfg, spec);
}

SeparationReport separate(const SampleBlock& received, int n_sources, const AlgorithmConfig& cfg,
                          const ConstellationSpec& spec) {
  const Whitener w = fit_whitener(received, n_sources, cfg.whitening_mode);
  RealStackedBlock stacked = stack(apply_whitener(w, received));
  SeparationReport report = run_algorithm(stacked, cfg, spec);
  report.combined_w = report.complex_separator * w.b;
  return report;
}

}  // namespace qamsep
