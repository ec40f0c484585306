#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ddisac/comm_metrics.hpp"
#include "ddisac/precoding.hpp"
#include "ddisac/sensing.hpp"

namespace ddisac {

struct PenaltyWeights {
    double rate_c = 10.0;
    double crb_tau = 10.0;
    double crb_nu = 10.0;
};

/// Real-coded GA settings. mutation_rate <= 0 selects 1 / chromosome length.
struct GaConfig {
    std::size_t population = 100;
    std::size_t generations = 125;
    double crossover_rate = 0.9;
    /// BLX-a extension: each child gene is drawn uniformly from the parents'
    /// interval widened by blend_alpha * |a - b| on both sides. 0 gives
    /// plain arithmetic crossover with one random weight per pair.
    double blend_alpha = 0.5;
    double mutation_rate = 0.0;
    double mutation_sigma = 0.1;
    std::size_t tournament_size = 3;
    std::size_t elitism = 2;
    PenaltyWeights penalty;
    std::uint64_t seed = 1;

    void validate() const;
};

struct QosThresholds {
    double rate_c_req = 0.1; // bits/s/Hz
    double eps_tau = 2.0e-11; // s^2
    double eps_nu = 5.0e3;    // Hz^2
};

/// Everything that stays fixed while one GA run optimizes the precoders of
/// one Monte-Carlo frame. Only channel estimates are visible here.
struct FrameContext {
    DDGrid grid = DDGrid::table1();
    std::vector<CMatrix> h_hat;
    ImpairmentConfig impairments;
    EchoModel echo{SensingTarget{}, DDGrid::table1()};
    StreamSymbols symbols;
    QosThresholds qos;
    double alpha = 0.0;
    double p_max = 1.0;

    std::size_t users() const noexcept { return h_hat.size(); }
    std::size_t genes() const noexcept { return chromosome_length(grid.n_dd(), users()); }
};

struct FitnessBreakdown {
    double r_min = 0.0;
    double penalty_c = 0.0;
    double penalty_tau = 0.0;
    double penalty_nu = 0.0;
    double fitness = -std::numeric_limits<double>::infinity();
    bool feasible = false;
};

/// Full evaluation of one candidate.
struct Evaluation {
    FitnessBreakdown breakdown;
    std::optional<PrecoderSet> precoders; // empty for degenerate chromosomes
    CommMetrics comm;
    FimResult sensing;
};

/// Penalized max-min objective:
///   r_min - l_c max(0, R_req - min_k R_c,k)
///         - l_tau max(0, (CRB_tau - eps_tau) / eps_tau)
///         - l_nu  max(0, (CRB_nu  - eps_nu)  / eps_nu)
/// The common-rate penalty is inactive at alpha == 0. Degenerate precoders and
/// singular FIMs evaluate to fitness -inf.
Evaluation evaluate(std::span<const double> genes, const FrameContext& ctx, const PenaltyWeights& w);

FitnessBreakdown fitness(std::span<const double> genes, const FrameContext& ctx, const PenaltyWeights& w);

/// Evaluation of an already-decoded precoder set (used to re-check results).
Evaluation evaluate_precoders(const PrecoderSet& p, const FrameContext& ctx, const PenaltyWeights& w);

struct GaResult {
    std::vector<double> best_genes;
    Evaluation best;
    std::vector<double> trace; // best-so-far fitness after each generation (index 0 = initial population)
    std::size_t evaluations = 0;

    bool found() const noexcept { return best.precoders.has_value(); }
};

/// Tournament selection, blend crossover, Gaussian per-gene mutation and
/// elitism. Deterministic for a given config.seed.
GaResult run_ga(const GaConfig& config, const FrameContext& ctx);

} // namespace ddisac
