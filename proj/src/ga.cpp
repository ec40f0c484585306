#include "ddisac/ga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ddisac/errors.hpp"
#include "ddisac/rng.hpp"

namespace ddisac {

void GaConfig::validate() const
{
    if (population < 2) {
        throw InvalidInput("GA population must be >= 2");
    }
    if (generations < 1) {
        throw InvalidInput("GA needs at least one generation");
    }
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0) || !(mutation_rate <= 1.0)) {
        throw InvalidInput("GA rates must lie in [0, 1]");
    }
    if (!(mutation_sigma >= 0.0) || !(blend_alpha >= 0.0)) {
        throw InvalidInput("GA mutation sigma and blend alpha must be >= 0");
    }
    if (tournament_size < 1) {
        throw InvalidInput("GA tournament size must be >= 1");
    }
    if (elitism >= population) {
        throw InvalidInput("GA elitism must be smaller than the population");
    }
    if (penalty.rate_c < 0.0 || penalty.crb_tau < 0.0 || penalty.crb_nu < 0.0) {
        throw InvalidInput("penalty weights must be >= 0");
    }
}

Evaluation evaluate_precoders(const PrecoderSet& p, const FrameContext& ctx, const PenaltyWeights& w)
{
    Evaluation ev;
    ImpairmentConfig imp = ctx.impairments;
    imp.p_tot = p.total_power();
    ev.comm = evaluate_comm(ctx.h_hat, p, imp, ctx.qos.rate_c_req);
    try {
        ev.sensing = sensing_for_precoders(p, ctx.symbols, ctx.echo);
    } catch (const SingularFim&) {
        return ev;
    }
    ev.precoders = p;

    auto& b = ev.breakdown;
    b.r_min = ev.comm.r_min;
    if (ctx.alpha > 0.0) {
        b.penalty_c = w.rate_c * std::max(0.0, ctx.qos.rate_c_req - ev.comm.min_rate_c());
    }
    b.penalty_tau = w.crb_tau * std::max(0.0, (ev.sensing.crb_tau - ctx.qos.eps_tau) / ctx.qos.eps_tau);
    b.penalty_nu = w.crb_nu * std::max(0.0, (ev.sensing.crb_nu - ctx.qos.eps_nu) / ctx.qos.eps_nu);
    b.fitness = b.r_min - b.penalty_c - b.penalty_tau - b.penalty_nu;
    b.feasible = b.penalty_c == 0.0 && b.penalty_tau == 0.0 && b.penalty_nu == 0.0;
    return ev;
}

Evaluation evaluate(std::span<const double> genes, const FrameContext& ctx, const PenaltyWeights& w)
{
    PrecoderSet p;
    try {
        p = decode_chromosome(genes, ctx.grid.n_dd(), ctx.users(), ctx.alpha, ctx.p_max);
    } catch (const DegeneratePrecoder&) {
        return {};
    }
    return evaluate_precoders(p, ctx, w);
}

FitnessBreakdown fitness(std::span<const double> genes, const FrameContext& ctx, const PenaltyWeights& w)
{
    return evaluate(genes, ctx, w).breakdown;
}

namespace {

using Genome = std::vector<double>;

struct Individual {
    Genome genes;
    double fitness;
};

std::size_t tournament(const std::vector<Individual>& pop, std::size_t size, Rng& rng)
{
    std::size_t best = rng.below(pop.size());
    for (std::size_t t = 1; t < size; ++t) {
        const std::size_t c = rng.below(pop.size());
        if (pop[c].fitness > pop[best].fitness) {
            best = c;
        }
    }
    return best;
}

void crossover(Genome& a, Genome& b, double blend_alpha, Rng& rng)
{
    if (blend_alpha == 0.0) {
        const double lambda = rng.uniform();
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double ai = a[i];
            a[i] = lambda * ai + (1.0 - lambda) * b[i];
            b[i] = (1.0 - lambda) * ai + lambda * b[i];
        }
        return;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double lo = std::min(a[i], b[i]);
        const double span = std::abs(a[i] - b[i]);
        const double base = lo - blend_alpha * span;
        const double width = (1.0 + 2.0 * blend_alpha) * span;
        a[i] = base + width * rng.uniform();
        b[i] = base + width * rng.uniform();
    }
}

void mutate(Genome& g, double rate, double sigma, Rng& rng)
{
    for (auto& x : g) {
        if (rng.uniform() < rate) {
            x += sigma * rng.normal();
        }
    }
}

// Stable order: fitness descending, ties keep their previous position.
void rank(std::vector<Individual>& pop)
{
    std::stable_sort(pop.begin(), pop.end(),
                     [](const Individual& a, const Individual& b) { return a.fitness > b.fitness; });
}

} // namespace

GaResult run_ga(const GaConfig& config, const FrameContext& ctx)
{
    config.validate();
    const std::size_t L = ctx.genes();
    const double mutation_rate = config.mutation_rate > 0.0 ? config.mutation_rate : 1.0 / static_cast<double>(L);
    Rng rng(config.seed);

    GaResult result;
    auto score = [&](const Genome& g) {
        ++result.evaluations;
        return fitness(g, ctx, config.penalty).fitness;
    };

    std::vector<Individual> pop(config.population);
    for (auto& ind : pop) {
        ind.genes.resize(L);
        for (auto& x : ind.genes) {
            x = rng.normal();
        }
        ind.fitness = score(ind.genes);
    }
    rank(pop);
    Individual best = pop.front();
    result.trace.push_back(best.fitness);

    std::vector<Individual> next;
    next.reserve(config.population);
    for (std::size_t gen = 0; gen < config.generations; ++gen) {
        next.clear();
        for (std::size_t e = 0; e < config.elitism; ++e) {
            next.push_back(pop[e]);
        }
        while (next.size() < config.population) {
            Genome a = pop[tournament(pop, config.tournament_size, rng)].genes;
            Genome b = pop[tournament(pop, config.tournament_size, rng)].genes;
            if (rng.uniform() < config.crossover_rate) {
                crossover(a, b, config.blend_alpha, rng);
            }
            mutate(a, mutation_rate, config.mutation_sigma, rng);
            mutate(b, mutation_rate, config.mutation_sigma, rng);
            const double fa = score(a);
            next.push_back({std::move(a), fa});
            if (next.size() < config.population) {
                const double fb = score(b);
                next.push_back({std::move(b), fb});
            }
        }
        pop.swap(next);
        rank(pop);
        if (pop.front().fitness > best.fitness) {
            best = pop.front();
        }
        result.trace.push_back(best.fitness);
    }

    result.best_genes = std::move(best.genes);
    result.best = evaluate(result.best_genes, ctx, config.penalty);
    return result;
}

} // namespace ddisac
