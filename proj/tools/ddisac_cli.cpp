// ddisac: campaigns, single-frame inspection and oracle validation.
//
// Exit codes: 0 success, 1 runtime or validation failure, 2 usage/config error.

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ddisac/config.hpp"
#include "ddisac/errors.hpp"
#include "ddisac/harness.hpp"
#include "ddisac/validation.hpp"

namespace {

using namespace ddisac;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct Invocation {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_dir;
    std::optional<std::size_t> workers;
    std::optional<std::uint64_t> seed;
    bool full_scale = false;
    double alpha = 0.0;
    std::size_t frame = 0;
    std::vector<std::string> checks;
    std::size_t trials = 100;
};

CampaignConfig resolve(const Invocation& inv)
{
    std::vector<std::string> overrides;
    if (inv.full_scale) {
        overrides.emplace_back("sweep.n_mc=3000");
        overrides.emplace_back("ga.population=100");
        overrides.emplace_back("ga.generations=125");
    }
    overrides.insert(overrides.end(), inv.overrides.begin(), inv.overrides.end());
    CampaignConfig cfg = load_campaign_config(inv.config_path, overrides);
    if (inv.workers) {
        if (*inv.workers < 1) {
            throw ConfigError("--workers must be >= 1");
        }
        cfg.workers = *inv.workers;
    }
    if (inv.seed) {
        cfg.master_seed = *inv.seed;
    }
    if (!inv.output_dir.empty()) {
        cfg.output_dir = inv.output_dir;
    }
    return cfg;
}

int cmd_campaign(const Invocation& inv)
{
    const CampaignConfig cfg = resolve(inv);
    std::cerr << "campaign: " << cfg.alphas.size() << " alpha values x " << cfg.n_mc << " frames, GA "
              << cfg.ga.generations << " gen x " << cfg.ga.population << " pop, " << cfg.workers << " worker(s)\n";
    const CampaignSummary summary = run_campaign(cfg);
    write_campaign_outputs(summary, cfg.output_dir);
    print_summary_table(std::cout, summary);
    std::cerr << "wrote CSVs to " << cfg.output_dir.string() << '\n';
    return kOk;
}

void print_vector(std::ostream& out, const char* label, const std::vector<double>& v)
{
    out << label;
    for (std::size_t k = 0; k < v.size(); ++k) {
        out << (k == 0 ? " " : ", ") << v[k];
    }
    out << '\n';
}

int cmd_frame(const Invocation& inv)
{
    const CampaignConfig cfg = resolve(inv);
    std::size_t alpha_index = cfg.alphas.size();
    for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
        if (std::abs(cfg.alphas[a] - inv.alpha) < 1e-12) {
            alpha_index = a;
            break;
        }
    }
    if (alpha_index == cfg.alphas.size()) {
        throw ConfigError("--alpha " + std::to_string(inv.alpha) + " is not in sweep.alphas");
    }

    const FrameReport rep = run_frame_detailed(cfg, alpha_index, inv.frame);
    auto& out = std::cout;
    out << std::setprecision(6);
    out << "frame " << inv.frame << "  alpha " << cfg.alphas[alpha_index] << "  seed " << rep.seed << '\n';
    out << "GA trace (best-so-far fitness per generation):\n";
    for (std::size_t g = 0; g < rep.ga.trace.size(); ++g) {
        out << "  gen " << std::setw(4) << g << "  " << rep.ga.trace[g] << '\n';
    }
    out << "evaluations " << rep.ga.evaluations << '\n';
    if (!rep.ga.found()) {
        out << "GA produced no valid precoder; frame failed\n";
        return kFailure;
    }
    const Evaluation& best = rep.ga.best;
    const FitnessBreakdown& b = best.breakdown;
    out << "fitness " << b.fitness << "  r_min " << b.r_min << "  penalty_c " << b.penalty_c << "  penalty_tau "
        << b.penalty_tau << "  penalty_nu " << b.penalty_nu << "  feasible " << (b.feasible ? "true" : "false")
        << '\n';
    print_vector(out, "sinr_c", best.comm.sinr_c);
    print_vector(out, "sinr_p", best.comm.sinr_p);
    print_vector(out, "rate_c", best.comm.rate_c);
    print_vector(out, "rate_p", best.comm.rate_p);
    out << "r_min " << rep.result.r_min << '\n';
    out << "rc_met " << (rep.result.rc_met ? "true" : "false") << '\n';
    out << "I_tautau " << best.sensing.i_tautau << "  I_nunu " << best.sensing.i_nunu << "  I_taunu "
        << best.sensing.i_taunu << "  det " << best.sensing.det << '\n';
    out << "crb_tau " << best.sensing.crb_tau << " s^2  (met " << (rep.result.crb_tau_met ? "true" : "false")
        << ")\n";
    out << "crb_nu " << best.sensing.crb_nu << " Hz^2  (met " << (rep.result.crb_nu_met ? "true" : "false")
        << ")\n";
    return kOk;
}

int cmd_validate(const Invocation& inv)
{
    ValidationOptions opt;
    opt.checks = inv.checks;
    opt.trials = inv.trials;
    if (inv.seed) {
        opt.seed = *inv.seed;
    }
    std::vector<CheckResult> results;
    try {
        results = run_validation(opt);
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
    bool ok = true;
    double worst_failed = 0.0;
    for (const auto& r : results) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(12) << r.name << std::right
                  << " worst rel. err " << std::scientific << std::setprecision(3) << r.worst << " (tol "
                  << r.tolerance << ", " << r.trials << " trials) " << r.detail << '\n';
        if (!r.passed) {
            ok = false;
            worst_failed = std::max(worst_failed, r.worst);
        }
    }
    if (!ok) {
        std::cout << "validation failed; worst relative error " << std::scientific << worst_failed << '\n';
        return kFailure;
    }
    std::cout << "all " << results.size() << " checks passed\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"OTFS-RSMA LEO ISAC resource allocation simulator"};
    app.require_subcommand(1);

    Invocation inv;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", inv.config_path, "campaign config file")->required();
        cmd->add_option("--override", inv.overrides, "key=value override (repeatable)");
        cmd->add_option("--workers", inv.workers, "worker threads");
        cmd->add_option("--seed", inv.seed, "master seed");
        cmd->add_option("--out", inv.output_dir, "output directory");
        cmd->add_flag("--full-scale", inv.full_scale, "3000 frames, GA 125 generations x 100");
    };

    auto* campaign = app.add_subcommand("campaign", "run the alpha sweep and write CSVs");
    add_common(campaign);

    auto* frame = app.add_subcommand("frame", "run one frame verbosely");
    add_common(frame);
    frame->add_option("--alpha", inv.alpha, "common-stream power fraction (must be in sweep.alphas)")->required();
    frame->add_option("--frame", inv.frame, "frame index")->capture_default_str();

    auto* validate = app.add_subcommand("validate", "run the oracle suite");
    validate->add_option("--checks", inv.checks, "comma-separated subset of checks")->delimiter(',');
    validate->add_option("--trials", inv.trials, "random instances per check");
    validate->add_option("--seed", inv.seed, "validation seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*campaign) {
            return cmd_campaign(inv);
        }
        if (*frame) {
            return cmd_frame(inv);
        }
        return cmd_validate(inv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
}
