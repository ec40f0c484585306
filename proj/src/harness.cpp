#include "ddisac/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <thread>

#include "ddisac/errors.hpp"

namespace ddisac {

std::uint64_t frame_seed(const CampaignConfig& cfg, std::size_t alpha_index, std::size_t frame_index)
{
    return derive_seed(cfg.master_seed, alpha_index, frame_index);
}

FrameContext make_frame_context(const CampaignConfig& cfg, double alpha, Rng& rng)
{
    FrameContext ctx;
    ctx.grid = cfg.grid;
    ctx.impairments = cfg.impairments;
    ctx.echo = EchoModel(cfg.target, cfg.grid);
    ctx.qos = cfg.qos;
    ctx.alpha = alpha;
    ctx.p_max = cfg.p_max;
    ctx.h_hat.reserve(cfg.users);
    for (std::size_t k = 0; k < cfg.users; ++k) {
        const PathSet paths = gen_paths(cfg.grid, cfg.paths, rng);
        ctx.h_hat.push_back(apply_icsi(paths, cfg.grid, cfg.impairments.sigma_e2, rng).estimate.matrix);
    }
    ctx.symbols = StreamSymbols::draw(cfg.users, rng);
    return ctx;
}

FrameReport run_frame_detailed(const CampaignConfig& cfg, std::size_t alpha_index, std::size_t frame_index)
{
    if (alpha_index >= cfg.alphas.size()) {
        throw InvalidInput("alpha index out of range");
    }
    const auto start = std::chrono::steady_clock::now();

    FrameReport report;
    report.seed = frame_seed(cfg, alpha_index, frame_index);
    Rng rng(report.seed);
    const double alpha = cfg.alphas[alpha_index];
    report.context = make_frame_context(cfg, alpha, rng);

    GaConfig ga = cfg.ga;
    ga.seed = rng.next_u64();
    report.ga = run_ga(ga, report.context);

    FrameResult& r = report.result;
    r.alpha_index = alpha_index;
    r.alpha = alpha;
    r.frame_index = frame_index;
    if (!report.ga.found()) {
        r.failed = true;
        r.r_min = r.crb_tau = r.crb_nu = r.fitness = std::nan("");
    } else {
        const Evaluation& best = report.ga.best;
        r.r_min = best.comm.r_min;
        r.rate_c = best.comm.rate_c;
        r.rate_p = best.comm.rate_p;
        r.crb_tau = best.sensing.crb_tau;
        r.crb_nu = best.sensing.crb_nu;
        r.rc_met = best.comm.rc_met;
        r.crb_tau_met = r.crb_tau <= cfg.qos.eps_tau;
        r.crb_nu_met = r.crb_nu <= cfg.qos.eps_nu;
        r.fitness = best.breakdown.fitness;
        r.feasible = best.breakdown.feasible;
    }
    if (cfg.record_timing) {
        r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    return report;
}

FrameResult run_frame(const CampaignConfig& cfg, std::size_t alpha_index, std::size_t frame_index)
{
    return run_frame_detailed(cfg, alpha_index, frame_index).result;
}

Cdf::Cdf(std::vector<double> samples) : sorted_(std::move(samples))
{
    if (sorted_.empty()) {
        throw InvalidInput("CDF of an empty sample");
    }
    std::sort(sorted_.begin(), sorted_.end());
}

double Cdf::quantile(double q) const
{
    if (!(q >= 0.0 && q <= 1.0)) {
        throw InvalidInput("quantile level must lie in [0, 1]");
    }
    const double n = static_cast<double>(sorted_.size());
    const auto rank = static_cast<std::size_t>(std::ceil(q * n));
    return sorted_[rank == 0 ? 0 : std::min(rank, sorted_.size()) - 1];
}

double Cdf::at(double x) const
{
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

Cdf compute_cdf(std::vector<double> samples)
{
    return Cdf(std::move(samples));
}

namespace {

double mean(const std::vector<double>& v)
{
    if (v.empty()) {
        return std::nan("");
    }
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

double pct(std::size_t count, std::size_t total)
{
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(total);
}

AlphaSummary aggregate(double alpha, const std::vector<const FrameResult*>& frames, std::size_t failed)
{
    AlphaSummary row;
    row.alpha = alpha;
    row.n_failed = failed;
    std::size_t rc = 0;
    std::size_t feasible = 0;
    for (const FrameResult* f : frames) {
        row.r_min_samples.push_back(f->r_min);
        row.crb_tau_samples.push_back(f->crb_tau);
        row.crb_nu_samples.push_back(f->crb_nu);
        rc += f->rc_met ? 1 : 0;
        feasible += f->feasible ? 1 : 0;
    }
    // Means are taken in frame order, before the samples are sorted.
    row.avg_r_min = mean(row.r_min_samples);
    row.avg_crb_tau = mean(row.crb_tau_samples);
    row.avg_crb_nu = mean(row.crb_nu_samples);
    row.n_frames = frames.size();
    row.rc_met_pct = pct(rc, frames.size());
    row.feasible_pct = pct(feasible, frames.size());
    std::sort(row.r_min_samples.begin(), row.r_min_samples.end());
    std::sort(row.crb_tau_samples.begin(), row.crb_tau_samples.end());
    std::sort(row.crb_nu_samples.begin(), row.crb_nu_samples.end());
    return row;
}

} // namespace

CampaignSummary summarize(const CampaignConfig& cfg, std::vector<FrameResult> frames)
{
    std::sort(frames.begin(), frames.end(), [](const FrameResult& a, const FrameResult& b) {
        return a.alpha_index != b.alpha_index ? a.alpha_index < b.alpha_index : a.frame_index < b.frame_index;
    });
    CampaignSummary s;
    s.users = cfg.users;
    for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
        std::vector<const FrameResult*> ok;
        std::vector<const FrameResult*> feasible;
        std::size_t failed = 0;
        for (const auto& f : frames) {
            if (f.alpha_index != a) {
                continue;
            }
            if (f.failed) {
                ++failed;
                continue;
            }
            ok.push_back(&f);
            if (f.feasible) {
                feasible.push_back(&f);
            }
        }
        s.rows.push_back(aggregate(cfg.alphas[a], ok, failed));
        s.feasible_rows.push_back(aggregate(cfg.alphas[a], feasible, failed));
    }
    s.frames = std::move(frames);
    return s;
}

CampaignSummary run_campaign(const CampaignConfig& cfg)
{
    cfg.validate();
    const std::size_t n_alpha = cfg.alphas.size();
    const std::size_t total = n_alpha * cfg.n_mc;
    std::vector<FrameResult> results(total);

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t t = next++; t < total; t = next++) {
            try {
                results[t] = run_frame(cfg, t / cfg.n_mc, t % cfg.n_mc);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next = total;
            }
        }
    };

    const std::size_t n_workers = std::min(cfg.workers, total);
    if (n_workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) {
            pool.emplace_back(work);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return summarize(cfg, std::move(results));
}

namespace {

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string alpha_str(double a)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", a);
    return buf;
}

const char* flag(bool b)
{
    return b ? "1" : "0";
}

std::ofstream open_out(const std::filesystem::path& p)
{
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + p.string());
    }
    return out;
}

} // namespace

void write_frames_csv(std::ostream& out, std::span<const FrameResult> frames, std::size_t users)
{
    out << "alpha,frame";
    out << ",r_min";
    for (std::size_t k = 1; k <= users; ++k) {
        out << ",rate_c_" << k;
    }
    for (std::size_t k = 1; k <= users; ++k) {
        out << ",rate_p_" << k;
    }
    out << ",crb_tau,crb_nu,rc_met,crb_tau_met,crb_nu_met,fitness,feasible,wall_ms\n";
    for (const auto& f : frames) {
        out << alpha_str(f.alpha) << ',' << f.frame_index << ',' << num(f.r_min);
        for (std::size_t k = 0; k < users; ++k) {
            out << ',' << (k < f.rate_c.size() ? num(f.rate_c[k]) : "nan");
        }
        for (std::size_t k = 0; k < users; ++k) {
            out << ',' << (k < f.rate_p.size() ? num(f.rate_p[k]) : "nan");
        }
        out << ',' << num(f.crb_tau) << ',' << num(f.crb_nu) << ',' << flag(f.rc_met) << ','
            << flag(f.crb_tau_met) << ',' << flag(f.crb_nu_met) << ',' << num(f.fitness) << ','
            << flag(f.feasible) << ',' << num(f.wall_ms) << '\n';
    }
}

void write_summary_csv(std::ostream& out, std::span<const AlphaSummary> rows)
{
    out << "alpha,avg_r_min,avg_crb_tau,avg_crb_nu,rc_met_pct,feasible_pct,n_frames\n";
    for (const auto& r : rows) {
        out << alpha_str(r.alpha) << ',' << num(r.avg_r_min) << ',' << num(r.avg_crb_tau) << ','
            << num(r.avg_crb_nu) << ',' << num(r.rc_met_pct) << ',' << num(r.feasible_pct) << ',' << r.n_frames
            << '\n';
    }
}

void write_cdf_csv(std::ostream& out, std::span<const AlphaSummary> rows, CdfMetric metric)
{
    out << "alpha,value\n";
    for (const auto& r : rows) {
        const auto& samples = metric == CdfMetric::RMin     ? r.r_min_samples
                              : metric == CdfMetric::CrbTau ? r.crb_tau_samples
                                                            : r.crb_nu_samples;
        for (double v : samples) {
            out << alpha_str(r.alpha) << ',' << num(v) << '\n';
        }
    }
}

void write_campaign_outputs(const CampaignSummary& summary, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    {
        auto out = open_out(dir / "frames.csv");
        write_frames_csv(out, summary.frames, summary.users);
    }
    {
        auto out = open_out(dir / "summary.csv");
        write_summary_csv(out, summary.rows);
    }
    {
        auto out = open_out(dir / "summary_feasible.csv");
        write_summary_csv(out, summary.feasible_rows);
    }
    const std::pair<const char*, CdfMetric> cdfs[] = {
        {"cdf_r_min.csv", CdfMetric::RMin},
        {"cdf_crb_tau.csv", CdfMetric::CrbTau},
        {"cdf_crb_nu.csv", CdfMetric::CrbNu},
    };
    for (const auto& [name, metric] : cdfs) {
        auto out = open_out(dir / name);
        write_cdf_csv(out, summary.rows, metric);
    }
}

void print_summary_table(std::ostream& out, const CampaignSummary& summary)
{
    const auto flags = out.flags();
    out << "alpha  avg_R_min  avg_CRB_tau(1e-14 s^2)  avg_CRB_nu(1e4 Hz^2)  Rc_met(%)  feasible(%)  frames  failed\n";
    for (const auto& r : summary.rows) {
        out << std::fixed << std::setprecision(1) << std::setw(5) << r.alpha << "  " << std::setprecision(3)
            << std::setw(9) << r.avg_r_min << "  " << std::setprecision(1) << std::setw(22)
            << r.avg_crb_tau * 1e14 << "  " << std::setprecision(3) << std::setw(20) << r.avg_crb_nu * 1e-4
            << "  " << std::setprecision(0) << std::setw(9) << r.rc_met_pct << "  " << std::setw(11)
            << r.feasible_pct << "  " << std::setw(6) << r.n_frames << "  " << std::setw(6) << r.n_failed
            << '\n';
    }
    out.flags(flags);
}

} // namespace ddisac
