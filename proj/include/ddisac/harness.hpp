#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "ddisac/config.hpp"
#include "ddisac/ga.hpp"

namespace ddisac {

struct FrameResult {
    std::size_t alpha_index = 0;
    double alpha = 0.0;
    std::size_t frame_index = 0;
    double r_min = 0.0;
    std::vector<double> rate_c;
    std::vector<double> rate_p;
    double crb_tau = 0.0;
    double crb_nu = 0.0;
    bool rc_met = false;
    bool crb_tau_met = false;
    bool crb_nu_met = false;
    double fitness = 0.0;
    bool feasible = false;
    bool failed = false; // GA never produced a non-degenerate individual
    double wall_ms = 0.0;
};

/// Everything produced while running one frame; used by the `frame` command.
struct FrameReport {
    FrameResult result;
    FrameContext context;
    GaResult ga;
    std::uint64_t seed = 0;
};

/// Per-frame seed: derive_seed(master_seed, alpha_index, frame_index).
std::uint64_t frame_seed(const CampaignConfig& cfg, std::size_t alpha_index, std::size_t frame_index);

/// Draws the frame's channels, channel estimates and stream symbols.
FrameContext make_frame_context(const CampaignConfig& cfg, double alpha, Rng& rng);

FrameReport run_frame_detailed(const CampaignConfig& cfg, std::size_t alpha_index, std::size_t frame_index);
FrameResult run_frame(const CampaignConfig& cfg, std::size_t alpha_index, std::size_t frame_index);

/// Empirical CDF of a nonempty sample.
class Cdf {
public:
    /// Throws InvalidInput when samples is empty.
    explicit Cdf(std::vector<double> samples);

    const std::vector<double>& sorted() const noexcept { return sorted_; }
    std::size_t size() const noexcept { return sorted_.size(); }
    /// Nearest-rank order statistic: sorted[ceil(q n) - 1], clamped to the sample.
    double quantile(double q) const;
    /// Fraction of samples <= x.
    double at(double x) const;
    double median() const { return quantile(0.5); }
    double iqr() const { return quantile(0.75) - quantile(0.25); }

private:
    std::vector<double> sorted_;
};

Cdf compute_cdf(std::vector<double> samples);

struct AlphaSummary {
    double alpha = 0.0;
    double avg_r_min = 0.0;
    double avg_crb_tau = 0.0;
    double avg_crb_nu = 0.0;
    double rc_met_pct = 0.0;
    double feasible_pct = 0.0;
    std::size_t n_frames = 0;  // frames entering the averages
    std::size_t n_failed = 0;  // frames excluded because the GA failed
    std::vector<double> r_min_samples;   // sorted ascending
    std::vector<double> crb_tau_samples; // sorted ascending
    std::vector<double> crb_nu_samples;  // sorted ascending
};

struct CampaignSummary {
    std::size_t users = 0;
    std::vector<AlphaSummary> rows;          // all successful frames
    std::vector<AlphaSummary> feasible_rows; // feasible frames only
    std::vector<FrameResult> frames;         // ordered by (alpha_index, frame_index)
};

/// Aggregates frames (any order) into per-alpha rows, in alpha-list order.
CampaignSummary summarize(const CampaignConfig& cfg, std::vector<FrameResult> frames);

/// Runs every (alpha, frame) pair on cfg.workers threads. Results do not
/// depend on the worker count.
CampaignSummary run_campaign(const CampaignConfig& cfg);

void write_frames_csv(std::ostream& out, std::span<const FrameResult> frames, std::size_t users);
void write_summary_csv(std::ostream& out, std::span<const AlphaSummary> rows);
enum class CdfMetric { RMin, CrbTau, CrbNu };
void write_cdf_csv(std::ostream& out, std::span<const AlphaSummary> rows, CdfMetric metric);

/// Writes frames.csv, summary.csv, summary_feasible.csv, cdf_r_min.csv,
/// cdf_crb_tau.csv and cdf_crb_nu.csv into dir (created if needed).
void write_campaign_outputs(const CampaignSummary& summary, const std::filesystem::path& dir);

/// Human-readable per-alpha summary table.
void print_summary_table(std::ostream& out, const CampaignSummary& summary);

} // namespace ddisac
