#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "ddisac/config.hpp"
#include "ddisac/errors.hpp"
#include "ddisac/harness.hpp"

using namespace ddisac;

namespace {

CampaignConfig tiny_config()
{
    CampaignConfig c = CampaignConfig::table1();
    c.n_mc = 3;
    c.ga.population = 8;
    c.ga.generations = 4;
    return c;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(cells);
    }
    return rows;
}

FrameResult synthetic(std::size_t alpha_index, std::size_t frame, double r_min, bool failed = false)
{
    FrameResult f;
    f.alpha_index = alpha_index;
    f.frame_index = frame;
    f.r_min = r_min;
    f.crb_tau = 1e-12 * (frame + 1);
    f.crb_nu = 100.0 * (frame + 1);
    f.rc_met = frame % 2 == 0;
    f.feasible = frame % 3 == 0;
    f.failed = failed;
    return f;
}

} // namespace

TEST_CASE("nearest-rank quantiles")
{
    const Cdf c = compute_cdf({3.0, 1.0, 2.0});
    CHECK(c.quantile(0.5) == 2.0);
    CHECK(c.median() == 2.0);
    CHECK(c.quantile(0.0) == 1.0);
    CHECK(c.quantile(1.0) == 3.0);
    CHECK(c.at(2.0) == doctest::Approx(2.0 / 3.0));
    CHECK(c.at(0.5) == 0.0);
    CHECK(c.sorted() == std::vector<double>{1.0, 2.0, 3.0});

    const Cdf flat = compute_cdf(std::vector<double>(10, 4.2));
    CHECK(flat.iqr() == 0.0);
    CHECK(flat.median() == 4.2);
    CHECK(flat.at(4.2) == 1.0);

    CHECK_THROWS_AS(compute_cdf({}), InvalidInput);
}

TEST_CASE("summaries aggregate frames per alpha")
{
    CampaignConfig cfg = tiny_config();
    cfg.alphas = {0.0, 0.5};
    std::vector<FrameResult> frames{synthetic(1, 1, 3.0), synthetic(0, 0, 1.0), synthetic(1, 0, 5.0),
                                    synthetic(0, 1, 2.0), synthetic(1, 2, 0.0, true)};
    const CampaignSummary s = summarize(cfg, frames);
    REQUIRE(s.rows.size() == 2);
    CHECK(s.rows[0].avg_r_min == 1.5);
    CHECK(s.rows[1].avg_r_min == 4.0);
    CHECK(s.rows[1].n_frames == 2);
    CHECK(s.rows[1].n_failed == 1);
    CHECK(s.rows[0].rc_met_pct == 50.0);
    CHECK(s.rows[1].r_min_samples == std::vector<double>{3.0, 5.0});
    CHECK(s.feasible_rows[1].n_frames == 1);
    CHECK(s.feasible_rows[1].avg_r_min == 5.0);
    CHECK(s.frames.front().alpha_index == 0);
    CHECK(s.frames.back().alpha_index == 1);
    CHECK(s.frames[2].frame_index == 0);
}

TEST_CASE("frames are reproducible and respect the alpha endpoints")
{
    const CampaignConfig cfg = tiny_config();
    CHECK(frame_seed(cfg, 2, 5) == frame_seed(cfg, 2, 5));
    CHECK(frame_seed(cfg, 2, 5) != frame_seed(cfg, 5, 2));

    const FrameResult a = run_frame(cfg, 3, 1);
    const FrameResult b = run_frame(cfg, 3, 1);
    CHECK(a.r_min == b.r_min);
    CHECK(a.crb_tau == b.crb_tau);
    CHECK(a.rate_c == b.rate_c);
    CHECK(a.wall_ms == 0.0);

    const FrameResult all_common = run_frame(cfg, 6, 0);
    REQUIRE(cfg.alphas[6] == 1.0);
    CHECK(all_common.r_min == 0.0);

    const FrameResult no_common = run_frame(cfg, 0, 0);
    REQUIRE(cfg.alphas[0] == 0.0);
    CHECK_FALSE(no_common.rc_met);

    CHECK_THROWS_AS(run_frame(cfg, 7, 0), InvalidInput);
}

TEST_CASE("frame report carries the GA trace and context")
{
    const CampaignConfig cfg = tiny_config();
    const FrameReport r = run_frame_detailed(cfg, 4, 2);
    CHECK(r.seed == frame_seed(cfg, 4, 2));
    CHECK(r.context.alpha == cfg.alphas[4]);
    CHECK(r.context.users() == 2);
    CHECK(r.ga.trace.size() == cfg.ga.generations + 1);
    CHECK(r.result.fitness == r.ga.trace.back());
}

TEST_CASE("campaign output does not depend on the worker count")
{
    const auto base = std::filesystem::temp_directory_path() / "ddisac_test_harness";
    std::filesystem::remove_all(base);
    CampaignConfig one = tiny_config();
    one.workers = 1;
    CampaignConfig many = one;
    many.workers = 5;
    write_campaign_outputs(run_campaign(one), base / "w1");
    write_campaign_outputs(run_campaign(many), base / "w5");
    for (const char* name : {"frames.csv", "summary.csv", "summary_feasible.csv", "cdf_r_min.csv",
                             "cdf_crb_tau.csv", "cdf_crb_nu.csv"}) {
        const std::string a = slurp(base / "w1" / name);
        CHECK(!a.empty());
        CHECK(a == slurp(base / "w5" / name));
    }
    std::filesystem::remove_all(base);
}

TEST_CASE("summary averages can be recomputed from the per-frame CSV")
{
    const CampaignConfig cfg = tiny_config();
    const CampaignSummary s = run_campaign(cfg);
    std::ostringstream frames_csv;
    write_frames_csv(frames_csv, s.frames, s.users);
    const auto rows = read_csv(frames_csv.str());
    REQUIRE(rows.size() == 1 + cfg.alphas.size() * cfg.n_mc);
    CHECK(rows[0] == std::vector<std::string>{"alpha", "frame", "r_min", "rate_c_1", "rate_c_2", "rate_p_1",
                                              "rate_p_2", "crb_tau", "crb_nu", "rc_met", "crb_tau_met",
                                              "crb_nu_met", "fitness", "feasible", "wall_ms"});

    std::map<std::string, std::vector<double>> r_min;
    std::map<std::string, std::vector<double>> crb_tau;
    std::map<std::string, int> rc;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        r_min[rows[i][0]].push_back(std::stod(rows[i][2]));
        crb_tau[rows[i][0]].push_back(std::stod(rows[i][7]));
        rc[rows[i][0]] += rows[i][9] == "1" ? 1 : 0;
    }
    std::ostringstream summary_csv;
    write_summary_csv(summary_csv, s.rows);
    const auto summary = read_csv(summary_csv.str());
    REQUIRE(summary.size() == 1 + cfg.alphas.size());
    for (std::size_t i = 1; i < summary.size(); ++i) {
        const std::string& key = summary[i][0];
        double sum = 0.0;
        for (double v : r_min[key]) {
            sum += v;
        }
        double sum_tau = 0.0;
        for (double v : crb_tau[key]) {
            sum_tau += v;
        }
        const double n = static_cast<double>(r_min[key].size());
        CHECK(std::abs(std::stod(summary[i][1]) - sum / n) <= 1e-12 * std::max(1.0, sum / n));
        CHECK(std::abs(std::stod(summary[i][2]) - sum_tau / n) <= 1e-12 * (sum_tau / n));
        CHECK(std::stod(summary[i][4]) == doctest::Approx(100.0 * rc[key] / n).epsilon(1e-12));
    }
}

TEST_CASE("summary table lists one row per alpha")
{
    const CampaignConfig cfg = tiny_config();
    std::vector<FrameResult> frames;
    for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
        frames.push_back(synthetic(a, 0, 1.0));
    }
    std::ostringstream out;
    print_summary_table(out, summarize(cfg, frames));
    const std::string text = out.str();
    for (const char* label : {"0.1", "0.2", "0.3", "0.5", "0.8"}) {
        CHECK(text.find(label) != std::string::npos);
    }
}
