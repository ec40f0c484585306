#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ddisac/config.hpp"
#include "ddisac/errors.hpp"

using namespace ddisac;

namespace {

KeyValueConfig parse(const std::string& text)
{
    std::istringstream in(text);
    return KeyValueConfig::parse(in);
}

int error_line(const std::string& text)
{
    try {
        campaign_config_from(parse(text));
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

} // namespace

TEST_CASE("key/value parsing")
{
    const KeyValueConfig kv = parse("# header\n\ngrid.M = 4   # trailing\n  sweep.alphas=0, 0.5 ,1\n");
    CHECK(kv.get_int("grid.M", 0) == 4);
    CHECK(kv.line("grid.M") == 3);
    CHECK(kv.get_doubles("sweep.alphas", {}) == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(kv.get_double("absent.key", 2.5) == 2.5);
    CHECK_FALSE(kv.has("absent.key"));
}

TEST_CASE("syntax errors carry their line number")
{
    CHECK(error_line("grid.M = 4\nthis line is wrong\n") == 2);
    CHECK(error_line("grid.M = 4\n\n\ngrid.M = 8\n") == 4);
    CHECK(error_line("grid.M =\n") == 1);
    CHECK(error_line("grid.M = 4\nusers.K = two\n") == 2);
    CHECK(error_line("grid.M = 4\nqos.eps_tau = 1e-11\nbogus.key = 3\n") == 3);
    CHECK(error_line("impairments.theta = 0.03, 2\n") == 1);
    CHECK(error_line("\nimpairments.theta = 0.1, 0.2, 0.3\n") == 2);
    CHECK(error_line("power.p_max = 1\ntarget.tau = -1e-4\n") == 2);
    CHECK(error_line("\n\nsweep.alphas = 0, 1.5\n") == 3);
    CHECK(error_line("channel.delays = 0, 9\nchannel.dopplers = 0, 0\n") > 0);

    try {
        parse("ok.key = 1\nbroken\n");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("defaults reproduce the baseline scenario")
{
    const CampaignConfig c = CampaignConfig::table1();
    CHECK(c.grid == DDGrid::table1());
    CHECK(c.users == 2);
    CHECK(c.impairments.sigma_n2 == doctest::Approx(std::pow(10.0, -2.5)).epsilon(1e-12));
    CHECK(c.impairments.sigma_e2 == doctest::Approx(std::pow(10.0, -2.5)).epsilon(1e-12));
    CHECK(c.impairments.theta == std::vector<double>{0.03, 0.03});
    CHECK(c.target.tau == 1e-4);
    CHECK(c.target.nu == 4687.5);
    CHECK(c.target.gain() == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(c.target.sigma2 == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(c.qos.rate_c_req == 0.1);
    CHECK(c.qos.eps_tau == 2e-11);
    CHECK(c.qos.eps_nu == 5e3);
    CHECK(c.alphas == std::vector<double>{0.0, 0.1, 0.2, 0.3, 0.5, 0.8, 1.0});
    CHECK(c.ga.penalty.rate_c == 10.0);
    CHECK(c.ga.penalty.crb_tau == 10.0);
    CHECK(c.ga.penalty.crb_nu == 10.0);

    const CampaignConfig full = CampaignConfig::table1_full();
    CHECK(full.n_mc == 3000);
    CHECK(full.ga.population == 100);
    CHECK(full.ga.generations == 125);
}

TEST_CASE("shipped config file matches the built-in defaults")
{
    const CampaignConfig c = load_campaign_config(DDISAC_CONFIG_DIR "/table1.cfg");
    const CampaignConfig d = CampaignConfig::table1();
    CHECK(c.grid == d.grid);
    CHECK(c.paths.delays == d.paths.delays);
    CHECK(c.paths.dopplers == d.paths.dopplers);
    CHECK(c.impairments.sigma_n2 == doctest::Approx(d.impairments.sigma_n2).epsilon(1e-15));
    CHECK(c.impairments.sigma_e2 == doctest::Approx(d.impairments.sigma_e2).epsilon(1e-15));
    CHECK(c.target.sigma2 == doctest::Approx(d.target.sigma2).epsilon(1e-15));
    CHECK(c.target.gain_const == doctest::Approx(d.target.gain_const).epsilon(1e-15));
    CHECK(c.alphas == d.alphas);
    CHECK(c.n_mc == d.n_mc);
    CHECK(c.ga.population == d.ga.population);
    CHECK(c.ga.generations == d.ga.generations);
    CHECK(c.master_seed == 2025);
}

TEST_CASE("overrides replace file values")
{
    const CampaignConfig c = load_campaign_config(
        DDISAC_CONFIG_DIR "/table1.cfg",
        {"sweep.n_mc=7", "n_mc=9", "ga.population = 12", "impairments.theta=0.1,0.2", "run.seed=5"});
    CHECK(c.n_mc == 9);
    CHECK(c.ga.population == 12);
    CHECK(c.impairments.theta == std::vector<double>{0.1, 0.2});
    CHECK(c.master_seed == 5);

    CHECK_THROWS_AS(load_campaign_config(DDISAC_CONFIG_DIR "/table1.cfg", {"no_equals_sign"}), ConfigError);
    CHECK_THROWS_AS(load_campaign_config(DDISAC_CONFIG_DIR "/table1.cfg", {"unknown.key=1"}), ConfigError);
    CHECK_THROWS_AS(load_campaign_config(DDISAC_CONFIG_DIR "/does_not_exist.cfg"), ConfigError);
}

TEST_CASE("full-scale switch starts from the full defaults")
{
    const CampaignConfig c = campaign_config_from(parse("run.full_scale = true\n"));
    CHECK(c.n_mc == 3000);
    CHECK(c.ga.generations == 125);
    const CampaignConfig d = campaign_config_from(parse("run.full_scale = true\nsweep.n_mc = 10\n"));
    CHECK(d.n_mc == 10);
}

TEST_CASE("explicit noise values take precedence over dB forms")
{
    const CampaignConfig c =
        campaign_config_from(parse("impairments.sigma_n2 = 0.5\nimpairments.sigma_e2 = 0\ntarget.sigma2 = 2\n"));
    CHECK(c.impairments.sigma_n2 == 0.5);
    CHECK(c.impairments.sigma_e2 == 0.0);
    CHECK(c.target.sigma2 == 2.0);
}
