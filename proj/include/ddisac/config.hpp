#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ddisac/channel.hpp"
#include "ddisac/comm_metrics.hpp"
#include "ddisac/dd_grid.hpp"
#include "ddisac/ga.hpp"
#include "ddisac/sensing.hpp"

namespace ddisac {

/// Flat `key = value` text configuration. `#` starts a comment; keys are
/// dotted (`grid.M`). Overrides (`key=value`) replace file values.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::istream& in);
    static KeyValueConfig load(const std::filesystem::path& path);

    /// Applies one `key=value` override; throws ConfigError if malformed.
    void apply_override(std::string_view assignment);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    /// Raw value (throws ConfigError if absent).
    const std::string& raw(const std::string& key) const;
    /// Source line of a key; 0 for overrides and absent keys.
    int line(const std::string& key) const;

    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
    std::vector<int> get_ints(const std::string& key, const std::vector<int>& fallback) const;

    /// Throws ConfigError (line-anchored) for the first key not in `known`.
    void reject_unknown(const std::set<std::string>& known) const;

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::map<std::string, Entry> entries_;
};

/// Fully resolved campaign settings. Defaults reproduce the baseline
/// scenario at the reduced scale (100 frames, GA 40 x 40).
struct CampaignConfig {
    DDGrid grid = DDGrid::table1();
    PathConfig paths = PathConfig::table1();
    std::size_t users = 2;
    ImpairmentConfig impairments;
    SensingTarget target;
    QosThresholds qos;
    double p_max = 1.0;
    std::vector<double> alphas{0.0, 0.1, 0.2, 0.3, 0.5, 0.8, 1.0};
    std::size_t n_mc = 100;
    GaConfig ga;
    std::uint64_t master_seed = 2025;
    std::filesystem::path output_dir = "out";
    std::size_t workers = 1;
    bool record_timing = false;

    /// Baseline defaults at reduced scale.
    static CampaignConfig table1();
    /// Baseline defaults at full scale (3000 frames, GA 125 generations x 100).
    static CampaignConfig table1_full();

    void validate() const;
};

/// Builds a campaign config from parsed key/values on top of table1().
/// `run.full_scale = true` starts from table1_full() instead.
CampaignConfig campaign_config_from(const KeyValueConfig& kv);

/// Reads `path`, applies `overrides` in order, resolves the config.
CampaignConfig load_campaign_config(const std::filesystem::path& path,
                                    const std::vector<std::string>& overrides = {});

} // namespace ddisac
