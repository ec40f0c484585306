#include "ddisac/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ddisac/errors.hpp"

namespace ddisac {

namespace {

std::string trim(std::string_view s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        --e;
    }
    return std::string(s.substr(b, e - b));
}

bool valid_key(const std::string& key)
{
    if (key.empty()) {
        return false;
    }
    return std::all_of(key.begin(), key.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_';
    });
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

// Short forms accepted for the most common overrides.
std::string canonical_key(const std::string& key)
{
    static const std::map<std::string, std::string> aliases{
        {"n_mc", "sweep.n_mc"},
        {"alphas", "sweep.alphas"},
        {"seed", "run.seed"},
        {"workers", "run.workers"},
    };
    const auto it = aliases.find(key);
    return it == aliases.end() ? key : it->second;
}

} // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in)
{
    KeyValueConfig kv;
    std::string text;
    int line_no = 0;
    while (std::getline(in, text)) {
        ++line_no;
        if (const auto hash = text.find('#'); hash != std::string::npos) {
            text.erase(hash);
        }
        const std::string line = trim(text);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected `key = value`, got `" + line + "`", line_no);
        }
        const std::string key = canonical_key(trim(std::string_view(line).substr(0, eq)));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (!valid_key(key)) {
            throw ConfigError("invalid key `" + key + "`", line_no);
        }
        if (value.empty()) {
            throw ConfigError("empty value for `" + key + "`", line_no);
        }
        if (kv.entries_.count(key) != 0) {
            throw ConfigError("duplicate key `" + key + "` (first on line " +
                              std::to_string(kv.entries_[key].line) + ")", line_no);
        }
        kv.entries_[key] = Entry{value, line_no};
    }
    return kv;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file `" + path.string() + "`");
    }
    try {
        return parse(in);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void KeyValueConfig::apply_override(std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("override `" + std::string(assignment) + "` is not of the form key=value");
    }
    const std::string key = canonical_key(trim(assignment.substr(0, eq)));
    const std::string value = trim(assignment.substr(eq + 1));
    if (!valid_key(key) || value.empty()) {
        throw ConfigError("malformed override `" + std::string(assignment) + "`");
    }
    entries_[key] = Entry{value, 0};
}

const std::string& KeyValueConfig::raw(const std::string& key) const
{
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        throw ConfigError("missing key `" + key + "`");
    }
    return it->second.value;
}

int KeyValueConfig::line(const std::string& key) const
{
    const auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const
{
    if (!has(key)) {
        return fallback;
    }
    const std::string& s = raw(key);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
        throw ConfigError("`" + key + "` expects a finite number, got `" + s + "`", line(key));
    }
    return v;
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const
{
    if (!has(key)) {
        return fallback;
    }
    const std::string& s = raw(key);
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE) {
        throw ConfigError("`" + key + "` expects an integer, got `" + s + "`", line(key));
    }
    return v;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key, std::uint64_t fallback) const
{
    if (!has(key)) {
        return fallback;
    }
    const std::string& s = raw(key);
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE || s.front() == '-') {
        throw ConfigError("`" + key + "` expects an unsigned integer, got `" + s + "`", line(key));
    }
    return v;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const
{
    if (!has(key)) {
        return fallback;
    }
    const std::string& s = raw(key);
    if (s == "true" || s == "1" || s == "yes") {
        return true;
    }
    if (s == "false" || s == "0" || s == "no") {
        return false;
    }
    throw ConfigError("`" + key + "` expects true/false, got `" + s + "`", line(key));
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const
{
    return has(key) ? raw(key) : fallback;
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key, const std::vector<double>& fallback) const
{
    if (!has(key)) {
        return fallback;
    }
    std::vector<double> out;
    for (const auto& item : split_list(raw(key))) {
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0' || !std::isfinite(v)) {
            throw ConfigError("`" + key + "` expects a comma-separated list of numbers, bad item `" + item + "`",
                              line(key));
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw ConfigError("`" + key + "` is an empty list", line(key));
    }
    return out;
}

std::vector<int> KeyValueConfig::get_ints(const std::string& key, const std::vector<int>& fallback) const
{
    if (!has(key)) {
        return fallback;
    }
    std::vector<int> out;
    for (const auto& item : split_list(raw(key))) {
        char* end = nullptr;
        const long v = std::strtol(item.c_str(), &end, 10);
        if (end == item.c_str() || *end != '\0') {
            throw ConfigError("`" + key + "` expects a comma-separated list of integers, bad item `" + item + "`",
                              line(key));
        }
        out.push_back(static_cast<int>(v));
    }
    if (out.empty()) {
        throw ConfigError("`" + key + "` is an empty list", line(key));
    }
    return out;
}

void KeyValueConfig::reject_unknown(const std::set<std::string>& known) const
{
    for (const auto& [key, entry] : entries_) {
        if (known.count(key) == 0) {
            throw ConfigError("unknown key `" + key + "`", entry.line);
        }
    }
}

namespace {

double from_db(double db)
{
    return std::pow(10.0, db / 10.0);
}

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys{
        "grid.M", "grid.N", "grid.delta_f", "grid.T",
        "users.K",
        "channel.delays", "channel.dopplers",
        "impairments.snr_db", "impairments.sigma_n2", "impairments.sigma_e2_db", "impairments.sigma_e2",
        "impairments.theta", "impairments.sic_aware_filter",
        "power.p_max",
        "target.tau", "target.nu", "target.beta", "target.gain_at_tau", "target.echo_snr_db", "target.sigma2",
        "qos.rate_c_req", "qos.eps_tau", "qos.eps_nu",
        "sweep.alphas", "sweep.n_mc",
        "ga.population", "ga.generations", "ga.crossover_rate", "ga.blend_alpha", "ga.mutation_rate", "ga.mutation_sigma",
        "ga.tournament_size", "ga.elitism", "ga.lambda_c", "ga.lambda_tau", "ga.lambda_nu",
        "run.seed", "run.workers", "run.full_scale",
        "output.dir", "output.timing",
    };
    return keys;
}

std::size_t positive(const KeyValueConfig& kv, const std::string& key, std::size_t fallback)
{
    const long long v = kv.get_int(key, static_cast<long long>(fallback));
    if (v < 1) {
        throw ConfigError("`" + key + "` must be >= 1", kv.line(key));
    }
    return static_cast<std::size_t>(v);
}

std::size_t non_negative(const KeyValueConfig& kv, const std::string& key, std::size_t fallback)
{
    const long long v = kv.get_int(key, static_cast<long long>(fallback));
    if (v < 0) {
        throw ConfigError("`" + key + "` must be >= 0", kv.line(key));
    }
    return static_cast<std::size_t>(v);
}

// Baseline scalar settings shared by both scales.
constexpr double kSnrDb = 25.0;
constexpr double kSigmaE2Db = -25.0;
constexpr double kTheta = 0.03;
constexpr double kEchoSnrDb = 10.0;
constexpr double kGainAtTau = 0.1;

SensingTarget table1_target(double p_max, double echo_snr_db)
{
    const double tau = 1.0e-4;
    const cplx beta{1.0, 0.0};
    const double sigma2 = std::norm(kGainAtTau * beta) * p_max / from_db(echo_snr_db);
    return SensingTarget::with_gain_at(tau, 4687.5, beta, kGainAtTau, sigma2);
}

} // namespace

CampaignConfig CampaignConfig::table1()
{
    CampaignConfig c;
    c.impairments.sigma_n2 = c.p_max / from_db(kSnrDb);
    c.impairments.sigma_e2 = from_db(kSigmaE2Db);
    c.impairments.theta.assign(c.users, kTheta);
    c.impairments.p_tot = c.p_max;
    c.target = table1_target(c.p_max, kEchoSnrDb);
    c.ga.population = 40;
    c.ga.generations = 40;
    return c;
}

CampaignConfig CampaignConfig::table1_full()
{
    CampaignConfig c = table1();
    c.n_mc = 3000;
    c.ga.population = 100;
    c.ga.generations = 125;
    return c;
}

void CampaignConfig::validate() const
{
    validate_path_config(paths, grid);
    if (users < 1) {
        throw InvalidInput("need at least one user");
    }
    impairments.validate(users);
    target.validate();
    if (!(p_max > 0.0)) {
        throw InvalidInput("P_max must be positive");
    }
    if (alphas.empty()) {
        throw InvalidInput("alpha list is empty");
    }
    for (double a : alphas) {
        if (!(a >= 0.0 && a <= 1.0)) {
            throw InvalidInput("alpha values must lie in [0, 1]");
        }
    }
    if (n_mc < 1) {
        throw InvalidInput("n_mc must be >= 1");
    }
    if (!(qos.eps_tau > 0.0) || !(qos.eps_nu > 0.0) || !(qos.rate_c_req >= 0.0)) {
        throw InvalidInput("QoS thresholds must be positive");
    }
    if (workers < 1) {
        throw InvalidInput("workers must be >= 1");
    }
    ga.validate();
}

CampaignConfig campaign_config_from(const KeyValueConfig& kv)
{
    kv.reject_unknown(known_keys());
    CampaignConfig c = kv.get_bool("run.full_scale", false) ? CampaignConfig::table1_full()
                                                            : CampaignConfig::table1();
    try {
        const std::size_t M = positive(kv, "grid.M", c.grid.M());
        const std::size_t N = positive(kv, "grid.N", c.grid.N());
        const double df = kv.get_double("grid.delta_f", c.grid.delta_f());
        c.grid = kv.has("grid.T") ? DDGrid(M, N, df, kv.get_double("grid.T", 0.0)) : DDGrid(M, N, df);
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what(), kv.line(kv.has("grid.T") ? "grid.T" : "grid.delta_f"));
    }

    c.users = positive(kv, "users.K", c.users);
    c.paths.delays = kv.get_ints("channel.delays", c.paths.delays);
    c.paths.dopplers = kv.get_ints("channel.dopplers", c.paths.dopplers);
    try {
        validate_path_config(c.paths, c.grid);
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what(), std::max(kv.line("channel.delays"), kv.line("channel.dopplers")));
    }

    c.p_max = kv.get_double("power.p_max", c.p_max);
    if (!(c.p_max > 0.0)) {
        throw ConfigError("`power.p_max` must be positive", kv.line("power.p_max"));
    }

    auto& imp = c.impairments;
    imp.sigma_n2 = kv.has("impairments.sigma_n2")
                       ? kv.get_double("impairments.sigma_n2", 0.0)
                       : c.p_max / from_db(kv.get_double("impairments.snr_db", kSnrDb));
    imp.sigma_e2 = kv.has("impairments.sigma_e2")
                       ? kv.get_double("impairments.sigma_e2", 0.0)
                       : from_db(kv.get_double("impairments.sigma_e2_db", kSigmaE2Db));
    if (imp.sigma_n2 < 0.0 || imp.sigma_e2 < 0.0) {
        throw ConfigError("noise and ICSI variances must be >= 0",
                          std::max(kv.line("impairments.sigma_n2"), kv.line("impairments.sigma_e2")));
    }
    auto theta = kv.get_doubles("impairments.theta", {kTheta});
    if (theta.size() == 1) {
        theta.assign(c.users, theta.front());
    }
    if (theta.size() != c.users) {
        throw ConfigError("`impairments.theta` needs one value or one per user", kv.line("impairments.theta"));
    }
    for (double t : theta) {
        if (!(t >= 0.0 && t <= 1.0)) {
            throw ConfigError("`impairments.theta` values must lie in [0, 1]", kv.line("impairments.theta"));
        }
    }
    imp.theta = theta;
    imp.sic_aware_filter = kv.get_bool("impairments.sic_aware_filter", imp.sic_aware_filter);
    imp.p_tot = c.p_max;

    const double tau = kv.get_double("target.tau", c.target.tau);
    const double nu = kv.get_double("target.nu", c.target.nu);
    const double beta = kv.get_double("target.beta", c.target.beta.real());
    const double gain_at_tau = kv.get_double("target.gain_at_tau", kGainAtTau);
    double sigma2 = 0.0;
    if (kv.has("target.sigma2")) {
        sigma2 = kv.get_double("target.sigma2", 0.0);
    } else {
        sigma2 = std::norm(gain_at_tau * beta) * c.p_max / from_db(kv.get_double("target.echo_snr_db", kEchoSnrDb));
    }
    try {
        c.target = SensingTarget::with_gain_at(tau, nu, cplx(beta, 0.0), gain_at_tau, sigma2);
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what(), std::max({kv.line("target.tau"), kv.line("target.sigma2"),
                                              kv.line("target.beta"), kv.line("target.gain_at_tau")}));
    }

    c.qos.rate_c_req = kv.get_double("qos.rate_c_req", c.qos.rate_c_req);
    c.qos.eps_tau = kv.get_double("qos.eps_tau", c.qos.eps_tau);
    c.qos.eps_nu = kv.get_double("qos.eps_nu", c.qos.eps_nu);
    if (!(c.qos.eps_tau > 0.0) || !(c.qos.eps_nu > 0.0) || c.qos.rate_c_req < 0.0) {
        throw ConfigError("QoS thresholds must be positive",
                          std::max({kv.line("qos.eps_tau"), kv.line("qos.eps_nu"), kv.line("qos.rate_c_req")}));
    }

    c.alphas = kv.get_doubles("sweep.alphas", c.alphas);
    for (double a : c.alphas) {
        if (!(a >= 0.0 && a <= 1.0)) {
            throw ConfigError("`sweep.alphas` values must lie in [0, 1]", kv.line("sweep.alphas"));
        }
    }
    c.n_mc = positive(kv, "sweep.n_mc", c.n_mc);

    auto& ga = c.ga;
    ga.population = positive(kv, "ga.population", ga.population);
    ga.generations = positive(kv, "ga.generations", ga.generations);
    ga.crossover_rate = kv.get_double("ga.crossover_rate", ga.crossover_rate);
    ga.blend_alpha = kv.get_double("ga.blend_alpha", ga.blend_alpha);
    ga.mutation_rate = kv.get_double("ga.mutation_rate", ga.mutation_rate);
    ga.mutation_sigma = kv.get_double("ga.mutation_sigma", ga.mutation_sigma);
    ga.tournament_size = positive(kv, "ga.tournament_size", ga.tournament_size);
    ga.elitism = non_negative(kv, "ga.elitism", ga.elitism);
    ga.penalty.rate_c = kv.get_double("ga.lambda_c", ga.penalty.rate_c);
    ga.penalty.crb_tau = kv.get_double("ga.lambda_tau", ga.penalty.crb_tau);
    ga.penalty.crb_nu = kv.get_double("ga.lambda_nu", ga.penalty.crb_nu);
    try {
        ga.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(std::string("GA settings: ") + e.what());
    }

    c.master_seed = kv.get_u64("run.seed", c.master_seed);
    c.workers = positive(kv, "run.workers", c.workers);
    c.output_dir = kv.get_string("output.dir", c.output_dir.string());
    c.record_timing = kv.get_bool("output.timing", c.record_timing);
    return c;
}

CampaignConfig load_campaign_config(const std::filesystem::path& path, const std::vector<std::string>& overrides)
{
    KeyValueConfig kv = KeyValueConfig::load(path);
    for (const auto& o : overrides) {
        kv.apply_override(o);
    }
    return campaign_config_from(kv);
}

} // namespace ddisac
