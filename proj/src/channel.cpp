#include "ddisac/channel.hpp"

#include <cmath>
#include <string>

#include "ddisac/errors.hpp"

namespace ddisac {

double PathSet::energy() const noexcept
{
    double e = 0.0;
    for (const auto& g : gains) {
        e += std::norm(g);
    }
    return e;
}

namespace {

std::size_t wrap(long long v, std::size_t n)
{
    const auto m = static_cast<long long>(n);
    return static_cast<std::size_t>(((v % m) + m) % m);
}

void validate_support(const std::vector<int>& delays, const std::vector<int>& dopplers,
                      const DDGrid& grid)
{
    if (delays.empty()) {
        throw InvalidInput("path set needs at least one path");
    }
    if (delays.size() != dopplers.size()) {
        throw InvalidInput("path delays and Dopplers differ in length");
    }
    const int M = static_cast<int>(grid.M());
    const int N = static_cast<int>(grid.N());
    for (std::size_t p = 0; p < delays.size(); ++p) {
        if (delays[p] < 0 || delays[p] >= M) {
            throw InvalidInput("path " + std::to_string(p) + ": delay index " +
                               std::to_string(delays[p]) + " outside [0, " + std::to_string(M) + ")");
        }
        // -N/2 <= k < N/2, written without integer division for odd N.
        if (2 * dopplers[p] < -N || 2 * dopplers[p] >= N) {
            throw InvalidInput("path " + std::to_string(p) + ": Doppler index " +
                               std::to_string(dopplers[p]) + " outside [-N/2, N/2)");
        }
    }
}

} // namespace

void validate_path_config(const PathConfig& config, const DDGrid& grid)
{
    validate_support(config.delays, config.dopplers, grid);
}

PathSet gen_paths(const DDGrid& grid, const PathConfig& config, Rng& rng)
{
    validate_path_config(config, grid);
    PathSet paths{config.delays, config.dopplers, {}};
    paths.gains.reserve(config.delays.size());
    for (std::size_t p = 0; p < config.delays.size(); ++p) {
        paths.gains.push_back(rng.complex_normal(1.0));
    }
    const double scale = 1.0 / std::sqrt(paths.energy());
    for (auto& g : paths.gains) {
        g *= scale;
    }
    return paths;
}

EffectiveChannel build_effective(const PathSet& paths, const DDGrid& grid)
{
    validate_support(paths.delays, paths.dopplers, grid);
    if (paths.gains.size() != paths.delays.size()) {
        throw InvalidInput("path gains and delays differ in length");
    }
    const std::size_t M = grid.M();
    const std::size_t N = grid.N();
    const double mn = static_cast<double>(M * N);
    CMatrix H = CMatrix::Zero(grid.n_dd(), grid.n_dd());
    for (std::size_t p = 0; p < paths.size(); ++p) {
        const long long lp = paths.delays[p];
        const long long kp = paths.dopplers[p];
        for (std::size_t m = 0; m < N; ++m) {
            for (std::size_t l = 0; l < M; ++l) {
                const long long shift = static_cast<long long>(l) - lp;
                const double phase = 2.0 * kPi * static_cast<double>(shift * kp) / mn;
                const std::size_t src = grid.index(wrap(shift, M), wrap(static_cast<long long>(m) - kp, N));
                H(grid.index(l, m), src) += paths.gains[p] * std::polar(1.0, phase);
            }
        }
    }
    return EffectiveChannel{std::move(H), paths};
}

IcsiDraw apply_icsi(const PathSet& paths, const DDGrid& grid, double sigma_e2, Rng& rng)
{
    if (!(sigma_e2 >= 0.0) || !std::isfinite(sigma_e2)) {
        throw InvalidInput("ICSI error variance must be finite and >= 0");
    }
    PathSet estimated = paths;
    const double per_path = sigma_e2 / static_cast<double>(paths.size());
    for (auto& g : estimated.gains) {
        g += rng.complex_normal(per_path);
    }
    auto effective = build_effective(estimated, grid);
    return IcsiDraw{std::move(estimated), ChannelEstimate{std::move(effective.matrix), sigma_e2}};
}

} // namespace ddisac
