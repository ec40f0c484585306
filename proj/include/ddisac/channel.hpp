#pragma once

#include <vector>

#include "ddisac/dd_grid.hpp"
#include "ddisac/rng.hpp"
#include "ddisac/types.hpp"

namespace ddisac {

/// Integer delay/Doppler support of the sparse DD channel.
struct PathConfig {
    std::vector<int> delays;   // l_p in [0, M)
    std::vector<int> dopplers; // k_p in [-N/2, N/2)

    /// Baseline support: delays [0,1,2,3], Dopplers [0,2,-1,3].
    static PathConfig table1() { return {{0, 1, 2, 3}, {0, 2, -1, 3}}; }
};

/// Sparse DD multipath: path p has delay bin delays[p], Doppler bin
/// dopplers[p] and complex gain gains[p] (phase folded in).
struct PathSet {
    std::vector<int> delays;
    std::vector<int> dopplers;
    std::vector<cplx> gains;

    std::size_t size() const noexcept { return gains.size(); }
    double energy() const noexcept;
};

/// N_dd x N_dd operator mapping flattened transmitted DD symbols to
/// received ones.
struct EffectiveChannel {
    CMatrix matrix;
    PathSet source;
};

/// Channel estimate H_hat = H + E used by every receiver-side computation.
struct ChannelEstimate {
    CMatrix matrix;
    double error_variance = 0.0;
};

struct IcsiDraw {
    PathSet estimated_paths;
    ChannelEstimate estimate;
};

/// Checks index ranges against the grid; throws InvalidInput.
void validate_path_config(const PathConfig& config, const DDGrid& grid);

/// Draws i.i.d. CN(0,1) gains on the configured support and normalizes them
/// to unit total energy.
PathSet gen_paths(const DDGrid& grid, const PathConfig& config, Rng& rng);

/// y[l,m] = sum_p g_p exp(j2pi (l - l_p) k_p / (MN)) x[(l - l_p) mod M, (m - k_p) mod N]
EffectiveChannel build_effective(const PathSet& paths, const DDGrid& grid);

/// Perturbs every gain by CN(0, sigma_e2 / P) and rebuilds the operator from
/// the perturbed gains, so the estimate keeps the true channel's sparsity.
IcsiDraw apply_icsi(const PathSet& paths, const DDGrid& grid, double sigma_e2, Rng& rng);

} // namespace ddisac
