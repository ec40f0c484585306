#pragma once

#include <span>
#include <vector>

#include "ddisac/dd_grid.hpp"
#include "ddisac/rng.hpp"
#include "ddisac/types.hpp"

namespace ddisac {

/// RSMA precoders: one common precoder plus one private precoder per user,
/// each a vector over the flattened DD grid. `alpha` is the fraction of
/// `p_max` carried by the common stream.
struct PrecoderSet {
    CVector common;
    std::vector<CVector> privates;
    double alpha = 0.0;
    double p_max = 1.0;

    std::size_t users() const noexcept { return privates.size(); }
    std::size_t n_dd() const noexcept { return static_cast<std::size_t>(common.size()); }
    double common_power() const noexcept { return common.squaredNorm(); }
    double private_power() const noexcept;
    double total_power() const noexcept { return common_power() + private_power(); }
};

/// Unit-power stream symbols for one transmitted frame.
struct StreamSymbols {
    cplx common{1.0, 0.0};
    std::vector<cplx> privates;

    /// Unit-modulus symbols with independent uniform phases.
    static StreamSymbols draw(std::size_t users, Rng& rng);
};

/// Number of real genes encoding a precoder set: 2 * n_dd * (users + 1).
constexpr std::size_t chromosome_length(std::size_t n_dd, std::size_t users) noexcept
{
    return 2 * n_dd * (users + 1);
}

/// Rescales the common block to alpha * p_max and the private block
/// (jointly, keeping the split between users) to (1 - alpha) * p_max.
/// alpha == 0 zeroes the common precoder and alpha == 1 zeroes the privates.
/// Throws DegeneratePrecoder when a block with nonzero target power is zero.
PrecoderSet normalize_power(PrecoderSet p, double alpha, double p_max);

/// Genes are consecutive (re, im) pairs filling the common precoder, then
/// private 1..K. The result is passed through normalize_power.
PrecoderSet decode_chromosome(std::span<const double> genes, std::size_t n_dd, std::size_t users,
                              double alpha, double p_max);

/// Inverse layout of decode_chromosome (no rescaling).
std::vector<double> encode_chromosome(const PrecoderSet& p);

/// x_dd = P_c s_c + sum_k P_{p,k} s_{p,k}
DDFrame compose_tx(const PrecoderSet& p, const StreamSymbols& s);

} // namespace ddisac
