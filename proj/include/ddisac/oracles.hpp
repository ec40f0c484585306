#pragma once

// Brute-force reference computations. Each one is written straight from the
// defining sum with its own loops and std::exp calls, sharing no code path
// with the library routine it checks.

#include "ddisac/channel.hpp"
#include "ddisac/comm_metrics.hpp"
#include "ddisac/dd_grid.hpp"
#include "ddisac/precoding.hpp"
#include "ddisac/sensing.hpp"

namespace ddisac::oracle {

/// Double-loop forward transform, X is N x M.
CMatrix isfft(const CVector& x, const DDGrid& grid);
/// Double-loop inverse (conjugate kernel), returns flattened x.
CVector sfft(const CMatrix& X, const DDGrid& grid);

/// y[l,m] from the sparse path sum, element by element.
CVector apply_channel(const PathSet& paths, const DDGrid& grid, const CVector& x);

/// LMMSE filters from explicitly assembled covariances solved with a
/// full-pivoting LU.
UserFilters lmmse(const CMatrix& h_hat, const PrecoderSet& p, const ImpairmentConfig& imp, std::size_t user);

/// SINRs expanded term by term with scalar loops.
double sinr_common(const UserFilters& f, const CMatrix& h_hat, const PrecoderSet& p, const ImpairmentConfig& imp);
double sinr_private(const UserFilters& f, const CMatrix& h_hat, const PrecoderSet& p, const ImpairmentConfig& imp,
                    std::size_t user);

/// Mean echo and derivatives from the quadruple sums over (l, k, n, i).
CMatrix echo_mean(const CMatrix& X, const SensingTarget& target, const DDGrid& grid);
EchoField echo_field(const CMatrix& X, const SensingTarget& target, const DDGrid& grid);

/// [I]_{ij} = (2 / sigma^2) Re{d_i^H d_j} straight from derivative fields.
FimEntries generic_fim(const EchoField& field, const SensingTarget& target);

/// Diagonal of the 2x2 inverse via a general matrix inverse.
CrbPair crb_by_inverse(const FimEntries& e);

} // namespace ddisac::oracle
