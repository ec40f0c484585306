#pragma once

#include <cstddef>

#include "ddisac/types.hpp"

namespace ddisac {

/// OTFS delay-Doppler grid: M delay bins, N Doppler bins, critically
/// sampled (T * delta_f == 1).
class DDGrid {
public:
    /// Builds a grid with T = 1 / delta_f.
    DDGrid(std::size_t M, std::size_t N, double delta_f);
    /// Explicit T; rejected unless T * delta_f == 1 to 1e-9.
    DDGrid(std::size_t M, std::size_t N, double delta_f, double T);

    /// Baseline geometry: M=4, N=8, delta_f = 12.5 kHz, T = 80 us.
    static DDGrid table1() { return DDGrid(4, 8, 12.5e3); }

    std::size_t M() const noexcept { return M_; }
    std::size_t N() const noexcept { return N_; }
    std::size_t n_dd() const noexcept { return M_ * N_; }
    double delta_f() const noexcept { return delta_f_; }
    double T() const noexcept { return T_; }

    double delay_resolution() const noexcept { return 1.0 / (static_cast<double>(M_) * delta_f_); }
    double doppler_resolution() const noexcept { return 1.0 / (static_cast<double>(N_) * T_); }

    /// Flattened index of DD cell (l, m): d = m * M + l.
    std::size_t index(std::size_t l, std::size_t m) const noexcept { return m * M_ + l; }

    bool operator==(const DDGrid&) const = default;

private:
    std::size_t M_;
    std::size_t N_;
    double delta_f_;
    double T_;
};

/// DD-domain symbols x[l, m], flattened with DDGrid::index.
struct DDFrame {
    CVector values;
};

/// TF-domain symbols X[n, i]; rows are time n in [0, N), columns are
/// subcarriers i in [0, M).
struct TFFrame {
    CMatrix values;
};

/// X[n,i] = 1/sqrt(NM) sum_{l,m} x[l,m] exp(j2pi(n m / N - i l / M)).
/// Unitary. Throws InvalidInput on a length mismatch.
TFFrame isfft(const DDFrame& frame, const DDGrid& grid);

/// Inverse of isfft. Throws InvalidInput unless tf is N x M.
DDFrame sfft(const TFFrame& tf, const DDGrid& grid);

} // namespace ddisac
