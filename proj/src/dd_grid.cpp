#include "ddisac/dd_grid.hpp"

#include <cmath>
#include <string>

#include "ddisac/errors.hpp"

namespace ddisac {

DDGrid::DDGrid(std::size_t M, std::size_t N, double delta_f)
    : DDGrid(M, N, delta_f, delta_f > 0.0 ? 1.0 / delta_f : 0.0)
{
}

DDGrid::DDGrid(std::size_t M, std::size_t N, double delta_f, double T)
    : M_(M), N_(N), delta_f_(delta_f), T_(T)
{
    if (M == 0 || N == 0) {
        throw InvalidInput("DDGrid: M and N must be positive");
    }
    if (!(delta_f > 0.0) || !std::isfinite(delta_f)) {
        throw InvalidInput("DDGrid: subcarrier spacing must be positive");
    }
    if (std::abs(T * delta_f - 1.0) > 1e-9) {
        throw InvalidInput("DDGrid: grid must be critically sampled (T * delta_f = 1), got " +
                           std::to_string(T * delta_f));
    }
}

namespace {

// Unitary DFT kernel of size n with the given exponent sign.
CMatrix dft_matrix(std::size_t n, double sign)
{
    CMatrix F(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            // Reduce the product mod n so the phase stays exact for large grids.
            const double frac = static_cast<double>((a * b) % n) / static_cast<double>(n);
            F(a, b) = std::polar(scale, sign * 2.0 * kPi * frac);
        }
    }
    return F;
}

} // namespace

TFFrame isfft(const DDFrame& frame, const DDGrid& grid)
{
    const auto M = grid.M();
    const auto N = grid.N();
    if (static_cast<std::size_t>(frame.values.size()) != grid.n_dd()) {
        throw InvalidInput("isfft: frame length " + std::to_string(frame.values.size()) +
                           " != N_dd " + std::to_string(grid.n_dd()));
    }
    // Column-major M x N view: x(l, m) = values[m * M + l].
    const Eigen::Map<const CMatrix> x(frame.values.data(), M, N);
    // X = F_N^+ x^T F_M^-, where F^+ has exp(+j...) and F^- has exp(-j...).
    const CMatrix doppler_to_time = dft_matrix(N, +1.0);
    const CMatrix delay_to_freq = dft_matrix(M, -1.0);
    return TFFrame{doppler_to_time * x.transpose() * delay_to_freq};
}

DDFrame sfft(const TFFrame& tf, const DDGrid& grid)
{
    const auto M = grid.M();
    const auto N = grid.N();
    if (static_cast<std::size_t>(tf.values.rows()) != N ||
        static_cast<std::size_t>(tf.values.cols()) != M) {
        throw InvalidInput("sfft: TF frame must be N x M");
    }
    const CMatrix time_to_doppler = dft_matrix(N, -1.0);
    const CMatrix freq_to_delay = dft_matrix(M, +1.0);
    const CMatrix x = (time_to_doppler * tf.values * freq_to_delay).transpose();
    DDFrame out{CVector(grid.n_dd())};
    Eigen::Map<CMatrix>(out.values.data(), M, N) = x;
    return out;
}

} // namespace ddisac
