#pragma once

#include <stdexcept>

#include "ddisac/dd_grid.hpp"
#include "ddisac/precoding.hpp"
#include "ddisac/types.hpp"

namespace ddisac {

/// Point target observed through a delay-dependent echo gain
/// alpha(tau) = gain_const / tau^2.
struct SensingTarget {
    double tau = 1.0e-4;   // s
    double nu = 4687.5;    // Hz
    cplx beta{1.0, 0.0};   // reflectivity
    double gain_const = 1.0e-9;
    double sigma2 = 1.0e-3; // echo noise variance

    /// Calibrates gain_const so that alpha(tau) == gain_at_tau.
    static SensingTarget with_gain_at(double tau, double nu, cplx beta, double gain_at_tau, double sigma2);

    double gain() const noexcept { return gain_const / (tau * tau); }
    /// d alpha / d tau = -2 alpha(tau) / tau
    double gain_derivative() const noexcept { return -2.0 * gain() / tau; }
    /// Throws InvalidInput unless tau > 0 and sigma2 > 0.
    void validate() const;
};

/// Mean echo over the M x N DD grid (rows l in [0, M), columns k in [0, N))
/// and its derivatives with respect to the target Doppler and delay.
struct EchoField {
    CMatrix mu;
    CMatrix d_nu;
    CMatrix d_tau;       // d_gain + d_phase_tau
    CMatrix d_gain;      // (-2 / tau) mu
    CMatrix d_phase_tau; // -j 2pi df alpha beta / sqrt(MN) sum_{n,i} i X e^{j phi}
};

struct WaveformMoments {
    double s_n = 0.0;      // sum_{l,k} |sum_{n,i} n X e^{j phi}|^2
    double s_i = 0.0;      // sum_{l,k} |sum_{n,i} i X e^{j phi}|^2
    double c_taunu = 0.0;  // Re{d_phase_tau^H d_nu}
    double c_mutau = 0.0;  // Re{mu^H d_phase_tau}
    double c_munu = 0.0;   // Re{mu^H d_nu}
    double p_mu = 0.0;     // ||mu||^2
};

struct FimEntries {
    double i_tautau = 0.0;
    double i_nunu = 0.0;
    double i_taunu = 0.0;
};

struct FimResult {
    double i_tautau = 0.0;
    double i_nunu = 0.0;
    double i_taunu = 0.0;
    double det = 0.0;
    double crb_tau = 0.0; // s^2
    double crb_nu = 0.0;  // Hz^2
};

struct CrbPair {
    double tau = 0.0;
    double nu = 0.0;
};

/// The 2x2 Fisher information is not invertible.
class SingularFim : public std::runtime_error {
public:
    SingularFim(const std::string& what, const WaveformMoments& moments, const FimEntries& entries)
        : std::runtime_error(what), moments_(moments), entries_(entries) {}

    const WaveformMoments& moments() const noexcept { return moments_; }
    const FimEntries& entries() const noexcept { return entries_; }

private:
    WaveformMoments moments_;
    FimEntries entries_;
};

/// Phase kernels exp(j phi_{n,i,l,k}) for one (target, grid) pair, factored as
///   exp(j2pi n (nu T - l / N)) * exp(-j2pi i (tau df - k / M)).
/// Build once and reuse across waveforms; every evaluation is serial with a
/// fixed summation order.
class EchoModel {
public:
    EchoModel(const SensingTarget& target, const DDGrid& grid);

    const SensingTarget& target() const noexcept { return target_; }
    const DDGrid& grid() const noexcept { return grid_; }

    /// sum_{n,i} W[n,i] exp(j phi_{n,i,l,k}) for every (l, k).
    CMatrix phase_sum(const CMatrix& weights) const;

    CMatrix mean(const TFFrame& X) const;
    EchoField field(const TFFrame& X) const;
    WaveformMoments moments(const EchoField& field, const TFFrame& X) const;
    FimResult fim(const TFFrame& X) const;

private:
    void check(const TFFrame& X) const;

    SensingTarget target_;
    DDGrid grid_;
    CMatrix time_kernel_; // M x N, (l, n)
    CMatrix freq_kernel_; // M x N, (i, k)
};

/// mu[l,k] = alpha(tau) beta / sqrt(MN) sum_{n,i} X[n,i] exp(j phi_{n,i,l,k})
CMatrix echo_mean(const TFFrame& X, const SensingTarget& target, const DDGrid& grid);
EchoField echo_derivatives(const TFFrame& X, const SensingTarget& target, const DDGrid& grid);
WaveformMoments waveform_moments(const EchoField& field, const TFFrame& X, const SensingTarget& target,
                                 const DDGrid& grid);

/// Closed-form FIM entries from the waveform moments:
///   I_nunu   = 2 (2pi T)^2 |a|^2 |b|^2 S_n / (MN s2)
///   I_tautau = 8 P_mu / (s2 tau^2) + 2 (2pi df)^2 |a|^2 |b|^2 S_i / (MN s2) - 8 C_mutau / (s2 tau)
///   I_taunu  = 2 C_taunu / s2 - 4 C_munu / (s2 tau)
FimEntries fim_entries(const WaveformMoments& m, const SensingTarget& target, const DDGrid& grid);

/// fim_entries plus determinant and CRBs. Throws SingularFim when the
/// determinant is not positive.
FimResult fim(const WaveformMoments& m, const SensingTarget& target, const DDGrid& grid);

/// CRB(tau) = I_nunu / det, CRB(nu) = I_tautau / det. Throws SingularFim
/// when det <= 0.
CrbPair crb(const FimResult& f);

/// X = isfft(compose_tx(p, s)), then mean echo, derivatives, moments, FIM, CRBs.
FimResult sensing_for_precoders(const PrecoderSet& p, const StreamSymbols& s, const EchoModel& model);
FimResult sensing_for_precoders(const PrecoderSet& p, const StreamSymbols& s, const SensingTarget& target,
                                const DDGrid& grid);

} // namespace ddisac
