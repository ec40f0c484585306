#include "ddisac/sensing.hpp"

#include <cmath>

#include "ddisac/errors.hpp"

namespace ddisac {

SensingTarget SensingTarget::with_gain_at(double tau, double nu, cplx beta, double gain_at_tau, double sigma2)
{
    SensingTarget t;
    t.tau = tau;
    t.nu = nu;
    t.beta = beta;
    t.gain_const = gain_at_tau * tau * tau;
    t.sigma2 = sigma2;
    t.validate();
    return t;
}

void SensingTarget::validate() const
{
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw InvalidInput("target delay must be positive (echo gain is singular at tau = 0)");
    }
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw InvalidInput("echo noise variance must be positive");
    }
    if (!std::isfinite(nu) || !std::isfinite(gain_const)) {
        throw InvalidInput("target parameters must be finite");
    }
}

EchoModel::EchoModel(const SensingTarget& target, const DDGrid& grid)
    : target_(target), grid_(grid)
{
    target_.validate();
    const auto M = grid.M();
    const auto N = grid.N();
    const double nuT = target.nu * grid.T();
    const double tauDf = target.tau * grid.delta_f();
    time_kernel_.resize(M, N);
    freq_kernel_.resize(M, N);
    for (std::size_t l = 0; l < M; ++l) {
        for (std::size_t n = 0; n < N; ++n) {
            const double ph = static_cast<double>(n) *
                              (nuT - static_cast<double>(l) / static_cast<double>(N));
            time_kernel_(l, n) = std::polar(1.0, 2.0 * kPi * ph);
        }
    }
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t k = 0; k < N; ++k) {
            const double ph = static_cast<double>(i) *
                              (tauDf - static_cast<double>(k) / static_cast<double>(M));
            freq_kernel_(i, k) = std::polar(1.0, -2.0 * kPi * ph);
        }
    }
}

void EchoModel::check(const TFFrame& X) const
{
    if (static_cast<std::size_t>(X.values.rows()) != grid_.N() ||
        static_cast<std::size_t>(X.values.cols()) != grid_.M()) {
        throw InvalidInput("TF frame must be N x M");
    }
}

CMatrix EchoModel::phase_sum(const CMatrix& weights) const
{
    return time_kernel_ * weights * freq_kernel_;
}

namespace {

double mn_of(const DDGrid& g)
{
    return static_cast<double>(g.n_dd());
}

CMatrix time_weighted(const CMatrix& X)
{
    CMatrix out = X;
    for (Eigen::Index n = 0; n < out.rows(); ++n) {
        out.row(n) *= static_cast<double>(n);
    }
    return out;
}

CMatrix freq_weighted(const CMatrix& X)
{
    CMatrix out = X;
    for (Eigen::Index i = 0; i < out.cols(); ++i) {
        out.col(i) *= static_cast<double>(i);
    }
    return out;
}

double re_inner(const CMatrix& a, const CMatrix& b)
{
    // Re{a^H b} over all entries.
    return (a.conjugate().cwiseProduct(b)).sum().real();
}

} // namespace

CMatrix EchoModel::mean(const TFFrame& X) const
{
    check(X);
    const cplx scale = target_.gain() * target_.beta / std::sqrt(mn_of(grid_));
    return scale * phase_sum(X.values);
}

EchoField EchoModel::field(const TFFrame& X) const
{
    check(X);
    const cplx scale = target_.gain() * target_.beta / std::sqrt(mn_of(grid_));
    const cplx j(0.0, 1.0);
    EchoField f;
    f.mu = scale * phase_sum(X.values);
    f.d_nu = (j * 2.0 * kPi * grid_.T() * scale) * phase_sum(time_weighted(X.values));
    f.d_gain = (-2.0 / target_.tau) * f.mu;
    f.d_phase_tau = (-j * 2.0 * kPi * grid_.delta_f() * scale) * phase_sum(freq_weighted(X.values));
    f.d_tau = f.d_gain + f.d_phase_tau;
    return f;
}

WaveformMoments EchoModel::moments(const EchoField& field, const TFFrame& X) const
{
    check(X);
    WaveformMoments m;
    m.s_n = phase_sum(time_weighted(X.values)).squaredNorm();
    m.s_i = phase_sum(freq_weighted(X.values)).squaredNorm();
    m.c_taunu = re_inner(field.d_phase_tau, field.d_nu);
    m.c_mutau = re_inner(field.mu, field.d_phase_tau);
    m.c_munu = re_inner(field.mu, field.d_nu);
    m.p_mu = field.mu.squaredNorm();
    return m;
}

FimResult EchoModel::fim(const TFFrame& X) const
{
    return ddisac::fim(moments(field(X), X), target_, grid_);
}

CMatrix echo_mean(const TFFrame& X, const SensingTarget& target, const DDGrid& grid)
{
    return EchoModel(target, grid).mean(X);
}

EchoField echo_derivatives(const TFFrame& X, const SensingTarget& target, const DDGrid& grid)
{
    return EchoModel(target, grid).field(X);
}

WaveformMoments waveform_moments(const EchoField& field, const TFFrame& X, const SensingTarget& target,
                                 const DDGrid& grid)
{
    return EchoModel(target, grid).moments(field, X);
}

FimEntries fim_entries(const WaveformMoments& m, const SensingTarget& target, const DDGrid& grid)
{
    const double s2 = target.sigma2;
    const double tau = target.tau;
    const double amp2 = std::norm(target.gain()) * std::norm(target.beta);
    const double mn = mn_of(grid);
    const double wT = 2.0 * kPi * grid.T();
    const double wF = 2.0 * kPi * grid.delta_f();

    FimEntries e;
    e.i_nunu = 2.0 * wT * wT * amp2 * m.s_n / (mn * s2);
    e.i_tautau = 8.0 * m.p_mu / (s2 * tau * tau) + 2.0 * wF * wF * amp2 * m.s_i / (mn * s2) -
                 8.0 * m.c_mutau / (s2 * tau);
    e.i_taunu = 2.0 * m.c_taunu / s2 - 4.0 * m.c_munu / (s2 * tau);
    return e;
}

FimResult fim(const WaveformMoments& m, const SensingTarget& target, const DDGrid& grid)
{
    const FimEntries e = fim_entries(m, target, grid);
    FimResult r;
    r.i_tautau = e.i_tautau;
    r.i_nunu = e.i_nunu;
    r.i_taunu = e.i_taunu;
    r.det = e.i_tautau * e.i_nunu - e.i_taunu * e.i_taunu;
    if (!(r.det > 0.0) || !std::isfinite(r.det)) {
        throw SingularFim("Fisher information is singular (det = " + std::to_string(r.det) + ")", m, e);
    }
    const CrbPair c = crb(r);
    r.crb_tau = c.tau;
    r.crb_nu = c.nu;
    return r;
}

CrbPair crb(const FimResult& f)
{
    if (!(f.det > 0.0)) {
        throw SingularFim("CRB undefined for a non-positive FIM determinant", {},
                          {f.i_tautau, f.i_nunu, f.i_taunu});
    }
    return {f.i_nunu / f.det, f.i_tautau / f.det};
}

FimResult sensing_for_precoders(const PrecoderSet& p, const StreamSymbols& s, const EchoModel& model)
{
    const TFFrame X = isfft(compose_tx(p, s), model.grid());
    return model.fim(X);
}

FimResult sensing_for_precoders(const PrecoderSet& p, const StreamSymbols& s, const SensingTarget& target,
                                const DDGrid& grid)
{
    return sensing_for_precoders(p, s, EchoModel(target, grid));
}

} // namespace ddisac
