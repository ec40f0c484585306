#include "ddisac/comm_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddisac/errors.hpp"

namespace ddisac {

void ImpairmentConfig::validate(std::size_t users) const
{
    if (!(sigma_n2 >= 0.0) || !(sigma_e2 >= 0.0) || !(p_tot >= 0.0)) {
        throw InvalidInput("impairment variances and power must be >= 0");
    }
    if (theta.size() != users) {
        throw InvalidInput("need one SIC residual factor per user, got " + std::to_string(theta.size()));
    }
    for (double t : theta) {
        if (!(t >= 0.0 && t <= 1.0)) {
            throw InvalidInput("SIC residual factor must lie in [0, 1]");
        }
    }
}

double CommMetrics::min_rate_c() const
{
    return rate_c.empty() ? 0.0 : *std::min_element(rate_c.begin(), rate_c.end());
}

namespace {

constexpr double kRidge = 1e-12;

void check_dims(const CMatrix& h_hat, const PrecoderSet& p, std::size_t user)
{
    const auto n = static_cast<Eigen::Index>(p.n_dd());
    if (h_hat.rows() != n || h_hat.cols() != n) {
        throw InvalidInput("channel estimate does not match precoder dimension");
    }
    if (user >= p.users()) {
        throw InvalidInput("user index out of range");
    }
}

// Received stream directions A = H_hat [P_c, P_1 .. P_K].
CMatrix stream_directions(const CMatrix& h_hat, const PrecoderSet& p)
{
    CMatrix A(h_hat.rows(), static_cast<Eigen::Index>(p.users()) + 1);
    A.col(0).noalias() = h_hat * p.common;
    for (std::size_t j = 0; j < p.users(); ++j) {
        A.col(static_cast<Eigen::Index>(j) + 1).noalias() = h_hat * p.privates[j];
    }
    return A;
}

// Solves (A D A^H + noise I) y = A e_s with D = diag(d). Any x with
// (noise I + D G) x = e_s, G = A^H A, gives y = A x, so only a
// (K+1) x (K+1) system is factored.
CVector covariance_solve(const CMatrix& A, const CMatrix& gram, const Eigen::VectorXd& d, double noise,
                         Eigen::Index s, bool& regularized)
{
    const Eigen::Index r = gram.rows();
    auto system = [&](double nu) {
        CMatrix S = d.cast<cplx>().asDiagonal() * gram;
        S.diagonal().array() += nu;
        return S;
    };
    Eigen::PartialPivLU<CMatrix> lu(system(noise));
    if (!(lu.rcond() > 1e-15)) {
        lu.compute(system(noise + kRidge));
        regularized = true;
    }
    return A * lu.solve(CVector::Unit(r, s));
}

} // namespace

UserFilters lmmse_filters(const CMatrix& h_hat, const PrecoderSet& p, const ImpairmentConfig& imp,
                          std::size_t user)
{
    check_dims(h_hat, p, user);
    const CMatrix A = stream_directions(h_hat, p);
    const CMatrix gram = A.adjoint() * A;
    const double noise = imp.effective_noise();

    Eigen::VectorXd d = Eigen::VectorXd::Ones(A.cols());
    UserFilters f;
    // w = a^H R^-1  <=>  w^H = R^-1 a for Hermitian R.
    f.w_c = covariance_solve(A, gram, d, noise, 0, f.regularized).adjoint();
    d[0] = imp.sic_aware_filter ? imp.theta.at(user) : 1.0;
    f.w_p = covariance_solve(A, gram, d, noise, static_cast<Eigen::Index>(user) + 1, f.regularized).adjoint();
    return f;
}

double sinr_common(const UserFilters& f, const CMatrix& h_hat, const PrecoderSet& p,
                   const ImpairmentConfig& imp)
{
    const CRowVector wh = f.w_c * h_hat;
    const double signal = std::norm((wh * p.common)(0));
    if (signal == 0.0) {
        return 0.0;
    }
    double interference = 0.0;
    for (const auto& pj : p.privates) {
        interference += std::norm((wh * pj)(0));
    }
    const double noise = f.w_c.squaredNorm() * imp.effective_noise();
    return signal / (interference + noise);
}

double PrivateSinrTerms::sinr() const noexcept
{
    if (signal == 0.0) {
        return 0.0;
    }
    return signal / (inter_user + residual_common + noise);
}

PrivateSinrTerms private_sinr_terms(const UserFilters& f, const CMatrix& h_hat, const PrecoderSet& p,
                                    const ImpairmentConfig& imp, std::size_t user)
{
    check_dims(h_hat, p, user);
    const CRowVector wh = f.w_p * h_hat;
    PrivateSinrTerms t;
    for (std::size_t j = 0; j < p.users(); ++j) {
        const double g = std::norm((wh * p.privates[j])(0));
        if (j == user) {
            t.signal = g;
        } else {
            t.inter_user += g;
        }
    }
    t.residual_common = imp.theta.at(user) * std::norm((wh * p.common)(0));
    t.noise = f.w_p.squaredNorm() * imp.effective_noise();
    return t;
}

double sinr_private(const UserFilters& f, const CMatrix& h_hat, const PrecoderSet& p,
                    const ImpairmentConfig& imp, std::size_t user)
{
    return private_sinr_terms(f, h_hat, p, imp, user).sinr();
}

CommMetrics evaluate_comm(std::span<const CMatrix> h_hat, const PrecoderSet& p,
                          const ImpairmentConfig& imp, double r_c_req)
{
    const std::size_t K = p.users();
    if (h_hat.size() != K) {
        throw InvalidInput("need one channel estimate per user");
    }
    imp.validate(K);
    CommMetrics m;
    m.sinr_c.resize(K);
    m.sinr_p.resize(K);
    m.rate_c.resize(K);
    m.rate_p.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        const UserFilters f = lmmse_filters(h_hat[k], p, imp, k);
        m.regularized = m.regularized || f.regularized;
        m.sinr_c[k] = sinr_common(f, h_hat[k], p, imp);
        m.sinr_p[k] = sinr_private(f, h_hat[k], p, imp, k);
        m.rate_c[k] = std::log2(1.0 + m.sinr_c[k]);
        m.rate_p[k] = std::log2(1.0 + m.sinr_p[k]);
    }
    m.r_min = K == 0 ? 0.0 : *std::min_element(m.rate_p.begin(), m.rate_p.end());
    m.rc_met = m.min_rate_c() >= r_c_req;
    return m;
}

} // namespace ddisac
