#include "ddisac/oracles.hpp"

#include <cmath>

#include <Eigen/LU>

namespace ddisac::oracle {

namespace {

const cplx J(0.0, 1.0);

cplx cexpj(double phase)
{
    return std::exp(J * phase);
}

long long mod(long long v, long long n)
{
    return ((v % n) + n) % n;
}

} // namespace

CMatrix isfft(const CVector& x, const DDGrid& grid)
{
    const long long M = static_cast<long long>(grid.M());
    const long long N = static_cast<long long>(grid.N());
    CMatrix X = CMatrix::Zero(N, M);
    for (long long n = 0; n < N; ++n) {
        for (long long i = 0; i < M; ++i) {
            cplx acc = 0.0;
            for (long long l = 0; l < M; ++l) {
                for (long long m = 0; m < N; ++m) {
                    const double ph = 2.0 * kPi * (static_cast<double>(n * m) / N - static_cast<double>(i * l) / M);
                    acc += x[m * M + l] * cexpj(ph);
                }
            }
            X(n, i) = acc / std::sqrt(static_cast<double>(N * M));
        }
    }
    return X;
}

CVector sfft(const CMatrix& X, const DDGrid& grid)
{
    const long long M = static_cast<long long>(grid.M());
    const long long N = static_cast<long long>(grid.N());
    CVector x = CVector::Zero(N * M);
    for (long long l = 0; l < M; ++l) {
        for (long long m = 0; m < N; ++m) {
            cplx acc = 0.0;
            for (long long n = 0; n < N; ++n) {
                for (long long i = 0; i < M; ++i) {
                    const double ph = -2.0 * kPi * (static_cast<double>(n * m) / N - static_cast<double>(i * l) / M);
                    acc += X(n, i) * cexpj(ph);
                }
            }
            x[m * M + l] = acc / std::sqrt(static_cast<double>(N * M));
        }
    }
    return x;
}

CVector apply_channel(const PathSet& paths, const DDGrid& grid, const CVector& x)
{
    const long long M = static_cast<long long>(grid.M());
    const long long N = static_cast<long long>(grid.N());
    CVector y = CVector::Zero(M * N);
    for (long long l = 0; l < M; ++l) {
        for (long long m = 0; m < N; ++m) {
            cplx acc = 0.0;
            for (std::size_t p = 0; p < paths.size(); ++p) {
                const long long lp = paths.delays[p];
                const long long kp = paths.dopplers[p];
                const double ph = 2.0 * kPi * static_cast<double>((l - lp) * kp) / static_cast<double>(M * N);
                acc += paths.gains[p] * cexpj(ph) * x[mod(m - kp, N) * M + mod(l - lp, M)];
            }
            y[m * M + l] = acc;
        }
    }
    return y;
}

UserFilters lmmse(const CMatrix& h_hat, const PrecoderSet& p, const ImpairmentConfig& imp, std::size_t user)
{
    const Eigen::Index n = h_hat.rows();
    const Eigen::Index K = static_cast<Eigen::Index>(p.users());
    // Stacked effective streams A = H_hat [P_c, P_1 .. P_K] with per-stream weights.
    CMatrix A(n, K + 1);
    A.col(0) = h_hat * p.common;
    for (Eigen::Index j = 0; j < K; ++j) {
        A.col(j + 1) = h_hat * p.privates[static_cast<std::size_t>(j)];
    }
    const double noise = imp.sigma_n2 + imp.sigma_e2 * imp.p_tot;
    auto covariance = [&](double common_weight) {
        Eigen::VectorXd d = Eigen::VectorXd::Ones(K + 1);
        d[0] = common_weight;
        CMatrix R = A * d.cast<cplx>().asDiagonal() * A.adjoint();
        for (Eigen::Index i = 0; i < n; ++i) {
            R(i, i) += noise;
        }
        return R;
    };
    const double theta = imp.sic_aware_filter ? imp.theta.at(user) : 1.0;
    const CMatrix Rc = covariance(1.0);
    const CMatrix Rp = covariance(theta);
    UserFilters f;
    // w R = v^H  <=>  R^T w^T = conj(v).
    f.w_c = Rc.transpose().fullPivLu().solve(A.col(0).conjugate()).transpose();
    f.w_p = Rp.transpose().fullPivLu().solve(A.col(static_cast<Eigen::Index>(user) + 1).conjugate()).transpose();
    return f;
}

namespace {

cplx row_times(const CRowVector& w, const CMatrix& H, const CVector& v)
{
    cplx acc = 0.0;
    for (Eigen::Index r = 0; r < H.rows(); ++r) {
        cplx hv = 0.0;
        for (Eigen::Index c = 0; c < H.cols(); ++c) {
            hv += H(r, c) * v[c];
        }
        acc += w[r] * hv;
    }
    return acc;
}

double sq_norm(const CRowVector& w)
{
    double s = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        s += std::norm(w[i]);
    }
    return s;
}

} // namespace

double sinr_common(const UserFilters& f, const CMatrix& h_hat, const PrecoderSet& p, const ImpairmentConfig& imp)
{
    const double signal = std::norm(row_times(f.w_c, h_hat, p.common));
    if (signal == 0.0) {
        return 0.0;
    }
    double denom = sq_norm(f.w_c) * (imp.sigma_n2 + imp.sigma_e2 * imp.p_tot);
    for (const auto& pj : p.privates) {
        denom += std::norm(row_times(f.w_c, h_hat, pj));
    }
    return signal / denom;
}

double sinr_private(const UserFilters& f, const CMatrix& h_hat, const PrecoderSet& p, const ImpairmentConfig& imp,
                    std::size_t user)
{
    const double signal = std::norm(row_times(f.w_p, h_hat, p.privates[user]));
    if (signal == 0.0) {
        return 0.0;
    }
    double denom = sq_norm(f.w_p) * (imp.sigma_n2 + imp.sigma_e2 * imp.p_tot);
    denom += imp.theta.at(user) * std::norm(row_times(f.w_p, h_hat, p.common));
    for (std::size_t j = 0; j < p.users(); ++j) {
        if (j != user) {
            denom += std::norm(row_times(f.w_p, h_hat, p.privates[j]));
        }
    }
    return signal / denom;
}

namespace {

// Quadruple sum of weight(n, i) X[n,i] exp(j phi_{n,i,l,k}).
template <typename Weight>
CMatrix quad_sum(const CMatrix& X, const SensingTarget& t, const DDGrid& grid, Weight weight)
{
    const auto M = static_cast<long long>(grid.M());
    const auto N = static_cast<long long>(grid.N());
    const double Md = static_cast<double>(M);
    const double Nd = static_cast<double>(N);
    CMatrix out(M, N);
    for (long long l = 0; l < M; ++l) {
        for (long long k = 0; k < N; ++k) {
            cplx acc = 0.0;
            for (long long n = 0; n < N; ++n) {
                for (long long i = 0; i < M; ++i) {
                    const double phi = 2.0 * kPi *
                                       (static_cast<double>(n) * (t.nu * grid.T() - static_cast<double>(l) / Nd) -
                                        static_cast<double>(i) * (t.tau * grid.delta_f() - static_cast<double>(k) / Md));
                    acc += weight(n, i) * X(n, i) * cexpj(phi);
                }
            }
            out(l, k) = acc;
        }
    }
    return out;
}

} // namespace

CMatrix echo_mean(const CMatrix& X, const SensingTarget& t, const DDGrid& grid)
{
    const double alpha = t.gain_const / (t.tau * t.tau);
    const cplx c = alpha * t.beta / std::sqrt(static_cast<double>(grid.M() * grid.N()));
    return c * quad_sum(X, t, grid, [](long long, long long) { return 1.0; });
}

EchoField echo_field(const CMatrix& X, const SensingTarget& t, const DDGrid& grid)
{
    const double alpha = t.gain_const / (t.tau * t.tau);
    const cplx c = alpha * t.beta / std::sqrt(static_cast<double>(grid.M() * grid.N()));
    EchoField f;
    f.mu = echo_mean(X, t, grid);
    f.d_nu = J * 2.0 * kPi * grid.T() * c *
             quad_sum(X, t, grid, [](long long n, long long) { return static_cast<double>(n); });
    f.d_gain = (-2.0 / t.tau) * f.mu;
    f.d_phase_tau = -J * 2.0 * kPi * grid.delta_f() * c *
                    quad_sum(X, t, grid, [](long long, long long i) { return static_cast<double>(i); });
    f.d_tau = f.d_gain + f.d_phase_tau;
    return f;
}

FimEntries generic_fim(const EchoField& field, const SensingTarget& t)
{
    auto re_inner = [](const CMatrix& a, const CMatrix& b) {
        double s = 0.0;
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            for (Eigen::Index r = 0; r < a.rows(); ++r) {
                s += (std::conj(a(r, c)) * b(r, c)).real();
            }
        }
        return s;
    };
    const double g = 2.0 / t.sigma2;
    return {g * re_inner(field.d_tau, field.d_tau), g * re_inner(field.d_nu, field.d_nu),
            g * re_inner(field.d_tau, field.d_nu)};
}

CrbPair crb_by_inverse(const FimEntries& e)
{
    Eigen::Matrix2d I;
    I << e.i_tautau, e.i_taunu, e.i_taunu, e.i_nunu;
    const Eigen::Matrix2d inv = I.partialPivLu().inverse();
    return {inv(0, 0), inv(1, 1)};
}

} // namespace ddisac::oracle
