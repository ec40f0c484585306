#include <doctest.h>

#include <cmath>

#include "ddisac/comm_metrics.hpp"
#include "ddisac/errors.hpp"
#include "ddisac/oracles.hpp"
#include "ddisac/precoding.hpp"
#include "ddisac/rng.hpp"

using namespace ddisac;

namespace {

CMatrix random_matrix(Eigen::Index n, Rng& rng)
{
    CMatrix m(n, n);
    for (Eigen::Index k = 0; k < m.size(); ++k) {
        m.data()[k] = rng.complex_normal(1.0);
    }
    return m;
}

CVector random_vector(Eigen::Index n, Rng& rng, double var = 1.0)
{
    CVector v(n);
    for (auto& x : v) {
        x = rng.complex_normal(var);
    }
    return v;
}

PrecoderSet random_precoders(Eigen::Index n, std::size_t users, double alpha, Rng& rng)
{
    PrecoderSet p;
    p.common = random_vector(n, rng);
    for (std::size_t k = 0; k < users; ++k) {
        p.privates.push_back(random_vector(n, rng));
    }
    return normalize_power(p, alpha, 1.0);
}

ImpairmentConfig impairments(std::size_t users, double sigma_n2, double sigma_e2, double theta)
{
    ImpairmentConfig imp;
    imp.sigma_n2 = sigma_n2;
    imp.sigma_e2 = sigma_e2;
    imp.theta.assign(users, theta);
    imp.p_tot = 1.0;
    return imp;
}

// Classic MMSE output SINR: a^H (interference + noise)^-1 a.
double textbook_sinr(const CVector& a, const CMatrix& interference_plus_noise)
{
    return std::real((a.adjoint() * interference_plus_noise.fullPivLu().solve(a))(0));
}

} // namespace

TEST_CASE("scalar common stream: filter scale and SINR")
{
    const double P = 2.0;
    const double nu = 0.25;
    PrecoderSet p;
    p.common = CVector::Zero(32);
    p.common[0] = std::sqrt(P);
    p.privates.assign(1, CVector::Zero(32));
    p.alpha = 1.0;
    p.p_max = P;
    const ImpairmentConfig imp = impairments(1, nu, 0.0, 0.0);
    const CMatrix I = CMatrix::Identity(32, 32);

    const UserFilters f = lmmse_filters(I, p, imp, 0);
    CRowVector want = CRowVector::Zero(32);
    want[0] = std::sqrt(P) / (P + nu);
    CHECK((f.w_c - want).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(sinr_common(f, I, p, imp) == doctest::Approx(P / nu).epsilon(1e-12));

    // Matched filter on the only nonzero component gives P / sigma_n2 too.
    UserFilters matched;
    matched.w_c = CRowVector::Zero(32);
    matched.w_c[0] = 1.0;
    matched.w_p = CRowVector::Zero(32);
    CHECK(sinr_common(matched, I, p, imp) == doctest::Approx(P / nu).epsilon(1e-12));

    // No private power: private SINR is zero, not NaN.
    CHECK(sinr_private(f, I, p, imp, 0) == 0.0);
}

TEST_CASE("filters match explicit covariance solves")
{
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const CMatrix H = random_matrix(32, rng);
        const PrecoderSet p = random_precoders(32, 2, rng.uniform(), rng);
        for (bool aware : {true, false}) {
            ImpairmentConfig imp = impairments(2, 0.01, 0.003, rng.uniform());
            imp.sic_aware_filter = aware;
            for (std::size_t k = 0; k < 2; ++k) {
                const UserFilters f = lmmse_filters(H, p, imp, k);
                const UserFilters ref = oracle::lmmse(H, p, imp, k);
                CHECK((f.w_c - ref.w_c).norm() <= 1e-9 * ref.w_c.norm());
                CHECK((f.w_p - ref.w_p).norm() <= 1e-9 * ref.w_p.norm());
                CHECK(sinr_common(f, H, p, imp) ==
                      doctest::Approx(oracle::sinr_common(f, H, p, imp)).epsilon(1e-10));
                CHECK(sinr_private(f, H, p, imp, k) ==
                      doctest::Approx(oracle::sinr_private(f, H, p, imp, k)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("SINRs equal the classic MMSE output SINR")
{
    Rng rng(13);
    const Eigen::Index n = 4;
    for (int trial = 0; trial < 50; ++trial) {
        const CMatrix H = random_matrix(n, rng);
        const PrecoderSet p = random_precoders(n, 2, 0.1 + 0.8 * rng.uniform(), rng);
        const double theta = trial % 2 == 0 ? 0.0 : rng.uniform();
        const ImpairmentConfig imp = impairments(2, 0.05, 0.0, theta);
        const double nu = imp.effective_noise();
        const CVector ac = H * p.common;
        const CVector a1 = H * p.privates[0];
        const CVector a2 = H * p.privates[1];
        const CMatrix noise = nu * CMatrix::Identity(n, n);

        const UserFilters f = lmmse_filters(H, p, imp, 0);
        const double want_c = textbook_sinr(ac, a1 * a1.adjoint() + a2 * a2.adjoint() + noise);
        CHECK(sinr_common(f, H, p, imp) == doctest::Approx(want_c).epsilon(1e-9));
        const double want_p = textbook_sinr(a1, theta * ac * ac.adjoint() + a2 * a2.adjoint() + noise);
        CHECK(sinr_private(f, H, p, imp, 0) == doctest::Approx(want_p).epsilon(1e-9));
    }
}

TEST_CASE("no random filter perturbation beats the LMMSE common filter")
{
    Rng rng(14);
    const CMatrix H = random_matrix(32, rng);
    const PrecoderSet p = random_precoders(32, 2, 0.4, rng);
    const ImpairmentConfig imp = impairments(2, 0.01, 0.003, 0.03);
    const UserFilters f = lmmse_filters(H, p, imp, 0);
    const double best = sinr_common(f, H, p, imp);
    int worse_or_equal = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        UserFilters g = f;
        g.w_c += 0.05 * f.w_c.norm() * random_vector(32, rng).transpose() / std::sqrt(32.0);
        worse_or_equal += sinr_common(g, H, p, imp) <= best * (1.0 + 1e-12) ? 1 : 0;
    }
    CHECK(worse_or_equal == 1000);
}

TEST_CASE("private SINR falls as residual SIC error and ICSI grow")
{
    Rng rng(15);
    for (int trial = 0; trial < 10; ++trial) {
        const CMatrix H = random_matrix(32, rng);
        const PrecoderSet p = random_precoders(32, 2, 0.5, rng);
        double last = std::numeric_limits<double>::infinity();
        for (double theta : {0.0, 0.03, 0.5, 1.0}) {
            const ImpairmentConfig imp = impairments(2, 0.01, 0.003, theta);
            const double s = sinr_private(lmmse_filters(H, p, imp, 1), H, p, imp, 1);
            CHECK(s <= last);
            last = s;
        }
        double last_e = std::numeric_limits<double>::infinity();
        for (double se : {0.0, 1e-3, 1e-2, 1e-1}) {
            const ImpairmentConfig imp = impairments(2, 0.01, se, 0.03);
            const double s = sinr_private(lmmse_filters(H, p, imp, 0), H, p, imp, 0);
            CHECK(s < last_e);
            last_e = s;
        }
    }
}

TEST_CASE("residual common term vanishes with perfect SIC")
{
    Rng rng(16);
    const CMatrix H = random_matrix(32, rng);
    const PrecoderSet p = random_precoders(32, 1, 0.5, rng);
    const ImpairmentConfig imp = impairments(1, 0.01, 0.0, 0.0);
    const PrivateSinrTerms t = private_sinr_terms(lmmse_filters(H, p, imp, 0), H, p, imp, 0);
    CHECK(t.residual_common == 0.0);
    CHECK(t.inter_user == 0.0);
    CHECK(t.signal > 0.0);
}

TEST_CASE("full residual with an aware filter equals the unaware filter")
{
    Rng rng(17);
    const CMatrix H = random_matrix(32, rng);
    const PrecoderSet p = random_precoders(32, 2, 0.3, rng);
    ImpairmentConfig aware = impairments(2, 0.01, 0.003, 1.0);
    ImpairmentConfig unaware = aware;
    unaware.sic_aware_filter = false;
    const UserFilters a = lmmse_filters(H, p, aware, 0);
    const UserFilters b = lmmse_filters(H, p, unaware, 0);
    CHECK((a.w_p - b.w_p).norm() <= 1e-12 * b.w_p.norm());
}

TEST_CASE("SINRs are invariant to a joint power and noise scaling")
{
    Rng rng(18);
    const CMatrix H = random_matrix(32, rng);
    const PrecoderSet p = random_precoders(32, 2, 0.3, rng);
    const ImpairmentConfig imp = impairments(2, 0.01, 0.003, 0.03);
    const double c = 7.5;
    PrecoderSet q = p;
    q.common *= std::sqrt(c);
    for (auto& v : q.privates) {
        v *= std::sqrt(c);
    }
    ImpairmentConfig scaled = imp;
    scaled.sigma_n2 *= c;
    scaled.p_tot *= c;
    for (std::size_t k = 0; k < 2; ++k) {
        const double a = sinr_common(lmmse_filters(H, p, imp, k), H, p, imp);
        const double b = sinr_common(lmmse_filters(H, q, scaled, k), H, q, scaled);
        CHECK(b == doctest::Approx(a).epsilon(1e-10));
        const double x = sinr_private(lmmse_filters(H, p, imp, k), H, p, imp, k);
        const double y = sinr_private(lmmse_filters(H, q, scaled, k), H, q, scaled, k);
        CHECK(y == doctest::Approx(x).epsilon(1e-10));
    }
}

TEST_CASE("identical users get identical rates")
{
    Rng rng(19);
    const CMatrix H = random_matrix(32, rng);
    PrecoderSet p = random_precoders(32, 2, 0.3, rng);
    p.privates[1] = p.privates[0];
    p = normalize_power(p, 0.3, 1.0);
    const std::vector<CMatrix> hs{H, H};
    const CommMetrics m = evaluate_comm(hs, p, impairments(2, 0.01, 0.003, 0.03), 0.1);
    CHECK(m.rate_p[0] == doctest::Approx(m.rate_p[1]).epsilon(1e-12));
    CHECK(m.rate_c[0] == doctest::Approx(m.rate_c[1]).epsilon(1e-12));
    CHECK(m.r_min == doctest::Approx(m.rate_p[0]).epsilon(1e-12));
}

TEST_CASE("power-split endpoints")
{
    Rng rng(20);
    const std::vector<CMatrix> hs{random_matrix(32, rng), random_matrix(32, rng)};
    const ImpairmentConfig imp = impairments(2, std::pow(10.0, -2.5), std::pow(10.0, -2.5), 0.03);

    const CommMetrics all_common = evaluate_comm(hs, random_precoders(32, 2, 1.0, rng), imp, 0.1);
    CHECK(all_common.r_min == 0.0);
    CHECK(all_common.rc_met);

    const CommMetrics no_common = evaluate_comm(hs, random_precoders(32, 2, 0.0, rng), imp, 0.1);
    CHECK(no_common.min_rate_c() == 0.0);
    CHECK_FALSE(no_common.rc_met);
    CHECK(no_common.r_min > 0.0);
    for (double r : no_common.rate_p) {
        CHECK(std::isfinite(r));
    }
}

TEST_CASE("impairment validation")
{
    ImpairmentConfig imp = impairments(2, 0.01, 0.0, 0.03);
    CHECK_NOTHROW(imp.validate(2));
    CHECK_THROWS_AS(imp.validate(3), InvalidInput);
    imp.theta[0] = 1.5;
    CHECK_THROWS_AS(imp.validate(2), InvalidInput);
    imp = impairments(2, -1.0, 0.0, 0.0);
    CHECK_THROWS_AS(imp.validate(2), InvalidInput);

    Rng rng(1);
    const PrecoderSet p = random_precoders(32, 2, 0.5, rng);
    CHECK_THROWS_AS(lmmse_filters(CMatrix::Identity(16, 16), p, impairments(2, 0.01, 0, 0), 0), InvalidInput);
    CHECK_THROWS_AS(lmmse_filters(CMatrix::Identity(32, 32), p, impairments(2, 0.01, 0, 0), 2), InvalidInput);
}
