#include "ddisac/validation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ddisac/channel.hpp"
#include "ddisac/comm_metrics.hpp"
#include "ddisac/errors.hpp"
#include "ddisac/oracles.hpp"
#include "ddisac/precoding.hpp"
#include "ddisac/rng.hpp"

namespace ddisac {

const std::vector<std::string>& validation_check_names()
{
    static const std::vector<std::string> names{"isfft", "channel", "lmmse", "derivatives", "fim", "crb", "power"};
    return names;
}

namespace {

constexpr std::size_t kUsers = 2;

double rel(double a, double b)
{
    const double scale = std::max(std::abs(b), 1e-300);
    return std::abs(a - b) / scale;
}

template <typename A, typename B>
double rel_norm(const A& got, const B& want)
{
    return (got - want).norm() / std::max(want.norm(), 1e-300);
}

CVector random_vector(std::size_t n, Rng& rng)
{
    CVector v(static_cast<Eigen::Index>(n));
    for (auto& x : v) {
        x = rng.complex_normal(1.0);
    }
    return v;
}

PrecoderSet random_precoders(const DDGrid& grid, double alpha, Rng& rng)
{
    std::vector<double> genes(chromosome_length(grid.n_dd(), kUsers));
    for (auto& g : genes) {
        g = rng.normal();
    }
    return decode_chromosome(genes, grid.n_dd(), kUsers, alpha, 1.0);
}

// Baseline sensing target at echo SNR 10 dB and unit transmit power.
SensingTarget table1_target()
{
    return SensingTarget::with_gain_at(1.0e-4, 4687.5, cplx(1.0, 0.0), 0.1, 0.01 / 10.0);
}

ImpairmentConfig table1_impairments()
{
    ImpairmentConfig imp;
    imp.sigma_n2 = std::pow(10.0, -2.5);
    imp.sigma_e2 = std::pow(10.0, -2.5);
    imp.theta.assign(kUsers, 0.03);
    imp.p_tot = 1.0;
    return imp;
}

TFFrame random_waveform(const DDGrid& grid, Rng& rng)
{
    const double alpha = 0.05 + 0.9 * rng.uniform();
    const PrecoderSet p = random_precoders(grid, alpha, rng);
    return isfft(compose_tx(p, StreamSymbols::draw(kUsers, rng)), grid);
}

struct Tracker {
    CheckResult r;
    Tracker(std::string name, double tol, std::size_t trials)
    {
        r.name = std::move(name);
        r.tolerance = tol;
        r.trials = trials;
    }
    void see(double err, const std::string& what)
    {
        if (!(err <= r.worst) || std::isnan(err)) {
            r.worst = std::isnan(err) ? INFINITY : err;
            r.detail = what;
        }
    }
    CheckResult done()
    {
        r.passed = r.worst < r.tolerance;
        return r;
    }
};

CheckResult check_isfft(const ValidationOptions& o)
{
    const DDGrid grid = DDGrid::table1();
    Rng rng(derive_seed(o.seed, 1, 0));
    Tracker t("isfft", 1e-12, o.trials);
    for (std::size_t k = 0; k < o.trials; ++k) {
        const DDFrame x{random_vector(grid.n_dd(), rng)};
        const TFFrame X = isfft(x, grid);
        t.see(rel_norm(X.values, oracle::isfft(x.values, grid)), "isfft vs direct DFT");
        t.see(rel_norm(sfft(X, grid).values, x.values), "sfft(isfft(x)) round trip");
        const TFFrame Y{oracle::isfft(random_vector(grid.n_dd(), rng), grid)};
        t.see(rel_norm(sfft(Y, grid).values, oracle::sfft(Y.values, grid)), "sfft vs direct inverse DFT");
        t.see(rel(X.values.norm(), x.values.norm()), "Parseval");
    }
    return t.done();
}

CheckResult check_channel(const ValidationOptions& o)
{
    const DDGrid grid = DDGrid::table1();
    Rng rng(derive_seed(o.seed, 2, 0));
    Tracker t("channel", 1e-12, o.trials);
    for (std::size_t k = 0; k < o.trials; ++k) {
        const PathSet paths = gen_paths(grid, PathConfig::table1(), rng);
        const EffectiveChannel H = build_effective(paths, grid);
        const CVector x = random_vector(grid.n_dd(), rng);
        t.see(rel_norm(CVector(H.matrix * x), oracle::apply_channel(paths, grid, x)), "H x vs path sum");
    }
    return t.done();
}

CheckResult check_lmmse(const ValidationOptions& o)
{
    const DDGrid grid = DDGrid::table1();
    Rng rng(derive_seed(o.seed, 3, 0));
    Tracker t("lmmse", 1e-9, o.trials);
    const ImpairmentConfig imp = table1_impairments();
    for (std::size_t k = 0; k < o.trials; ++k) {
        const double alpha = 0.05 + 0.9 * rng.uniform();
        const PrecoderSet p = random_precoders(grid, alpha, rng);
        const PathSet paths = gen_paths(grid, PathConfig::table1(), rng);
        const CMatrix h_hat = apply_icsi(paths, grid, imp.sigma_e2, rng).estimate.matrix;
        for (std::size_t u = 0; u < kUsers; ++u) {
            const UserFilters f = lmmse_filters(h_hat, p, imp, u);
            const UserFilters g = oracle::lmmse(h_hat, p, imp, u);
            t.see(rel_norm(f.w_c, g.w_c), "common filter vs dense LU solve");
            t.see(rel_norm(f.w_p, g.w_p), "private filter vs dense LU solve");
            t.see(rel(sinr_common(f, h_hat, p, imp), oracle::sinr_common(f, h_hat, p, imp)), "common SINR expansion");
            t.see(rel(sinr_private(f, h_hat, p, imp, u), oracle::sinr_private(f, h_hat, p, imp, u)),
                  "private SINR expansion");
        }
    }
    return t.done();
}

CheckResult check_derivatives(const ValidationOptions& o)
{
    const DDGrid grid = DDGrid::table1();
    Rng rng(derive_seed(o.seed, 4, 0));
    Tracker t("derivatives", 1e-6, o.trials);
    const SensingTarget target = table1_target();
    const double h_nu = 1e-4 * grid.doppler_resolution();
    const double h_tau = 1e-4 * grid.delay_resolution();
    for (std::size_t k = 0; k < o.trials; ++k) {
        const TFFrame X = random_waveform(grid, rng);
        const EchoField f = echo_derivatives(X, target, grid);
        t.see(rel_norm(f.mu, oracle::echo_mean(X.values, target, grid)), "mean echo vs quadruple sum");

        SensingTarget up = target;
        SensingTarget dn = target;
        up.nu += h_nu;
        dn.nu -= h_nu;
        const CMatrix fd_nu =
            (oracle::echo_mean(X.values, up, grid) - oracle::echo_mean(X.values, dn, grid)) / (2.0 * h_nu);
        t.see(rel_norm(f.d_nu, fd_nu), "d mu / d nu vs central difference");

        up = target;
        dn = target;
        up.tau += h_tau;
        dn.tau -= h_tau;
        const CMatrix fd_tau =
            (oracle::echo_mean(X.values, up, grid) - oracle::echo_mean(X.values, dn, grid)) / (2.0 * h_tau);
        t.see(rel_norm(f.d_tau, fd_tau), "d mu / d tau vs central difference");
    }
    return t.done();
}

CheckResult check_fim(const ValidationOptions& o)
{
    const DDGrid grid = DDGrid::table1();
    Rng rng(derive_seed(o.seed, 5, 0));
    Tracker t("fim", 1e-9, o.trials);
    const SensingTarget target = table1_target();
    const FimFormula formula = o.fim_formula ? o.fim_formula : FimFormula(fim_entries);
    for (std::size_t k = 0; k < o.trials; ++k) {
        const TFFrame X = random_waveform(grid, rng);
        const EchoField field = echo_derivatives(X, target, grid);
        const FimEntries closed = formula(waveform_moments(field, X, target, grid), target, grid);
        const FimEntries generic = oracle::generic_fim(oracle::echo_field(X.values, target, grid), target);
        t.see(rel(closed.i_tautau, generic.i_tautau), "I_tautau closed form vs generic");
        t.see(rel(closed.i_nunu, generic.i_nunu), "I_nunu closed form vs generic");
        t.see(rel(closed.i_taunu, generic.i_taunu), "I_taunu closed form vs generic");
    }
    return t.done();
}

CheckResult check_crb(const ValidationOptions& o)
{
    const DDGrid grid = DDGrid::table1();
    Rng rng(derive_seed(o.seed, 6, 0));
    Tracker t("crb", 1e-12, o.trials);
    const SensingTarget target = table1_target();
    for (std::size_t k = 0; k < o.trials; ++k) {
        const TFFrame X = random_waveform(grid, rng);
        const FimResult f = EchoModel(target, grid).fim(X);
        const CrbPair want = oracle::crb_by_inverse({f.i_tautau, f.i_nunu, f.i_taunu});
        t.see(rel(f.crb_tau, want.tau), "CRB(tau) vs matrix inverse");
        t.see(rel(f.crb_nu, want.nu), "CRB(nu) vs matrix inverse");
    }
    return t.done();
}

CheckResult check_power(const ValidationOptions& o)
{
    const DDGrid grid = DDGrid::table1();
    Rng rng(derive_seed(o.seed, 7, 0));
    Tracker t("power", 1e-12, o.trials);
    for (std::size_t k = 0; k < o.trials; ++k) {
        const double alpha = rng.uniform();
        const double p_max = 0.1 + 10.0 * rng.uniform();
        std::vector<double> genes(chromosome_length(grid.n_dd(), kUsers));
        for (auto& g : genes) {
            g = 5.0 * rng.normal();
        }
        const PrecoderSet p = decode_chromosome(genes, grid.n_dd(), kUsers, alpha, p_max);
        t.see(rel(p.total_power(), p_max), "total power");
        t.see(std::abs(p.common_power() - alpha * p_max) / p_max, "common block power");
        t.see(std::abs(p.private_power() - (1.0 - alpha) * p_max) / p_max, "private block power");
    }
    return t.done();
}

} // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& options)
{
    for (const auto& c : options.checks) {
        const auto& names = validation_check_names();
        if (std::find(names.begin(), names.end(), c) == names.end()) {
            throw InvalidInput("unknown check `" + c + "`");
        }
    }
    auto wanted = [&](const std::string& name) {
        return options.checks.empty() ||
               std::find(options.checks.begin(), options.checks.end(), name) != options.checks.end();
    };
    std::vector<CheckResult> out;
    if (wanted("isfft")) out.push_back(check_isfft(options));
    if (wanted("channel")) out.push_back(check_channel(options));
    if (wanted("lmmse")) out.push_back(check_lmmse(options));
    if (wanted("derivatives")) out.push_back(check_derivatives(options));
    if (wanted("fim")) out.push_back(check_fim(options));
    if (wanted("crb")) out.push_back(check_crb(options));
    if (wanted("power")) out.push_back(check_power(options));
    return out;
}

} // namespace ddisac
