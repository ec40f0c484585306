#include "ddisac/precoding.hpp"

#include <cmath>
#include <string>

#include "ddisac/errors.hpp"

namespace ddisac {

double PrecoderSet::private_power() const noexcept
{
    double e = 0.0;
    for (const auto& v : privates) {
        e += v.squaredNorm();
    }
    return e;
}

StreamSymbols StreamSymbols::draw(std::size_t users, Rng& rng)
{
    StreamSymbols s;
    s.common = rng.unit_phase();
    s.privates.reserve(users);
    for (std::size_t k = 0; k < users; ++k) {
        s.privates.push_back(rng.unit_phase());
    }
    return s;
}

PrecoderSet normalize_power(PrecoderSet p, double alpha, double p_max)
{
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw InvalidInput("alpha must lie in [0, 1]");
    }
    if (!(p_max > 0.0) || !std::isfinite(p_max)) {
        throw InvalidInput("P_max must be positive");
    }
    p.alpha = alpha;
    p.p_max = p_max;

    const double common_target = alpha * p_max;
    const double private_target = (1.0 - alpha) * p_max;

    if (common_target == 0.0) {
        p.common.setZero();
    } else {
        const double e = p.common_power();
        if (!(e > 0.0) || !std::isfinite(e)) {
            throw DegeneratePrecoder("common precoder has no power to scale to alpha * P_max");
        }
        p.common *= std::sqrt(common_target / e);
    }

    if (private_target == 0.0) {
        for (auto& v : p.privates) {
            v.setZero();
        }
    } else {
        const double e = p.private_power();
        if (!(e > 0.0) || !std::isfinite(e)) {
            throw DegeneratePrecoder("private precoders have no power to scale to (1 - alpha) * P_max");
        }
        const double s = std::sqrt(private_target / e);
        for (auto& v : p.privates) {
            v *= s;
        }
    }
    return p;
}

PrecoderSet decode_chromosome(std::span<const double> genes, std::size_t n_dd, std::size_t users,
                              double alpha, double p_max)
{
    const std::size_t expected = chromosome_length(n_dd, users);
    if (genes.size() != expected) {
        throw InvalidInput("chromosome has " + std::to_string(genes.size()) + " genes, expected " +
                           std::to_string(expected));
    }
    auto block = [&](std::size_t b) {
        CVector v(n_dd);
        const double* g = genes.data() + 2 * n_dd * b;
        for (std::size_t d = 0; d < n_dd; ++d) {
            v[d] = cplx(g[2 * d], g[2 * d + 1]);
        }
        return v;
    };
    PrecoderSet p;
    p.common = block(0);
    p.privates.reserve(users);
    for (std::size_t k = 0; k < users; ++k) {
        p.privates.push_back(block(k + 1));
    }
    return normalize_power(std::move(p), alpha, p_max);
}

std::vector<double> encode_chromosome(const PrecoderSet& p)
{
    std::vector<double> genes;
    genes.reserve(chromosome_length(p.n_dd(), p.users()));
    auto push = [&](const CVector& v) {
        for (Eigen::Index d = 0; d < v.size(); ++d) {
            genes.push_back(v[d].real());
            genes.push_back(v[d].imag());
        }
    };
    push(p.common);
    for (const auto& v : p.privates) {
        push(v);
    }
    return genes;
}

DDFrame compose_tx(const PrecoderSet& p, const StreamSymbols& s)
{
    if (s.privates.size() != p.users()) {
        throw InvalidInput("compose_tx: symbol count does not match user count");
    }
    DDFrame x{p.common * s.common};
    for (std::size_t k = 0; k < p.users(); ++k) {
        x.values += p.privates[k] * s.privates[k];
    }
    return x;
}

} // namespace ddisac
