#pragma once

#include <span>
#include <vector>

#include "ddisac/channel.hpp"
#include "ddisac/precoding.hpp"
#include "ddisac/types.hpp"

namespace ddisac {

/// Receiver impairments. `theta` holds one residual-SIC factor per user.
struct ImpairmentConfig {
    double sigma_n2 = 0.0;     // AWGN variance
    double sigma_e2 = 0.0;     // ICSI error variance (relative)
    std::vector<double> theta; // per-user residual common-stream factor, in [0, 1]
    double p_tot = 1.0;        // total transmit power seen by the ICSI noise term
    /// When set, the private-stream filter covariance carries the common
    /// stream scaled by theta instead of at full power.
    bool sic_aware_filter = true;

    /// sigma_n2 + sigma_e2 * p_tot
    double effective_noise() const noexcept { return sigma_n2 + sigma_e2 * p_tot; }
    void validate(std::size_t users) const;
};

/// LMMSE filters of one user (row vectors over the DD grid).
struct UserFilters {
    CRowVector w_c;
    CRowVector w_p;
    bool regularized = false; // a 1e-12 ridge was needed to factor a covariance
};

using ReceiveFilters = std::vector<UserFilters>;

struct CommMetrics {
    std::vector<double> sinr_c;
    std::vector<double> sinr_p;
    std::vector<double> rate_c;
    std::vector<double> rate_p;
    double r_min = 0.0;
    bool rc_met = false;
    bool regularized = false;

    double min_rate_c() const;
};

/// R_k = H_hat (P_c P_c^H + sum_j P_j P_j^H) H_hat^H + (sigma_n2 + sigma_e2 p_tot) I
/// w_c = P_c^H H_hat^H R_k^-1
/// w_p = P_{p,k}^H H_hat^H R'_k^-1, with R'_k using theta_k P_c P_c^H.
UserFilters lmmse_filters(const CMatrix& h_hat, const PrecoderSet& p, const ImpairmentConfig& imp,
                          std::size_t user);

/// |w_c H P_c|^2 / (sum_j |w_c H P_j|^2 + ||w_c||^2 (sigma_n2 + sigma_e2 p_tot))
double sinr_common(const UserFilters& f, const CMatrix& h_hat, const PrecoderSet& p,
                   const ImpairmentConfig& imp);

/// Components of the private-stream SINR of one user.
struct PrivateSinrTerms {
    double signal = 0.0;
    double inter_user = 0.0;
    double residual_common = 0.0;
    double noise = 0.0;

    /// signal / (inter_user + residual_common + noise); 0 when there is no signal.
    double sinr() const noexcept;
};

PrivateSinrTerms private_sinr_terms(const UserFilters& f, const CMatrix& h_hat, const PrecoderSet& p,
                                    const ImpairmentConfig& imp, std::size_t user);

double sinr_private(const UserFilters& f, const CMatrix& h_hat, const PrecoderSet& p,
                    const ImpairmentConfig& imp, std::size_t user);

/// Per-user SINRs and rates (log2(1 + SINR)); rc_met = min_k R_{c,k} >= r_c_req.
CommMetrics evaluate_comm(std::span<const CMatrix> h_hat, const PrecoderSet& p,
                          const ImpairmentConfig& imp, double r_c_req);

} // namespace ddisac
