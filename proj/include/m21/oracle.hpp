// SPDX-License-Identifier: Apache-2.0
//
// Independent numerical verification paths: the entropy-difference equality
// behind the treat-as-noise converses, the genie-signal covariance route to
// the full-MAC gap, and exhaustive baselines for the permutation predicates.

#ifndef M21_ORACLE_HPP
#define M21_ORACLE_HPP

#include <span>
#include <vector>

#include "m21/certificates.hpp"
#include "m21/gaussian_system.hpp"

namespace m21 {

struct LemmaLiReport {
    bool precondition_met = false;  // sum c_i^2 <= sigma2
    double direct_bits = 0.0;       // closed-form evaluation of the Gaussian expression
    double decomposed_bits = 0.0;   // covariance-algebra route through scaled sums
    double diff = 0.0;
};

/// Equality case of the entropy-difference inequality
/// sum_i h(w_i + n_i) - h(sum_i c_i w_i + n_1), w_i ~ N(0,P_i), n_i ~ N(0,1),
/// n_1 ~ N(0,sigma2), evaluated per letter with Gaussian inputs along two
/// independent routes.  Requires sum c_i^2 <= sigma2 (reported, not thrown).
LemmaLiReport verify_lemma_li(std::span<const double> powers, std::span<const double> coeffs,
                              double sigma2);

/// K=3 genie system: x1,x2,x3; n1; z1 with correlation rho to n1;
/// y1 = x1 + a x2 + b x3 + n1; s1 covering {1, partner} with noise eta*z1.
/// eta is pinned by the smart-genie relation eta*rho = 1 + (other gain)^2 * (other power);
/// scaling eta by eta_scale breaks it deliberately.
GaussianSystem make_t3_genie_system(const StandardChannel& ch, double rho2, int partner = 2,
                                    double eta_scale = 1.0);

struct T3Direct {
    double gap_bits = 0.0;
    double eta = 0.0;
    bool eta_within_useful = false;  // eta^2 <= partner gain^2 (inside the theorem region)
    bool degenerate = false;
};

/// Computes the full-MAC gap as I(x_other; s1 | y1, x1, x_partner) on the
/// genie system; must equal the closed form within 1e-9.
T3Direct t3_gap_direct(const StandardChannel& ch, double rho2, int partner = 2);

/// I(x1, x_partner; s1 | y1) on the genie system: exactly zero when the
/// smart-genie relation holds (eta_scale = 1).
MiResult smart_genie_mi(const StandardChannel& ch, double rho2, int partner = 2,
                        double eta_scale = 1.0);

/// Exhaustive baseline for check_t7: enumerates every decoding order and
/// applies the raw stage inequalities from scratch.  |decoded_set| <= 8.
Certificate brute_force_t7(const StandardChannel& ch, const std::vector<int>& decoded_set,
                           double tol = kBoundaryTol);

// Closed-form rate counterparts on the joint channel system.
double mi_rate_rx1_mac(const StandardChannel& ch, const std::vector<int>& mac_set);
double mi_rate_rx1_after_sic(const StandardChannel& ch, const std::vector<int>& decoded_set);
double mi_rate_own(const StandardChannel& ch, int i);

}  // namespace m21

#endif
