// Recovery of section values from an operator family, and the
// verification suite for the identities the recovery map satisfies:
//
//   <h_c^b, V_u(a) h_u^e> = b* j(a)(c) e          (recovery, u = s(c))
//   j(a*)(c) = j(a)(c^{-1})*                       (adjoint identity)
//   j(a*b)(c) = sum_{e in G^{r(c)}} j(a)(e) j(b)(e^{-1}c)   (convolution)
//   sup_c |j(a)(c)| <= |a|_r                       (norm reduction)
//
// All checks report residuals against explicit bounds; nothing is
// asserted silently.

#pragma once

#include <fellbundle/regular_rep.hpp>
#include <fellbundle/report.hpp>

namespace fell {

/// Reconstructs the fiber value at `arrow` from the family's matrix at
/// u = s(arrow) by sweeping h_arrow^{E_kl} against V h_u^{E_mm}. Throws
/// std::invalid_argument ("not in the image") when the sweep is
/// inconsistent beyond tol * (1 + |V_u|), i.e. the family does not come
/// from a representation.
Mat j_recover(const OperatorFamily& family, int arrow, double tol = 1e-8);

/// j applied across all arrows, packaged as a Section.
Section j_recover_section(const OperatorFamily& family, double tol = 1e-8);

// Individual report-producing checks. Residual bounds scale as
// tol * (1 + product of operand norms).

CheckRecord check_norm_reducing(const Section& f, const std::vector<GramForm>& grams,
                                double tol = 1e-9);
CheckRecord check_adjoint(const Section& f, double tol = 1e-10);
CheckRecord check_convolution_formula(const Section& f, const Section& g, double tol = 1e-10);
CheckRecord check_ju_bound(const Section& f, int unit, const std::vector<GramForm>& grams,
                           double tol = 1e-9);
CheckRecord check_phi_bound(const XuVector& x, const WgVector& y, double tol = 1e-9);

struct SuiteConfig {
    int num_random = 50;
    std::uint64_t seed = 0;
    double tol = 1e-10;
};

/// Runs every check over deterministic fixtures plus seeded random
/// sections and module vectors. Refuses (throws std::invalid_argument)
/// if the bundle itself fails validation.
VerificationReport run_suite(const BundlePtr& bundle, int num_random, std::uint64_t seed);
VerificationReport run_suite(const BundlePtr& bundle, const SuiteConfig& config);

/// Seeded section with independent complex Gaussian entries.
Section random_section(const BundlePtr& bundle, CounterRng& rng);

}  // namespace fell
