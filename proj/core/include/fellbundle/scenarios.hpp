// End-to-end scenario runs: build a twist or crossed-product bundle,
// run the full verification suite, and add the scenario-specific
// cross-checks (norm agreement with the untwisted model when the
// cocycle is trivial; the action-twisted convolution route).

#pragma once

#include <fellbundle/instances.hpp>
#include <fellbundle/jmap.hpp>

namespace fell {

struct ScenarioConfig {
    int num_random = 25;
    std::uint64_t seed = 0;
    double tol = 1e-10;
};

/// Builds the twist bundle over g, runs the suite, and when sigma is
/// identically one also checks that every computed reduced norm matches
/// the trivial line bundle's to 1e-10.
VerificationReport twist_scenario(const GroupoidPtr& g,
                                  const std::map<std::pair<int, int>, Cplx>& sigma,
                                  const ScenarioConfig& config = {});

/// Builds the crossed-product bundle and runs the suite; the convolution
/// check inside the suite verifies the action-twisted sum as an
/// additional route on this bundle kind.
VerificationReport crossed_scenario(const GroupoidPtr& g, const FiberSpec& dims,
                                    const std::map<int, Mat>& alpha,
                                    const ScenarioConfig& config = {});

}  // namespace fell
