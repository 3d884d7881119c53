// Seeded generation of bundle instances for suites and the CLI.
// Everything is driven by CounterRng, so a (kind, size_hint, seed)
// triple always produces the same bundle.

#pragma once

#include <fellbundle/bundle.hpp>
#include <fellbundle/rng.hpp>

namespace fell {

/// Random validated bundle of the requested kind. size_hint loosely
/// bounds the groupoid (arrow count stays <= 12) and fiber dimensions
/// (<= 3). Twist bundles are line bundles by construction.
BundlePtr make_random_instance(BundleKind kind, int size_hint, std::uint64_t seed);

/// Short human-readable description (groupoid family, dims, kind).
std::string describe_instance(const FellBundle& bundle);

/// Normalized coboundary cocycle from random unit phases on non-unit arrows.
std::map<std::pair<int, int>, Cplx> random_coboundary(const FiniteGroupoid& g, CounterRng& rng);

/// The (-1)^{bc} cocycle on the Klein four-group groupoid
/// (elements encoded as a + 2b).
std::map<std::pair<int, int>, Cplx> klein_anticommutation_cocycle(const FiniteGroupoid& g);

/// sigma identically one on composable pairs.
std::map<std::pair<int, int>, Cplx> trivial_cocycle(const FiniteGroupoid& g);

}  // namespace fell
