// Truncated regular representation on the integers, checked against a
// certified Fourier supremum. A finitely supported f: Z -> C acts by
// convolution; compressing to the window [-N, N] gives the Toeplitz
// matrix T_N[i,j] = f(i-j). The window norms increase to the reduced
// norm sup_t |sum_k f(k) e^{ikt}|, which the oracle brackets with a
// derivative-bound branch-and-bound on the circle.

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fell {

struct ZWindowInstance {
    std::map<int, std::complex<double>> coeffs;  // finite support

    int support_radius() const;
    double coeff_max() const;   // max_k |f(k)|
    double ell1_norm() const;   // sum_k |f(k)|
};

/// Largest singular value of the (2N+1) x (2N+1) window compression.
/// Requires N >= support radius (std::invalid_argument otherwise).
double z_window_norm(const ZWindowInstance& inst, int N);

/// Certified bracket around sup_t |sum_k f(k) e^{ikt}|.
struct FourierBracket {
    double lower = 0.0;
    double upper = 0.0;
    double gap() const { return upper - lower; }
};

/// Branch-and-bound refinement starting from `grid` uniform intervals,
/// using the Lipschitz bound sum_k |k||f(k)|; refines until the bracket
/// gap is at most 1e-6. Requires grid >= 4*(support diameter + 1).
FourierBracket fourier_oracle(const ZWindowInstance& inst, int grid);

struct ZWindowRow {
    int window = 0;
    double norm = 0.0;
    double oracle_lower = 0.0;
    double oracle_upper = 0.0;
    double coeff_max = 0.0;
    double ell1 = 0.0;
    bool chain_ok = false;  // coeff_max <= norm <= oracle_upper and lower <= ell1
};

struct ZWindowTable {
    std::vector<ZWindowRow> rows;
    bool all_ok() const {
        for (const auto& r : rows)
            if (!r.chain_ok) return false;
        return true;
    }
};

/// One row per window size, with the norm chain checked per row.
ZWindowTable z_window_report(const ZWindowInstance& inst, const std::vector<int>& windows,
                             int grid = 4096);

/// Seeded instance with complex Gaussian coefficients on a support drawn
/// inside [-max_radius, max_radius].
ZWindowInstance random_z_instance(int max_radius, int terms, std::uint64_t seed);

}  // namespace fell
