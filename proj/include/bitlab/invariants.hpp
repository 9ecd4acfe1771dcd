// Closed-form invariants of real plane curves of even degree and the exact
// identities relating them: the signed bitangent count, the Klein and
// Pluecker relations, Euler characteristics of Hilbert squares, and the
// tabulated punctual Hilbert series of simple singularities.

#ifndef BITLAB_INVARIANTS_HPP
#define BITLAB_INVARIANTS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace bitlab {

struct IdentityReport {
    std::string name;
    long long lhs = 0;
    long long rhs = 0;
    bool pass = false;
    std::string inputs;
};

// Binomial(m, 2) extended to all integers as m(m-1)/2.
long long binom2(long long m);

// Signed count of real bitangents: 2(p-n)(p-n-1) + d(d-2)/2. d must be even.
long long t_s_formula(int d, int p, int n);

// Klein: i + 2 t0 = d(d-2).
IdentityReport klein_check(int d, long long i, long long t0);

// Pluecker counts of a generic degree-d curve.
struct PlueckerCounts {
    long long inflections;  // 3d(d-2)
    long long bitangents;   // d(d-2)(d-3)(d+3)/2
};
PlueckerCounts pluecker(int d);

// Lower bound d(d-2)/2 on the number of real bitangents. d must be even.
long long lower_bound(int d);

// chi of the Hilbert square of a complex curve of arithmetic genus g with k
// nodes, or with one cusp. Mixing nodes and a cusp is rejected.
long long chi_hilb2_curve_complex(int g, int k_nodes, bool has_cusp);

// chi of the real Hilbert square: 1-g + kC - k+ + binom2(k- - k+);
// cusp case (all node counts zero): 1-g.
long long chi_hilb2_curve_real(int g, int k_plus, int k_minus, int k_conj, bool has_cusp);

// chi(S^[2]) = (chi^2 + 3 chi)/2 for a complex surface.
long long chi_hilb2_surface_complex(long long chi);
// chi(RS^[2]) = (chi(S) + chi(RS)(chi(RS)-2))/2; rejects parity violations.
long long chi_hilb2_surface_real(long long chi_complex, long long chi_real);

// n+ - n- = -2 chi+ chi- + d(d-2)/2, with chi+ + chi- = 1 enforced.
long long signed_node_count_identity(int d, long long chi_plus, long long chi_minus);

enum class Singularity { A1, A1_plus, A1_minus, A2 };
enum class Field { complex_numbers, real_numbers };

// First four coefficients of the Euler-characteristic generating series of
// punctual Hilbert schemes of the given singularity.
std::array<long long, 4> punctual_series(Singularity s, Field f);

// Longer reference tables for multi-singularity local factors (first four
// coefficients). Stored as reference data only; not used by any identity.
struct SeriesEntry {
    std::string tag;
    std::array<long long, 4> coeffs;
    bool flagged_inconsistent = false;
};
const std::vector<SeriesEntry>& punctual_series_reference();

}  // namespace bitlab

#endif
