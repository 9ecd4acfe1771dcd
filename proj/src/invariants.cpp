#include "bitlab/invariants.hpp"

#include <sstream>
#include <stdexcept>

namespace bitlab {

long long binom2(long long m) { return m * (m - 1) / 2; }

long long t_s_formula(int d, int p, int n) {
    if (d < 2 || d % 2 != 0) throw std::invalid_argument("t_s_formula: degree must be even");
    long long pn = static_cast<long long>(p) - n;
    return 2 * pn * (pn - 1) + static_cast<long long>(d) * (d - 2) / 2;
}

IdentityReport klein_check(int d, long long i, long long t0) {
    IdentityReport r;
    r.name = "klein";
    r.lhs = i + 2 * t0;
    r.rhs = static_cast<long long>(d) * (d - 2);
    r.pass = (r.lhs == r.rhs);
    std::ostringstream os;
    os << "d=" << d << " i=" << i << " t0=" << t0;
    r.inputs = os.str();
    return r;
}

PlueckerCounts pluecker(int d) {
    if (d < 2) throw std::invalid_argument("pluecker: d >= 2 required");
    long long dd = d;
    return {3 * dd * (dd - 2), dd * (dd - 2) * (dd - 3) * (dd + 3) / 2};
}

long long lower_bound(int d) {
    if (d % 2 != 0) throw std::invalid_argument("lower_bound: degree must be even");
    return static_cast<long long>(d) * (d - 2) / 2;
}

long long chi_hilb2_curve_complex(int g, int k_nodes, bool has_cusp) {
    if (k_nodes > 0 && has_cusp)
        throw std::invalid_argument("chi_hilb2_curve_complex: nodes and cusp are separate cases");
    long long b = binom2(2LL * g - 2);
    if (has_cusp) return b + 4 * (2LL - g);
    return b + k_nodes * (2LL - 2 * g) + static_cast<long long>(k_nodes) * (k_nodes + 3) / 2;
}

long long chi_hilb2_curve_real(int g, int k_plus, int k_minus, int k_conj, bool has_cusp) {
    if (has_cusp) {
        if (k_plus || k_minus || k_conj)
            throw std::invalid_argument("chi_hilb2_curve_real: cusp case takes no nodes");
        return 1LL - g;
    }
    return 1LL - g + k_conj - k_plus + binom2(static_cast<long long>(k_minus) - k_plus);
}

long long chi_hilb2_surface_complex(long long chi) { return (chi * chi + 3 * chi) / 2; }

long long chi_hilb2_surface_real(long long chi_complex, long long chi_real) {
    long long num = chi_complex + chi_real * (chi_real - 2);
    if (num % 2 != 0)
        throw std::invalid_argument(
            "chi_hilb2_surface_real: chi(S) and chi(RS) must have equal parity");
    return num / 2;
}

long long signed_node_count_identity(int d, long long chi_plus, long long chi_minus) {
    if (chi_plus + chi_minus != 1)
        throw std::invalid_argument("signed_node_count_identity: chi+ + chi- must be 1");
    if (d % 2 != 0) throw std::invalid_argument("signed_node_count_identity: even degree required");
    return -2 * chi_plus * chi_minus + static_cast<long long>(d) * (d - 2) / 2;
}

std::array<long long, 4> punctual_series(Singularity s, Field f) {
    switch (s) {
        case Singularity::A1:
            if (f == Field::complex_numbers) return {1, 1, 2, 3};
            throw std::invalid_argument("punctual_series: real A1 splits into A1+ / A1-");
        case Singularity::A1_plus:
            if (f == Field::real_numbers) return {1, 1, 0, 1};
            throw std::invalid_argument("punctual_series: A1+ is a real singularity type");
        case Singularity::A1_minus:
            if (f == Field::real_numbers) return {1, 1, 0, -1};
            throw std::invalid_argument("punctual_series: A1- is a real singularity type");
        case Singularity::A2:
            return f == Field::complex_numbers ? std::array<long long, 4>{1, 1, 2, 2}
                                               : std::array<long long, 4>{1, 1, 0, 0};
    }
    throw std::invalid_argument("punctual_series: unsupported tag");
}

const std::vector<SeriesEntry>& punctual_series_reference() {
    // Local factors of the generating series for curves with the given
    // singularity combination; first four coefficients. The complex A2
    // global factor disagrees with the A2 punctual series above as stated in
    // the source tables; it is kept verbatim and flagged.
    static const std::vector<SeriesEntry> table = {
        {"A1/C", {1, 1, 2, 3}, false},
        {"A1+/R", {1, 1, 0, 1}, false},
        {"A1-/R", {1, 1, 0, -1}, false},
        {"A2/C", {1, 1, 2, 2}, false},
        {"A2/R", {1, 1, 0, 0}, false},
        {"A2/C-global", {1, 2, 4, 6}, true},
        {"A1A1/C", {1, 2, 5, 10}, false},
        {"A1A1++/R", {1, 2, 1, 2}, false},
        {"A1A1+-/R", {1, 0, -1, 0}, false},
        {"A1A1--/R", {1, -2, 1, -2}, false},
        {"A1A1oo/R", {1, 0, 1, 0}, false},
        {"A1A2/C", {1, 3, 8, 17}, false},
        {"A1A2+/R", {1, 1, 0, 1}, false},
        {"A1A2-/R", {1, -1, 0, -1}, false},
        {"A3/C", {1, 3, 7, 13}, false},
        {"A3+/R", {1, 1, 1, 1}, false},
        {"A3-/R", {1, -1, 1, -1}, false},
        {"A1A1A1/C", {1, 3, 9, 22}, false},
        {"A1A1A1+++/R", {1, 3, 3, 4}, false},
        {"A1A1A1++-/R", {1, 1, -1, 0}, false},
        {"A1A1A1+--/R", {1, -1, -1, 0}, false},
        {"A1A1A1---/R", {1, -3, 3, -4}, false},
        {"A1A1A1+oo/R", {1, 1, 1, 2}, false},
        {"A1A1A1-oo/R", {1, -1, 1, -2}, false},
    };
    return table;
}

}  // namespace bitlab
