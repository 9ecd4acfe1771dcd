// Enumeration of all complex bitangents and inflection points of a generic
// plane curve by homotopy continuation, with reality classification and the
// local side signs of real bitangents.
//
// Bitangents: after a random real projective frame, lines y = a x + b are
// bitangent exactly when (x^2 - e1 x + e2)^2 divides g(x) = F(x, ax+b, 1);
// the four remainder coefficients give a square system in (a, b, e1, e2)
// whose symmetric tangency coordinates quotient out the swap and exclude the
// one-dimensional simple-tangency family.

#ifndef BITLAB_SOLVER_HPP
#define BITLAB_SOLVER_HPP

#include <array>

#include "bitlab/topology.hpp"
#include "bitlab/tracker.hpp"

namespace bitlab {

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RealityClass { real_t2, real_t0, complex_pair };

struct BitangentRecord {
    std::array<std::complex<double>, 3> line;  // dual coordinates, input frame
    std::complex<double> a, b;                 // chart slope/offset (solver frame)
    std::complex<double> e1, e2;               // tangency abscissa sum/product
    std::array<std::array<std::complex<double>, 3>, 2> points;  // tangency points
    std::vector<std::complex<double>> other_roots;  // remaining chart abscissas on the line
    RealityClass cls = RealityClass::complex_pair;
    int conj_partner = -1;
    int sign = 0;                 // epsilon(L); +1 for t0, product of locals for t2
    int sign_p1 = 0, sign_p2 = 0; // local side signs at the two tangencies
    double residual = 0.0;
    int frame_index = 0;          // which frame of the solve found this record

    bool is_real() const { return cls != RealityClass::complex_pair; }
};

struct InflectionRecord {
    std::array<std::complex<double>, 3> point;
    bool is_real = false;
    int conj_partner = -1;
};

struct SolveSummary {
    int frames_used = 0;
    uint64_t seed = 0;
    TrackStats stats;
    long long expected = 0;
};

struct BitangentSolve {
    std::vector<BitangentRecord> records;
    // Exact 3x3 changes of coordinates; records reference them by index.
    std::vector<std::vector<std::vector<QQ>>> frames;
    SolveSummary summary;

    long long count(RealityClass c) const;
    long long real_count() const;
    long long conj_pair_count() const;
};

// All t_C(d) = d(d-2)(d-3)(d+3)/2 bitangents of a generic curve. Non-generic
// or ill-conditioned curves are reported through NumericalFailure after two
// independent frames disagree with the expected count.
BitangentSolve solve_bitangents(const Poly& F, const PathTrackerConfig& cfg = {});

// All 3d(d-2) inflection points.
std::vector<InflectionRecord> solve_inflections(const Poly& F, const PathTrackerConfig& cfg = {},
                                                SolveSummary* summary = nullptr);

// Fills sign, sign_p1, sign_p2 of a real record by probing the side function
// along the line on both sides of each real tangency point.
void sign_of_bitangent(BitangentRecord& rec, const BitangentSolve& ctx, const SideFunction& sf);
void assign_signs(BitangentSolve& solve, const SideFunction& sf);

// Signed count: sum of epsilon over real records. Throws if a real record
// has no sign assigned.
long long t_s_numeric(const std::vector<BitangentRecord>& records);

// Generic square-system entry point (exposed for tests and tools).
std::vector<TrackedSolution> track_paths(const std::vector<Poly>& eqs,
                                         const PathTrackerConfig& cfg = {},
                                         TrackStats* stats = nullptr);

}  // namespace bitlab

#endif
