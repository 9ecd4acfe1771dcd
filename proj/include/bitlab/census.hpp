// Combinatorial prediction of the bitangents of a perturbed multiple conic
// from the vertical-tangency fiber data of the underlying k-section: one
// bitangent for every unordered pair of tangent fibers, and 2(k-2) bitangents
// for every tangent fiber, with reality decided by fiber reality and the
// above/below position of the extra fiber points against the sign of t.

#ifndef BITLAB_CENSUS_HPP
#define BITLAB_CENSUS_HPP

#include <map>
#include <string>
#include <vector>

#include "bitlab/ksection.hpp"

namespace bitlab {

struct CensusRecord {
    enum class Origin { pair_line, tangent_line };
    Origin origin;
    int i = -1, j = -1;  // fiber indices; j = other fiber (pair) or l (tangent)
    int count = 0;       // bitangents of this record (1 for pair lines, 2 otherwise)
    bool real = false;   // all real, else one conjugate pair per 2 bitangents
    int comp_a = -1, comp_b = -1;  // component labels of the two tangency points
};

struct Census {
    int k = 0;
    int sign_t = 0;
    std::vector<CensusRecord> records;
    long long real_total = 0;
    long long conj_pairs = 0;
    long long grand_total = 0;

    // Real bitangents tallied by unordered component-label pair.
    std::map<std::pair<int, int>, long long> attribution;

    // Summary buckets against a component classification (ovals vs long
    // components): [oval-self, long-self, oval x other oval, long x oval with
    // no tangent-line contribution, long x oval with contribution].
    std::vector<long long> buckets(const std::vector<bool>& is_oval) const;
};

// Theorem-driven prediction. `fibers` must list all d(d-2) tangent fibers of
// the k-section (complex ones individually, paired via conj_partner);
// sign_t is the sign of the perturbation parameter.
Census census_predict(const std::vector<TangentFiber>& fibers, int k, int sign_t);

// Lower bound 2(p-n)+298 for the number of real bitangents of a sextic with
// the given oval counts; rejects oval counts no sextic realizes.
long long sextic_bound(int p, int n);
bool sextic_scheme_realizable(int p, int n);

// Conjugate-pair count 2k(k-1)(k-2)/3 for the degree-2k Harnack curve.
long long harnack_nonreal_pairs(int k);

}  // namespace bitlab

#endif
