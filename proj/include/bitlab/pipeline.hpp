// End-to-end run over one curve: real scheme, bitangents with signs,
// inflections, the full identity battery, and (when the curve came from a
// k-section) the census diff against the numerically enumerated bitangents.

#ifndef BITLAB_PIPELINE_HPP
#define BITLAB_PIPELINE_HPP

#include <optional>

#include "bitlab/census.hpp"
#include "bitlab/families.hpp"
#include "bitlab/io.hpp"
#include "bitlab/solver.hpp"

namespace bitlab {

struct PipelineOptions {
    uint64_t seed = 1;
    PathTrackerConfig tracker;
    TopologyConfig topology;
    bool run_inflections = true;
};

// Census/solver agreement, class by class.
struct CensusDiff {
    bool counts_match = false;    // real + conjugate-pair totals
    bool buckets_match = false;   // attribution buckets (sections with one long component)
    std::vector<long long> census_buckets;
    std::vector<long long> solver_buckets;
    std::vector<long long> census_mixed;  // per-oval mixed tallies, sorted
    std::vector<long long> solver_mixed;
    std::string detail;
    bool pass() const { return counts_match && buckets_match; }
};

struct PipelineResult {
    int degree = 0;
    RealScheme scheme;
    SideFunction side;
    BitangentSolve solve;
    std::vector<InflectionRecord> inflections;
    long long i_real = 0, t0 = 0, t2 = 0;
    long long ts_numeric = 0, ts_formula = 0;
    std::vector<IdentityReport> identities;
    std::optional<Census> census;
    std::optional<CensusDiff> census_diff;

    bool all_pass() const;
    Json to_json(const RunManifest& manifest) const;
};

PipelineResult run_pipeline(const Poly& curve, const std::optional<KSection>& section, int sign_t,
                            const PipelineOptions& opts = {});

// Attribution buckets of the numerically solved bitangents against the real
// scheme: [small-self, big-self, small-pair, per-oval mixed tallies].
struct SolverBuckets {
    bool ok = false;
    std::string detail;
    long long small_self = 0, big_self = 0, small_pair = 0;
    std::map<int, long long> mixed;  // oval index -> tally with the big oval
};
SolverBuckets solver_attribution(const BitangentSolve& solve, const RealScheme& scheme);

CensusDiff diff_census(const Census& census, const std::vector<bool>& section_oval_flags,
                       const BitangentSolve& solve, const RealScheme& scheme);

}  // namespace bitlab

#endif
