#include "bitlab/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "bitlab/invariants.hpp"

namespace bitlab {

bool PipelineResult::all_pass() const {
    for (const auto& id : identities)
        if (!id.pass) return false;
    if (census_diff && !census_diff->pass()) return false;
    return true;
}

SolverBuckets solver_attribution(const BitangentSolve& solve, const RealScheme& scheme) {
    SolverBuckets out;
    // The long component of the section deforms to the unique non-empty
    // oval; everything else is a small oval.
    int big = -1;
    for (size_t i = 0; i < scheme.ovals.size(); ++i) {
        bool has_child = false;
        for (const auto& o : scheme.ovals) has_child |= (o.parent == static_cast<int>(i));
        if (has_child) {
            if (big >= 0) {
                out.detail = "more than one non-empty oval";
                return out;
            }
            big = static_cast<int>(i);
        }
    }
    if (big < 0) {
        out.detail = "no non-empty oval to anchor the attribution";
        return out;
    }
    for (const auto& r : solve.records) {
        if (r.cls != RealityClass::real_t2) continue;
        double p1[3] = {r.points[0][0].real(), r.points[0][1].real(), r.points[0][2].real()};
        double p2[3] = {r.points[1][0].real(), r.points[1][1].real(), r.points[1][2].real()};
        int c1 = scheme.locate(p1);
        int c2 = scheme.locate(p2);
        if (c1 < 0 || c2 < 0) {
            out.detail = "tangency point could not be attributed to an oval";
            return out;
        }
        bool b1 = c1 == big, b2 = c2 == big;
        if (b1 && b2)
            ++out.big_self;
        else if (!b1 && !b2 && c1 == c2)
            ++out.small_self;
        else if (!b1 && !b2)
            ++out.small_pair;
        else
            ++out.mixed[b1 ? c2 : c1];
    }
    out.ok = true;
    return out;
}

CensusDiff diff_census(const Census& census, const std::vector<bool>& section_oval_flags,
                       const BitangentSolve& solve, const RealScheme& scheme) {
    CensusDiff d;
    d.counts_match = census.real_total == solve.real_count() &&
                     census.conj_pairs == solve.conj_pair_count() &&
                     census.grand_total == static_cast<long long>(solve.records.size());
    if (!d.counts_match) {
        std::ostringstream os;
        os << "census (real=" << census.real_total << ", pairs=" << census.conj_pairs
           << ") vs solver (real=" << solve.real_count() << ", pairs=" << solve.conj_pair_count()
           << ")";
        d.detail = os.str();
    }

    auto cb = census.buckets(section_oval_flags);
    d.census_buckets = cb;
    // Mixed tallies per oval on the census side.
    std::map<int, long long> census_mixed;
    for (const auto& [pair, count] : census.attribution) {
        bool oa = pair.first >= 0 && section_oval_flags[pair.first];
        bool ob = pair.second >= 0 && section_oval_flags[pair.second];
        if (oa != ob) census_mixed[oa ? pair.first : pair.second] += count;
    }
    for (const auto& [k, v] : census_mixed) d.census_mixed.push_back(v);
    std::sort(d.census_mixed.begin(), d.census_mixed.end());

    SolverBuckets sb = solver_attribution(solve, scheme);
    if (!sb.ok) {
        if (sb.detail == "no non-empty oval to anchor the attribution") {
            // All ovals alike (e.g. the quartic <4>): the long-component
            // image is topologically anonymous, so only counts can be
            // compared.
            d.buckets_match = true;
            d.detail += (d.detail.empty() ? "" : "; ") + std::string("buckets skipped: ") + sb.detail;
        } else {
            d.buckets_match = false;
            d.detail += (d.detail.empty() ? "" : "; ") + sb.detail;
        }
        return d;
    }
    d.solver_buckets = {sb.small_self, sb.big_self, sb.small_pair, 0, 0};
    for (const auto& [k, v] : sb.mixed) d.solver_mixed.push_back(v);
    std::sort(d.solver_mixed.begin(), d.solver_mixed.end());

    long long census_small_self = cb[0], census_big_self = cb[1], census_small_pair = cb[2];
    d.buckets_match = census_small_self == sb.small_self && census_big_self == sb.big_self &&
                      census_small_pair == sb.small_pair && d.census_mixed == d.solver_mixed;
    if (!d.buckets_match && d.detail.empty()) d.detail = "attribution buckets differ";
    return d;
}

PipelineResult run_pipeline(const Poly& curve, const std::optional<KSection>& section, int sign_t,
                            const PipelineOptions& opts) {
    PipelineResult res;
    auto dopt = curve.degree();
    if (!dopt || *dopt < 2 || *dopt % 2 != 0)
        throw std::invalid_argument("pipeline: even-degree curve required");
    int d = static_cast<int>(*dopt);
    res.degree = d;

    TopologyConfig tcfg = opts.topology;
    tcfg.seed = opts.seed;
    res.scheme = real_scheme(curve, tcfg);
    res.side = normalize_sign(curve, opts.seed);

    PathTrackerConfig pcfg = opts.tracker;
    pcfg.seed = opts.seed;
    res.solve = solve_bitangents(curve, pcfg);
    assign_signs(res.solve, res.side);

    if (opts.run_inflections) res.inflections = solve_inflections(curve, pcfg);
    for (const auto& r : res.inflections) res.i_real += r.is_real;
    res.t0 = res.solve.count(RealityClass::real_t0);
    res.t2 = res.solve.count(RealityClass::real_t2);

    res.ts_numeric = t_s_numeric(res.solve.records);
    res.ts_formula = t_s_formula(d, res.scheme.p, res.scheme.n);

    IdentityReport ts;
    ts.name = "signed_count";
    ts.lhs = res.ts_numeric;
    ts.rhs = res.ts_formula;
    ts.pass = ts.lhs == ts.rhs;
    {
        std::ostringstream os;
        os << "d=" << d << " p=" << res.scheme.p << " n=" << res.scheme.n;
        ts.inputs = os.str();
    }
    res.identities.push_back(ts);

    if (opts.run_inflections) {
        res.identities.push_back(klein_check(d, res.i_real, res.t0));
        IdentityReport pli;
        pli.name = "pluecker_inflections";
        pli.lhs = static_cast<long long>(res.inflections.size());
        pli.rhs = pluecker(d).inflections;
        pli.pass = pli.lhs == pli.rhs;
        res.identities.push_back(pli);
    }
    IdentityReport plt;
    plt.name = "pluecker_bitangents";
    plt.lhs = static_cast<long long>(res.solve.records.size());
    plt.rhs = pluecker(d).bitangents;
    plt.pass = plt.lhs == plt.rhs;
    res.identities.push_back(plt);

    auto [chip, chim] = euler_char_regions(res.scheme);
    IdentityReport nodecount;
    nodecount.name = "signed_node_count";
    nodecount.lhs = signed_node_count_identity(d, chip, chim);
    nodecount.rhs = res.ts_formula;
    nodecount.pass = nodecount.lhs == nodecount.rhs;
    res.identities.push_back(nodecount);

    IdentityReport lower;
    lower.name = "lower_bound";
    lower.lhs = res.solve.real_count();
    lower.rhs = lower_bound(d);
    lower.pass = lower.lhs >= lower.rhs;
    res.identities.push_back(lower);

    if (section) {
        if (section->fibers.empty())
            throw std::invalid_argument("pipeline: section provided without fiber data");
        res.census = census_predict(section->fibers, section->k, sign_t);
        res.census_diff =
            diff_census(*res.census, section->component_is_oval, res.solve, res.scheme);
    }
    return res;
}

Json PipelineResult::to_json(const RunManifest& manifest) const {
    Json j;
    j["manifest"] = manifest.to_json();
    j["degree"] = degree;
    j["scheme"] = scheme_to_json(scheme);
    j["bitangents"] = bitangents_to_json(solve);
    j["inflections"] = inflections_to_json(inflections);
    j["t0"] = t0;
    j["t2"] = t2;
    j["i_real"] = i_real;
    j["t_s_numeric"] = ts_numeric;
    j["t_s_formula"] = ts_formula;
    Json ids = Json::array();
    for (const auto& id : identities) ids.push_back(identity_to_json(id));
    j["identities"] = std::move(ids);
    if (census) {
        j["census"] = census_to_json(*census, {});
        Json cd;
        cd["counts_match"] = census_diff->counts_match;
        cd["buckets_match"] = census_diff->buckets_match;
        cd["census_buckets"] = census_diff->census_buckets;
        cd["solver_buckets"] = census_diff->solver_buckets;
        cd["census_mixed"] = census_diff->census_mixed;
        cd["solver_mixed"] = census_diff->solver_mixed;
        cd["detail"] = census_diff->detail;
        j["census_diff"] = std::move(cd);
    }
    j["all_pass"] = all_pass();
    return j;
}

}  // namespace bitlab
