// Canonical file formats: polynomials as sorted-term JSON (bit-exact for
// golden tests), k-section metadata sidecars, solve/topology/census reports
// and the run manifest embedded in every report.

#ifndef BITLAB_IO_HPP
#define BITLAB_IO_HPP

#include "json.hpp"

#include "bitlab/census.hpp"
#include "bitlab/invariants.hpp"
#include "bitlab/ksection.hpp"
#include "bitlab/poly.hpp"
#include "bitlab/solver.hpp"
#include "bitlab/topology.hpp"

namespace bitlab {

using Json = nlohmann::ordered_json;

Json poly_to_json(const Poly& p);
Poly poly_from_json(const Json& j);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

uint64_t fnv1a64(const std::string& s);
std::string hash_hex(const std::string& s);

struct RunManifest {
    std::string command;
    std::map<std::string, std::string> input_hashes;
    uint64_t seed = 0;
    double newton_tol = 0, dedup_radius = 0, reality_tol = 0;
    std::string tool_version;
    long wall_ms = 0;
    Json to_json() const;
};

extern const char* kToolVersion;

Json scheme_to_json(const RealScheme& s);
Json bitangents_to_json(const BitangentSolve& s);
Json inflections_to_json(const std::vector<InflectionRecord>& recs);
Json census_to_json(const Census& c, const std::vector<bool>& oval_flags);
Json ksection_meta_json(const KSection& s, const std::string& tvalue);
Json identity_to_json(const IdentityReport& r);

KSection ksection_from_files(const std::string& poly_path, const std::string& meta_path);

}  // namespace bitlab

#endif
