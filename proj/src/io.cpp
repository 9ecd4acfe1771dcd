#include "bitlab/io.hpp"

#include <fstream>
#include <sstream>

namespace bitlab {

const char* kToolVersion = "bitlab 0.1.0";

Json poly_to_json(const Poly& p) {
    Json j;
    j["vars"] = p.vars();
    Json terms = Json::array();
    for (const auto& [e, c] : p.terms()) {  // std::map: lexicographic order
        Json t;
        t["c"] = qq_str(c);
        t["e"] = e;
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

Poly poly_from_json(const Json& j) {
    if (!j.contains("vars") || !j.contains("terms"))
        throw std::invalid_argument("poly json: missing vars/terms");
    std::vector<std::string> vars = j["vars"].get<std::vector<std::string>>();
    Poly p(vars);
    for (const auto& t : j["terms"]) {
        Expo e = t["e"].get<Expo>();
        QQ c = qq_parse(t["c"].get<std::string>());
        p.set_coeff(e, p.coeff(e) + c);
    }
    return p;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << content;
}

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hash_hex(const std::string& s) {
    std::ostringstream os;
    os << std::hex << fnv1a64(s);
    return os.str();
}

Json RunManifest::to_json() const {
    Json j;
    j["command"] = command;
    j["input_hashes"] = input_hashes;
    j["seed"] = seed;
    j["tolerances"] = {{"newton", newton_tol}, {"dedup", dedup_radius}, {"reality", reality_tol}};
    j["tool_version"] = tool_version;
    j["wall_ms"] = wall_ms;
    return j;
}

Json scheme_to_json(const RealScheme& s) {
    Json j;
    j["p"] = s.p;
    j["n"] = s.n;
    j["encoding"] = s.encoding;
    j["chi_plus"] = s.p - s.n;
    j["chi_minus"] = s.n - s.p + 1;
    Json ovals = Json::array();
    for (const auto& o : s.ovals) {
        Json oj;
        oj["depth"] = o.depth;
        oj["parent"] = o.parent;
        oj["even"] = o.even();
        ovals.push_back(std::move(oj));
    }
    j["ovals"] = std::move(ovals);
    return j;
}

namespace {
Json cx_json(const std::complex<double>& z) { return Json::array({z.real(), z.imag()}); }
}  // namespace

Json bitangents_to_json(const BitangentSolve& s) {
    Json j;
    j["expected"] = s.summary.expected;
    j["total"] = s.records.size();
    j["real"] = s.real_count();
    j["real_t2"] = s.count(RealityClass::real_t2);
    j["real_t0"] = s.count(RealityClass::real_t0);
    j["conj_pairs"] = s.conj_pair_count();
    j["frames_used"] = s.summary.frames_used;
    Json recs = Json::array();
    for (const auto& r : s.records) {
        Json rj;
        rj["class"] = r.cls == RealityClass::real_t2   ? "real_t2"
                      : r.cls == RealityClass::real_t0 ? "real_t0"
                                                       : "complex_pair";
        rj["line"] = Json::array({cx_json(r.line[0]), cx_json(r.line[1]), cx_json(r.line[2])});
        rj["e1"] = cx_json(r.e1);
        rj["e2"] = cx_json(r.e2);
        rj["points"] = Json::array();
        for (const auto& p : r.points)
            rj["points"].push_back(Json::array({cx_json(p[0]), cx_json(p[1]), cx_json(p[2])}));
        if (r.is_real()) {
            rj["sign"] = r.sign;
            if (r.cls == RealityClass::real_t2)
                rj["local_signs"] = Json::array({r.sign_p1, r.sign_p2});
        } else {
            rj["conj_partner"] = r.conj_partner;
        }
        rj["residual"] = r.residual;
        recs.push_back(std::move(rj));
    }
    j["records"] = std::move(recs);
    return j;
}

Json inflections_to_json(const std::vector<InflectionRecord>& recs) {
    Json j;
    long long real = 0;
    for (const auto& r : recs) real += r.is_real;
    j["total"] = recs.size();
    j["real"] = real;
    Json arr = Json::array();
    for (const auto& r : recs) {
        Json rj;
        rj["point"] = Json::array({cx_json(r.point[0]), cx_json(r.point[1]), cx_json(r.point[2])});
        rj["real"] = r.is_real;
        arr.push_back(std::move(rj));
    }
    j["records"] = std::move(arr);
    return j;
}

Json census_to_json(const Census& c, const std::vector<bool>& oval_flags) {
    Json j;
    j["k"] = c.k;
    j["sign_t"] = c.sign_t;
    j["real"] = c.real_total;
    j["conj_pairs"] = c.conj_pairs;
    j["grand_total"] = c.grand_total;
    Json attr = Json::array();
    for (const auto& [pair, count] : c.attribution) {
        Json a;
        a["components"] = Json::array({pair.first, pair.second});
        a["real_bitangents"] = count;
        attr.push_back(std::move(a));
    }
    j["attribution"] = std::move(attr);
    if (!oval_flags.empty()) {
        auto b = c.buckets(oval_flags);
        j["buckets"] = {{"oval_self", b[0]},
                        {"long_self", b[1]},
                        {"oval_pair", b[2]},
                        {"long_oval_bare", b[3]},
                        {"long_oval_boosted", b[4]}};
    }
    return j;
}

Json ksection_meta_json(const KSection& s, const std::string& tvalue) {
    Json j;
    j["family"] = s.family;
    j["k"] = s.k;
    if (!tvalue.empty()) j["t"] = tvalue;
    if (s.epsilon != 0) j["epsilon"] = qq_str(s.epsilon);
    j["certificates"] = {{"support_ok", s.cert.support_ok},
                         {"top_squarefree", s.cert.top_squarefree},
                         {"nonsingular", s.cert.nonsingular},
                         {"critical_points", s.cert.critical_points},
                         {"min_gradient", s.cert.min_gradient}};
    return j;
}

Json identity_to_json(const IdentityReport& r) {
    Json j;
    j["name"] = r.name;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["pass"] = r.pass;
    j["inputs"] = r.inputs;
    return j;
}

KSection ksection_from_files(const std::string& poly_path, const std::string& meta_path) {
    KSection s;
    s.P = poly_from_json(Json::parse(read_file(poly_path)));
    Json meta = Json::parse(read_file(meta_path));
    s.k = meta.at("k").get<int>();
    s.family = meta.value("family", "unknown");
    if (meta.contains("epsilon")) s.epsilon = qq_parse(meta["epsilon"].get<std::string>());
    return s;
}

}  // namespace bitlab
