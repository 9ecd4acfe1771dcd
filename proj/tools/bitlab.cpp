// bitlab: construct even-degree real plane curves from k-sections, compute
// their real schemes, enumerate bitangents and inflections numerically, and
// check the counting identities and the combinatorial census against each
// other.
//
// Exit codes: 0 ok, 1 identity failure, 2 invalid input, 3 numerical failure.

#include <chrono>
#include <iostream>

#include "CLI11.hpp"
#include "bitlab/families.hpp"
#include "bitlab/io.hpp"
#include "bitlab/pipeline.hpp"
#include "bitlab/svg.hpp"

using namespace bitlab;

namespace {

struct CommonOpts {
    uint64_t seed = 1;
    double tol = 1e-12;
    double dedup = 1e-6;
};

RunManifest make_manifest(const std::string& command, const CommonOpts& o,
                          const std::map<std::string, std::string>& inputs) {
    RunManifest m;
    m.command = command;
    for (const auto& [name, content] : inputs) m.input_hashes[name] = hash_hex(content);
    m.seed = o.seed;
    m.newton_tol = o.tol;
    m.dedup_radius = o.dedup;
    m.reality_tol = 1e-8;
    m.tool_version = kToolVersion;
    return m;
}

PathTrackerConfig tracker_config(const CommonOpts& o) {
    PathTrackerConfig cfg;
    cfg.seed = o.seed;
    cfg.newton_tol = o.tol;
    cfg.dedup_radius = o.dedup;
    return cfg;
}

int sign_from_string(const std::string& s) {
    if (s == "+" || s == "+1" || s == "1") return 1;
    if (s == "-" || s == "-1") return -1;
    throw CLI::ValidationError("--sign must be + or -");
}

// Rebuilds fiber data for a section loaded from disk.
void ensure_fibers(KSection& s, const CommonOpts& o) {
    if (!s.fibers.empty()) return;
    FamilyConfig fcfg;
    fcfg.tracker = tracker_config(o);
    SectionTopology topo(s.P, fcfg.topology);
    attach_fibers(s, topo, fcfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"real plane curves, their bitangents, and the counting identities"};
    app.require_subcommand(1);
    CommonOpts common;
    app.add_option("--seed", common.seed, "RNG seed for frames and homotopy gamma");
    app.add_option("--tol", common.tol, "Newton residual tolerance");
    app.add_option("--dedup", common.dedup, "endpoint identification radius");

    // construct ---------------------------------------------------------
    auto* c_construct = app.add_subcommand("construct", "build a family member");
    std::string family, out_curve = "curve.json", out_meta = "meta.json";
    std::string in_section, in_section_meta, sign_str = "-", tvalue;
    int kparam = 2;
    c_construct->add_option("--family", family,
                            "two_section | harnack_ksection | rational_3section | perturb_conic")
        ->required();
    c_construct->add_option("--k", kparam, "k for harnack_ksection");
    c_construct->add_option("--ksection", in_section, "k-section curve JSON (perturb_conic)");
    c_construct->add_option("--ksection-meta", in_section_meta, "its metadata sidecar");
    c_construct->add_option("--sign", sign_str, "sign of t for perturb_conic");
    c_construct->add_option("--t", tvalue, "explicit t as num/den (skips the stability search)");
    c_construct->add_option("--out", out_curve, "output curve JSON");
    c_construct->add_option("--meta", out_meta, "output metadata JSON");

    // topology ----------------------------------------------------------
    auto* c_topology = app.add_subcommand("topology", "real scheme of a curve");
    std::string in_curve;
    std::string out_json;
    c_topology->add_option("--input", in_curve, "curve JSON")->required();
    c_topology->add_option("--json-out", out_json, "write the scheme as JSON");

    // bitangents ----------------------------------------------------------
    auto* c_bit = app.add_subcommand("bitangents", "enumerate and classify bitangents");
    std::string bit_svg;
    c_bit->add_option("--input", in_curve, "curve JSON")->required();
    c_bit->add_option("--json-out", out_json, "records with full provenance");
    c_bit->add_option("--svg", bit_svg, "plot of the real curve and real bitangents");

    // census -------------------------------------------------------------
    auto* c_census = app.add_subcommand("census", "predicted bitangent tallies of a k-section");
    c_census->add_option("--ksection", in_section, "k-section curve JSON")->required();
    c_census->add_option("--meta", in_section_meta, "metadata sidecar with k")->required();
    c_census->add_option("--sign", sign_str, "sign of t");
    c_census->add_option("--json-out", out_json, "census as JSON");

    // verify -------------------------------------------------------------
    auto* c_verify = app.add_subcommand("verify", "identity checks on saved outputs");
    std::string in_solve, in_topo, in_census;
    c_verify->add_option("--solve", in_solve, "bitangent solve JSON")->required();
    c_verify->add_option("--topology", in_topo, "topology JSON")->required();
    c_verify->add_option("--census", in_census, "census JSON to diff (optional)");
    c_verify->add_option("--json-out", out_json, "identity reports as JSON");

    // pipeline -------------------------------------------------------------
    auto* c_pipe = app.add_subcommand("pipeline", "topology + solver + identities + census");
    std::string pipe_svg, report_path = "report.json";
    c_pipe->add_option("--input", in_curve, "curve JSON")->required();
    c_pipe->add_option("--ksection", in_section, "originating k-section (optional)");
    c_pipe->add_option("--ksection-meta", in_section_meta, "its metadata sidecar");
    c_pipe->add_option("--sign", sign_str, "sign of t used to build the curve");
    c_pipe->add_option("--report", report_path, "consolidated JSON report");
    c_pipe->add_option("--svg", pipe_svg, "figure output");

    // plot -------------------------------------------------------------
    auto* c_plot = app.add_subcommand("plot", "SVG of the real curve");
    std::string plot_out = "curve.svg";
    c_plot->add_option("--input", in_curve, "curve JSON")->required();
    c_plot->add_option("--out", plot_out, "SVG path");

    CLI11_PARSE(app, argc, argv);
    auto started = std::chrono::steady_clock::now();
    auto wall_ms = [&started]() {
        return static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - started)
                                     .count());
    };

    try {
        if (*c_construct) {
            FamilyConfig fcfg;
            fcfg.tracker = tracker_config(common);
            if (family == "two_section" || family == "harnack_ksection" ||
                family == "rational_3section") {
                KSection s;
                if (family == "two_section")
                    s = two_section(fcfg);
                else if (family == "harnack_ksection")
                    s = harnack_ksection(kparam, {}, {}, fcfg);
                else
                    s = rational_3section(fcfg);
                write_file(out_curve, poly_to_json(s.P).dump(2) + "\n");
                write_file(out_meta, ksection_meta_json(s, "").dump(2) + "\n");
                std::cout << "wrote " << out_curve << " (" << s.family << ", k=" << s.k << ")\n";
            } else if (family == "perturb_conic") {
                if (in_section.empty() || in_section_meta.empty())
                    throw std::invalid_argument("perturb_conic needs --ksection and --ksection-meta");
                KSection s = ksection_from_files(in_section, in_section_meta);
                QQ t;
                if (!tvalue.empty()) {
                    t = qq_parse(tvalue);
                } else {
                    auto params = shrink_t_until_stable(s, sign_from_string(sign_str), fcfg);
                    t = params.t;
                }
                Poly F = perturb_conic(s, t).primitive_part();
                write_file(out_curve, poly_to_json(F).dump(2) + "\n");
                Json meta = ksection_meta_json(s, qq_str(t));
                meta["family"] = "perturb_conic(" + s.family + ")";
                write_file(out_meta, meta.dump(2) + "\n");
                std::cout << "wrote " << out_curve << " (degree " << 2 * s.k
                          << ", t = " << qq_str(t) << ")\n";
            } else {
                throw std::invalid_argument("unknown family: " + family);
            }
        } else if (*c_topology) {
            std::string content = read_file(in_curve);
            Poly F = poly_from_json(Json::parse(content));
            TopologyConfig tcfg;
            tcfg.seed = common.seed;
            RealScheme s = real_scheme(F, tcfg);
            auto [cp, cm] = euler_char_regions(s);
            std::cout << "scheme  " << s.encoding << "\n"
                      << "p = " << s.p << "  n = " << s.n << "\n"
                      << "chi(RP2+) = " << cp << "  chi(RP2-) = " << cm << "\n";
            if (!out_json.empty()) {
                Json j = scheme_to_json(s);
                j["manifest"] =
                    make_manifest("topology", common, {{in_curve, content}}).to_json();
                j["manifest"]["wall_ms"] = wall_ms();
                write_file(out_json, j.dump(2) + "\n");
            }
        } else if (*c_bit) {
            std::string content = read_file(in_curve);
            Poly F = poly_from_json(Json::parse(content));
            BitangentSolve solve = solve_bitangents(F, tracker_config(common));
            bool signs_ok = true;
            try {
                SideFunction sf = normalize_sign(F, common.seed);
                assign_signs(solve, sf);
            } catch (const std::exception&) {
                signs_ok = false;  // empty real part still admits t0 records
            }
            std::cout << "bitangents: " << solve.records.size() << " total, "
                      << solve.real_count() << " real (t2 " << solve.count(RealityClass::real_t2)
                      << ", t0 " << solve.count(RealityClass::real_t0) << "), "
                      << solve.conj_pair_count() << " conjugate pairs\n";
            if (signs_ok)
                std::cout << "signed count: " << t_s_numeric(solve.records) << "\n";
            if (!out_json.empty()) {
                Json j = bitangents_to_json(solve);
                j["manifest"] =
                    make_manifest("bitangents", common, {{in_curve, content}}).to_json();
                j["manifest"]["wall_ms"] = wall_ms();
                write_file(out_json, j.dump(2) + "\n");
            }
            if (!bit_svg.empty()) write_file(bit_svg, svg_plot(F, solve.records));
        } else if (*c_census) {
            std::string pc = read_file(in_section), mc = read_file(in_section_meta);
            KSection s = ksection_from_files(in_section, in_section_meta);
            ensure_fibers(s, common);
            Census c = census_predict(s.fibers, s.k, sign_from_string(sign_str));
            std::cout << "census (k=" << s.k << ", sign " << sign_str << "): real "
                      << c.real_total << ", conjugate pairs " << c.conj_pairs << ", total "
                      << c.grand_total << "\n";
            auto b = c.buckets(s.component_is_oval);
            std::cout << "attribution: oval-self " << b[0] << " / long-self " << b[1]
                      << " / oval-pair " << b[2] << " / mixed " << b[3] << "+" << b[4] << "\n";
            if (!out_json.empty()) {
                Json j = census_to_json(c, s.component_is_oval);
                j["manifest"] = make_manifest("census", common,
                                              {{in_section, pc}, {in_section_meta, mc}})
                                    .to_json();
                j["manifest"]["wall_ms"] = wall_ms();
                write_file(out_json, j.dump(2) + "\n");
            }
        } else if (*c_verify) {
            Json solve = Json::parse(read_file(in_solve));
            Json topo = Json::parse(read_file(in_topo));
            int d = 0;
            {
                // Degree from the Pluecker total.
                long long total = solve.at("total").get<long long>();
                for (int dd = 2; dd <= 40; dd += 2)
                    if (pluecker(dd).bitangents == total) d = dd;
                if (d == 0) throw std::invalid_argument("verify: unrecognized bitangent total");
            }
            int p = topo.at("p").get<int>(), n = topo.at("n").get<int>();
            std::vector<IdentityReport> reports;
            IdentityReport ts;
            ts.name = "signed_count";
            long long ts_num = 0;
            for (const auto& r : solve.at("records"))
                if (r.contains("sign")) ts_num += r["sign"].get<int>();
            ts.lhs = ts_num;
            ts.rhs = t_s_formula(d, p, n);
            ts.pass = ts.lhs == ts.rhs;
            reports.push_back(ts);
            long long i_real = 0;
            bool have_inflections = solve.contains("i_real");
            if (have_inflections) {
                i_real = solve["i_real"].get<long long>();
                reports.push_back(klein_check(d, i_real, solve.at("real_t0").get<long long>()));
            }
            IdentityReport plt;
            plt.name = "pluecker_bitangents";
            plt.lhs = solve.at("total").get<long long>();
            plt.rhs = pluecker(d).bitangents;
            plt.pass = plt.lhs == plt.rhs;
            reports.push_back(plt);
            IdentityReport snc;
            snc.name = "signed_node_count";
            snc.lhs = signed_node_count_identity(d, p - n, n - p + 1);
            snc.rhs = t_s_formula(d, p, n);
            snc.pass = snc.lhs == snc.rhs;
            reports.push_back(snc);
            if (!in_census.empty()) {
                Json cj = Json::parse(read_file(in_census));
                IdentityReport cd;
                cd.name = "census_counts";
                cd.lhs = cj.at("real").get<long long>();
                cd.rhs = solve.at("real").get<long long>();
                cd.pass = cd.lhs == cd.rhs &&
                          cj.at("conj_pairs").get<long long>() ==
                              solve.at("conj_pairs").get<long long>();
                reports.push_back(cd);
            }
            bool all = true;
            Json out = Json::array();
            for (const auto& r : reports) {
                all &= r.pass;
                std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.lhs
                          << (r.pass ? " == " : " != ") << r.rhs << "\n";
                out.push_back(identity_to_json(r));
            }
            if (!out_json.empty()) write_file(out_json, out.dump(2) + "\n");
            if (!all) return 1;
        } else if (*c_pipe) {
            std::string content = read_file(in_curve);
            Poly F = poly_from_json(Json::parse(content));
            std::optional<KSection> section;
            std::map<std::string, std::string> inputs{{in_curve, content}};
            if (!in_section.empty()) {
                if (in_section_meta.empty())
                    throw std::invalid_argument("--ksection needs --ksection-meta");
                inputs[in_section] = read_file(in_section);
                inputs[in_section_meta] = read_file(in_section_meta);
                KSection s = ksection_from_files(in_section, in_section_meta);
                ensure_fibers(s, common);
                section = std::move(s);
            }
            PipelineOptions opts;
            opts.seed = common.seed;
            opts.tracker = tracker_config(common);
            PipelineResult res =
                run_pipeline(F, section, sign_from_string(sign_str), opts);
            RunManifest manifest = make_manifest("pipeline", common, inputs);
            manifest.wall_ms = wall_ms();
            write_file(report_path, res.to_json(manifest).dump(2) + "\n");
            if (!pipe_svg.empty()) write_file(pipe_svg, svg_plot(F, res.solve.records));
            std::cout << "scheme " << res.scheme.encoding << "; real bitangents "
                      << res.solve.real_count() << " (pairs " << res.solve.conj_pair_count()
                      << "); t_s " << res.ts_numeric << "\n";
            for (const auto& id : res.identities)
                std::cout << (id.pass ? "PASS " : "FAIL ") << id.name << ": " << id.lhs
                          << (id.pass ? " == " : " != ") << id.rhs << "\n";
            if (res.census_diff)
                std::cout << (res.census_diff->pass() ? "PASS " : "FAIL ")
                          << "census_diff: " << res.census_diff->detail << "\n";
            if (!res.all_pass()) return 1;
        } else if (*c_plot) {
            Poly F = poly_from_json(Json::parse(read_file(in_curve)));
            write_file(plot_out, svg_plot(F, {}));
            std::cout << "wrote " << plot_out << "\n";
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const TopologyError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const GeneralPositionError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const FamilyError& e) {
        std::cerr << "construction failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
