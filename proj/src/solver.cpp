#include "bitlab/solver.hpp"

#include <algorithm>
#include <sstream>

#include "bitlab/invariants.hpp"

namespace bitlab {

namespace {

using Cx = std::complex<double>;

const std::vector<std::string> kXYZ{"x", "y", "z"};

// Random integer frame with comfortable determinant, plus its exact inverse.
struct Frame {
    std::vector<std::vector<QQ>> m;     // 3x3
    std::vector<std::vector<QQ>> minv;  // exact inverse
};

Frame random_frame(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coef(-6, 6);
    while (true) {
        std::vector<std::vector<QQ>> m(3, std::vector<QQ>(3));
        for (auto& row : m)
            for (auto& v : row) v = coef(rng);
        QQ det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                 m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                 m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if (abs(det) < 8) continue;
        std::vector<std::vector<QQ>> adj(3, std::vector<QQ>(3));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
                int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
                adj[j][i] = (m[i1][j1] * m[i2][j2] - m[i1][j2] * m[i2][j1]);
            }
        for (auto& row : adj)
            for (auto& v : row) v /= det;
        return {m, adj};
    }
}

Poly apply_frame(const Poly& F, const Frame& fr) {
    std::vector<Poly> images;
    for (int i = 0; i < 3; ++i) {
        Poly im(kXYZ);
        for (int j = 0; j < 3; ++j) im += Poly::var(kXYZ, j).scaled(fr.m[i][j]);
        images.push_back(im);
    }
    Poly G = F.substitute(images);
    return G.scaled(1 / G.max_abs_coeff());
}

std::array<Cx, 3> map_point(const std::vector<std::vector<QQ>>& m, const std::array<Cx, 3>& p) {
    std::array<Cx, 3> out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i] += qq_double(m[i][j]) * p[j];
    return out;
}

// l_orig = M^{-T} l_new.
std::array<Cx, 3> map_line(const Frame& fr, const std::array<Cx, 3>& l) {
    std::array<Cx, 3> out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i] += qq_double(fr.minv[j][i]) * l[j];
    return out;
}

struct BitangentSystem {
    std::vector<Poly> eqs;       // 4 equations in (a, b, e1, e2)
    std::vector<Poly> quot_abx;  // quotient coefficients in x over (a,b,e1,e2)
};

BitangentSystem build_bitangent_system(const Poly& G) {
    std::vector<std::string> xab{"x", "a", "b"};
    Poly X = Poly::var(xab, 0), A = Poly::var(xab, 1), B = Poly::var(xab, 2);
    Poly g = G.substitute({X, A * X + B, Poly::constant(xab, 1)});
    QuadRemainder qr = rem_by_quadratic_square(g, "x");

    // Strip x (degree 0 in the remainder) down to the ring (a, b, e1, e2).
    std::vector<std::string> abee{"a", "b", "e1", "e2"};
    BitangentSystem sys;
    size_t xi = qr.rem.front().var_index("x");
    auto strip = [&](const Poly& p) {
        Poly out(abee);
        for (const auto& [e, c] : p.terms()) {
            if (e[xi] != 0) throw std::logic_error("bitangent system: x survived");
            Expo f(4, 0);
            f[0] = e[p.var_index("a")];
            f[1] = e[p.var_index("b")];
            f[2] = e[p.var_index("e1")];
            f[3] = e[p.var_index("e2")];
            out.set_coeff(f, c);
        }
        return out;
    };
    for (const auto& r : qr.rem) {
        Poly s = strip(r);
        if (s.is_zero()) throw NumericalFailure("bitangent system: degenerate remainder");
        sys.eqs.push_back(s.scaled(1 / s.max_abs_coeff()));
    }
    for (const auto& qc : qr.quotient.coeffs_in(qr.quotient.var_index("x")))
        sys.quot_abx.push_back(strip(qc));
    return sys;
}

std::vector<Cx> durand_kerner_roots(std::vector<Cx> c) {
    while (!c.empty() && std::abs(c.back()) < 1e-250) c.pop_back();
    if (c.size() <= 1) return {};
    size_t n = c.size() - 1;
    Cx lead = c.back();
    for (auto& v : c) v /= lead;
    std::vector<Cx> r(n);
    for (size_t i = 0; i < n; ++i) r[i] = std::pow(Cx(0.4, 0.9), static_cast<double>(i + 1));
    for (int it = 0; it < 400; ++it) {
        double moved = 0;
        for (size_t i = 0; i < n; ++i) {
            Cx num = 0;
            for (size_t j = c.size(); j-- > 0;) num = num * r[i] + c[j];
            Cx den = 1;
            for (size_t j = 0; j < n; ++j)
                if (j != i) den *= (r[i] - r[j]);
            if (std::abs(den) < 1e-280) continue;
            Cx delta = num / den;
            r[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }
    return r;
}

void pair_conjugates_bitangents(std::vector<BitangentRecord>& recs, double tol) {
    auto canon = [](std::array<Cx, 3> l, bool conj) {
        if (conj)
            for (auto& v : l) v = std::conj(v);
        double n = 0;
        for (const auto& v : l) n = std::max(n, std::abs(v));
        int lead = -1;
        for (int i = 0; i < 3 && lead < 0; ++i)
            if (std::abs(l[i]) > 0.5 * n) lead = i;
        Cx piv = l[lead];
        for (auto& v : l) v /= piv;
        return l;
    };
    for (size_t i = 0; i < recs.size(); ++i) {
        if (recs[i].is_real() || recs[i].conj_partner >= 0) continue;
        auto want = canon(recs[i].line, true);
        double best = 1e300;
        size_t bj = i;
        for (size_t j = i + 1; j < recs.size(); ++j) {
            if (recs[j].is_real() || recs[j].conj_partner >= 0) continue;
            auto cand = canon(recs[j].line, false);
            double d = 0;
            for (int c = 0; c < 3; ++c) d += std::abs(want[c] - cand[c]);
            if (d < best) {
                best = d;
                bj = j;
            }
        }
        if (bj == i || best > tol)
            throw NumericalFailure("bitangents: conjugation closure violated");
        recs[i].conj_partner = static_cast<int>(bj);
        recs[bj].conj_partner = static_cast<int>(i);
    }
}

}  // namespace

long long BitangentSolve::count(RealityClass c) const {
    long long n = 0;
    for (const auto& r : records) n += (r.cls == c);
    return n;
}
long long BitangentSolve::real_count() const {
    return count(RealityClass::real_t2) + count(RealityClass::real_t0);
}
long long BitangentSolve::conj_pair_count() const { return count(RealityClass::complex_pair) / 2; }

BitangentSolve solve_bitangents(const Poly& F, const PathTrackerConfig& cfg) {
    if (F.nvars() != 3) throw std::invalid_argument("solve_bitangents: ternary form expected");
    auto degopt = F.degree();
    if (!degopt) throw std::invalid_argument("solve_bitangents: zero polynomial");
    int d = static_cast<int>(*degopt);
    long long expected = pluecker(d).bitangents;

    BitangentSolve out;
    out.summary.seed = cfg.seed;
    out.summary.expected = expected;
    if (expected == 0) return out;

    // Pool records across frames keyed by their frame-invariant dual line,
    // so a path lost under one frame or gamma is recovered by another.
    auto line_key = [](std::array<Cx, 3> l) {
        double n = 0;
        for (const auto& v : l) n = std::max(n, std::abs(v));
        int lead = -1;
        for (int i = 0; i < 3 && lead < 0; ++i)
            if (std::abs(l[i]) > 0.5 * n) lead = i;
        Cx piv = l[lead];
        for (auto& v : l) v /= piv;
        return l;
    };
    auto line_dist = [](const std::array<Cx, 3>& a, const std::array<Cx, 3>& b) {
        double s1 = 0;
        for (int i = 0; i < 3; ++i) s1 += std::abs(a[i] - b[i]);
        return s1;
    };
    std::vector<std::array<Cx, 3>> pool_keys;
    std::string last_err = "count mismatch";

    for (int frame_attempt = 0; frame_attempt < 6; ++frame_attempt) {
        if (static_cast<long long>(out.records.size()) >= expected) break;
        out.summary.frames_used = frame_attempt + 1;
        std::mt19937_64 rng(cfg.seed + 0x51ED2701ull * (frame_attempt + 1));
        Frame fr = random_frame(rng);
        Poly G = apply_frame(F, fr);
        BitangentSystem sys;
        try {
            sys = build_bitangent_system(G);
        } catch (const std::exception& e) {
            last_err = e.what();
            continue;
        }
        CompiledSystem csys(sys.eqs);
        out.frames.push_back(fr.m);
        int frame_index = static_cast<int>(out.frames.size()) - 1;

        for (int gamma_round = 0; gamma_round < 3; ++gamma_round) {
            if (static_cast<long long>(out.records.size()) >= expected) break;
            PathTrackerConfig tcfg = cfg;
            tcfg.seed = cfg.seed * 7919 + 1237 * frame_attempt + 31 * gamma_round;
            TrackStats st;
            auto sols = track_total_degree(csys, tcfg, &st);
            out.summary.stats.paths_total += st.paths_total;
            out.summary.stats.converged += st.converged;
            out.summary.stats.at_infinity += st.at_infinity;
            out.summary.stats.failed += st.failed;

            for (const auto& sol : sols) {
                BitangentRecord r;
                r.frame_index = frame_index;
                r.a = sol.x[0];
                r.b = sol.x[1];
                r.e1 = sol.x[2];
                r.e2 = sol.x[3];
                r.residual = sol.residual;
                Cx disc = r.e1 * r.e1 - 4.0 * r.e2;
                Cx sq = std::sqrt(disc);
                Cx x1 = (r.e1 + sq) / 2.0, x2 = (r.e1 - sq) / 2.0;
                std::array<Cx, 3> p1{x1, r.a * x1 + r.b, 1.0};
                std::array<Cx, 3> p2{x2, r.a * x2 + r.b, 1.0};
                r.points[0] = map_point(fr.m, p1);
                r.points[1] = map_point(fr.m, p2);
                r.line = map_line(fr, {r.a, Cx(-1.0), r.b});

                auto key = line_key(r.line);
                bool seen = false;
                for (const auto& k : pool_keys)
                    if (line_dist(k, key) < 1e-6) {
                        seen = true;
                        break;
                    }
                if (seen) continue;

                // Degeneracy guards: tangencies must stay simple, distinct,
                // and off the quotient roots.
                std::vector<Cx> qc;
                Cx pt[4] = {r.a, r.b, r.e1, r.e2};
                for (const auto& q : sys.quot_abx) qc.push_back(FloatPoly(q).eval(pt));
                auto qval = [&qc](Cx x) {
                    Cx v = 0;
                    for (size_t j = qc.size(); j-- > 0;) v = v * x + qc[j];
                    return v;
                };
                double qscale = 0;
                for (const auto& c : qc) qscale += std::abs(c);
                qscale = std::max(qscale, 1e-30);
                if (std::abs(qval(x1)) < 1e-7 * qscale || std::abs(qval(x2)) < 1e-7 * qscale) {
                    last_err = "tangency collides with a transversal intersection";
                    continue;
                }
                if (std::abs(disc) < 1e-12 * (1.0 + std::abs(r.e1) * std::abs(r.e1))) {
                    last_err = "four-fold tangency candidate";
                    continue;
                }
                r.other_roots = durand_kerner_roots(qc);

                double sc = 1.0 + std::abs(r.a) + std::abs(r.b) + std::abs(r.e1) + std::abs(r.e2);
                bool real = std::abs(r.a.imag()) < cfg.reality_tol * sc &&
                            std::abs(r.b.imag()) < cfg.reality_tol * sc &&
                            std::abs(r.e1.imag()) < cfg.reality_tol * sc &&
                            std::abs(r.e2.imag()) < cfg.reality_tol * sc;
                if (real)
                    r.cls = disc.real() > 0 ? RealityClass::real_t2 : RealityClass::real_t0;
                else
                    r.cls = RealityClass::complex_pair;
                if (r.cls == RealityClass::real_t0) r.sign = +1;
                pool_keys.push_back(key);
                out.records.push_back(std::move(r));
            }
        }
    }
    if (static_cast<long long>(out.records.size()) != expected) {
        std::ostringstream os;
        os << "solve_bitangents: non-generic or ill-conditioned curve: found "
           << out.records.size() << " bitangents, expected " << expected << " (" << last_err
           << ")";
        throw NumericalFailure(os.str());
    }
    // Deterministic order by dual line.
    std::vector<size_t> order(out.records.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
        const auto& a = out.records[i].line;
        const auto& b = out.records[j].line;
        for (int c = 0; c < 3; ++c) {
            if (a[c].real() != b[c].real()) return a[c].real() < b[c].real();
            if (a[c].imag() != b[c].imag()) return a[c].imag() < b[c].imag();
        }
        return false;
    });
    std::vector<BitangentRecord> sorted;
    sorted.reserve(out.records.size());
    for (size_t i : order) sorted.push_back(std::move(out.records[i]));
    out.records = std::move(sorted);
    try {
        pair_conjugates_bitangents(out.records, 1e-4);
    } catch (const std::exception& e) {
        throw NumericalFailure(std::string("solve_bitangents: ") + e.what());
    }
    return out;
}

std::vector<InflectionRecord> solve_inflections(const Poly& F, const PathTrackerConfig& cfg,
                                                SolveSummary* summary) {
    if (F.nvars() != 3) throw std::invalid_argument("solve_inflections: ternary form expected");
    auto degopt = F.degree();
    if (!degopt) throw std::invalid_argument("solve_inflections: zero polynomial");
    int d = static_cast<int>(*degopt);
    long long expected = pluecker(d).inflections;
    if (summary) {
        summary->seed = cfg.seed;
        summary->expected = expected;
    }
    if (expected == 0) return {};

    std::string last_err = "count mismatch";
    for (int frame_attempt = 0; frame_attempt < 4; ++frame_attempt) {
        if (summary) summary->frames_used = frame_attempt + 1;
        std::mt19937_64 rng(cfg.seed + 0x9D2C5681ull * (frame_attempt + 1));
        Frame fr = random_frame(rng);
        Poly G = apply_frame(F, fr);
        // Hessian determinant.
        std::vector<Poly> H2(9, Poly(kXYZ));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) H2[3 * i + j] = G.partial(i).partial(j);
        Poly hess = H2[0] * (H2[4] * H2[8] - H2[5] * H2[7]) -
                    H2[1] * (H2[3] * H2[8] - H2[5] * H2[6]) +
                    H2[2] * (H2[3] * H2[7] - H2[4] * H2[6]);
        std::vector<std::string> xy{"x", "y"};
        Poly X = Poly::var(xy, 0), Y = Poly::var(xy, 1), One = Poly::constant(xy, 1);
        Poly f = G.substitute({X, Y, One});
        Poly h = hess.substitute({X, Y, One});
        if (h.is_zero()) {
            last_err = "degenerate hessian";
            continue;
        }
        CompiledSystem csys({f.scaled(1 / f.max_abs_coeff()), h.scaled(1 / h.max_abs_coeff())});
        std::vector<TrackedSolution> sols;
        TrackStats stats{};
        for (int gamma_round = 0; gamma_round < 4; ++gamma_round) {
            PathTrackerConfig tcfg = cfg;
            tcfg.seed = cfg.seed * 6271 + 911 * frame_attempt + 53 * gamma_round;
            TrackStats st;
            auto batch = track_total_degree(csys, tcfg, &st);
            stats.paths_total += st.paths_total;
            stats.converged += st.converged;
            stats.at_infinity += st.at_infinity;
            stats.failed += st.failed;
            for (auto& b : batch) {
                bool dup = false;
                for (const auto& kept : sols) {
                    double d = 0, scale = 1;
                    for (size_t i = 0; i < b.x.size(); ++i) {
                        d = std::max(d, std::abs(b.x[i] - kept.x[i]));
                        scale = std::max(scale, std::abs(kept.x[i]));
                    }
                    if (d < cfg.dedup_radius * scale) {
                        dup = true;
                        break;
                    }
                }
                if (!dup) sols.push_back(std::move(b));
            }
            if (static_cast<long long>(sols.size()) >= expected) break;
        }
        std::sort(sols.begin(), sols.end(), [](const TrackedSolution& a, const TrackedSolution& b) {
            for (size_t i = 0; i < a.x.size(); ++i) {
                if (a.x[i].real() != b.x[i].real()) return a.x[i].real() < b.x[i].real();
                if (a.x[i].imag() != b.x[i].imag()) return a.x[i].imag() < b.x[i].imag();
            }
            return false;
        });
        if (summary) summary->stats = stats;
        if (static_cast<long long>(sols.size()) != expected) {
            std::ostringstream os;
            os << "found " << sols.size() << " inflections, expected " << expected;
            last_err = os.str();
            continue;
        }
        std::vector<InflectionRecord> recs;
        for (const auto& sol : sols) {
            InflectionRecord r;
            std::array<Cx, 3> p{sol.x[0], sol.x[1], 1.0};
            r.point = map_point(fr.m, p);
            double sc = 1.0 + std::abs(sol.x[0]) + std::abs(sol.x[1]);
            r.is_real = std::abs(sol.x[0].imag()) < cfg.reality_tol * sc &&
                        std::abs(sol.x[1].imag()) < cfg.reality_tol * sc;
            recs.push_back(r);
        }
        // Conjugate pairing among the non-real points.
        for (size_t i = 0; i < recs.size(); ++i) {
            if (recs[i].is_real || recs[i].conj_partner >= 0) continue;
            double best = 1e300;
            size_t bj = i;
            for (size_t j = i + 1; j < recs.size(); ++j) {
                if (recs[j].is_real || recs[j].conj_partner >= 0) continue;
                double dd = 0;
                for (int c = 0; c < 3; ++c)
                    dd += std::abs(recs[i].point[c] - std::conj(recs[j].point[c]));
                if (dd < best) {
                    best = dd;
                    bj = j;
                }
            }
            if (bj == i) {
                last_err = "inflection conjugation closure violated";
                recs.clear();
                break;
            }
            recs[i].conj_partner = static_cast<int>(bj);
            recs[bj].conj_partner = static_cast<int>(i);
        }
        if (!recs.empty()) return recs;
    }
    throw NumericalFailure(std::string("solve_inflections: ") + last_err);
}

void sign_of_bitangent(BitangentRecord& rec, const BitangentSolve& ctx, const SideFunction& sf) {
    if (rec.cls == RealityClass::real_t0) {
        rec.sign = +1;
        return;
    }
    if (rec.cls != RealityClass::real_t2)
        throw std::invalid_argument("sign_of_bitangent: real t2 record required");
    double a = rec.a.real(), b = rec.b.real();
    double disc = (rec.e1 * rec.e1 - 4.0 * rec.e2).real();
    double sq = std::sqrt(std::max(0.0, disc));
    double xs[2] = {(rec.e1.real() + sq) / 2.0, (rec.e1.real() - sq) / 2.0};
    int local[2] = {0, 0};
    for (int i = 0; i < 2; ++i) {
        // Probe distance: below half the gap to any other intersection.
        double gap = std::abs(xs[0] - xs[1]);
        for (const auto& r : rec.other_roots) gap = std::min(gap, std::abs(r - Cx(xs[i])));
        double delta = std::min(gap / 4.0, 0.1 * (1.0 + std::abs(xs[i])));
        if (!(delta > 0)) throw NumericalFailure("sign_of_bitangent: collapsed probe gap");
        int got = 0;
        for (int attempt = 0; attempt < 48 && !got; ++attempt, delta /= 2) {
            double xp = xs[i] + delta, xm = xs[i] - delta;
            std::array<Cx, 3> pp{Cx(xp), Cx(a * xp + b), Cx(1.0)};
            std::array<Cx, 3> pm{Cx(xm), Cx(a * xm + b), Cx(1.0)};
            const auto& fr = ctx.frames.at(rec.frame_index);
            auto Pp = map_point(fr, pp);
            auto Pm = map_point(fr, pm);
            double vp[3] = {Pp[0].real(), Pp[1].real(), Pp[2].real()};
            double vm[3] = {Pm[0].real(), Pm[1].real(), Pm[2].real()};
            int s1 = sf.sign_at(vp), s2 = sf.sign_at(vm);
            if (s1 != 0 && s1 == s2) got = s1;
            if (s1 != 0 && s2 != 0 && s1 != s2)
                continue;  // probes straddle another crossing: shrink
        }
        if (!got)
            throw NumericalFailure("sign_of_bitangent: probe signs kept disagreeing "
                                   "(tangency multiplicity > 2?)");
        local[i] = got;
    }
    rec.sign_p1 = local[0];
    rec.sign_p2 = local[1];
    rec.sign = local[0] * local[1];
}

void assign_signs(BitangentSolve& solve, const SideFunction& sf) {
    for (auto& r : solve.records)
        if (r.is_real()) sign_of_bitangent(r, solve, sf);
}

long long t_s_numeric(const std::vector<BitangentRecord>& records) {
    long long s = 0;
    for (const auto& r : records) {
        if (!r.is_real()) continue;
        if (r.sign == 0)
            throw std::invalid_argument("t_s_numeric: real record without an assigned sign");
        s += r.sign;
    }
    return s;
}

std::vector<TrackedSolution> track_paths(const std::vector<Poly>& eqs,
                                         const PathTrackerConfig& cfg, TrackStats* stats) {
    CompiledSystem sys(eqs);
    return track_total_degree(sys, cfg, stats);
}

}  // namespace bitlab
