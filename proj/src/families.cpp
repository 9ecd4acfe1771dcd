#include "bitlab/families.hpp"

#include <algorithm>
#include <sstream>

#include "bitlab/census.hpp"
#include "bitlab/realroot.hpp"

namespace bitlab {

namespace {

const std::vector<std::string> kUW{"u", "w"};
const std::vector<std::string> kXYZ{"x", "y", "z"};

Poly uw_poly() { return Poly(kUW); }

// Leading quasi-homogeneous part as a univariate polynomial in s = w/u^4:
// f(s) = sum_j a_{4(k-j),j} s^j.
Poly top_part_profile(const Poly& P, int k) {
    std::vector<std::string> sv{"s"};
    Poly f(sv);
    size_t ui = P.var_index("u"), wi = P.var_index("w");
    for (const auto& [e, c] : P.terms()) {
        if (static_cast<long>(e[ui]) + 4L * e[wi] != 4L * k) continue;
        Expo se(1, e[wi]);
        f.set_coeff(se, c + f.coeff(se));
    }
    return f;
}

}  // namespace

ValidationResult validate_ksection(const Poly& P, int k, const FamilyConfig& cfg) {
    ValidationResult res;
    if (P.is_zero() || P.nvars() != 2) {
        res.violation = {KSectionViolation::Kind::degree, "expected a nonzero polynomial in (u,w)"};
        return res;
    }
    size_t ui = P.var_index("u"), wi = P.var_index("w");
    for (const auto& [e, c] : P.terms()) {
        if (static_cast<long>(e[ui]) + 4L * e[wi] > 4L * k) {
            std::ostringstream os;
            os << "term u^" << e[ui] << " w^" << e[wi] << " outside the k-section triangle";
            res.violation = {KSectionViolation::Kind::support, os.str()};
            return res;
        }
    }
    res.cert.support_ok = true;

    Poly f = top_part_profile(P, k);
    if (f.degree_in(0) != k) {
        res.violation = {KSectionViolation::Kind::top_part,
                         "w^k coefficient vanishes: projection degree drops"};
        return res;
    }
    Poly g = uni_gcd(f, f.partial(size_t(0)));
    if (g.degree_in(0) > 0) {
        res.violation = {KSectionViolation::Kind::top_part,
                         "leading quasi-homogeneous part has a multiple factor"};
        return res;
    }
    res.cert.top_squarefree = true;

    // Singular points satisfy grad P = 0; find all gradient zeros and check
    // the curve passes through none of them.
    Poly Pu = P.partial(ui), Pw = P.partial(wi);
    auto du = Pu.degree(), dw = Pw.degree();
    if (!du || *du == 0 || !dw || *dw == 0) {
        // A constant nonzero partial certifies a nowhere-zero gradient;
        // a constant zero partial leaves a univariate gradient condition.
        bool grad_never_zero = (du && *du == 0 && !Pu.is_zero()) || (dw && *dw == 0 && !Pw.is_zero());
        if (!grad_never_zero && !Pu.is_zero() && !Pw.is_zero()) {
            res.violation = {KSectionViolation::Kind::singular,
                             "degenerate gradient system"};
            return res;
        }
        res.cert.nonsingular = grad_never_zero;
        if (!grad_never_zero) {
            res.violation = {KSectionViolation::Kind::singular, "gradient vanishes identically"};
            return res;
        }
        return res;
    }
    CompiledSystem sys({Pu.scaled(1 / Pu.max_abs_coeff()), Pw.scaled(1 / Pw.max_abs_coeff())});
    TrackStats stats;
    std::vector<TrackedSolution> sols = track_total_degree(sys, cfg.tracker, &stats);
    FloatPoly fP(P);
    double worst = 1e300;
    for (const auto& sol : sols) {
        double scale = std::max(1.0, fP.eval_abs(sol.x.data()));
        double v = std::abs(fP.eval(sol.x.data())) / scale;
        worst = std::min(worst, v);
        if (v < 1e-8) {
            std::ostringstream os;
            os << "singular point near (" << sol.x[ui] << ", " << sol.x[wi] << ")";
            res.violation = {KSectionViolation::Kind::singular, os.str()};
            return res;
        }
    }
    res.cert.nonsingular = true;
    res.cert.critical_points = static_cast<int>(sols.size());
    res.cert.min_gradient = worst == 1e300 ? 0.0 : worst;
    return res;
}

Poly normalize_section_domain(const Poly& P, QQ* center, QQ* scale) {
    size_t ui = P.var_index("u"), wi = P.var_index("w");
    QQ lo = 0, hi = 0;
    bool have = false;
    Poly Pw = P.partial(wi);
    if (!Pw.is_zero() && Pw.degree().value_or(0) > 0) {
        Poly disc = resultant(P, Pw, wi);
        if (!disc.is_zero() && disc.degree_in(ui) > 0) {
            Poly sf = squarefree_part(disc);
            if (sf.degree_in(ui) > 0) {
                auto roots = isolate_real_roots(sf);
                if (!roots.empty()) {
                    lo = roots.front().lo;
                    hi = roots.back().hi;
                    have = true;
                }
            }
        }
    }
    if (!have) {
        lo = -1;
        hi = 1;
    }
    QQ c = (lo + hi) / 2;
    QQ s = (hi - lo) / 2;
    // Map the critical range to exactly [-7/8, 7/8]: squeezing it tighter
    // shrinks the inter-root oscillations of the section and makes every
    // downstream feature needlessly thin. w carries weight 4 (the hypotenuse
    // of the k-section triangle), so it scales with s^4; the leftover factor
    // is a reparameterization of t downstream.
    s = s * QQ(8, 7);
    if (s == 0) s = 1;
    if (center) *center = c;
    if (scale) *scale = s;
    std::vector<Poly> images(2, uw_poly());
    images[ui] = Poly::constant(kUW, c) + Poly::var(kUW, ui).scaled(s);
    images[wi] = Poly::var(kUW, wi).scaled(qq_pow(s, 4));
    Poly out = P.substitute(images).primitive_part();

    // Balance the w-levels: an extra power-of-two w-scale only
    // reparameterizes t downstream but can cut the coefficient spread by
    // orders of magnitude, which the double-precision trackers need.
    long wdeg = out.degree_in(wi);
    if (wdeg > 0) {
        std::vector<double> level_max(wdeg + 1, 0.0);
        for (const auto& [e, coef] : out.terms()) {
            double a = std::abs(qq_double(coef));
            level_max[e[wi]] = std::max(level_max[e[wi]], a);
        }
        double best_spread = 1e300;
        long best_b = 0;
        for (long b = -80; b <= 80; ++b) {
            double mx = -1e300, mn = 1e300;
            for (long j = 0; j <= wdeg; ++j) {
                if (level_max[j] == 0) continue;
                double v = std::log2(level_max[j]) + static_cast<double>(j * b);
                mx = std::max(mx, v);
                mn = std::min(mn, v);
            }
            if (mx - mn < best_spread) {
                best_spread = mx - mn;
                best_b = b;
            }
        }
        if (best_b != 0) {
            std::vector<Poly> wimg(2, uw_poly());
            wimg[ui] = Poly::var(kUW, ui);
            wimg[wi] = Poly::var(kUW, wi).scaled(qq_pow2(best_b));
            out = out.substitute(wimg).primitive_part();
        }
    }
    return out;
}

KSection two_section(const FamilyConfig& cfg) {
    Poly u = Poly::var(kUW, 0), w = Poly::var(kUW, 1);
    Poly prod = Poly::constant(kUW, 1);
    for (int i = 0; i <= 7; ++i) prod = prod * (u - Poly::constant(kUW, i));
    Poly P = w * w - prod;
    KSection s;
    s.k = 2;
    s.P = normalize_section_domain(P);
    s.family = "two_section";
    auto v = validate_ksection(s.P, 2, cfg);
    if (!v.ok()) throw FamilyError("two_section: validation failed: " + v.violation->detail);
    s.cert = v.cert;
    return s;
}

KSection flip_w(const KSection& s) {
    KSection out = s;
    std::vector<Poly> images(2, uw_poly());
    size_t ui = s.P.var_index("u"), wi = s.P.var_index("w");
    images[ui] = Poly::var(kUW, ui);
    images[wi] = -Poly::var(kUW, wi);
    out.P = s.P.substitute(images).primitive_part();
    out.fibers.clear();
    return out;
}

void attach_fibers(KSection& s, const SectionTopology& topo, const FamilyConfig& cfg) {
    s.fibers = fiber_data(s, topo, cfg.tracker);
    s.component_is_oval = topo.oval_flags();
}

namespace {

// Topology gate for the Harnack family: the expected component census and
// all tangent fibers real.
bool harnack_shape_ok(KSection& s, const FamilyConfig& cfg, std::string* why) {
    try {
        SectionTopology topo(s.P, cfg.topology);
        int k = s.k;
        int want_ovals = (k - 1) * (2 * k - 1);
        if (topo.oval_count() != want_ovals) {
            *why = "oval count " + std::to_string(topo.oval_count()) + " != " +
                   std::to_string(want_ovals);
            return false;
        }
        if (topo.component_count() - topo.oval_count() != 1) {
            *why = "expected exactly one long component";
            return false;
        }
        attach_fibers(s, topo, cfg);
        for (const auto& f : s.fibers)
            if (!f.is_real) {
                *why = "non-real tangent fiber";
                return false;
            }
        return true;
    } catch (const std::runtime_error& e) {
        *why = e.what();
        return false;
    }
}

// Orient w so that t < 0 yields the Harnack embedding: the census at
// sign -1 must produce the closed-form conjugate-pair count.
bool orient_for_harnack(KSection& s, const FamilyConfig& cfg, std::string* why) {
    if (s.k < 3) return true;  // both embeddings agree through k = 2
    long long want = harnack_nonreal_pairs(s.k);
    Census c = census_predict(s.fibers, s.k, -1);
    if (c.conj_pairs == want) return true;
    KSection flipped = flip_w(s);
    std::string why2;
    if (!harnack_shape_ok(flipped, cfg, &why2)) {
        *why = "flipped section lost its shape: " + why2;
        return false;
    }
    Census c2 = census_predict(flipped.fibers, flipped.k, -1);
    if (c2.conj_pairs == want) {
        s = std::move(flipped);
        return true;
    }
    *why = "neither orientation matches the Harnack pair count";
    return false;
}

}  // namespace

KSection harnack_ksection(int k, std::vector<QQ> abscissas, std::vector<QQ> epsilons,
                          const FamilyConfig& cfg) {
    if (k < 1) throw std::invalid_argument("harnack_ksection: k >= 1");
    size_t total = 0;
    for (int m = 1; m <= k; ++m) total += 4 * m;
    if (abscissas.empty()) {
        for (size_t j = 0; j < total; ++j)
            abscissas.push_back(QQ(-9, 10) + QQ(9, 5) * QQ(j) / QQ(total - 1));
    }
    if (abscissas.size() != total)
        throw std::invalid_argument("harnack_ksection: need 4+8+...+4k abscissas");
    for (size_t j = 0; j + 1 < total; ++j)
        if (!(abscissas[j] < abscissas[j + 1]))
            throw std::invalid_argument("harnack_ksection: abscissas must strictly increase");
    bool search_eps = epsilons.empty();
    if (!search_eps && epsilons.size() != static_cast<size_t>(k))
        throw std::invalid_argument("harnack_ksection: need k epsilons");
    if (!search_eps)
        for (int m = 0; m + 1 < k; ++m)
            if (!(epsilons[m] > epsilons[m + 1]) || !(epsilons.back() > 0))
                throw std::invalid_argument("harnack_ksection: epsilons must decrease and stay positive");

    Poly u = Poly::var(kUW, 0), w = Poly::var(kUW, 1);
    auto build = [&](const std::vector<QQ>& eps) {
        Poly P = Poly::constant(kUW, 1);
        size_t off = 0;
        for (int m = 1; m <= k; ++m) {
            Poly prod = Poly::constant(kUW, 1);
            for (int i = 0; i < 4 * m; ++i) prod = prod * (u - Poly::constant(kUW, abscissas[off + i]));
            off += 4 * m;
            P = w * P - prod.scaled(eps[m - 1]);
        }
        return P.primitive_part();
    };

    // Geometric schedules eps_m = a * b^(m-1), fattest first: thin epsilons
    // make the youngest ovals needlessly hard for every downstream numeric.
    std::vector<std::pair<int, int>> schedule;
    for (int sum = 2; sum <= 14; ++sum)
        for (int ae = 1; ae < sum; ++ae) schedule.emplace_back(ae, sum - ae);

    std::string why = "retry budget exhausted";
    int attempts = search_eps ? static_cast<int>(schedule.size()) - 1 : 0;
    for (int attempt = 0; attempt <= attempts; ++attempt) {
        std::vector<QQ> eps = epsilons;
        if (search_eps) {
            eps.clear();
            auto [ae, be] = schedule[attempt];
            QQ e = qq_pow2(-ae);
            for (int m = 1; m <= k; ++m) {
                eps.push_back(e);
                e = e * qq_pow2(-be);
            }
        }
        KSection s;
        s.k = k;
        s.P = build(eps);
        s.family = "harnack_ksection";
        s.epsilon = eps.front();
        const bool dbg = std::getenv("BITLAB_DEBUG_FAMILY") != nullptr;
        auto v = validate_ksection(s.P, k, cfg);
        if (!v.ok()) {
            why = v.violation->detail;
            if (dbg) fprintf(stderr, "[harnack %d] validate: %s\n", attempt, why.c_str());
            if (!search_eps) throw FamilyError("harnack_ksection: " + why);
            continue;
        }
        s.cert = v.cert;
        if (k == 1) return s;  // no tangent fibers, nothing else to check
        if (!harnack_shape_ok(s, cfg, &why) || !orient_for_harnack(s, cfg, &why)) {
            if (dbg) fprintf(stderr, "[harnack %d] shape: %s\n", attempt, why.c_str());
            if (!search_eps) throw FamilyError("harnack_ksection: " + why);
            continue;
        }
        return s;
    }
    throw FamilyError("harnack_ksection: epsilon search failed: " + why);
}

Poly rational_3section_implicit() {
    std::vector<std::string> tuw{"theta", "u", "w"};
    Poly th = Poly::var(tuw, 0), u = Poly::var(tuw, 1), w = Poly::var(tuw, 2);
    auto c = [&tuw](long v) { return Poly::constant(tuw, v); };
    Poly den1 = (th - c(15)) * (th - c(16));
    Poly num1 = th * (th - c(1)) * (th - c(2));
    Poly A = u * den1 - num1;
    Poly num2 = Poly::constant(tuw, 1);
    for (int i = 3; i <= 14; ++i) num2 = num2 * (th - c(i));
    Poly B = w * den1.pow(4) + num2;
    Poly R = resultant(A, B, size_t(0));
    // Strip theta from the ring.
    Poly out(kUW);
    for (const auto& [e, coef] : R.terms()) {
        if (e[0] != 0) throw FamilyError("rational_3section: resultant kept theta");
        out.set_coeff({e[1], e[2]}, coef);
    }
    return out.primitive_part();
}

KSection rational_3section(const FamilyConfig& cfg) {
    Poly Prat = rational_3section_implicit();
    QQ center, scale;
    Poly Pn = normalize_section_domain(Prat, &center, &scale);
    size_t ui = Pn.var_index("u"), wi = Pn.var_index("w");
    Poly dsum = Pn.partial(ui) + Pn.partial(wi);

    std::string why = "epsilon search exhausted";
    const bool dbg = std::getenv("BITLAB_DEBUG_FAMILY") != nullptr;
    for (int r = -24; r <= 60; ++r) {
        QQ eps = qq_pow2(-r);
        KSection s;
        s.k = 3;
        s.P = (Pn + dsum.scaled(eps)).primitive_part();
        s.family = "rational_3section";
        s.epsilon = eps;
        auto v = validate_ksection(s.P, 3, cfg);
        if (!v.ok()) {
            why = v.violation->detail;
            if (dbg) fprintf(stderr, "[eps 2^%d] validate: %s\n", -r, why.c_str());
            continue;
        }
        s.cert = v.cert;
        try {
            SectionTopology topo(s.P, cfg.topology);
            if (topo.oval_count() != 10) {
                why = "oval count " + std::to_string(topo.oval_count()) + " != 10";
                if (dbg) fprintf(stderr, "[eps 2^%d] %s\n", -r, why.c_str());
                continue;
            }
            if (topo.component_count() != 11) {
                why = "component count != 11";
                if (dbg) fprintf(stderr, "[eps 2^%d] %s\n", -r, why.c_str());
                continue;
            }
            attach_fibers(s, topo, cfg);
            bool allreal = true;
            for (const auto& f : s.fibers) allreal &= f.is_real;
            if (!allreal) {
                why = "non-real tangent fiber";
                if (dbg) fprintf(stderr, "[eps 2^%d] %s\n", -r, why.c_str());
                continue;
            }
            if (!orient_for_harnack(s, cfg, &why)) {
                if (dbg) fprintf(stderr, "[eps 2^%d] orient: %s\n", -r, why.c_str());
                continue;
            }
            return s;
        } catch (const std::runtime_error& e) {
            why = e.what();
            if (dbg) fprintf(stderr, "[eps 2^%d] topo: %s\n", -r, why.c_str());
            continue;
        }
    }
    throw FamilyError("rational_3section: " + why);
}

Poly perturb_conic(const KSection& s, const QQ& t) {
    if (t == 0) throw std::invalid_argument("perturb_conic: t must be nonzero");
    int k = s.k;
    size_t ui = s.P.var_index("u"), wi = s.P.var_index("w");
    Poly x = Poly::var(kXYZ, 0), y = Poly::var(kXYZ, 1), z = Poly::var(kXYZ, 2);
    Poly conic = y * y - x * z;
    Poly out(kXYZ);
    for (const auto& [e, a] : s.P.terms()) {
        long i = e[ui], j = e[wi];
        long odd = i % 2;
        long i1 = i / 2;
        long i2 = (4L * k - i - 4 * j - odd) / 2;
        Poly term = Poly::monomial(kXYZ, a * qq_pow(t, k - j),
                                   {static_cast<uint32_t>(i1), static_cast<uint32_t>(odd),
                                    static_cast<uint32_t>(i2)});
        out += term * conic.pow(static_cast<unsigned>(j));
    }
    return out;
}

Poly perturb_conic_subst(const KSection& s, const QQ& t) {
    if (t == 0) throw std::invalid_argument("perturb_conic: t must be nonzero");
    int k = s.k;
    size_t ui = s.P.var_index("u"), wi = s.P.var_index("w");
    Poly x = Poly::var(kXYZ, 0), y = Poly::var(kXYZ, 1), z = Poly::var(kXYZ, 2);
    Poly fiber_image = (y * y - x * z).scaled(1 / t);  // w -> (y^2 - xz)/t
    Poly out(kXYZ);
    for (const auto& [e, a] : s.P.terms()) {
        long i = e[ui], j = e[wi];
        long i2 = 4L * k - i - 4 * j;  // v-exponent of the homogenization
        // u^i v^i2 rewritten through u^2 -> x, uv -> y, v^2 -> z.
        if ((i % 2) != (i2 % 2)) throw std::logic_error("perturb_conic: parity mismatch");
        Poly mono = Poly::monomial(kXYZ, a,
                                   {static_cast<uint32_t>(i / 2), static_cast<uint32_t>(i % 2),
                                    static_cast<uint32_t>(i2 / 2)});
        out += mono * fiber_image.pow(static_cast<unsigned>(j));
    }
    return out.scaled(qq_pow(t, k));
}

PerturbationParams shrink_t_until_stable(const KSection& s, int sign, const FamilyConfig& cfg) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("shrink_t: sign must be +-1");
    std::optional<std::tuple<int, int, std::string>> prev;  // (p, n, encoding) at previous m
    QQ prev_t;
    for (int m = 0; m <= 48; ++m) {
        QQ t = qq_pow2(-m) * sign;
        try {
            Poly F = perturb_conic(s, t).primitive_part();
            RealScheme sch = real_scheme(F, cfg.topology);
            std::tuple<int, int, std::string> sig{sch.p, sch.n, sch.encoding};
            if (prev && *prev == sig) return {prev_t, sign};
            prev = sig;
            prev_t = t;
        } catch (const std::runtime_error&) {
            prev.reset();
        }
    }
    throw FamilyError("shrink_t_until_stable: no stable parameter found");
}

}  // namespace bitlab
