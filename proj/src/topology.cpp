#include "bitlab/topology.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "bitlab/realroot.hpp"

namespace bitlab {

namespace {

using Cx = std::complex<double>;

// Chart polynomials of a homogeneous F on the cube: 0: [s:t:1], 1: [s:1:t],
// 2: [1:s:t].
std::array<Poly, 3> chart_polys(const Poly& F) {
    std::vector<std::string> st{"s", "t"};
    Poly s = Poly::var(st, 0), t = Poly::var(st, 1), one = Poly::constant(st, 1);
    return {F.substitute({s, t, one}), F.substitute({s, one, t}), F.substitute({one, s, t})};
}

std::vector<QQ> chart_point(int chart, const QQ& x, const QQ& y) {
    switch (chart) {
        case 0: return {x, y, QQ(1)};
        case 1: return {x, QQ(1), y};
        default: return {QQ(1), x, y};
    }
}

// Chart representations (chart, s, t) of a projective rational point; one
// entry per weakly dominant coordinate.
std::vector<std::tuple<int, QQ, QQ>> chart_reps(const std::vector<QQ>& p) {
    std::vector<std::tuple<int, QQ, QQ>> out;
    QQ ax = abs(p[0]), ay = abs(p[1]), az = abs(p[2]);
    if (az != 0 && ax <= az && ay <= az) out.emplace_back(0, p[0] / p[2], p[1] / p[2]);
    if (ay != 0 && ax <= ay && az <= ay) out.emplace_back(1, p[0] / p[1], p[2] / p[1]);
    if (ax != 0 && ay <= ax && az <= ax) out.emplace_back(2, p[1] / p[0], p[2] / p[0]);
    return out;
}

// Univariate restriction F(base + s * dir) in the ring {"s"}.
Poly restrict_ray(const Poly& F, const std::vector<QQ>& base, const std::vector<QQ>& dir) {
    std::vector<std::string> sv{"s"};
    Poly s = Poly::var(sv, 0);
    std::vector<Poly> images;
    for (size_t i = 0; i < 3; ++i)
        images.push_back(Poly::constant(sv, base[i]) + s.scaled(dir[i]));
    return F.substitute(images);
}

struct EdgeRule {
    int chart_a, side_a, chart_b, side_b;
    bool flip;
};
// Cube-edge identifications between the three charts.
constexpr EdgeRule kEdgeRules[6] = {
    {0, 1, 2, 3, false}, {0, 0, 2, 2, true},  {0, 3, 1, 3, false},
    {0, 2, 1, 2, true},  {1, 1, 2, 1, false}, {1, 0, 2, 0, true},
};

struct CellRange {
    size_t cell;
    QQ lo, hi;  // range of the free coordinate along the boundary
};

std::vector<CellRange> side_ranges(const CurveGrid& grid, int chart, int side) {
    std::vector<CellRange> out;
    for (size_t idx : grid.boundary_cells(chart, side)) {
        const GridCell& c = grid.cells()[idx];
        QQ w = qq_pow2(1 - c.depth);
        int64_t free_i = (side == 0 || side == 1) ? c.iy : c.ix;
        QQ lo = CurveGrid::cell_lo(c.depth, free_i);
        out.push_back({idx, lo, lo + w});
    }
    return out;
}

}  // namespace

// ------------------------------------------------------------ SchemeGeometry

class SchemeGeometry {
  public:
    SchemeGeometry(const Poly& F, const TopologyConfig& cfg) : F_(F), cfg_(cfg) {
        cps_ = chart_polys(F);
        for (int c = 0; c < 3; ++c) {
            fgrad_[c][0] = FloatPoly(cps_[c].partial(size_t(0)));
            fgrad_[c][1] = FloatPoly(cps_[c].partial(size_t(1)));
        }
        build_at(cfg.depth_start);
    }

    void build_at(int depth) {
        std::vector<CurveGrid::ChartSpec> specs;
        for (const auto& cp : cps_)
            specs.push_back({FastPoly(cp), FastPoly(cp.partial(size_t(0))),
                             FastPoly(cp.partial(size_t(1))), EnclosedPoly(cp),
                             EnclosedPoly(cp.partial(size_t(0))),
                             EnclosedPoly(cp.partial(size_t(1)))});
        grid_ = std::make_unique<CurveGrid>(std::move(specs), depth, cfg_.depth_max,
                                            cfg_.cell_budget);
        bool ok = grid_->subdivide();
        if (std::getenv("BITLAB_DEBUG_GRID")) {
            std::map<int, int> bd;
            for (const auto& c : grid_->cells()) bd[c.depth]++;
            fprintf(stderr, "[grid] depth=%d ok=%d cells=%zu per-depth:", depth, ok,
                    grid_->cell_count());
            for (auto& [d, n] : bd) fprintf(stderr, " %d:%d", d, n);
            fprintf(stderr, "\n");
        }
        if (!ok)
            throw TopologyError("real_scheme: subdivision budget exhausted (singular curve?)");
        glue_edges(cps_);
        grid_->finalize();
        depth_ = depth;
    }

    int depth() const { return depth_; }
    const CurveGrid& grid() const { return *grid_; }
    const Poly& F() const { return F_; }

    // Clusters of kept cells containing the point.
    std::set<int> clusters_at(const std::vector<QQ>& p) const {
        std::set<int> out;
        for (const auto& [chart, s, t] : chart_reps(p))
            for (size_t idx : grid_->cells_at(chart, s, t)) {
                int cl = grid_->cluster_of_cell(idx);
                if (cl >= 0) out.insert(cl);
            }
        return out;
    }

    bool off_curve_certified(const std::vector<QQ>& p) const {
        auto reps = chart_reps(p);
        if (reps.empty()) return false;
        for (const auto& [chart, s, t] : reps)
            for (size_t idx : grid_->cells_at(chart, s, t))
                if (grid_->cluster_of_cell(idx) >= 0) return false;
        return true;
    }

    int cluster_count() const { return grid_->cluster_count(); }

    // A representative projective point for each cluster (a kept cell center).
    std::vector<QQ> cluster_anchor(int cluster) const {
        for (size_t i = 0; i < grid_->cells().size(); ++i) {
            if (grid_->cluster_of_cell(i) != cluster) continue;
            const GridCell& c = grid_->cells()[i];
            IntervalBox b = grid_->cell_box(c);
            return chart_point(c.chart, b.coords[0].mid(), b.coords[1].mid());
        }
        throw TopologyError("cluster_anchor: empty cluster");
    }

    std::vector<std::vector<QQ>> witness_candidates(int cluster, size_t max_count) const;

  private:
    void glue_edges(const std::array<Poly, 3>& cps) {
        for (const EdgeRule& r : kEdgeRules) {
            auto ra = side_ranges(*grid_, r.chart_a, r.side_a);
            auto rb = side_ranges(*grid_, r.chart_b, r.side_b);
            for (const auto& a : ra) {
                for (const auto& b : rb) {
                    // Map b's range into a's free coordinate.
                    QQ blo = r.flip ? -b.hi : b.lo;
                    QQ bhi = r.flip ? -b.lo : b.hi;
                    QQ lo = std::max(a.lo, blo), hi = std::min(a.hi, bhi);
                    if (lo > hi) continue;
                    // Does the curve meet the shared segment?
                    const GridCell& ca = grid_->cells()[a.cell];
                    QQ fixed = (r.side_a == 0 || r.side_a == 2) ? QQ(-1) : QQ(1);
                    IntervalBox seg({QInterval(fixed, fixed), QInterval(lo, hi)});
                    if (r.side_a == 2 || r.side_a == 3)
                        std::swap(seg.coords[0], seg.coords[1]);
                    if (interval_evaluate(cps[ca.chart], seg).contains_zero())
                        grid_->link(a.cell, b.cell);
                }
            }
        }
    }

    Poly F_;
    TopologyConfig cfg_;
    std::array<Poly, 3> cps_;
    std::array<std::array<FloatPoly, 2>, 3> fgrad_;
    std::unique_ptr<CurveGrid> grid_;
    int depth_ = 0;
};

std::vector<std::vector<QQ>> SchemeGeometry::witness_candidates(int cluster,
                                                                size_t max_count) const {
    // Probes a few cell-widths away from the cluster's own cells along the
    // curve normal: near enough that they cannot sit inside an unrelated
    // nested oval, directed so that thin crescent interiors get hit.
    std::vector<std::vector<QQ>> out;
    size_t total = 0;
    for (size_t i = 0; i < grid_->cells().size(); ++i)
        if (grid_->cluster_of_cell(i) == cluster) ++total;
    size_t stride = std::max<size_t>(1, total / 11);
    size_t seen = 0;
    for (size_t i = 0; i < grid_->cells().size() && out.size() < max_count; ++i) {
        if (grid_->cluster_of_cell(i) != cluster) continue;
        if ((seen++ % stride) != 0) continue;
        const GridCell& c = grid_->cells()[i];
        IntervalBox b = grid_->cell_box(c);
        QQ w = b.coords[0].width();
        QQ mx = b.coords[0].mid(), my = b.coords[1].mid();
        // Unit normal from the gradient, snapped to w/16 steps.
        double pt[2] = {qq_double(mx), qq_double(my)};
        double gx = fgrad_[c.chart][0].eval(pt), gy = fgrad_[c.chart][1].eval(pt);
        double gn = std::hypot(gx, gy);
        std::vector<std::pair<QQ, QQ>> dirs;
        if (gn > 0 && std::isfinite(gn)) {
            QQ nx(std::lround(16.0 * gx / gn), 16);
            QQ ny(std::lround(16.0 * gy / gn), 16);
            nx.canonicalize();
            ny.canonicalize();
            if (nx != 0 || ny != 0) dirs.emplace_back(nx, ny);
        }
        dirs.emplace_back(QQ(1), QQ(0));
        dirs.emplace_back(QQ(0), QQ(1));
        const QQ dists[4] = {QQ(w * 2), QQ(w * 4), QQ(w), QQ(w * 8)};
        for (const auto& [dx, dy] : dirs) {
            for (const QQ& dist : dists) {
                for (int sgn : {1, -1}) {
                    if (out.size() >= max_count) return out;
                    QQ px = mx + dist * dx * sgn, py = my + dist * dy * sgn;
                    if (abs(px) > 1 || abs(py) > 1) continue;
                    auto p = chart_point(c.chart, px, py);
                    if (off_curve_certified(p)) out.push_back(p);
                }
            }
        }
    }
    return out;
}

// ------------------------------------------------------------- avoid line

namespace {

struct AvoidLine {
    std::vector<QQ> base;  // B1: a rational point on the line
    std::vector<QQ> dir;   // B0: second basis point
};

// A projective line with no real point on the curve, found by random search
// with exact certification.
AvoidLine find_avoid_line(const Poly& F, uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0xA5A5A5A5DEADBEEFull);
    std::uniform_int_distribution<int> coef(-19, 19);
    for (int attempt = 0; attempt < 800; ++attempt) {
        long a = coef(rng), b = coef(rng), c = coef(rng);
        if (a == 0 && b == 0 && c == 0) continue;
        std::vector<QQ> B0, B1;
        if (a != 0) {
            B0 = {QQ(b), QQ(-a), QQ(0)};
            B1 = {QQ(c), QQ(0), QQ(-a)};
        } else if (b != 0) {
            B0 = {QQ(1), QQ(0), QQ(0)};
            B1 = {QQ(0), QQ(c), QQ(-b)};
        } else {
            B0 = {QQ(1), QQ(0), QQ(0)};
            B1 = {QQ(0), QQ(1), QQ(0)};
        }
        if (F.evaluate(B0) == 0) continue;
        Poly g = restrict_ray(F, B1, B0);  // F(B1 + s B0); missing point is [B0]
        if (g.is_zero()) continue;
        Poly sf = squarefree_part(g);
        bool has_real = false;
        if (sf.degree_in(0) > 0) has_real = !isolate_real_roots(sf).empty();
        if (!has_real) return {B1, B0};
    }
    throw TopologyError("normalize_sign: no curve-avoiding line found");
}

}  // namespace

// ---------------------------------------------------------- crossing counts

namespace {

// Parity of transversal crossings with each cluster along the straight
// segment from p0 to p1 (projective representatives). Returns nullopt when
// the segment is degenerate for this purpose (tangency, endpoint on curve).
std::optional<std::map<int, int>> segment_crossings(const SchemeGeometry& geo,
                                                    const std::vector<QQ>& p0,
                                                    const std::vector<QQ>& p1) {
    const Poly& F = geo.F();
    std::vector<QQ> d = {p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]};
    Poly g = restrict_ray(F, p0, d);  // F(p0 + s(p1-p0))
    if (g.is_zero()) return std::nullopt;
    auto coeffs = uni_coeff_vector(g);
    if (sign_at(coeffs, 0) == 0 || sign_at(coeffs, 1) == 0) return std::nullopt;
    Poly sf = squarefree_part(g);
    if (sf.degree_in(0) != g.degree_in(0)) {
        // Multiple roots somewhere; reject if any real multiple root lies in
        // the segment range.
        Poly mult = g.divrem(sf.scaled(1 / uni_coeff_vector(sf).back()), 0).quot;
        Poly msf = mult.degree_in(0) > 0 ? squarefree_part(mult) : mult;
        if (msf.degree_in(0) > 0)
            for (const auto& iv : isolate_real_roots(msf))
                if (iv.hi > 0 && iv.lo < 1) return std::nullopt;
    }
    auto sfc = uni_coeff_vector(sf);
    std::map<int, int> parity;
    for (auto iv : isolate_real_roots(sf)) {
        if (iv.hi <= 0 || iv.lo >= 1) continue;
        // Shrink until strictly inside (0,1).
        while (iv.lo <= 0 || iv.hi >= 1) {
            QQ w = iv.width();
            if (w == 0) break;
            refine_root(sfc, iv, w / 4);
        }
        if (iv.lo <= 0 || iv.hi >= 1) continue;  // root at boundary: skip
        // Attribute the crossing point to a cluster.
        std::optional<int> owner;
        for (int round = 0; round < 24; ++round) {
            QQ s = iv.mid();
            std::vector<QQ> pt = {p0[0] + s * d[0], p0[1] + s * d[1], p0[2] + s * d[2]};
            auto cl = geo.clusters_at(pt);
            if (cl.size() == 1) {
                owner = *cl.begin();
                break;
            }
            if (iv.width() == 0) break;
            refine_root(sfc, iv, iv.width() / 16);
        }
        if (!owner) return std::nullopt;
        parity[*owner] ^= 1;
    }
    return parity;
}

}  // namespace

// ----------------------------------------------------------- real_scheme

int RealScheme::locate(const std::vector<QQ>& point) const {
    if (!geometry) return -1;
    std::vector<QQ> p = point;
    QQ mx = std::max({abs(p[0]), abs(p[1]), abs(p[2])});
    if (mx == 0) return -1;
    for (auto& c : p) c /= mx;
    const std::vector<QQ>& pref = p;
    auto cl = geometry->clusters_at(pref);
    // The rounded point may fall just outside the kept cells; widen the
    // probe dyadically until exactly one cluster is in range.
    for (int d = 36; d >= 2 && cl.size() != 1; --d) {
        QQ off = qq_pow2(-d);
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dz = -1; dz <= 1; ++dz) {
                    std::vector<QQ> q = {p[0] + off * dx, p[1] + off * dy, p[2] + off * dz};
                    if (q[0] == 0 && q[1] == 0 && q[2] == 0) continue;
                    for (int c : geometry->clusters_at(q)) cl.insert(c);
                }
        if (cl.size() > 1) return -1;
    }
    if (cl.size() != 1) return -1;
    for (size_t i = 0; i < ovals.size(); ++i)
        if (ovals[i].cluster == *cl.begin()) return static_cast<int>(i);
    return -1;
}

int RealScheme::locate(const double* xyz) const {
    std::vector<QQ> p = {qq_from_double(xyz[0]), qq_from_double(xyz[1]), qq_from_double(xyz[2])};
    return locate(p);
}

std::string encode_scheme(const std::vector<Oval>& ovals) {
    size_t n = ovals.size();
    std::vector<std::vector<size_t>> children(n + 1);
    for (size_t i = 0; i < n; ++i)
        children[ovals[i].parent < 0 ? n : static_cast<size_t>(ovals[i].parent)].push_back(i);
    std::function<std::string(size_t)> enc = [&](size_t node) -> std::string {
        long leaves = 0;
        std::vector<std::string> parts;
        for (size_t ch : children[node]) {
            if (children[ch].empty())
                ++leaves;
            else
                parts.push_back("1⟨" + enc(ch) + "⟩");
        }
        std::sort(parts.begin(), parts.end());
        std::string out;
        if (leaves > 0) out = std::to_string(leaves);
        for (const auto& p : parts) {
            if (!out.empty()) out += " ⊔ ";
            out += p;
        }
        return out;
    };
    return "⟨" + enc(n) + "⟩";
}

namespace {

// Witness placement, crossing parities, nesting forest. Throws
// TopologyError when the current grid resolution is too coarse to place a
// witness or resolve a crossing.
RealScheme assemble_scheme(std::shared_ptr<SchemeGeometry> geo, const Poly& F,
                           const TopologyConfig& cfg) {
    RealScheme scheme;
    scheme.geometry = geo;
    int nc = geo->cluster_count();
    if (nc == 0) {
        scheme.encoding = "⟨⟩";
        return scheme;
    }

    AvoidLine line = find_avoid_line(F, cfg.seed);
    auto q0_choice = [&line](int i) {
        std::vector<QQ> q(3);
        for (int c = 0; c < 3; ++c) q[c] = line.base[c] + QQ(i * i + 1) * line.dir[c];
        return q;
    };

    scheme.ovals.resize(nc);
    for (int cl = 0; cl < nc; ++cl) {
        auto candidates = geo->witness_candidates(cl, 40);
        bool placed = false;
        for (const auto& cand : candidates) {
            for (int qi = 0; qi < 6 && !placed; ++qi) {
                auto par = segment_crossings(*geo, cand, q0_choice(qi));
                if (!par) continue;
                auto it = par->find(cl);
                int self_par = it == par->end() ? 0 : it->second;
                if (self_par == 1) {
                    Oval& o = scheme.ovals[cl];
                    o.cluster = cl;
                    o.witness = cand;
                    placed = true;
                }
                break;  // candidate is resolved one way or the other
            }
            if (placed) break;
        }
        if (!placed) throw TopologyError("real_scheme: no interior witness found for an oval");
    }

    // Containment from crossing parities: oval i is inside oval j iff the
    // witness of i sees j an odd number of times.
    std::vector<std::vector<bool>> inside(nc, std::vector<bool>(nc, false));
    for (int i = 0; i < nc; ++i) {
        bool done = false;
        for (int qi = 0; qi < 10 && !done; ++qi) {
            auto par = segment_crossings(*geo, scheme.ovals[i].witness, q0_choice(qi));
            if (!par) continue;
            auto self = par->find(i);
            if (self == par->end() || self->second != 1)
                throw TopologyError("real_scheme: witness drifted outside its oval");
            for (const auto& [cl, odd] : *par)
                if (cl != i && odd) inside[i][cl] = true;
            done = true;
        }
        if (!done) throw TopologyError("real_scheme: nesting probes kept degenerating");
    }
    for (int i = 0; i < nc; ++i) {
        Oval& o = scheme.ovals[i];
        o.depth = 0;
        o.parent = -1;
        int best_depth = -1;
        for (int j = 0; j < nc; ++j)
            if (inside[i][j]) ++o.depth;
        for (int j = 0; j < nc; ++j) {
            if (!inside[i][j]) continue;
            int dj = 0;
            for (int l = 0; l < nc; ++l)
                if (inside[j][l]) ++dj;
            if (dj > best_depth) {
                best_depth = dj;
                o.parent = j;
            }
        }
    }
    for (const auto& o : scheme.ovals) (o.even() ? scheme.p : scheme.n)++;
    scheme.encoding = encode_scheme(scheme.ovals);
    return scheme;
}

}  // namespace

RealScheme real_scheme(const Poly& F, const TopologyConfig& cfg) {
    if (F.is_zero()) throw std::invalid_argument("real_scheme: zero polynomial");
    auto deg = F.degree();
    if (!deg || *deg % 2 != 0) throw std::invalid_argument("real_scheme: even degree required");
    if (!verify_nonsingular_real(F))
        throw TopologyError("real_scheme: could not certify the curve non-singular");

    auto geo = std::make_shared<SchemeGeometry>(F, cfg);
    int agree = 0;
    int last_count = -1;
    std::string last_err = "component structure did not stabilize";
    for (int depth = cfg.depth_start;; ++depth) {
        if (depth > cfg.depth_start) geo->build_at(depth);
        int nc = geo->cluster_count();
        if (nc == last_count)
            ++agree;
        else
            agree = 0;
        last_count = nc;
        if (agree + 1 >= cfg.stability_rounds) {
            try {
                RealScheme scheme = assemble_scheme(geo, F, cfg);
                long d = *deg;
                if (static_cast<long>(scheme.ovals.size()) > (d - 1) * (d - 2) / 2 + 1)
                    throw TopologyError("real_scheme: oval count exceeds the Harnack bound");
                return scheme;
            } catch (const TopologyError& e) {
                // Witnesses or crossings unresolvable at this resolution:
                // refine and retry.
                last_err = e.what();
                agree = 0;
            }
        }
        if (depth >= cfg.depth_max) throw TopologyError(last_err);
    }
}

// ------------------------------------------------- verify_nonsingular_real

bool verify_nonsingular_real(const Poly& F, int depth_max, size_t cell_budget) {
    auto cps = chart_polys(F);
    for (const auto& f : cps) {
        FastPoly ef(f), ex(f.partial(size_t(0))), ey(f.partial(size_t(1)));
        struct Item {
            int depth;
            int64_t ix, iy;
        };
        std::vector<Item> stack{{0, 0, 0}};
        size_t visited = 0;
        while (!stack.empty()) {
            Item it = stack.back();
            stack.pop_back();
            if (++visited > cell_budget) return false;
            double w = std::ldexp(1.0, 1 - it.depth);
            double x0 = -1.0 + std::ldexp(static_cast<double>(it.ix), 1 - it.depth);
            double y0 = -1.0 + std::ldexp(static_cast<double>(it.iy), 1 - it.depth);
            DInterval box[2] = {DInterval(x0, x0 + w), DInterval(y0, y0 + w)};
            if (!ef.evaluate(box).contains_zero()) continue;
            if (!ex.evaluate(box).contains_zero()) continue;
            if (!ey.evaluate(box).contains_zero()) continue;
            if (it.depth >= depth_max) return false;
            for (int dx = 0; dx < 2; ++dx)
                for (int dy = 0; dy < 2; ++dy)
                    stack.push_back({it.depth + 1, 2 * it.ix + dx, 2 * it.iy + dy});
        }
    }
    return true;
}

// ------------------------------------------------------------ SideFunction

int SideFunction::sign_at(const std::vector<QQ>& point) const {
    return qq_sign(F.evaluate(point));
}

int SideFunction::sign_at(const double* xyz) const {
    std::vector<CDD> x(3);
    for (int i = 0; i < 3; ++i) x[i] = CDD(xyz[i], 0.0);
    CDD acc(0.0);
    double noise = 0.0;
    for (const auto& [e, c] : F.terms()) {
        CDD m(qq_double(c), 0.0);
        double am = std::abs(qq_double(c));
        for (size_t i = 0; i < 3; ++i)
            for (uint32_t k = 0; k < e[i]; ++k) {
                m = m * x[i];
                am *= std::abs(xyz[i]);
            }
        acc = acc + m;
        noise += am;
    }
    double v = acc.re.to_double();
    if (std::abs(v) <= noise * 1e-28) return 0;
    return v > 0 ? 1 : -1;
}

SideFunction normalize_sign(const Poly& F, uint64_t seed) {
    if (F.nvars() != 3) throw std::invalid_argument("normalize_sign: homogeneous ternary input");
    auto deg = F.degree();
    if (!deg || *deg % 2 != 0) throw std::invalid_argument("normalize_sign: even degree required");
    AvoidLine line = find_avoid_line(F, seed);
    SideFunction sf;
    sf.line_base = line.base;
    sf.line_dir = line.dir;
    int s = qq_sign(F.evaluate(line.base));
    sf.F = (s < 0) ? F : -F;
    return sf;
}

std::pair<long, long> euler_char_regions(const RealScheme& s) {
    long chi_plus = s.p - s.n;
    return {chi_plus, 1 - chi_plus};
}

// --------------------------------------------------------- SectionTopology

SectionTopology::SectionTopology(const Poly& P, const TopologyConfig& cfg) {
    size_t ui = P.var_index("u"), wi = P.var_index("w");
    long k = P.degree_in(wi);
    if (k < 1) throw std::invalid_argument("SectionTopology: positive w-degree required");
    auto cs = P.coeffs_in(wi);
    Expo z(P.nvars(), 0);
    QQ lead = cs.back().coeff(z);
    if (lead == 0 || cs.back().term_count() != 1)
        throw std::invalid_argument("SectionTopology: w-leading coefficient must be constant");

    // Tight bound on |w| over the curve for |u| <= 1: numerically estimated
    // from sampled fiber roots, then certified exactly. Coefficient-sum
    // bounds are loose by orders of magnitude for root-product sections and
    // would bury the curve in a sliver of the box.
    {
        std::vector<FloatPoly> fcs;
        for (const auto& c : cs) fcs.push_back(FloatPoly(c));
        double wmax = 1e-6;
        for (int si = 0; si <= 64; ++si) {
            double uu = -1.0 + 2.0 * si / 64;
            std::vector<std::complex<double>> point(P.nvars());
            point[ui] = uu;
            std::vector<std::complex<double>> cvec;
            for (const auto& f : fcs) cvec.push_back(f.eval(point.data()));
            // Cauchy bound on the fiber polynomial, numerically.
            double lc = std::abs(cvec.back());
            if (!(lc > 0)) continue;
            double m = 0;
            for (size_t j = 0; j + 1 < cvec.size(); ++j) m = std::max(m, std::abs(cvec[j]) / lc);
            wmax = std::max(wmax, 1.0 + m);
        }
        QQ H = qq_pow2(qq_ceil_log2_abs(qq_from_double(wmax)));
        // Certify: the curve must not cross the horizontal edges w = +-H for
        // |u| <= 1, and the vertical-edge branches must stay inside.
        for (int grow = 0; grow < 64; ++grow, H *= 2) {
            bool ok = true;
            for (int sgn : {-1, 1}) {
                std::vector<Poly> im(P.nvars(), Poly(std::vector<std::string>{"u"}));
                im[ui] = Poly::var({"u"}, 0);
                im[wi] = Poly::constant({"u"}, H * sgn);
                Poly horiz = P.substitute(im);
                if (horiz.is_zero()) {
                    ok = false;
                    break;
                }
                Poly sf = squarefree_part(horiz);
                if (sf.degree_in(0) > 0)
                    for (const auto& iv : isolate_real_roots(sf))
                        if (iv.hi >= -1 && iv.lo <= 1) {
                            ok = false;
                            break;
                        }
                if (!ok) break;
                std::vector<Poly> ime(P.nvars(), Poly(std::vector<std::string>{"w"}));
                ime[ui] = Poly::constant({"w"}, QQ(sgn));
                ime[wi] = Poly::var({"w"}, 0);
                Poly edge = P.substitute(ime);
                if (edge.degree_in(0) < 1) continue;
                Poly esf = squarefree_part(edge);
                if (esf.degree_in(0) > 0)
                    for (const auto& iv : isolate_real_roots(esf))
                        if (abs(iv.lo) >= H || abs(iv.hi) >= H) {
                            ok = false;
                            break;
                        }
                if (!ok) break;
            }
            if (ok) break;
            if (grow == 63) throw TopologyError("SectionTopology: no certified w-bound found");
        }
        wbound_ = H;
    }

    // Q(u, v) = P(u, wbound * v) over [-1,1]^2, renamed to the chart ring.
    std::vector<std::string> st{"s", "t"};
    std::vector<Poly> images(P.nvars(), Poly(st));
    images[ui] = Poly::var(st, 0);
    images[wi] = Poly::var(st, 1).scaled(wbound_);
    Poly Q = P.substitute(images).primitive_part();

    int depth = cfg.depth_start;
    int agree = 0;
    int last = -1;
    std::vector<std::vector<size_t>> edge_clusters;
    while (true) {
        std::vector<CurveGrid::ChartSpec> specs;
        specs.push_back({FastPoly(Q), FastPoly(Q.partial(size_t(0))),
                         FastPoly(Q.partial(size_t(1))), EnclosedPoly(Q),
                         EnclosedPoly(Q.partial(size_t(0))),
                         EnclosedPoly(Q.partial(size_t(1)))});
        grid_ = std::make_unique<CurveGrid>(std::move(specs), depth, cfg.depth_max,
                                            cfg.cell_budget);
        if (!grid_->subdivide())
            throw TopologyError("SectionTopology: subdivision budget exhausted");
        grid_->finalize();  // labels needed to place the boundary branches

        // Glue boundary branches left-to-right in w-order.
        std::array<std::vector<size_t>, 2> branch_cells;
        for (int side = 0; side < 2; ++side) {
            QQ ucoord = side == 0 ? QQ(-1) : QQ(1);
            std::vector<Poly> im2(P.nvars(), Poly(std::vector<std::string>{"w"}));
            im2[ui] = Poly::constant({"w"}, ucoord);
            im2[wi] = Poly::var({"w"}, 0);
            Poly edge = P.substitute(im2);
            if (edge.degree_in(0) != k)
                throw GeneralPositionError("SectionTopology: branch escapes through a corner");
            Poly sf = squarefree_part(edge);
            if (sf.degree_in(0) != edge.degree_in(0))
                throw GeneralPositionError("SectionTopology: vertical tangency on the box edge");
            auto coeffs = uni_coeff_vector(edge);
            auto roots = isolate_real_roots(coeffs);
            for (auto iv : roots) {
                // Locate the cell holding (ucoord, root/wbound).
                size_t cell = static_cast<size_t>(-1);
                for (int round = 0; round < 80; ++round) {
                    auto hits = grid_->cells_at(0, ucoord, iv.mid() / wbound_);
                    std::set<size_t> on_edge;
                    std::set<int> cls;
                    for (size_t h : hits) {
                        if (grid_->cluster_of_cell(h) < 0) continue;
                        on_edge.insert(h);
                        cls.insert(grid_->cluster_of_cell(h));
                    }
                    if (cls.size() == 1) {
                        cell = *on_edge.begin();
                        break;
                    }
                    if (iv.width() == 0) break;
                    refine_root(coeffs, iv, iv.width() / 16);
                }
                if (cell == static_cast<size_t>(-1))
                    throw TopologyError("SectionTopology: boundary branch not locatable");
                branch_cells[side].push_back(cell);
            }
        }
        if (branch_cells[0].size() != branch_cells[1].size())
            throw TopologyError("SectionTopology: boundary branch counts differ");
        // Roots were emitted in increasing w order on both edges.
        for (size_t j = 0; j < branch_cells[0].size(); ++j)
            grid_->link(branch_cells[0][j], branch_cells[1][j]);
        grid_->finalize();  // relabel with the identifications in place

        // Oval flags: clusters not touching any boundary branch.
        std::set<int> long_clusters;
        for (int side = 0; side < 2; ++side)
            for (size_t c : branch_cells[side]) long_clusters.insert(grid_->cluster_of_cell(c));
        n_components_ = grid_->cluster_count();
        oval_flag_.assign(n_components_, true);
        for (int cl : long_clusters) oval_flag_[cl] = false;

        if (n_components_ == last)
            ++agree;
        else
            agree = 0;
        last = n_components_;
        if (agree + 1 >= cfg.stability_rounds) break;
        ++depth;
        if (depth > cfg.depth_max)
            throw TopologyError("SectionTopology: component structure did not stabilize");
    }
}

int SectionTopology::oval_count() const {
    int c = 0;
    for (bool b : oval_flag_) c += b;
    return c;
}

int SectionTopology::locate(double u, double w) const {
    QQ qu = qq_from_double(u), qv = qq_from_double(w) / wbound_;
    if (abs(qu) > 1 || abs(qv) > 1) return -1;
    auto hits = grid_->cells_at(0, qu, qv);
    std::set<int> cls;
    for (size_t h : hits)
        if (grid_->cluster_of_cell(h) >= 0) cls.insert(grid_->cluster_of_cell(h));
    if (cls.size() == 1) return *cls.begin();
    // The rounded point may sit just off the kept cells; search one cell out.
    for (int d = 30; d >= 1 && cls.size() != 1; --d) {
        QQ w2 = qq_pow2(1 - d);
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy) {
                QQ px = qu + w2 * dx, py = qv + w2 * dy;
                if (abs(px) > 1 || abs(py) > 1) continue;
                for (size_t h : grid_->cells_at(0, px, py))
                    if (grid_->cluster_of_cell(h) >= 0) cls.insert(grid_->cluster_of_cell(h));
            }
        if (cls.size() == 1) return *cls.begin();
        if (cls.size() > 1) return -1;
    }
    return cls.size() == 1 ? *cls.begin() : -1;
}

// --------------------------------------------------------------- fiber_data

namespace {

// All roots of a complex polynomial by Durand-Kerner; degree kept small.
std::vector<Cx> durand_kerner(std::vector<Cx> c) {
    while (!c.empty() && std::abs(c.back()) == 0.0) c.pop_back();
    if (c.size() <= 1) return {};
    size_t n = c.size() - 1;
    Cx lead = c.back();
    for (auto& v : c) v /= lead;
    std::vector<Cx> r(n);
    for (size_t i = 0; i < n; ++i) r[i] = std::pow(Cx(0.4, 0.9), static_cast<double>(i + 1));
    for (int it = 0; it < 300; ++it) {
        double moved = 0;
        for (size_t i = 0; i < n; ++i) {
            Cx num = 0;
            for (size_t j = c.size(); j-- > 0;) num = num * r[i] + c[j];
            Cx den = 1;
            for (size_t j = 0; j < n; ++j)
                if (j != i) den *= (r[i] - r[j]);
            Cx delta = num / den;
            r[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }
    return r;
}

}  // namespace

std::vector<TangentFiber> fiber_data(const KSection& s, const SectionTopology& topo,
                                     const PathTrackerConfig& cfg) {
    const Poly& P = s.P;
    size_t ui = P.var_index("u"), wi = P.var_index("w");
    int k = s.k;
    long expected = 4L * k * (k - 1);
    if (expected == 0) return {};

    Poly Pw = P.partial(wi);
    CompiledSystem sys({P, Pw});
    TrackStats stats;
    auto sols = track_total_degree(sys, cfg, &stats);

    Poly Pu = P.partial(ui);
    FloatPoly fPu(Pu), fPww(Pw.partial(wi));
    std::vector<std::array<Cx, 2>> pts;
    for (const auto& sol : sols) {
        Cx uv[2] = {sol.x[ui], sol.x[wi]};
        double scale = std::max(1.0, std::max(std::abs(uv[0]), std::abs(uv[1])));
        if (std::abs(fPu.eval(sol.x.data())) < 1e-7 * scale)
            throw TopologyError("fiber_data: singular point on the k-section");
        if (std::abs(fPww.eval(sol.x.data())) < 1e-9 * scale)
            throw GeneralPositionError("fiber_data: degenerate vertical tangency");
        pts.push_back({uv[0], uv[1]});
    }
    if (static_cast<long>(pts.size()) != expected) {
        std::ostringstream os;
        os << "fiber_data: found " << pts.size() << " tangent fibers, expected " << expected;
        throw GeneralPositionError(os.str());
    }
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        if (a[0].real() != b[0].real()) return a[0].real() < b[0].real();
        return a[0].imag() < b[0].imag();
    });
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        if (std::abs(pts[i][0] - pts[i + 1][0]) < 1e-7)
            throw GeneralPositionError("fiber_data: two tangent fibers share an abscissa");

    double rtol = cfg.reality_tol;
    std::vector<TangentFiber> fibers(pts.size());
    auto wcoeffs = P.coeffs_in(wi);
    std::vector<FloatPoly> wc;
    for (const auto& c : wcoeffs) wc.push_back(FloatPoly(c));

    for (size_t i = 0; i < pts.size(); ++i) {
        TangentFiber& f = fibers[i];
        f.index = static_cast<int>(i);
        f.u = pts[i][0].real();
        f.w = pts[i][1].real();
        double sc = 1.0 + std::abs(pts[i][0]);
        f.is_real = std::abs(pts[i][0].imag()) < rtol * sc && std::abs(pts[i][1].imag()) < rtol * sc;
        if (f.is_real) {
            f.component = topo.locate(f.u, f.w);
            if (f.component < 0)
                throw TopologyError("fiber_data: critical point not attributable to a component");
        }
        if (k >= 3) {
            // Deflate the fiber polynomial twice at the critical point.
            std::vector<Cx> c(wcoeffs.size());
            Cx upt[2] = {pts[i][0], pts[i][1]};
            std::vector<Cx> point(P.nvars());
            point[ui] = upt[0];
            point[wi] = Cx(0, 0);
            for (size_t j = 0; j < wc.size(); ++j) c[j] = wc[j].eval(point.data());
            for (int pass = 0; pass < 2; ++pass) {
                std::vector<Cx> q(c.size() - 1);
                Cx carry = 0;
                for (size_t j = c.size(); j-- > 1;) {
                    carry = c[j] + carry * upt[1];
                    q[j - 1] = carry;
                }
                c = std::move(q);
            }
            auto roots = durand_kerner(c);
            // Newton-polish on the full fiber polynomial.
            std::vector<Cx> full(wcoeffs.size());
            for (size_t j = 0; j < wc.size(); ++j) full[j] = wc[j].eval(point.data());
            for (auto& r : roots) {
                for (int it = 0; it < 40; ++it) {
                    Cx v = 0, dv = 0;
                    for (size_t j = full.size(); j-- > 0;) {
                        if (j + 1 < full.size()) dv = dv * r + v;
                        v = v * r + full[j];
                    }
                    if (std::abs(dv) == 0.0) break;
                    Cx step = v / dv;
                    r -= step;
                    if (std::abs(step) < 1e-15 * (1 + std::abs(r))) break;
                }
            }
            std::sort(roots.begin(), roots.end(), [](const Cx& a, const Cx& b) {
                if (a.real() != b.real()) return a.real() < b.real();
                return a.imag() < b.imag();
            });
            for (const auto& r : roots) {
                FiberPoint fp;
                fp.w = r.real();
                fp.is_real = f.is_real && std::abs(r.imag()) < rtol * (1 + std::abs(r));
                if (fp.is_real) {
                    if (std::abs(r.real() - f.w) < 1e-7 * (1 + std::abs(r)))
                        throw GeneralPositionError("fiber_data: extra fiber point collides with "
                                                   "the tangency");
                    fp.critical_above = f.w > r.real();
                    fp.component = topo.locate(f.u, fp.w);
                    if (fp.component < 0)
                        throw TopologyError("fiber_data: fiber point not attributable");
                }
                f.others.push_back(fp);
            }
        }
        f.others.resize(static_cast<size_t>(std::max(0, k - 2)));
    }
    // Conjugate pairing for non-real fibers.
    for (size_t i = 0; i < fibers.size(); ++i) {
        if (fibers[i].is_real || fibers[i].conj_partner >= 0) continue;
        double best = 1e100;
        size_t bj = i;
        for (size_t j = i + 1; j < fibers.size(); ++j) {
            if (fibers[j].is_real || fibers[j].conj_partner >= 0) continue;
            double d = std::abs(pts[i][0] - std::conj(pts[j][0]));
            if (d < best) {
                best = d;
                bj = j;
            }
        }
        if (bj == i || best > 1e-6 * (1 + std::abs(pts[i][0])))
            throw TopologyError("fiber_data: conjugation pairing failed");
        fibers[i].conj_partner = static_cast<int>(bj);
        fibers[bj].conj_partner = static_cast<int>(i);
    }
    return fibers;
}

}  // namespace bitlab
