#include "bitlab/curve2d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <deque>
#include <stdexcept>

namespace bitlab {

CurveGrid::CurveGrid(std::vector<ChartSpec> charts, int depth_min, int depth_max,
                     size_t cell_budget)
    : charts_(std::move(charts)), dmin_(depth_min), dmax_(depth_max), budget_(cell_budget) {
    if (dmin_ < 1 || dmax_ < dmin_) throw std::invalid_argument("CurveGrid: bad depth range");
}

QQ CurveGrid::cell_lo(int depth, int64_t i) {
    // [-1,1] split into 2^depth slots.
    return -1 + QQ(i) * qq_pow2(1 - depth);
}

namespace {
// Exact for depth <= 52: dyadic bounds are representable doubles.
double cell_lo_d(int depth, int64_t i) { return -1.0 + std::ldexp(static_cast<double>(i), 1 - depth); }

void cell_box_d(const GridCell& c, DInterval* out) {
    double w = std::ldexp(1.0, 1 - c.depth);
    double x0 = cell_lo_d(c.depth, c.ix), y0 = cell_lo_d(c.depth, c.iy);
    out[0] = DInterval(x0, x0 + w);
    out[1] = DInterval(y0, y0 + w);
}
}  // namespace

IntervalBox CurveGrid::cell_box(const GridCell& c) const {
    QQ w = qq_pow2(1 - c.depth);
    QQ x0 = cell_lo(c.depth, c.ix), y0 = cell_lo(c.depth, c.iy);
    return IntervalBox({QInterval(x0, x0 + w), QInterval(y0, y0 + w)});
}

bool CurveGrid::subdivide() {
    struct Item {
        GridCell c;
    };
    std::deque<Item> queue;
    for (int chart = 0; chart < static_cast<int>(charts_.size()); ++chart)
        queue.push_back({GridCell{chart, 0, 0, 0}});
    size_t visited = 0;
    const bool dbg = std::getenv("BITLAB_DEBUG_GRID") != nullptr;
    size_t mpq_calls = 0;
    std::map<int, long> visits_by_depth;
    while (!queue.empty()) {
        GridCell c = queue.front().c;
        queue.pop_front();
        if (++visited > budget_) {
            certified_ = false;
            break;
        }
        if (dbg) {
            visits_by_depth[c.depth]++;
            if (visited % 200000 == 0) {
                fprintf(stderr, "[sub] visited=%zu mpq=%zu by-depth:", visited, mpq_calls);
                for (auto& [d, n] : visits_by_depth) fprintf(stderr, " %d:%ld", d, n);
                fprintf(stderr, "\n");
            }
        }
        DInterval box[2];
        cell_box_d(c, box);
        const auto& ch = charts_[c.chart];
        const int fallback_depth = dmin_ + 2;
        bool excluded = !ch.f.evaluate(box).contains_zero();
        DInterval gx, gy;
        bool have_grad = false;
        bool blind = false;  // double error bound swallowed the window
        if (!excluded) {
            // Mean-value form: f(center) +- (sup|fx| + sup|fy|) * w/2 is
            // first-order sharp, so undecidable bands die out one level down
            // instead of descending forever.
            gx = ch.fx.evaluate(box);
            gy = ch.fy.evaluate(box);
            have_grad = true;
            double half = 0.5 * (box[0].hi - box[0].lo);
            double ctr[2] = {0.5 * (box[0].lo + box[0].hi), 0.5 * (box[1].lo + box[1].hi)};
            double v, b;
            ch.f.eval_point_bound(ctr, &v, &b);
            double window = DInterval::up(
                (std::max(std::abs(gx.lo), std::abs(gx.hi)) +
                 std::max(std::abs(gy.lo), std::abs(gy.hi))) *
                half * 1.0000000001);
            double slack = b + window;
            if (std::isfinite(slack) && (v - slack > 0.0 || v + slack < 0.0)) excluded = true;
            blind = !(b * 16.0 < window) || !std::isfinite(slack);
        }
        if (!excluded && blind && c.depth >= fallback_depth) {
            // Exact rationals where the double arithmetic could not see the
            // signal, in mean-value form to dodge term-wise dependency loss.
            ++mpq_calls;
            IntervalBox qbox = cell_box(c);
            QQ cx = qbox.coords[0].mid(), cy = qbox.coords[1].mid();
            QQ half = qbox.coords[0].width() / 2;
            QInterval fc = ch.f_exact.evaluate(IntervalBox({QInterval(cx), QInterval(cy)}));
            QInterval gxq = ch.fx_exact.evaluate(qbox);
            QInterval gyq = ch.fy_exact.evaluate(qbox);
            QQ gmax = std::max(abs(gxq.lo), abs(gxq.hi)) + std::max(abs(gyq.lo), abs(gyq.hi));
            QQ lo = fc.lo - gmax * half, hi = fc.hi + gmax * half;
            excluded = lo > 0 || hi < 0;
        }
        if (excluded) continue;
        bool keep = false;
        if (c.depth >= dmin_ || c.depth >= dmax_) {
            // Monotone gate: a coordinate of the gradient must be
            // sign-definite so the cell holds at most one arc per line.
            bool monotone = have_grad && (!gx.contains_zero() || !gy.contains_zero());
            if (!monotone && c.depth >= fallback_depth) {
                IntervalBox qbox = cell_box(c);
                monotone = !ch.fx_exact.evaluate(qbox).contains_zero() ||
                           !ch.fy_exact.evaluate(qbox).contains_zero();
            }
            // Sign-change evidence on a 3x3 point stencil. Undecidable
            // near-curve bands carry no evidence and keep splitting until
            // they are excluded, so they cannot bridge separate components.
            if (dbg && !monotone) fprintf(stderr, "[mono-fail] d=%d ix=%ld iy=%ld chart=%d\n", c.depth, (long)c.ix, (long)c.iy, c.chart);
            if (monotone || c.depth >= dmax_) {
                int plus = 0, minus = 0, unsure = 0;
                for (int cx = 0; cx < 3 && !(plus && minus) && !unsure; ++cx) {
                    for (int cy = 0; cy < 3 && !(plus && minus) && !unsure; ++cy) {
                        double pt[2] = {cx == 0 ? box[0].lo
                                        : cx == 1 ? 0.5 * (box[0].lo + box[0].hi)
                                                  : box[0].hi,
                                        cy == 0 ? box[1].lo
                                        : cy == 1 ? 0.5 * (box[1].lo + box[1].hi)
                                                  : box[1].hi};
                        int sgn = ch.f.sign_at_point(pt);
                        if (sgn == 0) {
                            // Exact tie-break; midpoints are dyadic.
                            QInterval qv = ch.f_exact.evaluate(IntervalBox(
                                {QInterval(qq_from_double(pt[0])),
                                 QInterval(qq_from_double(pt[1]))}));
                            if (!qv.contains_zero()) sgn = qv.lo > 0 ? 1 : -1;
                        }
                        if (sgn > 0)
                            ++plus;
                        else if (sgn < 0)
                            ++minus;
                        else
                            ++unsure;
                    }
                }
                bool evidence = unsure > 0 || (plus > 0 && minus > 0);
                if (dbg && !evidence && c.depth >= 9 && c.depth <= 10)
                    fprintf(stderr, "[evid-fail] d=%d ix=%ld iy=%ld chart=%d plus=%d minus=%d\n",
                            c.depth, (long)c.ix, (long)c.iy, c.chart, plus, minus);
                keep = evidence && (c.depth >= dmin_ || c.depth >= dmax_);
                if (keep) {
                    evidence_.push_back(evidence);
                    index_.emplace(c, cells_.size());
                    cells_.push_back(c);
                    continue;
                }
            }
        }
        // Tangency-to-grid chains reach the depth cap with no evidence; they
        // are genuine curve cells and attach to evidenced neighbors.
        if (!keep && c.depth >= dmax_) {
            evidence_.push_back(false);
            index_.emplace(c, cells_.size());
            cells_.push_back(c);
            continue;
        }
        {
            for (int dx = 0; dx < 2; ++dx)
                for (int dy = 0; dy < 2; ++dy)
                    queue.push_back({GridCell{c.chart, c.depth + 1, 2 * c.ix + dx, 2 * c.iy + dy}});
        }
    }
    parent_.resize(cells_.size());
    for (size_t i = 0; i < parent_.size(); ++i) parent_[i] = i;
    return certified_;
}

size_t CurveGrid::find_or_npos(const GridCell& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? static_cast<size_t>(-1) : it->second;
}

size_t CurveGrid::dsu_find(size_t i) const {
    while (parent_[i] != i) {
        parent_[i] = parent_[parent_[i]];
        i = parent_[i];
    }
    return i;
}

void CurveGrid::dsu_union(size_t a, size_t b) {
    a = dsu_find(a);
    b = dsu_find(b);
    if (a != b) parent_[a] = b;
}

void CurveGrid::link(size_t a, size_t b) { dsu_union(a, b); }

bool CurveGrid::boundary_meets_curve(const GridCell& a, const GridCell& b) const {
    // Intersection of the two closed boxes; degenerate along shared edges.
    DInterval ba[2], bb[2];
    cell_box_d(a, ba);
    cell_box_d(b, bb);
    DInterval overlap[2];
    for (int i = 0; i < 2; ++i) {
        overlap[i] = DInterval(std::max(ba[i].lo, bb[i].lo), std::min(ba[i].hi, bb[i].hi));
        if (overlap[i].lo > overlap[i].hi) return false;
    }
    return charts_[a.chart].f.evaluate(overlap).contains_zero();
}

void CurveGrid::finalize() {
    // Adjacency at mixed depths: every cell probes its 8 same-depth neighbor
    // slots and walks up to ancestors; the deeper cell of each adjacent pair
    // always finds the shallower one, so all pairs are covered.
    for (size_t i = 0; i < cells_.size(); ++i) {
        const GridCell& c = cells_[i];
        int64_t side = int64_t(1) << c.depth;
        for (int dx = -1; dx <= 1; ++dx) {
            for (int dy = -1; dy <= 1; ++dy) {
                if (dx == 0 && dy == 0) continue;
                int64_t nx = c.ix + dx, ny = c.iy + dy;
                if (nx < 0 || ny < 0 || nx >= side || ny >= side) continue;
                for (int d = c.depth; d >= dmin_ && d >= 0; --d) {
                    GridCell probe{c.chart, d, nx >> (c.depth - d), ny >> (c.depth - d)};
                    size_t j = find_or_npos(probe);
                    if (j != static_cast<size_t>(-1)) {
                        if (j != i && boundary_meets_curve(c, cells_[j])) dsu_union(i, j);
                        break;
                    }
                }
            }
        }
    }
    // Cluster roots with certified curve evidence get labels; the rest are
    // bands of undecidable cells with no curve inside and are dropped.
    std::vector<uint8_t> root_evidence(cells_.size(), 0);
    for (size_t i = 0; i < cells_.size(); ++i)
        if (evidence_[i]) root_evidence[dsu_find(i)] = 1;
    cluster_.assign(cells_.size(), -1);
    std::vector<int> label(cells_.size(), -1);
    n_clusters_ = 0;
    for (size_t i = 0; i < cells_.size(); ++i) {
        size_t r = dsu_find(i);
        if (!root_evidence[r]) continue;
        if (label[r] < 0) label[r] = n_clusters_++;
        cluster_[i] = label[r];
    }
}

std::vector<size_t> CurveGrid::cells_at(int chart, const QQ& x, const QQ& y) const {
    std::vector<size_t> out;
    if (x < -1 || x > 1 || y < -1 || y > 1) return out;
    // Candidate slots at each depth; points on slot boundaries belong to two.
    auto slots = [](const QQ& v, int depth) {
        std::vector<int64_t> s;
        QQ scaled = (v + 1) * qq_pow2(depth - 1);
        ZZ fl;
        mpz_fdiv_q(fl.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
        int64_t i = fl.get_si();
        int64_t side = int64_t(1) << depth;
        if (i >= 0 && i < side) s.push_back(i);
        if (scaled == QQ(fl) && i - 1 >= 0) s.push_back(i - 1);
        if (i == side && i - 1 >= 0) s.push_back(i - 1);  // right boundary
        return s;
    };
    for (int d = 0; d <= dmax_; ++d) {
        auto xs = slots(x, d);
        auto ys = slots(y, d);
        for (auto ix : xs)
            for (auto iy : ys) {
                size_t j = find_or_npos(GridCell{chart, d, ix, iy});
                if (j != static_cast<size_t>(-1)) out.push_back(j);
            }
    }
    return out;
}

std::vector<size_t> CurveGrid::boundary_cells(int chart, int side) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < cells_.size(); ++i) {
        const GridCell& c = cells_[i];
        if (c.chart != chart) continue;
        int64_t last = (int64_t(1) << c.depth) - 1;
        bool hit = (side == 0 && c.ix == 0) || (side == 1 && c.ix == last) ||
                   (side == 2 && c.iy == 0) || (side == 3 && c.iy == last);
        if (hit) out.push_back(i);
    }
    return out;
}

}  // namespace bitlab
