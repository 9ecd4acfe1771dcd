// Certified quadtree subdivision of a real plane curve over one or more
// square charts. Cells that provably miss the curve are discarded; remaining
// cells stop subdividing once a coordinate of the gradient is sign-definite
// (at most one curve arc crosses such a cell). Components are extracted by
// unioning adjacent cells whose shared boundary cannot be separated from the
// curve, so two arcs merge only where the curve can actually cross.

#ifndef BITLAB_CURVE2D_HPP
#define BITLAB_CURVE2D_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "bitlab/interval.hpp"

namespace bitlab {

struct GridCell {
    int chart = 0;
    int depth = 0;
    int64_t ix = 0, iy = 0;
    bool operator==(const GridCell& o) const {
        return chart == o.chart && depth == o.depth && ix == o.ix && iy == o.iy;
    }
};

struct GridCellHash {
    size_t operator()(const GridCell& c) const {
        uint64_t h = 0x9E3779B97F4A7C15ull;
        auto mix = [&h](uint64_t v) {
            h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
        };
        mix(static_cast<uint64_t>(c.chart));
        mix(static_cast<uint64_t>(c.depth));
        mix(static_cast<uint64_t>(c.ix));
        mix(static_cast<uint64_t>(c.iy));
        return static_cast<size_t>(h);
    }
};

// All charts use the root box [-1,1]^2.
class CurveGrid {
  public:
    struct ChartSpec {
        FastPoly f, fx, fy;
        // Rational fallbacks, consulted where double-interval slack stalls.
        EnclosedPoly f_exact, fx_exact, fy_exact;
    };

    CurveGrid(std::vector<ChartSpec> charts, int depth_min, int depth_max, size_t cell_budget);

    // Subdivide every chart. Returns false when the depth or cell budget ran
    // out before every undecided cell was either excluded or kept.
    bool subdivide();

    size_t cell_count() const { return cells_.size(); }
    const std::vector<GridCell>& cells() const { return cells_; }

    // Union two cells' components (used for cross-chart identifications).
    void link(size_t cell_a, size_t cell_b);
    // Union edge/corner-adjacent cells within each chart when the shared
    // boundary cannot be separated from the curve; then label clusters.
    void finalize();

    // Clusters counted and labelled after dropping those with no certified
    // curve point (the conservative exclusion test keeps a band of cells
    // around the curve; a cluster is real only if some cell shows a sign
    // change or an uncertifiable corner). Dropped cells get cluster -1.
    int cluster_count() const { return n_clusters_; }
    int cluster_of_cell(size_t idx) const { return cluster_[idx]; }

    // Indices of kept cells containing the point (boundary inclusive).
    std::vector<size_t> cells_at(int chart, const QQ& x, const QQ& y) const;
    // Kept cells touching the chart boundary side: 0:x=-1 1:x=+1 2:y=-1 3:y=+1.
    std::vector<size_t> boundary_cells(int chart, int side) const;

    static QQ cell_lo(int depth, int64_t i);  // lower coordinate of slot i
    IntervalBox cell_box(const GridCell& c) const;

    bool certified() const { return certified_; }

  private:
    friend class CurveGridTester;
    size_t find_or_npos(const GridCell& key) const;
    size_t dsu_find(size_t i) const;
    void dsu_union(size_t a, size_t b);
    bool boundary_meets_curve(const GridCell& a, const GridCell& b) const;

    std::vector<ChartSpec> charts_;
    int dmin_, dmax_;
    size_t budget_;
    bool certified_ = true;

    std::vector<GridCell> cells_;
    std::vector<uint8_t> evidence_;  // cell shows a certified sign change
    std::unordered_map<GridCell, size_t, GridCellHash> index_;
    mutable std::vector<size_t> parent_;
    std::vector<int> cluster_;
    int n_clusters_ = 0;
};

}  // namespace bitlab

#endif
