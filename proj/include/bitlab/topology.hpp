// Topology of real plane curves: the real scheme (ovals, nesting forest,
// even/odd counts) of a non-singular curve of even degree in RP^2, the
// normalized side function with RP^2_+ = {P > 0}, and vertical-tangency
// fiber data of k-sections. RP^2 is covered by the three cube charts
// z = +-1, y = +-1, x = +-1, each subdivided with certified interval
// arithmetic and glued along the cube edges.

#ifndef BITLAB_TOPOLOGY_HPP
#define BITLAB_TOPOLOGY_HPP

#include <memory>

#include "bitlab/curve2d.hpp"
#include "bitlab/ksection.hpp"
#include "bitlab/poly.hpp"
#include "bitlab/tracker.hpp"

namespace bitlab {

struct TopologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GeneralPositionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Oval {
    int cluster = -1;
    std::vector<QQ> witness;  // interior point, projective coordinates
    int parent = -1;          // index of the innermost containing oval
    int depth = 0;            // number of ovals containing it
    bool even() const { return depth % 2 == 0; }
};

struct RealScheme {
    std::vector<Oval> ovals;
    int p = 0;  // even ovals
    int n = 0;  // odd ovals
    std::string encoding;  // bracket notation

    // Component index of a point on the curve (projective, approximate);
    // -1 if it cannot be attributed.
    int locate(const std::vector<QQ>& point) const;
    int locate(const double* xyz) const;

    std::shared_ptr<const class SchemeGeometry> geometry;  // retained grid
};

struct TopologyConfig {
    int depth_start = 6;
    int depth_max = 40;
    size_t cell_budget = 40'000'000;
    int stability_rounds = 2;  // consecutive agreeing refinements required
    uint64_t seed = 1;
};

// Real scheme of a non-singular homogeneous curve of even degree. Throws
// TopologyError when the curve is singular or the subdivision budget runs
// out before the component structure stabilizes.
RealScheme real_scheme(const Poly& F, const TopologyConfig& cfg = {});

// Certifies that F has no real projective singular point by interval
// exclusion of the gradient system. Returns false if the budget ran out.
bool verify_nonsingular_real(const Poly& F, int depth_max = 24,
                             size_t cell_budget = 8'000'000);

// Defining polynomial normalized so that RP^2_+ = {P > 0}: the component of
// the complement containing a curve-avoiding line is made negative.
struct SideFunction {
    Poly F;                      // normalized equation
    std::vector<QQ> line_base;   // two rational points spanning the avoided line
    std::vector<QQ> line_dir;
    int sign_at(const std::vector<QQ>& point) const;  // exact, +-1 or 0
    // Sign at a floating point, 0 when below the evaluation noise floor.
    int sign_at(const double* xyz) const;
};
SideFunction normalize_sign(const Poly& F, uint64_t seed = 1);

// (chi(RP^2_+), chi(RP^2_-)) = (p - n, n - p + 1).
std::pair<long, long> euler_char_regions(const RealScheme& s);

// Affine/annular topology of a k-section over the box u in [-1,1]: component
// labels, oval flags, and point location. The curve must have all vertical
// tangencies strictly inside the box.
class SectionTopology {
  public:
    SectionTopology(const Poly& P, const TopologyConfig& cfg = {});

    int component_count() const { return n_components_; }
    int oval_count() const;
    bool is_oval(int comp) const { return oval_flag_.at(comp); }
    const std::vector<bool>& oval_flags() const { return oval_flag_; }

    // Component containing the given (approximate) curve point.
    int locate(double u, double w) const;
    const QQ& wbound() const { return wbound_; }

  private:
    std::unique_ptr<CurveGrid> grid_;
    QQ wbound_ = 1;
    int n_components_ = 0;
    std::vector<int> cluster_to_comp_;
    std::vector<bool> oval_flag_;
};

// Solves {P = 0, dP/dw = 0} and packages the d(d-2) tangent fibers with
// reality flags, above/below relations and component labels. Throws
// GeneralPositionError on degenerate or colliding fibers, TopologyError if
// the curve is singular.
std::vector<TangentFiber> fiber_data(const KSection& s, const SectionTopology& topo,
                                     const PathTrackerConfig& cfg = {});

// Bracket-notation encoding of a nesting forest.
std::string encode_scheme(const std::vector<Oval>& ovals);

}  // namespace bitlab

#endif
