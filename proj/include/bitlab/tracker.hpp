// Numerical solution of square polynomial systems by total-degree homotopy
// continuation: gamma-twisted convex homotopy from x_i^{d_i} = 1, fourth
// order predictor with Newton correction, adaptive steps, and double-double
// endpoint polishing. Paths are independent work items for a thread pool.

#ifndef BITLAB_TRACKER_HPP
#define BITLAB_TRACKER_HPP

#include <complex>
#include <random>
#include <vector>

#include "bitlab/dd.hpp"
#include "bitlab/poly.hpp"

namespace bitlab {

struct PathTrackerConfig {
    double newton_tol = 1e-12;     // relative residual at accepted endpoints
    double dedup_radius = 1e-6;    // endpoint identification radius
    double reality_tol = 1e-8;     // |Im| threshold after polishing
    double step_initial = 0.05;
    double step_min = 1e-14;
    double step_max = 0.1;
    double blowup = 1e10;          // divergence cutoff on |x|
    int max_corrector_iters = 4;
    int max_steps = 20000;
    uint64_t seed = 0;
    int threads = 0;  // 0: read BITLAB_THREADS, else hardware_concurrency

    void validate() const;
};

// A square system compiled for fast evaluation.
class CompiledSystem {
  public:
    CompiledSystem() = default;
    // Polys must share one variable list of size n = #polys.
    explicit CompiledSystem(const std::vector<Poly>& eqs);

    size_t dim() const { return polys_.size(); }
    const std::vector<long>& degrees() const { return degrees_; }
    long long total_degree_paths() const;

    void eval(const std::complex<double>* x, std::complex<double>* out) const;
    // Jacobian in row-major order, J[i*n+j] = d eq_i / d x_j.
    void jacobian(const std::complex<double>* x, std::complex<double>* out) const;
    double residual_scale(const std::complex<double>* x) const;

    void eval_dd(const CDD* x, CDD* out) const;
    void jacobian_dd(const CDD* x, CDD* out) const;

  private:
    std::vector<FloatPoly> polys_;
    std::vector<FloatPoly> jac_;  // n*n entries
    std::vector<long> degrees_;
};

struct TrackedSolution {
    std::vector<std::complex<double>> x;
    double residual = 0.0;   // relative residual after polishing
    bool converged = false;
    bool at_infinity = false;
    int steps = 0;
};

struct TrackStats {
    long long paths_total = 0;
    long long converged = 0;
    long long at_infinity = 0;
    long long failed = 0;
};

// Track every total-degree start path of `sys`. Returns deduplicated finite
// solutions sorted by coordinates (deterministic for a fixed seed), with
// multiplicity-collapsed endpoints counted once.
std::vector<TrackedSolution> track_total_degree(const CompiledSystem& sys,
                                                const PathTrackerConfig& cfg,
                                                TrackStats* stats = nullptr);

// Newton-polish a point in double-double precision; returns achieved
// relative residual.
double polish_dd(const CompiledSystem& sys, std::vector<std::complex<double>>& x, int iters = 4);

int resolve_thread_count(int requested);

}  // namespace bitlab

#endif
