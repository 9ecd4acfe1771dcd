#include "bitlab/tracker.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace bitlab {

void PathTrackerConfig::validate() const {
    if (newton_tol <= 0 || dedup_radius <= 0 || reality_tol <= 0)
        throw std::invalid_argument("tracker config: tolerances must be positive");
    if (step_initial <= 0 || step_min <= 0 || step_max <= 0)
        throw std::invalid_argument("tracker config: steps must be positive");
}

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("BITLAB_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

CompiledSystem::CompiledSystem(const std::vector<Poly>& eqs) {
    if (eqs.empty()) throw std::invalid_argument("CompiledSystem: empty system");
    size_t n = eqs.front().nvars();
    if (eqs.size() != n) throw std::invalid_argument("CompiledSystem: system not square");
    for (const auto& p : eqs) {
        if (p.nvars() != n) throw std::invalid_argument("CompiledSystem: mixed rings");
        polys_.emplace_back(p);
        auto d = p.degree();
        if (!d || *d <= 0) throw std::invalid_argument("CompiledSystem: zero/constant equation");
        degrees_.push_back(*d);
    }
    for (const auto& p : eqs)
        for (size_t j = 0; j < n; ++j) jac_.emplace_back(p.partial(j));
}

long long CompiledSystem::total_degree_paths() const {
    long long t = 1;
    for (long d : degrees_) t *= d;
    return t;
}

void CompiledSystem::eval(const std::complex<double>* x, std::complex<double>* out) const {
    for (size_t i = 0; i < polys_.size(); ++i) out[i] = polys_[i].eval(x);
}

void CompiledSystem::jacobian(const std::complex<double>* x, std::complex<double>* out) const {
    for (size_t i = 0; i < jac_.size(); ++i) out[i] = jac_[i].eval(x);
}

double CompiledSystem::residual_scale(const std::complex<double>* x) const {
    double s = 1.0;
    for (const auto& p : polys_) s = std::max(s, p.eval_abs(x));
    return s;
}

void CompiledSystem::eval_dd(const CDD* x, CDD* out) const {
    size_t n = polys_.size();
    for (size_t i = 0; i < n; ++i) {
        CDD acc(0.0);
        for (const auto& t : polys_[i].terms()) {
            CDD m(t.c);
            for (size_t v = 0; v < t.e.size(); ++v)
                for (uint32_t k = 0; k < t.e[v]; ++k) m = m * x[v];
            acc = acc + m;
        }
        out[i] = acc;
    }
}

void CompiledSystem::jacobian_dd(const CDD* x, CDD* out) const {
    for (size_t i = 0; i < jac_.size(); ++i) {
        CDD acc(0.0);
        for (const auto& t : jac_[i].terms()) {
            CDD m(t.c);
            for (size_t v = 0; v < t.e.size(); ++v)
                for (uint32_t k = 0; k < t.e[v]; ++k) m = m * x[v];
            acc = acc + m;
        }
        out[i] = acc;
    }
}

namespace {

using Cx = std::complex<double>;

// Dense LU solve with partial pivoting, in place. Returns false if the
// pivot collapses.
bool lu_solve(std::vector<Cx>& a, std::vector<Cx>& b, size_t n) {
    for (size_t k = 0; k < n; ++k) {
        size_t piv = k;
        double best = std::abs(a[k * n + k]);
        for (size_t i = k + 1; i < n; ++i) {
            double m = std::abs(a[i * n + k]);
            if (m > best) {
                best = m;
                piv = i;
            }
        }
        if (!(best > 1e-300) || !std::isfinite(best)) return false;
        if (piv != k) {
            for (size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
            std::swap(b[k], b[piv]);
        }
        for (size_t i = k + 1; i < n; ++i) {
            Cx f = a[i * n + k] / a[k * n + k];
            a[i * n + k] = f;
            for (size_t j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
            b[i] -= f * b[k];
        }
    }
    for (size_t i = n; i-- > 0;) {
        Cx s = b[i];
        for (size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * b[j];
        b[i] = s / a[i * n + i];
    }
    return true;
}

bool lu_solve_dd(std::vector<CDD>& a, std::vector<CDD>& b, size_t n) {
    for (size_t k = 0; k < n; ++k) {
        size_t piv = k;
        double best = a[k * n + k].abs2_double();
        for (size_t i = k + 1; i < n; ++i) {
            double m = a[i * n + k].abs2_double();
            if (m > best) {
                best = m;
                piv = i;
            }
        }
        if (best < 1e-300) return false;
        if (piv != k) {
            for (size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
            std::swap(b[k], b[piv]);
        }
        for (size_t i = k + 1; i < n; ++i) {
            CDD f = a[i * n + k] / a[k * n + k];
            a[i * n + k] = f;
            for (size_t j = k + 1; j < n; ++j) a[i * n + j] = a[i * n + j] - f * a[k * n + j];
            b[i] = b[i] - f * b[k];
        }
    }
    for (size_t i = n; i-- > 0;) {
        CDD s = b[i];
        for (size_t j = i + 1; j < n; ++j) s = s - a[i * n + j] * b[j];
        b[i] = s / a[i * n + i];
    }
    return true;
}

// Homotopy H(x,s) = (1-s) gamma G(x) + s F(x) with G_i = x_i^{d_i} - 1.
struct Homotopy {
    const CompiledSystem* sys;
    Cx gamma;

    void eval(const Cx* x, double s, Cx* out) const {
        size_t n = sys->dim();
        sys->eval(x, out);
        for (size_t i = 0; i < n; ++i) {
            Cx g = std::pow(x[i], sys->degrees()[i]) - 1.0;
            out[i] = s * out[i] + (1.0 - s) * gamma * g;
        }
    }
    // dH/ds = F - gamma G.
    void dds(const Cx* x, Cx* out) const {
        size_t n = sys->dim();
        sys->eval(x, out);
        for (size_t i = 0; i < n; ++i) {
            Cx g = std::pow(x[i], sys->degrees()[i]) - 1.0;
            out[i] -= gamma * g;
        }
    }
    void jac(const Cx* x, double s, Cx* out) const {
        size_t n = sys->dim();
        sys->jacobian(x, out);
        for (size_t i = 0; i < n * n; ++i) out[i] *= s;
        for (size_t i = 0; i < n; ++i) {
            long d = sys->degrees()[i];
            out[i * n + i] += (1.0 - s) * gamma * static_cast<double>(d) * std::pow(x[i], d - 1);
        }
    }
};

struct PathWork {
    std::vector<Cx> x;
    bool diverged = false;
    bool failed = false;
    int steps = 0;
};

// dx/ds = -J^-1 dH/ds, RK4.
bool tangent(const Homotopy& h, const std::vector<Cx>& x, double s, std::vector<Cx>& dx) {
    size_t n = h.sys->dim();
    std::vector<Cx> j(n * n);
    h.jac(x.data(), s, j.data());
    h.dds(x.data(), dx.data());
    for (auto& v : dx) v = -v;
    return lu_solve(j, dx, n);
}

// Direct Newton on the target system; rescues paths whose homotopy gets
// stiff just before s = 1.
bool endgame(const CompiledSystem& sys, const PathTrackerConfig& cfg, std::vector<Cx>& x) {
    size_t n = sys.dim();
    std::vector<Cx> fv(n), jm(n * n), delta(n);
    for (int it = 0; it < 60; ++it) {
        sys.eval(x.data(), fv.data());
        double res = 0;
        for (const auto& v : fv) res = std::max(res, std::abs(v));
        if (!std::isfinite(res)) return false;
        // Residual acceptance also catches multiple zeros, where Newton
        // converges only linearly; the caller judges them by value.
        if (res < 1e-11 * sys.residual_scale(x.data())) return true;
        sys.jacobian(x.data(), jm.data());
        delta = fv;
        if (!lu_solve(jm, delta, n)) return false;
        double dn = 0, xn = 1;
        for (size_t i = 0; i < n; ++i) {
            dn = std::max(dn, std::abs(delta[i]));
            xn = std::max(xn, std::abs(x[i]));
            x[i] -= delta[i];
        }
        if (!std::isfinite(dn) || !std::isfinite(xn) || xn > cfg.blowup) return false;
    }
    std::vector<Cx> fv2(n);
    sys.eval(x.data(), fv2.data());
    double res = 0;
    for (const auto& v : fv2) res = std::max(res, std::abs(v));
    return std::isfinite(res) && res < 1e-11 * sys.residual_scale(x.data());
}

void track_one(const Homotopy& h, const PathTrackerConfig& cfg, PathWork& w) {
    size_t n = h.sys->dim();
    double s = 0.0, ds = cfg.step_initial;
    int ok_streak = 0;
    std::vector<Cx> k1(n), k2(n), k3(n), k4(n), xt(n), hv(n), jm(n * n), delta(n);
    while (s < 1.0) {
        if (++w.steps > cfg.max_steps) {
            w.failed = true;
            return;
        }
        ds = std::min(ds, 1.0 - s);
        // RK4 predictor.
        bool ok = tangent(h, w.x, s, k1);
        if (ok) {
            for (size_t i = 0; i < n; ++i) xt[i] = w.x[i] + 0.5 * ds * k1[i];
            ok = tangent(h, xt, s + 0.5 * ds, k2);
        }
        if (ok) {
            for (size_t i = 0; i < n; ++i) xt[i] = w.x[i] + 0.5 * ds * k2[i];
            ok = tangent(h, xt, s + 0.5 * ds, k3);
        }
        if (ok) {
            for (size_t i = 0; i < n; ++i) xt[i] = w.x[i] + ds * k3[i];
            ok = tangent(h, xt, s + ds, k4);
        }
        if (ok) {
            for (size_t i = 0; i < n; ++i)
                xt[i] = w.x[i] + ds / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            // Newton corrector at s + ds.
            double snew = s + ds;
            bool corr = false;
            for (int it = 0; it < cfg.max_corrector_iters; ++it) {
                h.eval(xt.data(), snew, hv.data());
                h.jac(xt.data(), snew, jm.data());
                delta = hv;
                if (!lu_solve(jm, delta, n)) break;
                double dn = 0, xn = 1;
                for (size_t i = 0; i < n; ++i) {
                    dn = std::max(dn, std::abs(delta[i]));
                    xn = std::max(xn, std::abs(xt[i]));
                    xt[i] -= delta[i];
                }
                if (!std::isfinite(dn) || !std::isfinite(xn)) break;
                if (dn < 1e-9 * xn) {
                    corr = true;
                    break;
                }
            }
            ok = corr;
        }
        if (ok) {
            bool finite = true;
            double norm = 0;
            for (const auto& v : xt) {
                double a = std::abs(v);
                finite &= std::isfinite(a);
                norm = std::max(norm, a);
            }
            if (!finite) {
                w.failed = true;
                return;
            }
            w.x = xt;
            s += ds;
            if (norm > cfg.blowup) {
                w.diverged = true;
                return;
            }
            if (++ok_streak >= 5) {
                ds = std::min(ds * 2.0, cfg.step_max);
                ok_streak = 0;
            }
        } else {
            ds *= 0.5;
            ok_streak = 0;
            if (ds < cfg.step_min) {
                // Stalled: try to land directly on the target system. A
                // degenerate endpoint converges here and is then judged by
                // the caller; a slow escape to infinity is classified by its
                // norm.
                std::vector<Cx> x = w.x;
                if (endgame(*h.sys, cfg, x)) {
                    w.x = std::move(x);
                    return;
                }
                double norm = 0;
                for (const auto& v : w.x) norm = std::max(norm, std::abs(v));
                if (norm > 1e4)
                    w.diverged = true;
                else
                    w.failed = true;
                return;
            }
        }
    }
}

}  // namespace

double polish_dd(const CompiledSystem& sys, std::vector<std::complex<double>>& x, int iters) {
    size_t n = sys.dim();
    std::vector<CDD> xx(n), fv(n), jm(n * n), delta(n);
    for (size_t i = 0; i < n; ++i) xx[i] = CDD(x[i].real(), x[i].imag());
    for (int it = 0; it < iters; ++it) {
        sys.eval_dd(xx.data(), fv.data());
        sys.jacobian_dd(xx.data(), jm.data());
        delta = fv;
        if (!lu_solve_dd(jm, delta, n)) break;
        for (size_t i = 0; i < n; ++i) xx[i] = xx[i] - delta[i];
    }
    for (size_t i = 0; i < n; ++i)
        x[i] = Cx(xx[i].re.to_double(), xx[i].im.to_double());
    std::vector<Cx> res(n);
    sys.eval(x.data(), res.data());
    double r = 0;
    for (const auto& v : res) {
        double a = std::abs(v);
        if (!std::isfinite(a)) return std::numeric_limits<double>::infinity();
        r = std::max(r, a);
    }
    for (size_t i = 0; i < n; ++i)
        if (!std::isfinite(std::abs(x[i]))) return std::numeric_limits<double>::infinity();
    return r / sys.residual_scale(x.data());
}

std::vector<TrackedSolution> track_total_degree(const CompiledSystem& sys,
                                                const PathTrackerConfig& cfg, TrackStats* stats) {
    cfg.validate();
    size_t n = sys.dim();
    std::mt19937_64 rng(cfg.seed * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    // Gamma well away from the real axis: real systems have their path
    // discriminant on (a neighborhood of) the real gamma ray.
    double phi = 0.35 + (M_PI - 0.7) * uni(rng);
    if (uni(rng) < 0.5) phi = -phi;
    Cx gamma = std::polar(1.0, phi);
    Homotopy h{&sys, gamma};

    long long total = sys.total_degree_paths();
    const auto& degs = sys.degrees();

    TrackStats st;
    st.paths_total = total;

    int nthreads = resolve_thread_count(cfg.threads);
    std::atomic<long long> next{0};
    std::vector<std::vector<TrackedSolution>> buckets(nthreads);
    std::vector<std::array<long long, 3>> tallies(nthreads, {0, 0, 0});

    auto worker = [&](int tid) {
        std::vector<Cx> start(n);
        while (true) {
            long long idx = next.fetch_add(1);
            if (idx >= total) break;
            long long rem = idx;
            for (size_t i = 0; i < n; ++i) {
                long d = degs[i];
                long r = static_cast<long>(rem % d);
                rem /= d;
                start[i] = std::polar(1.0, 2.0 * M_PI * r / d);
            }
            PathWork w;
            w.x = start;
            track_one(h, cfg, w);
            if (w.diverged) {
                ++tallies[tid][1];
                continue;
            }
            if (w.failed) {
                ++tallies[tid][2];
                continue;
            }
            TrackedSolution sol;
            sol.x = w.x;
            sol.steps = w.steps;
            sol.residual = polish_dd(sys, sol.x, 3);
            double norm = 0;
            for (const auto& v : sol.x) norm = std::max(norm, std::abs(v));
            if (!std::isfinite(norm) || norm > cfg.blowup / 100) {
                sol.at_infinity = true;
                ++tallies[tid][1];
            } else if (sol.residual < cfg.newton_tol) {
                sol.converged = true;
                ++tallies[tid][0];
            } else {
                ++tallies[tid][2];
            }
            if (sol.converged) buckets[tid].push_back(std::move(sol));
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
    for (auto& t : pool) t.join();

    std::vector<TrackedSolution> all;
    for (auto& b : buckets)
        for (auto& s : b) all.push_back(std::move(s));
    for (auto& t : tallies) {
        st.converged += t[0];
        st.at_infinity += t[1];
        st.failed += t[2];
    }

    // Deterministic order, then dedup by endpoint distance.
    std::sort(all.begin(), all.end(), [](const TrackedSolution& a, const TrackedSolution& b) {
        for (size_t i = 0; i < a.x.size(); ++i) {
            if (a.x[i].real() != b.x[i].real()) return a.x[i].real() < b.x[i].real();
            if (a.x[i].imag() != b.x[i].imag()) return a.x[i].imag() < b.x[i].imag();
        }
        return false;
    });
    std::vector<TrackedSolution> out;
    for (auto& s : all) {
        bool dup = false;
        for (const auto& kept : out) {
            double d = 0, scale = 1;
            for (size_t i = 0; i < n; ++i) {
                d = std::max(d, std::abs(s.x[i] - kept.x[i]));
                scale = std::max(scale, std::abs(kept.x[i]));
            }
            if (d < cfg.dedup_radius * scale) {
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(std::move(s));
    }
    if (stats) *stats = st;
    return out;
}

}  // namespace bitlab
