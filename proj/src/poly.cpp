#include "bitlab/poly.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace bitlab {

// ---------------------------------------------------------------- rational.hpp

QQ qq_parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    QQ q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

std::string qq_str(const QQ& q) {
    QQ c = q;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

QQ qq_pow2(long e) {
    QQ q = 1;
    if (e >= 0)
        mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(e));
    else
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(-e));
    return q;
}

QQ qq_pow(const QQ& q, unsigned long e) {
    QQ r = 1, b = q;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

void qq_dyadic_enclosure(const QQ& q, unsigned bits, QQ& lo, QQ& hi) {
    // floor(q * 2^bits) / 2^bits and the next dyadic up.
    ZZ num = q.get_num() << bits;
    ZZ fl;
    mpz_fdiv_q(fl.get_mpz_t(), num.get_mpz_t(), q.get_den().get_mpz_t());
    QQ scale = qq_pow2(-static_cast<long>(bits));
    lo = QQ(fl) * scale;
    hi = (q == lo) ? lo : QQ(fl + 1) * scale;
}

QQ qq_from_double(double x) {
    QQ q;
    mpq_set_d(q.get_mpq_t(), x);
    return q;
}

long qq_ceil_log2_abs(const QQ& q) {
    if (q == 0) return 0;
    size_t nb = mpz_sizeinbase(q.get_num().get_mpz_t(), 2);
    size_t db = mpz_sizeinbase(q.get_den().get_mpz_t(), 2);
    return static_cast<long>(nb) - static_cast<long>(db) + 1;
}

// ---------------------------------------------------------------------- Poly

Poly Poly::constant(std::vector<std::string> vars, const QQ& c) {
    Poly p(std::move(vars));
    QQ cc = c;
    cc.canonicalize();
    if (cc != 0) p.terms_[Expo(p.vars_.size(), 0)] = cc;
    return p;
}

Poly Poly::monomial(std::vector<std::string> vars, const QQ& c, Expo e) {
    Poly p(std::move(vars));
    if (e.size() != p.vars_.size()) throw std::invalid_argument("monomial: exponent arity");
    QQ cc = c;
    cc.canonicalize();
    if (cc != 0) p.terms_[std::move(e)] = cc;
    return p;
}

Poly Poly::var(std::vector<std::string> vars, size_t index) {
    Expo e(vars.size(), 0);
    e.at(index) = 1;
    return monomial(std::move(vars), 1, std::move(e));
}

std::optional<long> Poly::degree() const {
    if (terms_.empty()) return std::nullopt;
    long best = 0;
    for (const auto& [e, c] : terms_) {
        long d = 0;
        for (auto x : e) d += x;
        best = std::max(best, d);
    }
    return best;
}

long Poly::degree_in(size_t var) const {
    long best = -1;
    for (const auto& [e, c] : terms_) best = std::max(best, static_cast<long>(e.at(var)));
    return best;
}

size_t Poly::var_index(const std::string& name) const {
    for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return i;
    throw std::invalid_argument("unknown variable: " + name);
}

const QQ& Poly::coeff(const Expo& e) const {
    static const QQ zero = 0;
    auto it = terms_.find(e);
    return it == terms_.end() ? zero : it->second;
}

void Poly::set_coeff(const Expo& e, const QQ& c) {
    if (e.size() != vars_.size()) throw std::invalid_argument("set_coeff: exponent arity");
    QQ cc = c;
    cc.canonicalize();
    if (cc == 0)
        terms_.erase(e);
    else
        terms_[e] = cc;
}

void Poly::prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second == 0)
            it = terms_.erase(it);
        else
            ++it;
    }
}

Poly Poly::operator-() const {
    Poly r(*this);
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    if (vars_ != o.vars_) throw std::invalid_argument("poly +: variable mismatch");
    for (const auto& [e, c] : o.terms_) {
        auto [it, fresh] = terms_.emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (vars_ != o.vars_) throw std::invalid_argument("poly -: variable mismatch");
    for (const auto& [e, c] : o.terms_) {
        auto [it, fresh] = terms_.emplace(e, -c);
        if (!fresh) {
            it->second -= c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r(*this);
    r += o;
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r(*this);
    r -= o;
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    if (vars_ != o.vars_) throw std::invalid_argument("poly *: variable mismatch");
    Poly r(vars_);
    Expo e(vars_.size());
    QQ prod;
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            prod = ca * cb;
            auto [it, fresh] = r.terms_.emplace(e, prod);
            if (!fresh) it->second += prod;
        }
    }
    r.prune();
    return r;
}

bool Poly::operator==(const Poly& o) const { return vars_ == o.vars_ && terms_ == o.terms_; }

Poly Poly::scaled(const QQ& c) const {
    Poly r(vars_);
    QQ cc = c;
    cc.canonicalize();
    if (cc == 0) return r;
    r.terms_ = terms_;
    for (auto& [e, v] : r.terms_) v *= cc;
    return r;
}

Poly Poly::pow(unsigned e) const {
    Poly r = constant(vars_, 1);
    Poly b(*this);
    while (e) {
        if (e & 1) r = r * b;
        if (e >>= 1) b = b * b;
    }
    return r;
}

QQ Poly::evaluate(const std::vector<QQ>& point) const {
    if (point.size() != vars_.size()) throw std::invalid_argument("evaluate: dimension mismatch");
    std::vector<QQ> pt = point;
    for (auto& v : pt) v.canonicalize();
    QQ acc = 0;
    for (const auto& [e, c] : terms_) {
        QQ t = c;
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i]) t *= qq_pow(pt[i], e[i]);
        acc += t;
    }
    return acc;
}

std::complex<double> Poly::evaluate(const std::vector<std::complex<double>>& point) const {
    if (point.size() != vars_.size()) throw std::invalid_argument("evaluate: dimension mismatch");
    std::complex<double> acc = 0;
    for (const auto& [e, c] : terms_) {
        std::complex<double> t = qq_double(c);
        for (size_t i = 0; i < e.size(); ++i)
            for (uint32_t k = 0; k < e[i]; ++k) t *= point[i];
        acc += t;
    }
    return acc;
}

Poly Poly::partial(size_t var) const {
    if (var >= vars_.size()) throw std::invalid_argument("partial: unknown variable");
    Poly r(vars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Expo d = e;
        d[var] -= 1;
        r.terms_[d] = c * e[var];
    }
    return r;
}

Poly Poly::partial(const std::string& var) const { return partial(var_index(var)); }

Poly Poly::substitute(const std::vector<Poly>& images) const {
    if (images.size() != vars_.size()) throw std::invalid_argument("substitute: arity");
    const auto& tvars = images.empty() ? vars_ : images.front().vars();
    for (const auto& im : images)
        if (im.vars() != tvars) throw std::invalid_argument("substitute: mixed target rings");
    // Cache powers of each image.
    std::vector<std::vector<Poly>> pows(images.size());
    for (size_t i = 0; i < images.size(); ++i) pows[i].push_back(Poly::constant(tvars, 1));
    Poly acc(tvars);
    for (const auto& [e, c] : terms_) {
        Poly t = Poly::constant(tvars, c);
        for (size_t i = 0; i < e.size(); ++i) {
            while (pows[i].size() <= e[i]) pows[i].push_back(pows[i].back() * images[i]);
            if (e[i]) t = t * pows[i][e[i]];
        }
        acc += t;
    }
    return acc;
}

std::vector<Poly> Poly::coeffs_in(size_t var) const {
    long d = degree_in(var);
    std::vector<Poly> cs(static_cast<size_t>(std::max<long>(d, -1) + 1), Poly(vars_));
    for (const auto& [e, c] : terms_) {
        Expo f = e;
        uint32_t k = f[var];
        f[var] = 0;
        cs[k].terms_[f] = c;
    }
    return cs;
}

Poly Poly::from_coeffs_in(const std::vector<std::string>& vars, size_t var,
                          const std::vector<Poly>& cs) {
    Poly r(vars);
    for (size_t k = 0; k < cs.size(); ++k) {
        for (const auto& [e, c] : cs[k].terms_) {
            Expo f = e;
            f[var] += static_cast<uint32_t>(k);
            r.terms_[f] = c;
        }
    }
    r.prune();
    return r;
}

PolyDivRem Poly::divrem(const Poly& d, size_t var) const {
    long dd = d.degree_in(var);
    if (dd < 0) throw std::invalid_argument("divrem: zero divisor");
    auto dcs = d.coeffs_in(var);
    // Leading coefficient must be a nonzero constant.
    const Poly& lead = dcs.back();
    if (lead.term_count() != 1 || lead.terms_.begin()->first != Expo(vars_.size(), 0))
        throw std::invalid_argument("divrem: divisor not monic-up-to-constant in variable");
    QQ lc = lead.terms_.begin()->second;

    auto rcs = coeffs_in(var);
    std::vector<Poly> qcs;
    long rd = static_cast<long>(rcs.size()) - 1;
    if (rd >= dd) qcs.assign(rd - dd + 1, Poly(vars_));
    while (rd >= dd) {
        Poly t = rcs[rd].scaled(1 / lc);
        qcs[rd - dd] = t;
        for (long j = 0; j <= dd; ++j) rcs[rd - dd + j] -= t * dcs[j];
        while (rd >= 0 && rcs[rd].is_zero()) --rd;
    }
    PolyDivRem out;
    out.quot = from_coeffs_in(vars_, var, qcs);
    rcs.resize(static_cast<size_t>(std::max<long>(rd, -1) + 1), Poly(vars_));
    out.rem = from_coeffs_in(vars_, var, rcs);
    return out;
}

Poly Poly::divexact(const Poly& d) const {
    if (vars_ != d.vars_) throw std::invalid_argument("divexact: variable mismatch");
    if (d.is_zero()) throw std::invalid_argument("divexact: zero divisor");
    Poly r(*this), q(vars_);
    // Leading-term cancellation under the ordered-map (lex) order; exact
    // quotients terminate because lead(r) strictly decreases.
    const auto& dl = *d.terms_.rbegin();
    while (!r.is_zero()) {
        const auto& rl = *r.terms_.rbegin();
        Expo e(vars_.size());
        for (size_t i = 0; i < e.size(); ++i) {
            if (rl.first[i] < dl.first[i]) throw std::domain_error("divexact: not divisible");
            e[i] = rl.first[i] - dl.first[i];
        }
        QQ c = rl.second / dl.second;
        Poly t = monomial(vars_, c, e);
        q += t;
        r -= t * d;
        if (!r.is_zero() && r.terms_.rbegin()->first >= rl.first)
            throw std::domain_error("divexact: not divisible");
    }
    return q;
}

Poly Poly::primitive_part() const {
    if (is_zero()) return *this;
    ZZ num_gcd = 0, den_lcm = 1;
    for (const auto& [e, c] : terms_) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    QQ scale = QQ(den_lcm) / QQ(num_gcd);
    if (terms_.rbegin()->second < 0) scale = -scale;
    return scaled(scale);
}

QQ Poly::max_abs_coeff() const {
    QQ best = 0;
    for (const auto& [e, c] : terms_) {
        QQ a = abs(c);
        if (a > best) best = a;
    }
    return best;
}

Poly Poly::renamed(std::vector<std::string> newvars, const std::vector<size_t>& positions) const {
    if (positions.size() != vars_.size()) throw std::invalid_argument("renamed: positions arity");
    Poly r(std::move(newvars));
    for (const auto& [e, c] : terms_) {
        Expo f(r.vars_.size(), 0);
        for (size_t i = 0; i < e.size(); ++i) f.at(positions[i]) = e[i];
        r.terms_[f] = c;
    }
    return r;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const QQ& c = it->second;
        if (!first) os << (c > 0 ? " + " : " - ");
        if (first && c < 0) os << "-";
        QQ a = abs(c);
        bool any_var = false;
        for (auto x : it->first) any_var |= (x != 0);
        if (a != 1 || !any_var) {
            os << a.get_num().get_str();
            if (a.get_den() != 1) os << "/" << a.get_den().get_str();
            if (any_var) os << "*";
        }
        bool started = false;
        for (size_t i = 0; i < it->first.size(); ++i) {
            if (it->first[i] == 0) continue;
            if (started) os << "*";
            os << vars_[i];
            if (it->first[i] > 1) os << "^" << it->first[i];
            started = true;
        }
        first = false;
    }
    return os.str();
}

// ------------------------------------------------------------ newton_polygon

std::vector<std::pair<long, long>> newton_polygon(const Poly& p) {
    if (p.is_zero()) throw std::invalid_argument("newton_polygon: zero polynomial");
    if (p.nvars() != 2) throw std::invalid_argument("newton_polygon: need 2 variables");
    std::vector<std::pair<long, long>> pts;
    for (const auto& [e, c] : p.terms()) pts.emplace_back(e[0], e[1]);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() == 1) return pts;
    auto cross = [](const std::pair<long, long>& o, const std::pair<long, long>& a,
                    const std::pair<long, long>& b) {
        return (a.first - o.first) * (b.second - o.second) -
               (a.second - o.second) * (b.first - o.first);
    };
    // Monotone chain; strict turns only, so collinear interior points drop out.
    std::vector<std::pair<long, long>> lo, hi;
    for (const auto& q : pts) {
        while (lo.size() >= 2 && cross(lo[lo.size() - 2], lo.back(), q) <= 0) lo.pop_back();
        lo.push_back(q);
    }
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        while (hi.size() >= 2 && cross(hi[hi.size() - 2], hi.back(), *it) <= 0) hi.pop_back();
        hi.push_back(*it);
    }
    lo.pop_back();
    hi.pop_back();
    lo.insert(lo.end(), hi.begin(), hi.end());
    if (lo.size() >= 2) {
        // Collinear support: the two chains double the segment ends.
        std::vector<std::pair<long, long>> dedup;
        for (const auto& q : lo)
            if (dedup.empty() || dedup.back() != q) dedup.push_back(q);
        if (dedup.size() >= 2 && dedup.front() == dedup.back()) dedup.pop_back();
        lo = dedup;
    }
    return lo;
}

// ----------------------------------------------------------------- resultant

Poly resultant(const Poly& p, const Poly& q, size_t var) {
    long dp = p.degree_in(var), dq = q.degree_in(var);
    if (dp <= 0 || dq <= 0) throw std::invalid_argument("resultant: degree-zero input in variable");
    auto pcs = p.coeffs_in(var);
    auto qcs = q.coeffs_in(var);
    const auto& vars = p.vars();
    size_t n = static_cast<size_t>(dp + dq);
    // Sylvester matrix, rows of q-shifts first then p-shifts.
    std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n, Poly(vars)));
    for (long i = 0; i < dq; ++i)
        for (long j = 0; j <= dp; ++j) m[i][i + j] = pcs[dp - j];
    for (long i = 0; i < dp; ++i)
        for (long j = 0; j <= dq; ++j) m[dq + i][i + j] = qcs[dq - j];

    // Fraction-free Bareiss; divisions are exact over the polynomial ring.
    Poly denom = Poly::constant(vars, 1);
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k].is_zero()) ++swap_row;
            if (swap_row == n) return Poly(vars);  // singular: resultant 0
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                Poly t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                m[i][j] = t.is_zero() ? t : t.divexact(denom);
            }
            m[i][k] = Poly(vars);
        }
        denom = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

Poly resultant(const Poly& p, const Poly& q, const std::string& var) {
    return resultant(p, q, p.var_index(var));
}

// ------------------------------------------------- rem_by_quadratic_square

QuadRemainder rem_by_quadratic_square(const Poly& g, const std::string& xvar,
                                      const std::string& e1name, const std::string& e2name) {
    // Extend the ring with e1, e2 if needed.
    std::vector<std::string> vars = g.vars();
    std::vector<size_t> pos(vars.size());
    for (size_t i = 0; i < vars.size(); ++i) pos[i] = i;
    auto ensure = [&vars](const std::string& nm) {
        for (const auto& v : vars)
            if (v == nm) return;
        vars.push_back(nm);
    };
    ensure(e1name);
    ensure(e2name);
    Poly ge = g.renamed(vars, pos);
    size_t xi = ge.var_index(xvar);
    if (ge.degree_in(xi) < 4) throw std::invalid_argument("rem_by_quadratic_square: degree < 4");

    Poly x = Poly::var(vars, xi);
    Poly e1 = Poly::var(vars, ge.var_index(e1name));
    Poly e2 = Poly::var(vars, ge.var_index(e2name));
    Poly d = (x * x - e1 * x + e2).pow(2);

    auto dr = ge.divrem(d, xi);
    QuadRemainder out;
    out.quotient = dr.quot;
    auto rcs = dr.rem.coeffs_in(xi);
    rcs.resize(4, Poly(vars));
    out.rem = std::move(rcs);
    return out;
}

// ------------------------------------------------------- univariate helpers

static size_t the_var(const Poly& p) {
    size_t v = 0;
    bool found = false;
    for (size_t i = 0; i < p.nvars(); ++i) {
        if (p.degree_in(i) > 0) {
            if (found) throw std::invalid_argument("expected univariate polynomial");
            v = i;
            found = true;
        }
    }
    return v;
}

Poly uni_gcd(const Poly& a, const Poly& b) {
    if (a.is_zero() && b.is_zero()) return a;
    size_t v = the_var(a.is_zero() ? b : a);
    Poly r0 = a, r1 = b;
    while (!r1.is_zero()) {
        // Normalize the divisor so divrem's constant-lead requirement holds.
        auto cs = r1.coeffs_in(v);
        QQ lc = cs.back().coeff(Expo(r1.nvars(), 0));
        Poly r1m = r1.scaled(1 / lc);
        Poly rem = r0.divrem(r1m, v).rem;
        r0 = r1m;
        r1 = rem;
    }
    auto cs = r0.coeffs_in(v);
    QQ lc = cs.back().coeff(Expo(r0.nvars(), 0));
    return r0.scaled(1 / lc);
}

Poly squarefree_part(const Poly& p) {
    if (p.is_zero()) throw std::invalid_argument("squarefree_part: zero polynomial");
    size_t v = the_var(p);
    if (p.degree_in(v) == 0) return Poly::constant(p.vars(), 1);
    Poly g = uni_gcd(p, p.partial(v));
    if (g.degree_in(v) <= 0) return p;
    return p.divrem(g, v).quot;
}

std::vector<QQ> uni_coeff_vector(const Poly& p) {
    size_t v = the_var(p);
    auto cs = p.coeffs_in(v);
    std::vector<QQ> out;
    out.reserve(cs.size());
    Expo zero(p.nvars(), 0);
    for (const auto& c : cs) out.push_back(c.coeff(zero));
    return out;
}

// ----------------------------------------------------------------- FloatPoly

FloatPoly::FloatPoly(const Poly& p) : nvars_(p.nvars()) {
    terms_.reserve(p.term_count());
    for (const auto& [e, c] : p.terms()) terms_.push_back({e, qq_double(c)});
}

long FloatPoly::total_degree() const {
    long best = 0;
    for (const auto& t : terms_) {
        long d = 0;
        for (auto x : t.e) d += x;
        best = std::max(best, d);
    }
    return best;
}

std::complex<double> FloatPoly::eval(const std::complex<double>* x) const {
    std::complex<double> acc = 0;
    for (const auto& t : terms_) {
        std::complex<double> m = t.c;
        for (size_t i = 0; i < t.e.size(); ++i)
            for (uint32_t k = 0; k < t.e[i]; ++k) m *= x[i];
        acc += m;
    }
    return acc;
}

double FloatPoly::eval(const double* x) const {
    double acc = 0;
    for (const auto& t : terms_) {
        double m = t.c;
        for (size_t i = 0; i < t.e.size(); ++i)
            for (uint32_t k = 0; k < t.e[i]; ++k) m *= x[i];
        acc += m;
    }
    return acc;
}

double FloatPoly::eval_abs(const std::complex<double>* x) const {
    double acc = 0;
    for (const auto& t : terms_) {
        double m = std::abs(t.c);
        for (size_t i = 0; i < t.e.size(); ++i) {
            double a = std::abs(x[i]);
            for (uint32_t k = 0; k < t.e[i]; ++k) m *= a;
        }
        acc += m;
    }
    return acc;
}

}  // namespace bitlab
