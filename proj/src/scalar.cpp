#include "pla/scalar.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>

namespace pla {

long squarefree_part(long n, long* square_out) {
    if (n <= 0) throw config_error("squarefree_part: argument must be positive");
    long r = 1, s = 1;
    for (long p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        for (int i = 0; i + 1 < e; i += 2) s *= p;
        if (e % 2 == 1) r *= p;
    }
    r *= n;
    if (square_out) *square_out = s;
    return r;
}

// ---------------------------------------------------------------- Field

FieldPtr Field::rationals() {
    static FieldPtr q = std::make_shared<Field>();
    return q;
}

FieldPtr Field::qtower(const std::vector<long>& roots) {
    auto f = std::make_shared<Field>();
    std::set<long> rads = {1};
    for (long r : roots) {
        if (r <= 0) throw config_error("qtower: adjoined roots must be positive integers");
        long sf = squarefree_part(r);
        // close under products with the existing radicands
        std::set<long> next = rads;
        for (long a : rads) {
            long g = std::gcd(a, sf);
            next.insert((a / g) * (sf / g));
        }
        rads = next;
        // iterate to a fixed point (products of new elements with each other)
        bool grew = true;
        while (grew) {
            grew = false;
            std::set<long> cur = rads;
            for (long a : cur)
                for (long b : cur) {
                    long g = std::gcd(a, b);
                    long p = (a / g) * (b / g);
                    if (!rads.count(p)) { rads.insert(p); grew = true; }
                }
        }
    }
    f->radicands_.assign(rads.begin(), rads.end());
    return f;
}

FieldPtr Field::ratfunc() {
    static FieldPtr f = [] {
        auto p = std::make_shared<Field>();
        p->kind_ = Kind::ratfunc;
        p->radicands_.clear();
        return p;
    }();
    return f;
}

bool Field::has_radicand(long r) const {
    return std::binary_search(radicands_.begin(), radicands_.end(), r);
}

bool Field::same(const Field& o) const {
    return kind_ == o.kind_ && radicands_ == o.radicands_;
}

std::string Field::name() const {
    if (kind_ == Kind::ratfunc) return "Q(delta)";
    if (radicands_.size() == 1) return "Q";
    std::string s = "Q(";
    bool first = true;
    for (long r : radicands_) {
        if (r == 1) continue;
        if (!first) s += ",";
        s += "sqrt(" + std::to_string(r) + ")";
        first = false;
    }
    return s + ")";
}

// ---------------------------------------------------------------- Poly

void Poly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

Poly Poly::constant(const mpq_class& v) {
    Poly p;
    if (v != 0) p.c = {v};
    return p;
}

Poly Poly::variable() {
    Poly p;
    p.c = {mpq_class(0), mpq_class(1)};
    return p;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r;
    r.c.resize(std::max(c.size(), o.c.size()), mpq_class(0));
    for (size_t i = 0; i < c.size(); ++i) r.c[i] += c[i];
    for (size_t i = 0; i < o.c.size(); ++i) r.c[i] += o.c[i];
    r.trim();
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r;
    r.c.resize(std::max(c.size(), o.c.size()), mpq_class(0));
    for (size_t i = 0; i < c.size(); ++i) r.c[i] += c[i];
    for (size_t i = 0; i < o.c.size(); ++i) r.c[i] -= o.c[i];
    r.trim();
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return {};
    Poly r;
    r.c.resize(c.size() + o.c.size() - 1, mpq_class(0));
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
    r.trim();
    return r;
}

bool Poly::operator==(const Poly& o) const { return c == o.c; }

void Poly::divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
    if (b.is_zero()) throw config_error("polynomial division by zero");
    q = {};
    r = a;
    while (!r.is_zero() && r.deg() >= b.deg()) {
        int d = r.deg() - b.deg();
        mpq_class f = r.c.back() / b.c.back();
        Poly t;
        t.c.resize(d + 1, mpq_class(0));
        t.c[d] = f;
        q = q + t;
        r = r - t * b;
    }
}

Poly Poly::gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly q, r;
        divmod(a, b, q, r);
        a = b;
        b = r;
    }
    if (!a.is_zero()) {
        mpq_class lead = a.c.back();
        for (auto& x : a.c) x /= lead;
    }
    return a;
}

static std::optional<mpq_class> rational_sqrt(const mpq_class& v) {
    if (v < 0) return std::nullopt;
    if (v == 0) return mpq_class(0);
    mpz_class n = v.get_num(), d = v.get_den();
    if (mpz_perfect_square_p(n.get_mpz_t()) && mpz_perfect_square_p(d.get_mpz_t())) {
        mpz_class sn, sd;
        mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
        mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
        return mpq_class(sn, sd);
    }
    return std::nullopt;
}

std::optional<Poly> Poly::sqrt() const {
    if (is_zero()) return Poly::zero();
    if (deg() % 2 != 0) return std::nullopt;
    auto lead = rational_sqrt(c.back());
    if (!lead) return std::nullopt;
    int m = deg() / 2;
    Poly q;
    q.c.resize(m + 1, mpq_class(0));
    q.c[m] = *lead;
    for (int k = m - 1; k >= 0; --k) {
        // coefficient of x^(k+m) in q*q, with q_k unknown: 2*q_m*q_k + known terms
        mpq_class acc(0);
        for (int i = k + 1; i <= m; ++i) {
            int j = k + m - i;
            if (j > m || j < 0 || j <= k) continue;
            acc += q.c[i] * q.c[j];
        }
        mpq_class target = (k + m <= deg()) ? c[k + m] : mpq_class(0);
        q.c[k] = (target - acc) / (2 * q.c[m]);
    }
    if (q * q == *this) return q;
    return std::nullopt;
}

// ---------------------------------------------------------------- Scalar

Scalar::Scalar() : field_(Field::rationals()), v_(QT{}) {}

Scalar Scalar::zero(const FieldPtr& f) {
    Scalar s;
    s.field_ = f;
    if (f->kind() == Field::Kind::ratfunc) s.v_ = RF{Poly::zero(), Poly::constant(1)};
    else s.v_ = QT{};
    return s;
}

Scalar Scalar::one(const FieldPtr& f) { return integer(1, f); }

Scalar Scalar::integer(long v, const FieldPtr& f) { return rational(mpq_class(v), f); }

Scalar Scalar::rational(long num, long den, const FieldPtr& f) {
    mpq_class q(num, den);
    q.canonicalize();
    return rational(q, f);
}

Scalar Scalar::rational(const mpq_class& q, const FieldPtr& f) {
    Scalar s = zero(f);
    if (q == 0) return s;
    if (f->kind() == Field::Kind::ratfunc) s.v_ = RF{Poly::constant(q), Poly::constant(1)};
    else std::get<QT>(s.v_).terms[1] = q;
    return s;
}

Scalar Scalar::sqrt_rational(const mpq_class& q, const FieldPtr& f) {
    if (q < 0) throw config_error("sqrt of a negative rational");
    if (q == 0) return zero(f);
    if (f->kind() == Field::Kind::ratfunc) {
        if (auto r = rational_sqrt(q)) return rational(*r, f);
        throw config_error("sqrt(" + mpq_class(q).get_str() + ") is not rational; not representable in Q(delta)");
    }
    // sqrt(n/d) = sqrt(n*d)/d
    mpz_class nd = q.get_num() * q.get_den();
    long v = nd.fits_slong_p() ? nd.get_si() : 0;
    if (v <= 0) throw config_error("sqrt argument too large");
    long sq = 1;
    long r = squarefree_part(v, &sq);
    if (!f->has_radicand(r))
        throw config_error("field " + f->name() + " is missing sqrt(" + std::to_string(r) + ")");
    Scalar s = zero(f);
    std::get<QT>(s.v_).terms[r] = mpq_class(sq) / q.get_den();
    return s;
}

Scalar Scalar::delta(const FieldPtr& f) {
    if (f->kind() != Field::Kind::ratfunc)
        throw config_error("formal delta exists only in the rational-function field");
    Scalar s = zero(f);
    s.v_ = RF{Poly::variable(), Poly::constant(1)};
    return s;
}

FieldPtr Scalar::merge_fields(const Scalar& a, const Scalar& b) {
    if (a.field_->same(*b.field_)) return a.field_;
    if (a.field_->is_plain_rationals() && a.is_rational()) return b.field_;
    if (b.field_->is_plain_rationals() && b.is_rational()) return a.field_;
    throw config_error("mixed scalar fields: " + a.field_->name() + " vs " + b.field_->name());
}

Scalar::RF Scalar::rf_normalize(Poly num, Poly den) {
    if (den.is_zero()) throw config_error("rational function with zero denominator");
    Poly g = Poly::gcd(num, den);
    if (g.deg() > 0) {
        Poly q, r;
        Poly::divmod(num, g, q, r);
        num = q;
        Poly::divmod(den, g, q, r);
        den = q;
    }
    mpq_class lead = den.c.back();
    for (auto& x : den.c) x /= lead;
    for (auto& x : num.c) x /= lead;
    return RF{num, den};
}

static Scalar promote(const Scalar& s, const FieldPtr& f) {
    if (s.field()->same(*f)) return s;
    return Scalar::rational(s.as_rational(), f);
}

Scalar Scalar::operator+(const Scalar& o) const {
    FieldPtr f = merge_fields(*this, o);
    Scalar a = promote(*this, f), b = promote(o, f);
    Scalar r = zero(f);
    if (f->kind() == Field::Kind::ratfunc) {
        const RF &x = a.rf(), &y = b.rf();
        r.v_ = rf_normalize(x.num * y.den + y.num * x.den, x.den * y.den);
    } else {
        QT t = a.qt();
        for (const auto& [rad, c] : b.qt().terms) {
            auto it = t.terms.find(rad);
            if (it == t.terms.end()) t.terms[rad] = c;
            else {
                it->second += c;
                if (it->second == 0) t.terms.erase(it);
            }
        }
        r.v_ = std::move(t);
    }
    return r;
}

Scalar Scalar::operator-() const {
    Scalar r = *this;
    if (field_->kind() == Field::Kind::ratfunc) {
        RF x = rf();
        for (auto& c : x.num.c) c = -c;
        r.v_ = x;
    } else {
        QT t = qt();
        for (auto& [rad, c] : t.terms) c = -c;
        r.v_ = std::move(t);
    }
    return r;
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    FieldPtr f = merge_fields(*this, o);
    Scalar a = promote(*this, f), b = promote(o, f);
    Scalar r = zero(f);
    if (f->kind() == Field::Kind::ratfunc) {
        const RF &x = a.rf(), &y = b.rf();
        r.v_ = rf_normalize(x.num * y.num, x.den * y.den);
    } else {
        QT t;
        for (const auto& [r1, c1] : a.qt().terms)
            for (const auto& [r2, c2] : b.qt().terms) {
                long g = std::gcd(r1, r2);
                long rad = (r1 / g) * (r2 / g);
                mpq_class c = c1 * c2 * g;
                auto it = t.terms.find(rad);
                if (it == t.terms.end()) {
                    if (c != 0) t.terms[rad] = c;
                } else {
                    it->second += c;
                    if (it->second == 0) t.terms.erase(it);
                }
            }
        r.v_ = std::move(t);
    }
    return r;
}

Scalar Scalar::inv() const {
    if (is_zero()) throw config_error("division by zero scalar");
    Scalar r = zero(field_);
    if (field_->kind() == Field::Kind::ratfunc) {
        const RF& x = rf();
        r.v_ = rf_normalize(x.den, x.num);
        return r;
    }
    const auto& rads = field_->radicands();
    size_t n = rads.size();
    if (n == 1) {
        QT t;
        t.terms[1] = 1 / qt().terms.at(1);
        r.v_ = std::move(t);
        return r;
    }
    // solve (this) * x = 1 over the radicand basis
    auto idx = [&](long rad) {
        return static_cast<size_t>(std::lower_bound(rads.begin(), rads.end(), rad) - rads.begin());
    };
    std::vector<std::vector<mpq_class>> m(n, std::vector<mpq_class>(n + 1, mpq_class(0)));
    for (const auto& [r1, c1] : qt().terms)
        for (size_t j = 0; j < n; ++j) {
            long r2 = rads[j];
            long g = std::gcd(r1, r2);
            long rad = (r1 / g) * (r2 / g);
            m[idx(rad)][j] += c1 * g;
        }
    m[idx(1)][n] = 1;
    // gaussian elimination
    size_t row = 0;
    std::vector<size_t> pivot_col(n, 0);
    for (size_t col = 0; col < n && row < n; ++col) {
        size_t p = row;
        while (p < n && m[p][col] == 0) ++p;
        if (p == n) continue;
        std::swap(m[p], m[row]);
        mpq_class pv = m[row][col];
        for (auto& x : m[row]) x /= pv;
        for (size_t i = 0; i < n; ++i) {
            if (i == row || m[i][col] == 0) continue;
            mpq_class f2 = m[i][col];
            for (size_t j = col; j <= n; ++j) m[i][j] -= f2 * m[row][j];
        }
        pivot_col[row] = col;
        ++row;
    }
    if (row < n) throw check_error("scalar inversion failed (singular multiplication matrix)");
    QT t;
    for (size_t i = 0; i < n; ++i)
        if (m[i][n] != 0) t.terms[rads[pivot_col[i]]] = m[i][n];
    r.v_ = std::move(t);
    return r;
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inv(); }

Scalar Scalar::pow(long e) const {
    if (e == 0) return one(field_);
    Scalar base = e < 0 ? inv() : *this;
    unsigned long k = e < 0 ? -(unsigned long)e : (unsigned long)e;
    Scalar acc = one(field_);
    while (k) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

bool Scalar::operator==(const Scalar& o) const {
    FieldPtr f;
    try {
        f = merge_fields(*this, o);
    } catch (const config_error&) {
        return false;
    }
    Scalar a = promote(*this, f), b = promote(o, f);
    if (f->kind() == Field::Kind::ratfunc)
        return a.rf().num == b.rf().num && a.rf().den == b.rf().den;
    return a.qt().terms == b.qt().terms;
}

bool Scalar::is_zero() const {
    if (field_->kind() == Field::Kind::ratfunc) return rf().num.is_zero();
    return qt().terms.empty();
}

bool Scalar::is_one() const {
    if (field_->kind() == Field::Kind::ratfunc)
        return rf().den.deg() == 0 && rf().num.deg() == 0 && !rf().num.is_zero() &&
               rf().num.c[0] == 1;
    return qt().terms.size() == 1 && qt().terms.begin()->first == 1 &&
           qt().terms.begin()->second == 1;
}

bool Scalar::is_rational() const {
    if (field_->kind() == Field::Kind::ratfunc)
        return rf().num.deg() <= 0 && rf().den.deg() == 0;
    const auto& t = qt().terms;
    return t.empty() || (t.size() == 1 && t.begin()->first == 1);
}

mpq_class Scalar::as_rational() const {
    if (!is_rational()) throw config_error("scalar is not rational: " + str());
    if (field_->kind() == Field::Kind::ratfunc)
        return rf().num.is_zero() ? mpq_class(0) : rf().num.c[0];
    const auto& t = qt().terms;
    return t.empty() ? mpq_class(0) : t.begin()->second;
}

int Scalar::sign() const {
    if (field_->kind() == Field::Kind::ratfunc) {
        if (rf().num.is_zero()) return 0;
        return sgn(rf().num.c.back()); // den is monic
    }
    const auto& t = qt().terms;
    if (t.empty()) return 0;
    if (t.size() == 1) return sgn(t.begin()->second);
    // interval arithmetic with exact dyadic bounds on each sqrt, refined until decisive
    for (unsigned prec = 16;; prec *= 2) {
        mpq_class lo(0), hi(0);
        mpz_class scale = mpz_class(1) << prec;
        for (const auto& [rad, c] : t) {
            // m <= sqrt(rad)*2^prec < m+1
            mpz_class m;
            mpz_class arg = mpz_class(rad) * scale * scale;
            mpz_sqrt(m.get_mpz_t(), arg.get_mpz_t());
            mpq_class slo(m, scale), shi(m + 1, scale);
            slo.canonicalize();
            shi.canonicalize();
            if (c > 0) {
                lo += c * slo;
                hi += c * shi;
            } else {
                lo += c * shi;
                hi += c * slo;
            }
        }
        if (lo > 0) return 1;
        if (hi < 0) return -1;
        if (lo == 0 && hi == 0) return 0;
        if (prec > (1u << 20)) throw check_error("sign(): bound refinement runaway");
    }
}

std::optional<Scalar> Scalar::sqrt() const {
    if (is_zero()) return zero(field_);
    if (sign() < 0) return std::nullopt;
    if (field_->kind() == Field::Kind::ratfunc) {
        auto n = rf().num.sqrt();
        auto d = rf().den.sqrt();
        if (!n || !d) return std::nullopt;
        Scalar r = zero(field_);
        r.v_ = rf_normalize(*n, *d);
        if (r.sign() < 0) r = -r;
        if (r * r == *this) return r;
        return std::nullopt;
    }
    if (is_rational()) {
        try {
            return sqrt_rational(as_rational(), field_);
        } catch (const config_error&) {
            return std::nullopt;
        }
    }
    // values c*sqrt(r) and longer sums: square roots generally leave the tower;
    // check the few in-tower cases (a + b*sqrt(r))^2 by solving is not needed anywhere
    return std::nullopt;
}

static std::string q_str(const mpq_class& q) {
    return q.get_str();
}

static std::string poly_str(const std::vector<mpz_class>& c) {
    // highest degree first
    std::string s;
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
        if (c[i] == 0) continue;
        mpz_class a = c[i];
        bool neg = a < 0;
        if (neg) a = -a;
        if (s.empty()) s += neg ? "-" : "";
        else s += neg ? " - " : " + ";
        bool unit = (a == 1) && i > 0;
        if (!unit) s += a.get_str();
        if (i > 0) {
            if (!unit) s += "*";
            s += "delta";
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s.empty() ? "0" : s;
}

std::string Scalar::str() const {
    if (field_->kind() == Field::Kind::ratfunc) {
        if (rf().num.is_zero()) return "0";
        // clear denominators to integer coefficients
        mpz_class l(1);
        for (const auto& q : rf().num.c) l = lcm(l, q.get_den());
        for (const auto& q : rf().den.c) l = lcm(l, q.get_den());
        std::vector<mpz_class> n, d;
        for (const auto& q : rf().num.c) n.push_back(mpz_class(q.get_num() * (l / q.get_den())));
        for (const auto& q : rf().den.c) d.push_back(mpz_class(q.get_num() * (l / q.get_den())));
        mpz_class g(0);
        for (const auto& x : n) g = gcd(g, x);
        for (const auto& x : d) g = gcd(g, x);
        if (g > 1) {
            for (auto& x : n) x /= g;
            for (auto& x : d) x /= g;
        }
        if (d.size() == 1 && d[0] == 1) return poly_str(n);
        return "(" + poly_str(n) + ")/(" + poly_str(d) + ")";
    }
    const auto& t = qt().terms;
    if (t.empty()) return "0";
    std::string s;
    for (const auto& [rad, c] : t) {
        mpq_class a = c;
        bool neg = a < 0;
        if (neg) a = -a;
        if (s.empty()) s += neg ? "-" : "";
        else s += neg ? " - " : " + ";
        if (rad == 1) s += q_str(a);
        else {
            if (a != 1) s += q_str(a) + "*";
            s += "sqrt(" + std::to_string(rad) + ")";
        }
    }
    return s;
}

} // namespace pla
