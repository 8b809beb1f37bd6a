#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "pla/base.hpp"

namespace pla {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// Scalar field of an instance: either Q adjoined finitely many square roots
// (a multi-quadratic tower, ordered by the real embedding with every root
// positive), or the rational function field Q(delta) in one formal variable
// (ordered by sign at delta -> +infinity).
class Field {
public:
    enum class Kind { qtower, ratfunc };

    static FieldPtr rationals();
    static FieldPtr qtower(const std::vector<long>& roots);
    static FieldPtr ratfunc();

    Kind kind() const { return kind_; }
    // squarefree radicands spanned by the generators, closed under products; contains 1
    const std::vector<long>& radicands() const { return radicands_; }
    bool has_radicand(long r) const;
    bool same(const Field& o) const;
    bool is_plain_rationals() const { return kind_ == Kind::qtower && radicands_.size() == 1; }
    std::string name() const;

private:
    Kind kind_ = Kind::qtower;
    std::vector<long> radicands_ = {1};
    friend class Scalar;
};

// writes n = s*s*r with r squarefree; returns r
long squarefree_part(long n, long* square_out = nullptr);

// polynomial over Q, coefficient of x^i at c[i]; no trailing zeros
struct Poly {
    std::vector<mpq_class> c;

    int deg() const { return static_cast<int>(c.size()) - 1; } // -1 for zero
    bool is_zero() const { return c.empty(); }
    void trim();

    static Poly zero() { return {}; }
    static Poly constant(const mpq_class& v);
    static Poly variable(); // x

    Poly operator+(const Poly&) const;
    Poly operator-(const Poly&) const;
    Poly operator*(const Poly&) const;
    bool operator==(const Poly&) const;
    static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);
    static Poly gcd(Poly a, Poly b); // monic
    std::optional<Poly> sqrt() const;
};

class Scalar {
public:
    Scalar(); // 0 over plain Q

    static Scalar zero(const FieldPtr& f);
    static Scalar one(const FieldPtr& f);
    static Scalar integer(long v, const FieldPtr& f = Field::rationals());
    static Scalar rational(long num, long den, const FieldPtr& f = Field::rationals());
    static Scalar rational(const mpq_class& q, const FieldPtr& f = Field::rationals());
    // sqrt of a positive rational, as an element of f (throws config_error if the
    // needed radicand is not adjoined)
    static Scalar sqrt_rational(const mpq_class& q, const FieldPtr& f);
    static Scalar delta(const FieldPtr& f); // the formal variable; ratfunc fields only

    const FieldPtr& field() const { return field_; }

    Scalar operator+(const Scalar&) const;
    Scalar operator-(const Scalar&) const;
    Scalar operator*(const Scalar&) const;
    Scalar operator/(const Scalar&) const;
    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o) { *this = *this + o; return *this; }
    Scalar& operator-=(const Scalar& o) { *this = *this - o; return *this; }
    Scalar& operator*=(const Scalar& o) { *this = *this * o; return *this; }
    Scalar& operator/=(const Scalar& o) { *this = *this / o; return *this; }

    Scalar inv() const;
    Scalar pow(long e) const; // negative exponents allowed for nonzero values

    bool operator==(const Scalar&) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    bool is_zero() const;
    bool is_one() const;
    bool is_rational() const;
    mpq_class as_rational() const; // throws if not rational

    // exact sign in the ordered field (-1, 0, +1)
    int sign() const;
    bool operator<(const Scalar& o) const { return (*this - o).sign() < 0; }
    bool operator<=(const Scalar& o) const { return (*this - o).sign() <= 0; }

    // exact square root of a nonnegative value, if representable in the same field
    std::optional<Scalar> sqrt() const;

    std::string str() const;

private:
    struct QT {
        std::map<long, mpq_class> terms; // radicand -> coefficient, no zero entries
    };
    struct RF {
        Poly num, den; // den monic, gcd(num, den) = 1
    };

    FieldPtr field_;
    std::variant<QT, RF> v_;

    static FieldPtr merge_fields(const Scalar& a, const Scalar& b);
    const QT& qt() const { return std::get<QT>(v_); }
    const RF& rf() const { return std::get<RF>(v_); }
    static RF rf_normalize(Poly num, Poly den);
};

inline Scalar operator*(long v, const Scalar& s) { return Scalar::integer(v) * s; }

} // namespace pla
