#include "doctest.h"
#include "pla/scalar.hpp"

#include <random>

using namespace pla;

TEST_CASE("rational arithmetic over plain Q") {
    auto f = Field::rationals();
    Scalar a = Scalar::rational(2, 3, f), b = Scalar::rational(1, 3, f);
    CHECK((a + b).is_one());
    CHECK((a - a).is_zero());
    CHECK((a * b).as_rational() == mpq_class(2, 9));
    CHECK((a / b).as_rational() == mpq_class(2));
}

TEST_CASE("root reduction and closure") {
    auto f = Field::qtower({2});
    Scalar r2 = Scalar::sqrt_rational(2, f);
    CHECK((r2 * r2) == Scalar::integer(2, f));

    auto f23 = Field::qtower({2, 3});
    Scalar a = Scalar::sqrt_rational(2, f23), b = Scalar::sqrt_rational(3, f23);
    CHECK((a * b) == Scalar::sqrt_rational(6, f23));
    CHECK(f23->has_radicand(6));

    // non-squarefree generators reduce
    auto f8 = Field::qtower({8});
    CHECK(Scalar::sqrt_rational(8, f8) == Scalar::integer(2, f8) * Scalar::sqrt_rational(2, f8));
}

TEST_CASE("field construction rejects non-positive roots") {
    CHECK_THROWS_AS(Field::qtower({0}), config_error);
    CHECK_THROWS_AS(Field::qtower({-3}), config_error);
}

TEST_CASE("mixed fields are rejected") {
    auto f2 = Field::qtower({2});
    auto f3 = Field::qtower({3});
    Scalar a = Scalar::sqrt_rational(2, f2), b = Scalar::sqrt_rational(3, f3);
    CHECK_THROWS_AS(a + b, config_error);
    Scalar d = Scalar::delta(Field::ratfunc());
    CHECK_THROWS_AS(a * d, config_error);
    // plain rationals promote into any field
    CHECK((Scalar::integer(2) * a) == a + a);
    CHECK((Scalar::integer(3) * d).str() == "3*delta");
}

TEST_CASE("field axioms on pseudo-random elements") {
    auto f = Field::qtower({2, 3});
    std::mt19937_64 rng(7);
    auto rnd = [&]() {
        Scalar s = Scalar::zero(f);
        for (long rad : {1L, 2L, 3L, 6L}) {
            long num = static_cast<long>(rng() % 11) - 5;
            long den = 1 + static_cast<long>(rng() % 4);
            s += Scalar::rational(num, den, f) * Scalar::sqrt_rational(rad, f);
        }
        return s;
    };
    for (int it = 0; it < 50; ++it) {
        Scalar a = rnd(), b = rnd(), c = rnd();
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        if (!a.is_zero()) CHECK((a * a.inv()).is_one());
    }
}

TEST_CASE("ordered comparison via the real embedding") {
    auto f = Field::qtower({2, 3, 5, 10});
    Scalar r2 = Scalar::sqrt_rational(2, f), r3 = Scalar::sqrt_rational(3, f),
           r10 = Scalar::sqrt_rational(10, f);
    CHECK(r2 < Scalar::rational(3, 2, f));
    CHECK(Scalar::rational(7, 5, f) < r2);
    // (sqrt2 + sqrt3)^2 = 5 + 2 sqrt6 < 10
    CHECK(r2 + r3 < r10);
    CHECK((r2 + r3 - r10).sign() == -1);
    CHECK((r10 - r2 - r3).sign() == 1);
    CHECK((r2 - r2).sign() == 0);
}

TEST_CASE("powers and inverses") {
    auto f = Field::qtower({2});
    Scalar r2 = Scalar::sqrt_rational(2, f);
    CHECK(r2.pow(2) == Scalar::integer(2, f));
    CHECK(r2.pow(-2) == Scalar::rational(1, 2, f));
    CHECK(r2.pow(0).is_one());
    CHECK((Scalar::integer(1, f) + r2).inv() * (Scalar::integer(1, f) + r2) ==
          Scalar::one(f));
}

TEST_CASE("rational functions in delta") {
    auto f = Field::ratfunc();
    Scalar d = Scalar::delta(f);
    Scalar num = d * d - Scalar::one(f);
    Scalar den = d - Scalar::one(f);
    CHECK(num / den == d + Scalar::one(f));
    CHECK((d * d).sqrt().value() == d);
    CHECK((d.pow(4) - 2 * d.pow(2) + Scalar::one(f)).sqrt().value() ==
          d * d - Scalar::one(f));
    CHECK(!(d.pow(3)).sqrt().has_value());
    // ordering at large delta
    CHECK(Scalar::integer(1000000, f) < d);
    CHECK((d - Scalar::integer(7, f)).sign() == 1);
}

TEST_CASE("sqrt in towers") {
    auto f = Field::qtower({2});
    CHECK(Scalar::rational(1, 4, f).sqrt().value() == Scalar::rational(1, 2, f));
    CHECK(Scalar::integer(2, f).sqrt().value() == Scalar::sqrt_rational(2, f));
    CHECK(!Scalar::integer(3, f).sqrt().has_value());
    CHECK(!(-Scalar::integer(1, f)).sqrt().has_value());
    CHECK_THROWS_AS(Scalar::sqrt_rational(3, f), config_error);
}

TEST_CASE("canonical printing") {
    auto f = Field::qtower({2});
    Scalar s = Scalar::rational(1, 2, f) + Scalar::rational(3, 1, f) * Scalar::sqrt_rational(2, f);
    CHECK(s.str() == "1/2 + 3*sqrt(2)");
    CHECK((-s).str() == "-1/2 - 3*sqrt(2)");
    CHECK(Scalar::zero(f).str() == "0");
    auto rf = Field::ratfunc();
    Scalar d = Scalar::delta(rf);
    CHECK((d * d - Scalar::one(rf)).str() == "delta^2 - 1");
    CHECK((d * d - Scalar::rational(1, 2, rf)).str() == "(2*delta^2 - 1)/(2)");
    CHECK(((d - Scalar::one(rf)) / (d + Scalar::one(rf))).str() == "(delta - 1)/(delta + 1)");
}
