#include "doctest.h"
#include "pla/axioms.hpp"
#include "pla/spin_backend.hpp"

#include <sstream>

using namespace pla;

namespace {

std::shared_ptr<const SpinBackend> make_spin(const GroupTable& g) {
    auto f = Field::qtower({g.order});
    return std::make_shared<SpinBackend>(g, f, CalibrationOptions{});
}

} // namespace

TEST_CASE("group tables verify") {
    CHECK_NOTHROW(GroupTable::cyclic(2));
    CHECK_NOTHROW(GroupTable::cyclic(4));
    CHECK_NOTHROW(GroupTable::z2xz2());
    GroupTable s3 = GroupTable::s3();
    CHECK(s3.order == 6);
    CHECK(s3.is_subgroup({0, 1}));       // e, (01)
    CHECK(s3.is_subgroup({0, 4, 5}));    // e, (012), (021)
    CHECK(!s3.is_subgroup({0, 1, 2}));
    GroupTable z4 = GroupTable::cyclic(4);
    CHECK(z4.is_subgroup({0, 2}));
    CHECK(!z4.is_subgroup({0, 1}));
}

TEST_CASE("cayley file loading") {
    std::istringstream in("2\n1 2\n2 1\n");
    GroupTable g = GroupTable::from_stream(in, "file");
    CHECK(g.order == 2);
    CHECK(g.mul[1][1] == 0);
    std::istringstream bad("2\n1 2\n2 3\n");
    CHECK_THROWS_AS(GroupTable::from_stream(bad, "bad"), config_error);
    std::istringstream notgroup("2\n1 1\n1 1\n");
    CHECK_THROWS_AS(GroupTable::from_stream(notgroup, "ng"), config_error);
}

TEST_CASE("calibration pins the convention and rejects corrupted targets") {
    SpinWeights w = calibrate_spin_convention(2);
    // canonical gauge representative
    CHECK(w.b_s == 0);
    CHECK(w.b_u == 0);
    CHECK(w.g == 0);
    CalibrationOptions bad;
    bad.jones_target_shift = 1; // demands tr(jones element) = delta^(-1)
    CHECK_THROWS_AS(calibrate_spin_convention(2, bad), config_error);
    auto f = Field::qtower({2});
    CHECK_THROWS_AS(SpinBackend(GroupTable::cyclic(2), f, bad), config_error);
}

TEST_CASE("spin dimensions and loop value") {
    auto b = make_spin(GroupTable::cyclic(3));
    CHECK(b->dimension(Colour(0, false)) == 1);
    CHECK(b->dimension(Colour(0, true)) == 1);
    CHECK(b->dimension(Colour(1)) == 3);
    CHECK(b->dimension(Colour(2)) == 9);
    CHECK(b->dimension(Colour(3)) == 27);
    Element lp = b->evaluate(free_loop_tangle(), {});
    CHECK(lp.coords[0] == b->delta());
    CHECK(b->delta() * b->delta() == Scalar::integer(3, b->field()));
}

TEST_CASE("p1 is the diagonal algebra and p2 the matrix algebra") {
    auto b = make_spin(GroupTable::cyclic(4));
    int k = b->spins();
    // pointwise product on P1
    for (int a = 0; a < k; ++a) {
        Element e = b->basis_element(Colour(1), a);
        CHECK(b->multiply(e, e) == e);
        CHECK(b->trace(e) == Scalar::rational(1, k, b->field()));
    }
    // matrix units on P2 against a direct matrix-product oracle
    auto E = [&](int i, int j) {
        Element e = b->zero(Colour(2));
        e.coords[j + k * i] = Scalar::one(b->field());
        return e;
    };
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            for (int a = 0; a < k; ++a)
                for (int c = 0; c < k; ++c) {
                    Element prod = b->multiply(E(i, j), E(a, c));
                    Element want = b->zero(Colour(2));
                    if (j == a) want.coords[c + k * i] = Scalar::one(b->field());
                    CHECK(prod == want);
                }
}

TEST_CASE("spin axiom suite passes for k = 2, 3, 4") {
    for (int k : {2, 3, 4}) {
        auto b = make_spin(k == 4 ? GroupTable::cyclic(4) : GroupTable::cyclic(k));
        AxiomOptions opt;
        opt.samples = k == 4 ? 25 : 40;
        Report r = axiom_suite(*b, opt);
        INFO("k = ", k, "\n", r.render());
        CHECK(r.all_pass());
    }
}

TEST_CASE("subgroup candidate projections") {
    auto b = make_spin(GroupTable::cyclic(4));
    Element q = b->subgroup_projection_candidate({0, 2});
    CHECK(b->multiply(q, q) == q);
    CHECK(b->star(q) == q);
    CHECK(b->trace(q) == Scalar::rational(1, 2, b->field()));
    // the trivial subgroup gives the identity of the matrix algebra (Q = M)
    // and the full group gives the jones projection (Q = N)
    Element qe = b->subgroup_projection_candidate({0});
    CHECK(qe == b->unit(2));
    Element qg = b->subgroup_projection_candidate({0, 1, 2, 3});
    CHECK(b->multiply(qg, qg) == qg);
    CHECK(b->trace(qg) == Scalar::rational(1, 4, b->field()));
    Element ej = el_scale(b->delta().inv(), b->evaluate(jones_tangle(2), {}));
    CHECK(qg == ej);
    CHECK_THROWS_AS(b->subgroup_projection_candidate({0, 1}), config_error);
}

TEST_CASE("reduced spin backend by a minimal 1-box projection is scalar") {
    auto b = make_spin(GroupTable::cyclic(2));
    Element f = b->basis_element(Colour(1), 0); // minimal projection of the diagonal
    auto rb = reduced_backend(b, f);
    for (int n = 0; n <= 3; ++n) CHECK(rb->dimension(Colour(n)) == 1);
    CHECK(rb->delta() == b->delta() * b->trace(f));
    // the closed f-inserted loop gives the reduced loop value
    auto ins = insert_on_strings(free_loop_tangle());
    CHECK(b->evaluate(ins.tangle, {f}).coords[0] == b->delta() * b->trace(f));
}

TEST_CASE("reduced spin backend axiom suite") {
    // the verbatim compressed action is composition-exact, carries loop value
    // delta*tr(f), and is star- and positivity-clean; its closures of units at
    // n >= 2 come out denormalized by tr(f) powers (tr(f_2) = tr(f), not
    // tr(f)^2), so the derived trace normalization is the one check that fails
    auto b = make_spin(GroupTable::cyclic(2));
    Element f = b->basis_element(Colour(1), 0);
    auto rb = reduced_backend(b, f);
    AxiomOptions opt;
    opt.samples = 30;
    Report r = axiom_suite(*rb, opt);
    INFO(r.render());
    for (const auto& c : r.checks) {
        if (c.name == "trace-normalization") CHECK(!c.pass);
        else CHECK(c.pass);
    }
}

TEST_CASE("decorated pictures evaluate compatibly with composition") {
    // the state sum couples floating pieces through shared shaded regions; the
    // binding invariant is flat-versus-nested agreement, which the axiom suite
    // samples and this case pins on a loop-creating composite
    auto b = make_spin(GroupTable::cyclic(2));
    Element f = b->basis_element(Colour(1), 0);
    Tangle nested = compose(trace_plus_tangle(2), 1, unit_tangle(2));
    auto ins = insert_on_strings(nested);
    // nested evaluation: close up the f-decorated unit step by step
    auto ins_unit = insert_on_strings(unit_tangle(2));
    Element f2 = b->evaluate(ins_unit.tangle, {f, f});
    auto ins_tr = insert_on_strings(trace_plus_tangle(2));
    Element flat = b->evaluate(ins.tangle, {f, f});
    Element step = b->evaluate(ins_tr.tangle, {f2, f, f});
    CHECK(flat.coords[0] == step.coords[0]);
    // a bare loop is worth delta wherever it sits
    Tangle shaded_loop(Colour(0, true), {}, {}, {FaceRef::at(0, 0)}, {});
    CHECK(b->evaluate(shaded_loop, {}).coords[0] == b->delta());
}
