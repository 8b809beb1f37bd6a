#include "pla/biprojection.hpp"

#include <set>

namespace pla {

Tangle cap_top_tangle() {
    // a 2-box with its top pair joined; the bottom pair becomes a 1-box
    std::vector<std::pair<Dart, Dart>> s = {
        {Dart{1, 3}, Dart{1, 4}}, {Dart{0, 1}, Dart{1, 2}}, {Dart{0, 2}, Dart{1, 1}}};
    return Tangle(Colour(1), {Colour(2)}, s);
}

Tangle exchange_lhs_tangle() {
    std::vector<std::pair<Dart, Dart>> s = {
        {Dart{0, 1}, Dart{1, 4}}, {Dart{1, 1}, Dart{0, 6}}, {Dart{0, 2}, Dart{1, 3}},
        {Dart{1, 2}, Dart{2, 3}}, {Dart{2, 2}, Dart{0, 3}}, {Dart{2, 4}, Dart{0, 5}},
        {Dart{2, 1}, Dart{0, 4}}};
    return Tangle(Colour(3), {Colour(2), Colour(2)}, s);
}

Tangle exchange_rhs_tangle() {
    std::vector<std::pair<Dart, Dart>> s = {
        {Dart{1, 4}, Dart{0, 1}}, {Dart{0, 6}, Dart{1, 1}}, {Dart{0, 5}, Dart{1, 2}},
        {Dart{1, 3}, Dart{2, 4}}, {Dart{2, 1}, Dart{0, 4}}, {Dart{0, 3}, Dart{2, 2}},
        {Dart{2, 3}, Dart{0, 2}}};
    return Tangle(Colour(3), {Colour(2), Colour(2)}, s);
}

Tangle pocket_tangle() {
    // the boundary strand runs through the 2-box's left pair; the 1-box hangs
    // in the pocket formed by the right pair, so a trivial q closes it off
    std::vector<std::pair<Dart, Dart>> s = {
        {Dart{0, 1}, Dart{1, 4}}, {Dart{0, 2}, Dart{1, 1}},
        {Dart{1, 2}, Dart{2, 1}}, {Dart{1, 3}, Dart{2, 2}}};
    return Tangle(Colour(1), {Colour(2), Colour(1)}, s);
}

BiprojectionCert check_relations(const Backend& b, const Element& q) {
    if (q.colour != Colour(2)) throw config_error("check_relations: q must be a 2-box");
    if (!(b.multiply(q, q) == q) || !(b.star(q) == q))
        throw config_error("check_relations: q is not a projection");

    BiprojectionCert cert;
    cert.q = q;
    cert.tau_q = b.trace(q);
    if (cert.tau_q.is_zero()) throw config_error("check_relations: q has zero trace");
    cert.indexQ = cert.tau_q.inv();

    cert.rel_rotation = b.evaluate(rotation_tangle(2), {q}) == q;
    cert.rel_cap = b.evaluate(cap_top_tangle(), {q}) == b.unit(1);

    Element closed = b.evaluate(cond_expectation_tangle(2), {q});
    Element strand = b.unit(1);
    auto coeff = solve_in_span({strand.coords}, closed.coords);
    cert.constant = Scalar::zero(b.field());
    if (coeff) {
        cert.rel_closure = true;
        cert.constant = (*coeff)[0];
    }
    cert.constant_consistent = cert.rel_closure && cert.constant == b.delta() * cert.tau_q;

    cert.rel_exchange =
        b.evaluate(exchange_lhs_tangle(), {q, q}) == b.evaluate(exchange_rhs_tangle(), {q, q});
    return cert;
}

Commutant commutant_idempotent(const Backend& b, const BiprojectionCert& cert,
                               const Element& dual_q) {
    if (!cert.certified()) throw config_error("commutant_idempotent: q is not certified");
    {
        // the dual must itself be a certified biprojection of complementary index
        BiprojectionCert dc = check_relations(b, dual_q);
        if (!dc.certified())
            throw config_error("commutant_idempotent: the dual candidate fails certification");
        if (!(dc.tau_q * cert.tau_q * b.delta().pow(2)).is_one())
            throw config_error("commutant_idempotent: dual candidate has the wrong index");
    }
    const FieldPtr& F = b.field();
    size_t dim = b.dimension(Colour(1));
    Tangle ring = surround_frame(1);
    Matrix raw(dim, dim, F);
    for (size_t i = 0; i < dim; ++i) {
        Element out = b.evaluate(ring, {dual_q, b.basis_element(Colour(1), i)});
        for (size_t r = 0; r < dim; ++r) raw.at(r, i) = out.coords[r];
    }
    // normalize so the map is idempotent: raw^2 must be a scalar multiple of raw
    Matrix sq = raw * raw;
    Scalar mu = Scalar::zero(F);
    bool found = false;
    for (size_t r = 0; r < dim && !found; ++r)
        for (size_t c = 0; c < dim && !found; ++c)
            if (!raw.at(r, c).is_zero()) {
                mu = sq.at(r, c) / raw.at(r, c);
                found = true;
            }
    if (!found || mu.is_zero() || !(sq == raw.scaled(mu)))
        throw check_error("commutant_idempotent: pocket action is not normalizable "
                          "(convention bug)");
    Commutant out;
    out.normalization = mu.inv();
    out.phi = raw.scaled(out.normalization);
    out.basis = image_basis(out.phi);

    // the image must be a *-subalgebra
    out.algebra_closed = true;
    for (const auto& v : out.basis) {
        Element x = b.from_coords(Colour(1), v);
        if (!solve_in_span(out.basis, b.star(x).coords)) out.algebra_closed = false;
        for (const auto& w : out.basis) {
            Element y = b.from_coords(Colour(1), w);
            if (!solve_in_span(out.basis, b.multiply(x, y).coords)) out.algebra_closed = false;
        }
    }
    return out;
}

namespace {

bool is_projection(const Backend& b, const Element& f) {
    return b.multiply(f, f) == f && b.star(f) == f;
}

bool minimality_rank(const Backend& b, const Commutant& c, const Element& f) {
    std::vector<Vec> cols;
    for (const auto& v : c.basis) {
        Element x = b.from_coords(Colour(1), v);
        cols.push_back(b.multiply(b.multiply(f, x), f).coords);
    }
    Matrix m = Matrix::from_columns(cols, b.dimension(Colour(1)), b.field());
    return rank(m) == 1;
}

bool diagonal_p1(const Backend& b) {
    size_t dim = b.dimension(Colour(1));
    for (size_t i = 0; i < dim; ++i)
        for (size_t j = 0; j < dim; ++j) {
            Element prod = b.multiply(b.basis_element(Colour(1), i), b.basis_element(Colour(1), j));
            Element want = b.zero(Colour(1));
            if (i == j) want.coords[i] = Scalar::one(b.field());
            if (!(prod == want)) return false;
        }
    return true;
}

} // namespace

MinimalProjection minimal_projection_auto(const Backend& b, const Commutant& c) {
    MinimalProjection out{b.unit(1), Scalar::one(b.field()), false};
    if (c.dimension() == 1) {
        // unital one-dimensional commutant: f = 1
        Element one = b.unit(1);
        if (!solve_in_span(c.basis, one.coords))
            throw config_error("minimal_projection: one-dimensional commutant without the unit");
        out.f = one;
    } else if (diagonal_p1(b)) {
        // functions constant on the blocks of a partition; minimal projections
        // are block indicators, ordered by their smallest point
        size_t dim = b.dimension(Colour(1));
        std::vector<int> block(dim, -1);
        int nblocks = 0;
        for (size_t j = 0; j < dim; ++j) {
            if (block[j] != -1) continue;
            block[j] = nblocks;
            for (size_t l = j + 1; l < dim; ++l) {
                bool same = true;
                for (const auto& v : c.basis) same = same && v[j] == v[l];
                if (same && block[l] == -1) block[l] = nblocks;
            }
            ++nblocks;
        }
        Element f = b.zero(Colour(1));
        for (size_t j = 0; j < dim; ++j)
            if (block[j] == 0) f.coords[j] = Scalar::one(b.field());
        if (!solve_in_span(c.basis, f.coords))
            throw config_error("minimal_projection: the commutant does not split over "
                               "coordinates; supply f explicitly");
        out.f = f;
    } else {
        // commutativity beyond the diagonal case is not handled automatically
        throw config_error("minimal_projection: automatic search handles diagonal "
                           "1-box algebras only; supply f explicitly");
    }
    if (!is_projection(b, out.f))
        throw check_error("minimal_projection: candidate is not a projection");
    out.tr_f = b.trace(out.f);
    out.minimal = minimality_rank(b, c, out.f);
    return out;
}

MinimalProjection certify_supplied_projection(const Backend& b, const Commutant& c,
                                              const Element& f) {
    if (f.colour != Colour(1)) throw config_error("supplied f must be a 1-box");
    if (!is_projection(b, f)) throw config_error("supplied f is not a projection");
    if (!solve_in_span(c.basis, f.coords))
        throw config_error("supplied f does not lie in the relative commutant");
    MinimalProjection out{f, b.trace(f), minimality_rank(b, c, f)};
    return out;
}

Report collapse_relation_check(const Backend& b, const BiprojectionCert& cert,
                               const Commutant& c) {
    Report rep;
    const Tangle pocket = pocket_tangle();
    size_t dim = b.dimension(Colour(1));
    Element strand = b.unit(1);
    auto collapse_rhs = [&](const Element& x) {
        return el_scale(b.delta() * cert.tau_q * b.trace(x), strand);
    };
    if (c.dimension() == 1) {
        bool ok = true;
        for (size_t i = 0; i < dim && ok; ++i) {
            Element x = b.basis_element(Colour(1), i);
            ok = b.evaluate(pocket, {cert.q, x}) == collapse_rhs(x);
        }
        rep.add("collapse-relation", ok, "trivial commutant: pocket collapses to the trace");
        // exchange-augmented form: the pocket absorbed into a neighbouring q
        bool ok9 = true;
        for (size_t i = 0; i < dim && ok9; ++i) {
            Element x = b.basis_element(Colour(1), i);
            Element y = b.evaluate(pocket, {cert.q, x});
            Element lhs = b.multiply(cert.q, b.evaluate(inclusion_tangle(1), {y}));
            Element rhs = el_scale(b.delta() * cert.tau_q * b.trace(x), cert.q);
            ok9 = lhs == rhs;
            if (ok9) {
                Element lhs2 = b.multiply(b.evaluate(inclusion_tangle(1), {y}), cert.q);
                ok9 = lhs2 == rhs;
            }
        }
        rep.add("collapse-relation-augmented", ok9);
    } else {
        bool witness = false;
        for (size_t i = 0; i < dim && !witness; ++i) {
            Element x = b.basis_element(Colour(1), i);
            witness = !(b.evaluate(pocket, {cert.q, x}) == collapse_rhs(x));
        }
        rep.add("collapse-relation-negative-witness", witness,
                "commutant dimension " + std::to_string(c.dimension()));
    }
    return rep;
}

Element dual_subgroup_biprojection(const SpinBackend& b, const std::vector<int>& subgroup) {
    const GroupTable& g = b.group();
    size_t want = g.order / subgroup.size();
    if (want * subgroup.size() != static_cast<size_t>(g.order))
        throw config_error("dual_subgroup_biprojection: subgroup order does not divide |G|");
    // enumerate subgroups of the complementary order, lexicographically
    std::vector<std::vector<int>> candidates;
    for (unsigned mask = 1; mask < (1u << g.order); ++mask) {
        std::vector<int> elems;
        for (int e = 0; e < g.order; ++e)
            if (mask & (1u << e)) elems.push_back(e);
        if (elems.size() != want) continue;
        if (!g.is_subgroup(elems)) continue;
        candidates.push_back(elems);
    }
    Element q = b.subgroup_projection_candidate(subgroup);
    for (const auto& k : candidates) {
        Element qk = b.subgroup_projection_candidate(k);
        if (!(b.multiply(q, qk) == b.multiply(qk, q))) continue;
        BiprojectionCert c = check_relations(b, qk);
        if (c.certified()) return qk;
    }
    throw config_error("dual_subgroup_biprojection: no certified commuting dual found");
}

SubgroupBiprojection subgroup_biprojection(const SpinBackend& b,
                                           const std::vector<int>& subgroup) {
    Element q = b.subgroup_projection_candidate(subgroup);
    BiprojectionCert cert = check_relations(b, q);
    if (!cert.certified())
        throw config_error("subgroup biprojection failed certification for subgroup of order " +
                           std::to_string(subgroup.size()));
    return SubgroupBiprojection{q, cert};
}

} // namespace pla
