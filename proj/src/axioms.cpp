#include "pla/axioms.hpp"

namespace pla {

namespace {

// iterate basis tuples for the given dimensions; when the full product exceeds
// the cap, a seeded subsample keeps runtime bounded on large spin spaces
std::vector<std::vector<size_t>> basis_tuples(const std::vector<size_t>& dims, Rng& rng,
                                              size_t cap = 1024, size_t subsample = 64) {
    size_t total = 1;
    for (size_t d : dims) {
        total *= std::max<size_t>(d, 1);
        if (total > cap) break;
    }
    std::vector<std::vector<size_t>> out;
    if (total <= cap) {
        std::vector<size_t> idx(dims.size(), 0);
        while (true) {
            out.push_back(idx);
            size_t k = 0;
            while (k < dims.size() && ++idx[k] == dims[k]) idx[k++] = 0;
            if (k == dims.size() || dims.empty()) break;
        }
        if (dims.empty()) out.assign(1, {});
    } else {
        for (size_t s = 0; s < subsample; ++s) {
            std::vector<size_t> idx;
            for (size_t d : dims) idx.push_back(rng.below(d));
            out.push_back(idx);
        }
    }
    return out;
}

Tangle loop_tangle(bool minus) {
    return Tangle(Colour(0, minus), {}, {}, {FaceRef::at(0, 0)}, {});
}

// the trace closure with one extra disjoint circle
Tangle trace_with_loop(int n) {
    std::vector<std::pair<Dart, Dart>> s;
    for (int p = 1; p <= n; ++p) s.push_back({Dart{1, p}, Dart{1, 2 * n + 1 - p}});
    return Tangle(Colour(0), {Colour(n)}, s, {FaceRef::at(0, 0)},
                  {{FaceRef::at(1, 0), FaceRef::at(0, 0)}});
}

} // namespace

Report axiom_suite(const Backend& b, const AxiomOptions& opt) {
    Report rep;
    const FieldPtr& F = b.field();

    // normalization dimensions
    rep.add("dim-p0", b.dimension(Colour(0, false)) == 1 && b.dimension(Colour(0, true)) == 1,
            "dim P0+ = " + std::to_string(b.dimension(Colour(0, false))) +
                ", dim P0- = " + std::to_string(b.dimension(Colour(0, true))));

    // identity action on every basis vector
    {
        bool ok = true;
        for (int n = 1; n <= opt.max_colour && ok; ++n) {
            Tangle id = identity_tangle(n);
            for (size_t i = 0; i < b.dimension(Colour(n)) && ok; ++i) {
                Element e = b.basis_element(Colour(n), i);
                ok = b.evaluate(id, {e}) == e;
            }
        }
        rep.add("identity-action", ok);
    }

    // closed loop contributes exactly delta, in both shadings
    {
        Element lp = b.evaluate(loop_tangle(false), {});
        Element lm = b.evaluate(loop_tangle(true), {});
        bool ok = lp.coords[0] == b.delta() && lm.coords[0] == b.delta();
        rep.add("loop-value", ok, "Z(loop) = " + lp.coords[0].str());
    }

    // trace normalization and multiplicativity under a disjoint loop
    {
        bool ok = true;
        for (int n = 1; n <= opt.max_colour && ok; ++n) ok = b.trace(b.unit(n)).is_one();
        rep.add("trace-normalization", ok);
        bool mul_ok = true;
        for (int n = 1; n <= std::min(opt.max_colour, 2) && mul_ok; ++n) {
            Tangle twl = trace_with_loop(n);
            Tangle tp = trace_plus_tangle(n);
            for (size_t i = 0; i < b.dimension(Colour(n)) && mul_ok; ++i) {
                Element e = b.basis_element(Colour(n), i);
                mul_ok = b.evaluate(twl, {e}).coords[0] ==
                         b.delta() * b.evaluate(tp, {e}).coords[0];
            }
        }
        rep.add("loop-multiplicativity", mul_ok);
    }

    // composition compatibility on random trees over full bases (subsampled
    // only when the basis tuple count explodes)
    {
        Rng rng(opt.seed);
        bool ok = true;
        int checked = 0;
        std::string witness;
        for (int s = 0; s < opt.samples && ok; ++s) {
            Rng sample_rng = Rng(opt.seed ^ (0x1234u + 977u * s));
            ComposablePair pr = random_composable_pair(sample_rng, opt.max_colour, 2);
            Tangle comp = compose(pr.T, pr.i, pr.S);
            std::vector<size_t> dims;
            for (int d = 1; d <= pr.T.n_discs(); ++d)
                if (d != pr.i) dims.push_back(b.dimension(pr.T.disc_colour(d)));
            for (int d = 1; d <= pr.S.n_discs(); ++d)
                dims.push_back(b.dimension(pr.S.disc_colour(d)));
            for (const auto& tuple : basis_tuples(dims, sample_rng)) {
                size_t t_inputs = pr.T.n_discs() - 1;
                std::vector<Element> s_in, comp_in;
                for (size_t j = t_inputs; j < tuple.size(); ++j)
                    s_in.push_back(b.basis_element(pr.S.disc_colour(static_cast<int>(j - t_inputs) + 1),
                                                   tuple[j]));
                Element inner = b.evaluate(pr.S, s_in);
                std::vector<Element> t_in;
                size_t pos = 0;
                for (int d = 1; d <= pr.T.n_discs(); ++d) {
                    if (d == pr.i) t_in.push_back(inner);
                    else t_in.push_back(b.basis_element(pr.T.disc_colour(d), tuple[pos++]));
                }
                // composite inputs: T's discs minus i, then S's discs
                for (size_t j = 0; j < tuple.size(); ++j) {
                    int d = static_cast<int>(j) + 1;
                    comp_in.push_back(b.basis_element(comp.disc_colour(d), tuple[j]));
                }
                Element lhs = b.evaluate(comp, comp_in);
                Element rhs = b.evaluate(pr.T, t_in);
                ++checked;
                if (!(lhs == rhs)) {
                    ok = false;
                    witness = "sample " + std::to_string(s);
                    break;
                }
            }
        }
        rep.add("composition", ok,
                ok ? std::to_string(checked) + " evaluations" : witness);
    }

    // star: involutive anti-automorphism
    {
        bool ok = true;
        for (int n = 1; n <= std::min(opt.max_colour, 2) && ok; ++n) {
            Colour c(n);
            for (size_t i = 0; i < b.dimension(c) && ok; ++i) {
                Element e = b.basis_element(c, i);
                ok = b.star(b.star(e)) == e;
            }
            Rng rng(opt.seed ^ 0xabcd);
            for (int s = 0; s < 20 && ok; ++s) {
                Element x = b.basis_element(c, rng.below(b.dimension(c)));
                Element y = b.basis_element(c, rng.below(b.dimension(c)));
                ok = b.star(b.multiply(x, y)) == b.multiply(b.star(y), b.star(x));
            }
        }
        rep.add("star-structure", ok);
    }

    // trace form positivity at n <= 2
    if (opt.check_positivity) {
        bool ok = true;
        for (int n = 0; n <= std::min(opt.max_colour, 2) && ok; ++n) {
            Colour c(n);
            size_t dim = b.dimension(c);
            Matrix g(dim, dim, F);
            std::vector<Element> stars;
            for (size_t i = 0; i < dim; ++i) stars.push_back(b.star(b.basis_element(c, i)));
            for (size_t i = 0; i < dim; ++i)
                for (size_t j = 0; j < dim; ++j)
                    g.at(i, j) = b.trace(b.multiply(stars[i], b.basis_element(c, j)));
            if (!g.is_symmetric()) ok = false;
            else ok = is_positive_semidefinite(g);
        }
        rep.add("trace-positivity", ok);
    }

    // sphericality: left and right closures agree on P1
    {
        bool ok = true;
        for (size_t i = 0; i < b.dimension(Colour(1)) && ok; ++i) {
            Element e = b.basis_element(Colour(1), i);
            ok = b.trace(e) == b.trace_left(e);
        }
        rep.add("sphericality", ok);
    }

    return rep;
}

} // namespace pla
