#include "pla/backend.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace pla {

Element Backend::zero(Colour c) const {
    return Element{this, c, Vec(dimension(c), Scalar::zero(field()))};
}

Element Backend::evaluate(const Tangle& t, const std::vector<Element>& inputs) const {
    if (static_cast<int>(inputs.size()) != t.n_discs())
        throw config_error("evaluate: expected " + std::to_string(t.n_discs()) + " inputs");
    for (int d = 1; d <= t.n_discs(); ++d) {
        if (inputs[d - 1].backend != this) throw config_error("evaluate: foreign element");
        if (inputs[d - 1].colour != t.disc_colour(d))
            throw config_error("evaluate: input colour mismatch at disc " + std::to_string(d));
    }
    return evaluate_connected(t, inputs);
}

Element Backend::basis_element(Colour c, size_t i) const {
    Element e = zero(c);
    if (i >= e.coords.size()) throw config_error("basis_element: index out of range");
    e.coords[i] = Scalar::one(field());
    return e;
}

Element Backend::from_coords(Colour c, Vec v) const {
    if (v.size() != dimension(c)) throw config_error("from_coords: wrong length");
    return Element{this, c, std::move(v)};
}

Element Backend::unit(int n) const {
    if (n == 0) return evaluate(empty_tangle(false), {});
    return evaluate(unit_tangle(n), {});
}

Element Backend::multiply(const Element& x, const Element& y) const {
    if (x.colour != y.colour) throw config_error("multiply: colour mismatch");
    if (x.colour.n == 0) {
        Element r = zero(x.colour);
        r.coords[0] = x.coords[0] * y.coords[0];
        return r;
    }
    return evaluate(multiplication_tangle(x.colour.n), {x, y});
}

Scalar Backend::trace(const Element& x) const {
    if (x.colour.n == 0) return x.coords[0];
    Element closed = evaluate(trace_plus_tangle(x.colour.n), {x});
    return delta().pow(-x.colour.n) * closed.coords[0];
}

Scalar Backend::trace_left(const Element& x) const {
    if (x.colour.n != 1) throw config_error("trace_left: defined on 1-boxes");
    Element closed = evaluate(trace_minus_tangle(1), {x});
    return delta().pow(-1) * closed.coords[0];
}

Scalar Backend::inner(const Element& x, const Element& y) const {
    return trace(multiply(star(x), y));
}

Element el_add(const Element& x, const Element& y) {
    if (x.backend != y.backend || x.colour != y.colour) throw config_error("el_add: mismatch");
    return Element{x.backend, x.colour, vec_add(x.coords, y.coords)};
}

Element el_sub(const Element& x, const Element& y) {
    if (x.backend != y.backend || x.colour != y.colour) throw config_error("el_sub: mismatch");
    return Element{x.backend, x.colour, vec_sub(x.coords, y.coords)};
}

Element el_scale(const Scalar& s, const Element& x) {
    return Element{x.backend, x.colour, vec_scale(s, x.coords)};
}

bool el_is_zero(const Element& x) { return vec_is_zero(x.coords); }

Element evaluate(const Backend& b, const LabelledTangle& lt, const std::vector<Element>& inputs) {
    std::vector<Element> full;
    size_t next = 0;
    for (int d = 0; d < lt.tangle.n_discs(); ++d) {
        if (lt.labels[d]) {
            full.push_back(*lt.labels[d]);
        } else {
            if (next >= inputs.size()) throw config_error("evaluate: missing input for a disc");
            full.push_back(inputs[next++]);
        }
    }
    if (next != inputs.size()) throw config_error("evaluate: too many inputs");
    return b.evaluate(lt.tangle, full);
}

Element build_f_k(const Backend& b, const Element& f, int k) {
    if (f.colour.n != 1) throw config_error("build_f_k: f must be a 1-box");
    if (k == 0) return b.unit(0);
    auto ins = insert_on_strings(unit_tangle(k));
    std::vector<Element> inputs(ins.new_discs.size(), f);
    return b.evaluate(ins.tangle, inputs);
}

// ---------------------------------------------------------------- reduced

ReducedBackend::ReducedBackend(BackendPtr parent, Element f, int max_colour)
    : parent_(std::move(parent)), f_(std::move(f)), max_colour_(max_colour) {
    const Backend& p = *parent_;
    trf_ = p.trace(f_);
    delta_ = p.delta() * trf_;
    name_ = "reduced(" + p.name() + ")";
    if (!(p.multiply(f_, f_) == f_) || !(p.star(f_) == f_))
        throw config_error("reduced_backend: f is not a projection");
    basis_.resize(2 * (max_colour_ + 1) + 1);
    f_k_.resize(max_colour_ + 1);
    for (int n = 0; n <= max_colour_; ++n) f_k_[n] = build_f_k(p, f_, n);
    basis_[slot(Colour(0, false))].push_back(Vec{Scalar::one(p.field())});
    basis_[slot(Colour(0, true))].push_back(Vec{Scalar::one(p.field())});
    for (int n = 1; n <= max_colour_; ++n) {
        Colour c(n);
        size_t dim = p.dimension(c);
        std::vector<Vec> cols;
        bool coordinate = true;
        for (size_t i = 0; i < dim; ++i) {
            Element e = p.basis_element(c, i);
            Element ce = p.multiply(p.multiply(f_k_[n], e), f_k_[n]);
            if (!(el_is_zero(ce) || ce == e)) coordinate = false;
            cols.push_back(std::move(ce.coords));
        }
        if (coordinate) {
            // the compression is a coordinate projection; skip the echelon
            std::vector<Vec> bs;
            for (size_t i = 0; i < dim; ++i)
                if (!vec_is_zero(cols[i])) bs.push_back(p.basis_element(c, i).coords);
            basis_[slot(c)] = std::move(bs);
        } else {
            basis_[slot(c)] = image_basis(Matrix::from_columns(cols, dim, p.field()));
        }
    }
}

const std::vector<Vec>& ReducedBackend::basis(Colour c) const {
    if (c.n > max_colour_) throw config_error("reduced_backend: colour beyond cached range");
    return basis_[slot(c)];
}

Element ReducedBackend::embed_to_parent(const Element& x) const {
    const auto& bs = basis(x.colour);
    Vec out(parent_->dimension(x.colour), Scalar::zero(field()));
    for (size_t i = 0; i < bs.size(); ++i) out = vec_add(out, vec_scale(x.coords[i], bs[i]));
    return parent_->from_coords(x.colour, std::move(out));
}

Element ReducedBackend::project_from_parent(const Element& px) const {
    auto c = solve_in_span(basis(px.colour), px.coords);
    if (!c) throw check_error("reduced_backend: value escapes the compressed space");
    return Element{this, px.colour, std::move(*c)};
}

Element ReducedBackend::evaluate_connected(const Tangle& t,
                                           const std::vector<Element>& inputs) const {
    auto ins = insert_on_strings(t);
    std::vector<Element> full;
    for (const auto& x : inputs) full.push_back(embed_to_parent(x));
    for (size_t i = 0; i < ins.new_discs.size(); ++i) full.push_back(f_);
    return project_from_parent(parent_->evaluate(ins.tangle, full));
}

Element ReducedBackend::star(const Element& x) const {
    return project_from_parent(parent_->star(embed_to_parent(x)));
}

std::shared_ptr<const ReducedBackend> reduced_backend(const BackendPtr& b, const Element& f) {
    return std::make_shared<ReducedBackend>(b, f, 3);
}

// ---------------------------------------------------------------- sampling

namespace {

Tangle random_with_ext(Rng& rng, int m, int max_colour, int depth);

void maybe_fill(Rng& rng, Tangle& t, int max_colour, int depth) {
    if (depth <= 0) return;
    int tries = static_cast<int>(rng.below(3));
    for (int k = 0; k < tries && t.n_discs() > 0; ++k) {
        int i = 1 + static_cast<int>(rng.below(t.n_discs()));
        Tangle filler = random_with_ext(rng, t.disc_colour(i).n, max_colour, depth - 1);
        t = compose(t, i, filler);
    }
}

Tangle random_with_ext(Rng& rng, int m, int max_colour, int depth) {
    std::vector<Tangle> menu;
    menu.push_back(identity_tangle(m));
    menu.push_back(multiplication_tangle(m));
    menu.push_back(rotation_tangle(m));
    menu.push_back(unit_tangle(m));
    if (m >= 2) menu.push_back(jones_tangle(m));
    if (m >= 2) menu.push_back(inclusion_tangle(m - 1));
    if (m + 1 <= max_colour) menu.push_back(cond_expectation_tangle(m + 1));
    Tangle t = menu[rng.below(menu.size())];
    maybe_fill(rng, t, max_colour, depth);
    return t;
}

} // namespace

Tangle random_builder_tangle(Rng& rng, int max_colour, int depth) {
    // roots: any external colour, including closures to 0+
    int m = 1 + static_cast<int>(rng.below(max_colour));
    if (rng.below(5) == 0) {
        Tangle t = trace_plus_tangle(m);
        maybe_fill(rng, t, max_colour, depth);
        return t;
    }
    return random_with_ext(rng, m, max_colour, depth);
}

ComposablePair random_composable_pair(Rng& rng, int max_colour, int depth) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        Tangle T = random_builder_tangle(rng, max_colour, depth);
        if (T.n_discs() == 0) continue;
        int i = 1 + static_cast<int>(rng.below(T.n_discs()));
        Tangle S = random_with_ext(rng, T.disc_colour(i).n, max_colour, depth - 1);
        return ComposablePair{std::move(T), i, std::move(S)};
    }
    return ComposablePair{trace_plus_tangle(1), 1, identity_tangle(1)};
}

} // namespace pla
