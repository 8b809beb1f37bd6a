#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pla/linalg.hpp"
#include "pla/tangle.hpp"

namespace pla {

class Backend;
using BackendPtr = std::shared_ptr<const Backend>;

// exact coordinate vector over a named basis of a backend's box space
struct Element {
    const Backend* backend = nullptr;
    Colour colour;
    Vec coords;

    bool operator==(const Element& o) const {
        return backend == o.backend && colour == o.colour && vec_eq(coords, o.coords);
    }
};

// A concrete planar algebra: basis enumeration per colour plus an exact
// evaluation procedure for labelled tangles. Implementations are immutable;
// evaluation is pure.
class Backend {
public:
    virtual ~Backend() = default;

    virtual std::string name() const = 0;
    virtual const FieldPtr& field() const = 0;
    virtual Scalar delta() const = 0; // loop value
    virtual size_t dimension(Colour c) const = 0;

    // exact multilinear action; inputs in internal-disc order 1..b
    Element evaluate(const Tangle& t, const std::vector<Element>& inputs) const;

    // adjoint; an involutive anti-automorphism on each box space
    virtual Element star(const Element& x) const = 0;

protected:
    // the backend-specific state sum / diagram calculus, after input validation
    virtual Element evaluate_connected(const Tangle& t,
                                       const std::vector<Element>& inputs) const = 0;

public:

    // ---- conveniences built on evaluate ----
    Element zero(Colour c) const;
    Element basis_element(Colour c, size_t i) const;
    Element from_coords(Colour c, Vec v) const;
    Element unit(int n) const; // 1_n
    Element multiply(const Element& x, const Element& y) const;
    // normalized trace, tr(1_n) = 1
    Scalar trace(const Element& x) const;
    // left closure on P1 (sphericality partner of trace)
    Scalar trace_left(const Element& x) const;
    Scalar inner(const Element& x, const Element& y) const; // tr(x* y)
};

Element el_add(const Element& x, const Element& y);
Element el_sub(const Element& x, const Element& y);
Element el_scale(const Scalar& s, const Element& x);
bool el_is_zero(const Element& x);

// tangle with a partial labelling of its internal discs; unlabelled discs are
// the inputs, in disc order
struct LabelledTangle {
    Tangle tangle;
    std::vector<std::optional<Element>> labels; // size n_discs

    LabelledTangle(Tangle t) : tangle(std::move(t)), labels(tangle.n_discs()) {}
};

Element evaluate(const Backend& b, const LabelledTangle& lt, const std::vector<Element>& inputs);

// f_k: the alternating insertion of a 1-box projection on the k through-strands
Element build_f_k(const Backend& b, const Element& f, int k);

// The reduced planar algebra fPf: spaces f_k P_k f_k, action by f-inserted
// tangles, loop value delta * tr(f). Box spaces are cached up to max_colour.
class ReducedBackend final : public Backend {
public:
    ReducedBackend(BackendPtr parent, Element f, int max_colour = 3);

    std::string name() const override { return name_; }
    const FieldPtr& field() const override { return parent_->field(); }
    Scalar delta() const override { return delta_; }
    size_t dimension(Colour c) const override { return basis(c).size(); }
    Element star(const Element& x) const override;

    Element embed_to_parent(const Element& x) const;
    Element project_from_parent(const Element& px) const;
    const Element& projection() const { return f_; }
    Scalar tr_f() const { return trf_; }
    const Element& compressed_unit(int n) const { return f_k_[n]; }

protected:
    Element evaluate_connected(const Tangle& t,
                               const std::vector<Element>& inputs) const override;

private:
    BackendPtr parent_;
    Element f_;
    Scalar trf_, delta_;
    int max_colour_;
    std::string name_;
    std::vector<std::vector<Vec>> basis_;
    std::vector<Element> f_k_;

    static size_t slot(Colour c) { return 2 * c.n + (c.minus ? 1 : 0); }
    const std::vector<Vec>& basis(Colour c) const;
};

std::shared_ptr<const ReducedBackend> reduced_backend(const BackendPtr& b, const Element& f);

// deterministic splittable rng for the sampling harnesses
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed) {}
    uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    uint64_t below(uint64_t n) { return n ? next() % n : 0; }
    Rng split() { return Rng(next()); }
};

// a random tangle built as a composition tree over the builder library
Tangle random_builder_tangle(Rng& rng, int max_colour, int depth);
// (T, i, S) with the composition defined; S's external colour = colour of disc i
struct ComposablePair {
    Tangle T;
    int i;
    Tangle S;
};
ComposablePair random_composable_pair(Rng& rng, int max_colour, int depth);

} // namespace pla
