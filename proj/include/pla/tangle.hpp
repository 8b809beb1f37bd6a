#pragma once

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pla/scalar.hpp"

namespace pla {

// Colour of a disc: n marked-point pairs; the sign distinguishes 0+ (unshaded
// boundary) from 0- and is meaningful only when n = 0.
struct Colour {
    int n = 0;
    bool minus = false;

    Colour() = default;
    Colour(int n_, bool minus_ = false) : n(n_), minus(n_ == 0 && minus_) {}
    int points() const { return 2 * n; }
    bool operator==(const Colour& o) const { return n == o.n && minus == o.minus; }
    bool operator!=(const Colour& o) const { return !(*this == o); }
};

// disc 0 is the external disc, 1..b are internal
struct Dart {
    int disc = 0;
    int point = 1; // 1..2n, numbered from the *-interval in rotation order
    auto operator<=>(const Dart&) const = default;
};

// interval i of a disc lies between point i and point i+1; interval 0 is the
// *-interval (between point 2n and point 1); colour-0 discs have the single
// interval 0. Interval i is shaded iff i is odd.
struct Corner {
    int disc = 0;
    int interval = 0;
    auto operator<=>(const Corner&) const = default;
};

// Addresses a face of the picture: either by a corner lying on it, or as one
// of the two sides of a free loop (side 0 = the side facing the region the
// loop was dropped into, side 1 = the other).
struct FaceRef {
    enum class Kind { corner, loopside };
    Kind kind = Kind::corner;
    int a = 0, b = 0; // corner: (disc, interval); loopside: (loop, side)

    static FaceRef at(int disc, int interval) { return {Kind::corner, disc, interval}; }
    static FaceRef loop(int l, int side) { return {Kind::loopside, l, side}; }
    auto operator<=>(const FaceRef&) const = default;
};

// A region of the shaded picture (a face of the combinatorial map after
// island and loop placement merges).
struct Region {
    std::vector<Corner> corners;               // sorted
    std::vector<std::pair<int, int>> loop_sides; // sorted (loop, side)
    int circuits = 0;                          // boundary circles; chi = 2 - circuits
    bool shaded = false;

    int d_ext() const;
    int d_int() const;
};

// A shaded planar tangle as a genus-0 combinatorial map. Rotation order around
// every disc equals the numbering order of its marked points (clockwise on the
// external disc, counterclockwise on internal discs, as drawn). Free loops and
// disconnected string components carry explicit placement data. Immutable and
// fully validated after construction.
class Tangle {
public:
    Tangle(Colour ext, std::vector<Colour> discs,
           const std::vector<std::pair<Dart, Dart>>& strings,
           std::vector<FaceRef> loop_ambients = {},
           std::vector<std::pair<FaceRef, FaceRef>> island_merges = {});

    const Colour& ext() const { return ext_; }
    const std::vector<Colour>& discs() const { return discs_; }
    int n_discs() const { return static_cast<int>(discs_.size()); }
    Colour disc_colour(int d) const { return d == 0 ? ext_ : discs_[d - 1]; }

    Dart partner(Dart d) const;
    std::vector<std::pair<Dart, Dart>> strings() const; // canonical order
    int n_strings() const;

    int n_loops() const { return static_cast<int>(loop_ambients_.size()); }
    const std::vector<FaceRef>& loop_ambients() const { return loop_ambients_; }
    const std::vector<std::pair<FaceRef, FaceRef>>& island_merges() const { return island_merges_; }

    const std::vector<Region>& regions() const { return regions_; }
    int region_at(const FaceRef& ref) const;
    int region_of_corner(int disc, int interval) const;
    // region carrying spin slot m (1..n) of disc d; slots run over the shaded
    // intervals, ordered bottom-to-top in the standard drawing
    int slot_region(int disc, int slot) const;
    int slot_interval(int disc, int slot) const;

    std::string signature() const;
    bool same_as(const Tangle& o) const { return signature() == o.signature(); }

private:
    Colour ext_;
    std::vector<Colour> discs_;
    std::vector<int> pair_; // flat dart involution
    std::vector<FaceRef> loop_ambients_;
    std::vector<std::pair<FaceRef, FaceRef>> island_merges_;

    // derived geometry
    std::vector<int> offset_; // disc -> first flat dart index
    struct Face {
        std::vector<int> darts;
        std::vector<Corner> corners;
        int component; // dart-component id, or -1 for loop faces
    };
    std::vector<Face> faces_;
    std::map<Corner, int> corner_face_;
    std::vector<std::array<int, 2>> loop_face_; // per loop: face ids of sides 0,1
    std::vector<Region> regions_;
    std::map<Corner, int> corner_region_;
    std::vector<std::array<int, 2>> loop_region_;

    int flat(Dart d) const { return offset_[d.disc] + d.point - 1; }
    Dart undart(int f) const;
    int face_of(const FaceRef& ref) const;
    void validate();

    friend Tangle compose(const Tangle&, int, const Tangle&);
};

// ------------------------------------------------------------------ ops

// l(T): closed loops after capping the shaded intervals of the external disc
// and cupping the shaded intervals of every internal disc
int loop_count(const Tangle& t);

// c(T) = ceil(k0/2) + sum floor(ki/2) - l(T)
int c_of(const Tangle& t);

// alpha(T) = indexQ^{c(T)/2}; requires sqrt(indexQ) in the field
Scalar alpha(const Tangle& t, const Scalar& indexQ);

// the composition-defect identity relating alpha values and loop counts
bool prop32_check(const Tangle& T, int i, const Tangle& S, const Scalar& indexQ);

// T o_i S: glue S into internal disc i (1-based) of T. Result discs: T's discs
// with disc i removed (order kept), then S's discs.
Tangle compose(const Tangle& T, int disc_index, const Tangle& S);

// insert a colour-1 disc on every string and every free loop; inserted discs are
// appended after the existing ones (string insertions first, then loops)
struct InsertResult {
    Tangle tangle;
    std::vector<int> new_discs;
};
InsertResult insert_on_strings(const Tangle& t);

// the surrounding frame: external colour n, discs 1..n of colour 2 (the
// biprojection slots), disc n+1 of colour n (the payload slot)
Tangle surround_frame(int n);

// surround_flat(T): frame composed with T in the payload slot; q-slots become
// discs 1..n, T's discs follow. For n = 0 the tangle is returned unchanged.
struct SurroundResult {
    Tangle tangle;
    int n_qslots;
};
SurroundResult surround_flat(const Tangle& t);

// ------------------------------------------------------------------ builders

Tangle identity_tangle(int n);       // one internal disc of colour n
Tangle multiplication_tangle(int n); // disc 1 stacked over disc 2
Tangle inclusion_tangle(int n);      // P_n -> P_{n+1}, new strand on the right
Tangle cond_expectation_tangle(int n); // P_n -> P_{n-1}, caps the rightmost strand
Tangle jones_tangle(int n);          // no discs; cup over cap at the right, n >= 2
Tangle rotation_tangle(int n);       // shift by one strand
Tangle trace_plus_tangle(int n);     // 0+ external, closure around the right
Tangle trace_minus_tangle(int n);    // 0- external, closure around the left
Tangle unit_tangle(int n);           // no discs, nested through-strands
Tangle empty_tangle(bool minus);
Tangle free_loop_tangle();           // 0+ external, a single free loop

} // namespace pla
