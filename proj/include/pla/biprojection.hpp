#pragma once

#include "pla/backend.hpp"
#include "pla/report.hpp"
#include "pla/spin_backend.hpp"

namespace pla {

// certificate for the exchange-relation system on a 2-box projection
struct BiprojectionCert {
    Element q;
    bool rel_rotation = false; // (a) invariance under the one-strand rotation
    bool rel_cap = false;      // (b) capping the top pair yields the bare strand
    bool rel_closure = false;  // (c) partial closure is a multiple of the strand
    bool rel_exchange = false; // (d) the two sliding arrangements agree
    Scalar constant;           // extracted from (c)
    Scalar tau_q;              // tr q
    Scalar indexQ;             // 1/tr q
    bool constant_consistent = false; // constant == delta * tau_q

    bool certified() const {
        return rel_rotation && rel_cap && rel_closure && rel_exchange && constant_consistent;
    }
};

BiprojectionCert check_relations(const Backend& b, const Element& q);

// the relation tangles (exposed for tests)
Tangle cap_top_tangle();
Tangle exchange_lhs_tangle();
Tangle exchange_rhs_tangle();
// x sits in the pocket of the 2-box; evaluating on (q, x) averages x over the
// intermediate and lands in the relative commutant
Tangle pocket_tangle();

struct Commutant {
    Matrix phi;             // the idempotent on P1
    Scalar normalization;   // phi = normalization * the raw surround action
    std::vector<Vec> basis; // image basis: Q' cap M inside P1
    bool algebra_closed = false;

    int dimension() const { return static_cast<int>(basis.size()); }
};

// The relative commutant is cut out by the surround action of the dual
// biprojection (the one of the complementary intermediate): averaging a 1-box
// over the dual's ring is the conditional expectation onto Q' cap M. The dual
// is part of the instance data: the trivial and Jones biprojections are
// mutually dual, and a subgroup instance's dual is a complementary-order
// subgroup projection.
Commutant commutant_idempotent(const Backend& b, const BiprojectionCert& cert,
                               const Element& dual_q);

// search for a certified dual of a subgroup biprojection: a commuting
// subgroup projection of complementary order (deterministic: first subgroup
// in lexicographic element order)
Element dual_subgroup_biprojection(const SpinBackend& b, const std::vector<int>& subgroup);

struct MinimalProjection {
    Element f;
    Scalar tr_f;
    bool minimal = false; // rank of f * commutant * f equals 1
};

// auto mode; works when the commutant is commutative and coordinate-split
// (diagonal backends) or one-dimensional, otherwise demands an explicit f
MinimalProjection minimal_projection_auto(const Backend& b, const Commutant& c);
MinimalProjection certify_supplied_projection(const Backend& b, const Commutant& c,
                                              const Element& f);

// the irreducibility picture and its exchange-augmented companion: checked for
// every basis 1-box when the commutant is trivial; a negative witness is
// demanded otherwise
Report collapse_relation_check(const Backend& b, const BiprojectionCert& cert,
                               const Commutant& c);

// certified subgroup biprojection in a spin backend
struct SubgroupBiprojection {
    Element q;
    BiprojectionCert cert;
};
SubgroupBiprojection subgroup_biprojection(const SpinBackend& b, const std::vector<int>& subgroup);

} // namespace pla
