#pragma once

#include <iosfwd>

#include "pla/backend.hpp"
#include "pla/report.hpp"

namespace pla {

// finite group as a Cayley table, 0-based internally
struct GroupTable {
    std::string name;
    int order = 1;
    std::vector<std::vector<int>> mul;
    std::vector<int> inv;
    int identity = 0;

    static GroupTable cyclic(int n);
    static GroupTable z2xz2();
    static GroupTable s3();
    // first line: order k; then k rows of k 1-based integers
    static GroupTable from_stream(std::istream& in, const std::string& name);

    void verify() const; // associativity, identity, inverses
    bool is_subgroup(const std::vector<int>& elems) const;
};

// state-sum normalization: per-region exponents of delta of the form
// a*chi(R) + b*d_int(R) + e*d_ext(R) + c for each shading, a per-internal-disc
// factor delta^{g*n} and an external factor delta^{g0*n0}
struct SpinWeights {
    mpq_class a_s, b_s, e_s, c_s;
    mpq_class a_u, b_u, e_u, c_u;
    mpq_class g, g0;
    std::string str() const;
};

struct CalibrationOptions {
    // negative-control hook: shifts the Jones-normalization probe target,
    // equivalent to demanding tr(jones element) = delta^(-2+shift)
    int jones_target_shift = 0;
};

// solve the probe constraints exactly; throws config_error when the system is
// inconsistent or the solution is not unique modulo the bookkeeping gauge
SpinWeights calibrate_spin_convention(int k, const CalibrationOptions& opt = {});

class SpinBackend;

BackendPtr spin_backend(const GroupTable& g, const FieldPtr& field,
                        const CalibrationOptions& opt = {});

class SpinBackend final : public Backend {
public:
    SpinBackend(GroupTable g, FieldPtr field, const CalibrationOptions& opt);
    struct unchecked_t {};
    SpinBackend(GroupTable g, FieldPtr field, const SpinWeights& w, unchecked_t);
    void post_calibration_checks() const;

    std::string name() const override;
    const FieldPtr& field() const override { return field_; }
    Scalar delta() const override { return delta_; }
    size_t dimension(Colour c) const override;
    Element star(const Element& x) const override;

protected:
    Element evaluate_connected(const Tangle& t,
                               const std::vector<Element>& inputs) const override;

public:

    const GroupTable& group() const { return group_; }
    const SpinWeights& weights() const { return weights_; }
    int spins() const { return k_; }

    // matrix view of a 2-box: entry (i, j) sits at coordinate j + k*i
    Scalar matrix_entry(const Element& x, int i, int j) const;
    Element from_matrix(const std::vector<std::vector<Scalar>>& m) const;

    // the candidate biprojection of a subgroup: (1/|H|)[ i j^{-1} in H ]
    Element subgroup_projection_candidate(const std::vector<int>& subgroup) const;

private:
    GroupTable group_;
    FieldPtr field_;
    int k_;
    Scalar delta_;
    SpinWeights weights_;
};

} // namespace pla
