#pragma once

#include "pla/backend.hpp"
#include "pla/report.hpp"

namespace pla {

struct AxiomOptions {
    int max_colour = 3;
    int samples = 200;
    uint64_t seed = 1;
    bool check_positivity = true;
};

// the subfactor planar algebra axiom harness: identity action, composition
// compatibility on random trees, loop value, dim P_{0+} = 1, star structure,
// trace-form positivity at n <= 2, sphericality on P_1
Report axiom_suite(const Backend& b, const AxiomOptions& opt = {});

} // namespace pla
