#pragma once

#include "pla/backend.hpp"

namespace pla {

// noncrossing perfect matching of 2n boundary points; partner[i] 0-based
using TLDiagram = std::vector<int>;

std::vector<TLDiagram> noncrossing_matchings(int n); // Catalan(n) diagrams, fixed order
bool is_noncrossing(const TLDiagram& m);

// TL(delta) with a formal loop parameter
BackendPtr tl_backend_generic();
// TL(sqrt(d)); the field must contain sqrt(d)
BackendPtr tl_backend_sqrt(long d, const FieldPtr& field);
// negative control: closed loops evaluate to delta+1 while delta() reports delta
BackendPtr tl_backend_generic_corrupted();

} // namespace pla
