#pragma once

#include "hashgraph/world.hpp"

namespace hashgraph {

// Definitional re-evaluation of strongly-sees: enumerates every z with
// x seen-by z and z an ancestor of y, rebuilding ancestry by plain graph
// traversal on each call. Shares no memo tables with World::strongly_sees;
// kept as an independent route for equivalence testing.
bool strongly_sees_oracle(const World& w, const EventId& y, const EventId& x);

} // namespace hashgraph
