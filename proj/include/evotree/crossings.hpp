#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "evotree/exec.hpp"
#include "evotree/geometry.hpp"
#include "evotree/tree.hpp"

namespace evotree {

// Number of properly intersecting segment pairs, excluding pairs that share
// a node id (those meet at the shared node by construction).
long long count_crossings(std::span<const Segment> segs,
                          std::span<const Point2> pos, Exec exec);

// Whether the segment pa->pb, whose endpoints carry node ids ia/ib (no_node
// for a point not yet in the tree), properly intersects any drawn segment.
// Segments sharing ia or ib are skipped — the same exclusion rule as
// count_crossings.
bool segment_crosses_any(Point2 pa, Point2 pb, NodeId ia, NodeId ib,
                         std::span<const Segment> segs,
                         std::span<const Point2> pos);

// Sets involved[id]=1 for every endpoint of every crossing pair; returns the
// number of crossing pairs. involved must be sized to the node count.
long long mark_crossing_nodes(std::span<const Segment> segs,
                              std::span<const Point2> pos,
                              std::span<char> involved);

}  // namespace evotree
