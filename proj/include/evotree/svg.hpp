#pragma once

#include <string>
#include <vector>

#include "evotree/geometry.hpp"
#include "evotree/metrics.hpp"
#include "evotree/tree.hpp"

namespace evotree {

// Renders the current layout as a standalone SVG document.
//
// Every edge is drawn as a polyline through its chain (endpoints plus any
// subdivision nodes), every real node as a small circle, and, when
// `with_labels` is set, each real node's label as text truncated to
// `labels.max_chars` codepoints.  The viewBox covers all drawn geometry --
// including label extents when labels are on -- with a 5% margin per axis
// (a fixed margin of 10 units when an axis would otherwise be degenerate).
// Output is deterministic: same inputs produce identical bytes.
std::string render_svg(const EvolvingTree& tree, const std::vector<Point2>& positions,
                       const LabelSpec& labels = {}, bool with_labels = false);

}  // namespace evotree
