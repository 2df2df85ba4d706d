#pragma once

namespace evotree {

// Execution policy for the data-parallel force kernels. Every kernel
// accumulates per node in a fixed order, so serial and parallel runs
// produce bit-identical displacements for any worker count.
enum class Exec { serial, parallel };

} // namespace evotree
