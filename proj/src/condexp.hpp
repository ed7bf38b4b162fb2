#pragma once

#include <vector>

#include "measure.hpp"

namespace wce {

// Conditional expectation of f with respect to the block algebra: the
// result is the mass-weighted block average, constant on each block.
// Returned as an explicit table over every cell of the space.
Weight cond_exp(const Weight& f, const SubAlgebra& alg, const AtomicSpace& space);

// Indices (ascending) of the blocks on which f is not identically zero.
// This is the support of E(|f|) at block resolution.
std::vector<std::size_t> support_cover(const Weight& f, const SubAlgebra& alg,
                                       const AtomicSpace& space);

}  // namespace wce
