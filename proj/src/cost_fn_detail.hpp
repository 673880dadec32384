#ifndef VPND_SRC_COST_FN_DETAIL_HPP
#define VPND_SRC_COST_FN_DETAIL_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "vpnd/cost_fn.hpp"
#include "line_parser.hpp"

namespace vpnd::detail {

/// Parses a `costfn` block starting at lines[start] (which must be the
/// `costfn K` line). Returns the function and the index one past the block.
std::pair<ConcaveCost, std::size_t> parse_cost_fn_block(
    const std::vector<Line>& lines, std::size_t start);

}  // namespace vpnd::detail

#endif  // VPND_SRC_COST_FN_DETAIL_HPP
