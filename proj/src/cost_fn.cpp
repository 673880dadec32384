#include "vpnd/cost_fn.hpp"

#include <sstream>

#include "vpnd/errors.hpp"
#include "cost_fn_detail.hpp"
#include "line_parser.hpp"

namespace vpnd {

ConcaveCost ConcaveCost::make(std::vector<std::pair<Rational, Rational>> breakpoints,
                              Rational final_slope) {
    if (breakpoints.empty()) throw ValidationError("costfn needs at least one breakpoint");
    if (breakpoints.front() != std::pair<Rational, Rational>{0, 0})
        throw ValidationError("costfn first breakpoint must be (0, 0)");
    if (final_slope < 0) throw ValidationError("costfn final slope must be nonnegative");

    Rational prev_slope;
    bool have_prev = false;
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        const auto& [x0, y0] = breakpoints[i - 1];
        const auto& [x1, y1] = breakpoints[i];
        if (x1 <= x0) throw ValidationError("costfn breakpoint x not increasing");
        if (y1 < y0) throw ValidationError("costfn not non-decreasing");
        Rational slope = (y1 - y0) / (x1 - x0);
        if (have_prev && slope >= prev_slope)
            throw ValidationError("costfn not strictly concave at breakpoint " +
                                  std::to_string(i) + " (collinear pieces must be merged)");
        prev_slope = slope;
        have_prev = true;
    }
    if (have_prev && final_slope >= prev_slope)
        throw ValidationError("costfn final slope must be below the last segment slope");

    ConcaveCost f;
    f.breakpoints_ = std::move(breakpoints);
    f.final_slope_ = std::move(final_slope);
    return f;
}

ConcaveCost ConcaveCost::identity() { return make({{0, 0}}, 1); }

ConcaveCost ConcaveCost::linear(const Rational& slope) {
    if (slope < 0) throw ValidationError("linear cost slope must be nonnegative");
    return make({{0, 0}}, slope);
}

ConcaveCost ConcaveCost::rent_or_buy(const Rational& mu, const Rational& cap) {
    if (mu <= 0 || cap <= 0) throw ValidationError("rent_or_buy needs mu > 0 and cap > 0");
    return make({{0, 0}, {cap / mu, cap}}, 0);
}

ConcaveCost ConcaveCost::zero() { return make({{0, 0}}, 0); }

Rational ConcaveCost::operator()(const Rational& x) const {
    if (x < 0) throw ValidationError("costfn evaluated at negative x");
    // Last breakpoint with bp.x <= x, then interpolate toward the next one
    // (or along the final ray).
    std::size_t lo = 0, hi = breakpoints_.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi + 1) / 2;
        if (breakpoints_[mid].first <= x)
            lo = mid;
        else
            hi = mid - 1;
    }
    const auto& [bx, by] = breakpoints_[lo];
    if (lo + 1 < breakpoints_.size()) {
        const auto& [nx, ny] = breakpoints_[lo + 1];
        return by + (ny - by) / (nx - bx) * (x - bx);
    }
    return by + final_slope_ * (x - bx);
}

bool ConcaveCost::is_rent_or_buy() const {
    return breakpoints_.size() == 2 && final_slope_ == 0 && breakpoints_[1].second > 0;
}

Rational eval_cost_fn(const ConcaveCost& f, const Rational& x) { return f(x); }

namespace detail {

std::pair<ConcaveCost, std::size_t> parse_cost_fn_block(const std::vector<Line>& lines,
                                                        std::size_t start) {
    const Line& head = lines[start];
    expect_tokens(head, 2);
    std::int64_t k = parse_int_tok(head, 1, "breakpoint count");
    if (k < 1) throw ParseError(head.no, "costfn needs at least one breakpoint");

    std::size_t i = start + 1;
    std::vector<std::pair<Rational, Rational>> bps;
    for (std::int64_t j = 0; j < k; ++j, ++i) {
        if (i >= lines.size()) throw ParseError(lines.back().no, "unexpected end of costfn block");
        const Line& line = lines[i];
        if (line.tokens[0] != "bp")
            throw ParseError(line.no, "expected 'bp' line in costfn block");
        expect_tokens(line, 3);
        bps.emplace_back(parse_rational_tok(line, 1, "breakpoint x"),
                         parse_rational_tok(line, 2, "breakpoint y"));
    }
    if (i >= lines.size()) throw ParseError(lines.back().no, "missing 'slope' line");
    const Line& slope_line = lines[i];
    if (slope_line.tokens[0] != "slope")
        throw ParseError(slope_line.no, "expected 'slope' line after breakpoints");
    expect_tokens(slope_line, 2);
    Rational slope = parse_rational_tok(slope_line, 1, "slope");
    return {ConcaveCost::make(std::move(bps), std::move(slope)), i + 1};
}

}  // namespace detail

ConcaveCost parse_cost_fn(const std::string& text) {
    auto lines = detail::significant_lines(text);
    if (lines.empty()) throw ParseError("empty costfn input");
    if (lines[0].tokens[0] != "costfn")
        throw ParseError(lines[0].no, "expected 'costfn K' header");
    auto [f, next] = detail::parse_cost_fn_block(lines, 0);
    if (next != lines.size())
        throw ParseError(lines[next].no, "trailing content after costfn block");
    return f;
}

std::string serialize_cost_fn(const ConcaveCost& f) {
    std::ostringstream out;
    out << "costfn " << f.breakpoints().size() << "\n";
    for (const auto& [x, y] : f.breakpoints())
        out << "bp " << to_string(x) << " " << to_string(y) << "\n";
    out << "slope " << to_string(f.final_slope()) << "\n";
    return out.str();
}

}  // namespace vpnd
