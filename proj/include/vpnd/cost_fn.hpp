#ifndef VPND_COST_FN_HPP
#define VPND_COST_FN_HPP

#include <string>
#include <utility>
#include <vector>

#include "vpnd/rational.hpp"

namespace vpnd {

/// A non-decreasing concave piecewise-linear function f with f(0) = 0,
/// stored in canonical form: breakpoints with strictly increasing x starting
/// at (0,0), strictly decreasing segment slopes, and a final ray slope below
/// the last segment slope. Adjacent collinear pieces are rejected rather
/// than merged silently, so equal values have equal representations.
class ConcaveCost {
public:
    /// Throws ValidationError unless the data describes a canonical
    /// non-decreasing concave function through the origin.
    static ConcaveCost make(std::vector<std::pair<Rational, Rational>> breakpoints,
                            Rational final_slope);

    /// f(x) = x.
    static ConcaveCost identity();
    /// f(x) = slope * x.
    static ConcaveCost linear(const Rational& slope);
    /// Rent-or-buy shape f(x) = min(mu * x, cap), mu > 0, cap > 0.
    static ConcaveCost rent_or_buy(const Rational& mu, const Rational& cap);
    /// f == 0 everywhere.
    static ConcaveCost zero();

    const std::vector<std::pair<Rational, Rational>>& breakpoints() const {
        return breakpoints_;
    }
    const Rational& final_slope() const { return final_slope_; }

    /// Number of linear pieces including the final ray.
    int piece_count() const { return static_cast<int>(breakpoints_.size()); }

    /// Exact evaluation by interpolation on the containing piece.
    /// Throws ValidationError for x < 0.
    Rational operator()(const Rational& x) const;

    /// True iff the function is min(mu*x, cap) for some mu > 0, cap > 0;
    /// the accepted shape for the rent-or-buy solver.
    bool is_rent_or_buy() const;

    bool operator==(const ConcaveCost& other) const = default;

private:
    ConcaveCost() = default;

    std::vector<std::pair<Rational, Rational>> breakpoints_;  // first is (0,0)
    Rational final_slope_;
};

/// Exact f(x); free-function form of ConcaveCost::operator().
Rational eval_cost_fn(const ConcaveCost& f, const Rational& x);

/// Parses a standalone "costfn" block (see README). Throws ParseError /
/// ValidationError.
ConcaveCost parse_cost_fn(const std::string& text);

/// Canonical "costfn" block text.
std::string serialize_cost_fn(const ConcaveCost& f);

}  // namespace vpnd

#endif  // VPND_COST_FN_HPP
