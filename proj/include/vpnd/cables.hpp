#ifndef VPND_CABLES_HPP
#define VPND_CABLES_HPP

#include <string>
#include <vector>

#include "vpnd/cost_fn.hpp"

namespace vpnd {

/// A cable type: installing it on edge e costs c_e * (sigma + delta * x)
/// for x units of capacity. Fixed cost sigma, incremental cost delta, both
/// per unit of edge cost.
struct CableType {
    Rational sigma;
    Rational delta;

    bool operator==(const CableType&) const = default;
};

/// Cables sorted by strictly increasing sigma and strictly decreasing delta
/// (dominated cables removed). The lower envelope min_i(sigma_i + delta_i*x)
/// is concave and non-decreasing on x >= 0.
class CableList {
public:
    /// Throws ValidationError unless sorted by strictly increasing sigma with
    /// strictly decreasing delta and all entries nonnegative.
    static CableList make(std::vector<CableType> cables);

    const std::vector<CableType>& cables() const { return cables_; }
    int size() const { return static_cast<int>(cables_.size()); }
    const CableType& cable(int i) const { return cables_[static_cast<std::size_t>(i)]; }

    /// min_i (sigma_i + delta_i * x), exact.
    Rational envelope(const Rational& x) const;

    /// Index of a cable attaining the envelope at load x (smallest index on
    /// ties).
    int best_cable(const Rational& x) const;

private:
    CableList() = default;
    std::vector<CableType> cables_;
};

/// One cable per linear piece of f (including the final ray): delta is the
/// piece slope, sigma the y-intercept of its line. Because f is concave and
/// every piece lies on it, the returned envelope equals f pointwise on
/// x >= 0.
CableList segments_to_cables(const ConcaveCost& f);

/// Thins a cable list produced by segments_to_cables so that kept fixed
/// costs grow geometrically: after the first cable, a cable is kept when its
/// sigma is at least ratio times the last kept sigma. A cable whose drop
/// would break the pointwise guarantee is kept as well (the last kept cable
/// must satisfy delta_kept <= ratio * delta_i for the drop to lose at most a
/// factor of ratio at every x). Guarantee, tested by the acceptance suite:
///   envelope(x) <= pruned envelope(x) <= ratio * envelope(x)  for all x >= 0.
/// Throws ValidationError for ratio <= 1.
CableList prune_cables(const CableList& cables, const Rational& ratio);

/// Lines "cable SIGMA DELTA" sorted by sigma.
std::string serialize_cables(const CableList& cables);

}  // namespace vpnd

#endif  // VPND_CABLES_HPP
