#include "vpnd/cables.hpp"

#include <sstream>

#include "vpnd/errors.hpp"

namespace vpnd {

CableList CableList::make(std::vector<CableType> cables) {
    if (cables.empty()) throw ValidationError("cable list must not be empty");
    for (const auto& c : cables)
        if (c.sigma < 0 || c.delta < 0)
            throw ValidationError("cable parameters must be nonnegative");
    for (std::size_t i = 1; i < cables.size(); ++i) {
        if (cables[i].sigma <= cables[i - 1].sigma)
            throw ValidationError("cable sigmas must be strictly increasing");
        if (cables[i].delta >= cables[i - 1].delta)
            throw ValidationError("cable deltas must be strictly decreasing");
    }
    CableList list;
    list.cables_ = std::move(cables);
    return list;
}

Rational CableList::envelope(const Rational& x) const {
    Rational best = cables_[0].sigma + cables_[0].delta * x;
    for (std::size_t i = 1; i < cables_.size(); ++i) {
        Rational y = cables_[i].sigma + cables_[i].delta * x;
        if (y < best) best = std::move(y);
    }
    return best;
}

int CableList::best_cable(const Rational& x) const {
    int best = 0;
    Rational best_y = cables_[0].sigma + cables_[0].delta * x;
    for (std::size_t i = 1; i < cables_.size(); ++i) {
        Rational y = cables_[i].sigma + cables_[i].delta * x;
        if (y < best_y) {
            best_y = std::move(y);
            best = static_cast<int>(i);
        }
    }
    return best;
}

CableList segments_to_cables(const ConcaveCost& f) {
    // Each linear piece of f extends to a full line sigma + delta*x; f being
    // concave is exactly the statement that f is the lower envelope of those
    // lines. Concavity also makes the intercepts strictly increasing as the
    // slopes decrease, which is the CableList canonical order.
    std::vector<CableType> cables;
    const auto& bps = f.breakpoints();
    for (std::size_t i = 1; i < bps.size(); ++i) {
        const auto& [x0, y0] = bps[i - 1];
        const auto& [x1, y1] = bps[i];
        Rational delta = (y1 - y0) / (x1 - x0);
        cables.push_back({y0 - delta * x0, delta});
    }
    const auto& [xl, yl] = bps.back();
    cables.push_back({yl - f.final_slope() * xl, f.final_slope()});
    return CableList::make(std::move(cables));
}

CableList prune_cables(const CableList& cables, const Rational& ratio) {
    if (ratio <= 1) throw ValidationError("prune ratio must exceed 1");
    std::vector<CableType> kept{cables.cable(0)};
    for (int i = 1; i < cables.size(); ++i) {
        const CableType& c = cables.cable(i);
        const CableType& last = kept.back();
        // Keep on geometric sigma growth. A cable below that threshold may
        // still be load-bearing: dropping it is only safe when the last kept
        // cable covers it within the ratio at every x, i.e. when
        //   sigma_last + delta_last*x <= ratio*(sigma_i + delta_i*x),
        // which (given sigma_last <= sigma_i) reduces to
        //   delta_last <= ratio*delta_i.
        // Without this backstop a cheap plateau cable could be dropped and
        // the sandwich guarantee would fail for large x.
        if (c.sigma >= ratio * last.sigma || last.delta > ratio * c.delta)
            kept.push_back(c);
    }
    return CableList::make(std::move(kept));
}

std::string serialize_cables(const CableList& cables) {
    std::ostringstream out;
    for (const auto& c : cables.cables())
        out << "cable " << to_string(c.sigma) << " " << to_string(c.delta) << "\n";
    return out.str();
}

}  // namespace vpnd
