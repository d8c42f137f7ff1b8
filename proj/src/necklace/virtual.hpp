#pragma once

// Concatenations of sub-intervals of a necklace, measured in bead units.

#include "fairdiv/necklace/necklace.hpp"

namespace fairdiv::necklace::detail {

struct Segment {
    Rational start, end;  // original coordinates in [0, N]
};

class Virtual {
public:
    Virtual(const Necklace& necklace, std::vector<Segment> parts);

    const std::vector<Segment>& parts() const { return parts_; }
    Rational length() const { return length_; }

    /// Amount of `type` in the virtual prefix [0, p].
    Rational prefix(int type, const Rational& p) const;
    /// Virtual positions where the density may change (joins and bead boundaries), sorted.
    std::vector<Rational> breakpoints() const;
    /// The virtual interval [a, b] as its own necklace.
    Virtual slice(const Rational& a, const Rational& b) const;
    /// Two slices glued together.
    Virtual join(const Virtual& tail) const;
    /// `copies` copies glued end to end.
    Virtual repeat(int copies) const;

private:
    const Necklace* necklace_;
    std::vector<Segment> parts_;
    Rational length_;
};

/// Amount of `type` in original [0, y].
Rational original_prefix(const Necklace& necklace, int type, const Rational& y);

/**
 * Start of a window [s, s + width] of `v` whose content of `type` equals
 * `target`, given that window starts lo and hi bracket the target (the
 * content minus target has opposite signs, or is zero, at lo and hi).
 */
Rational window_root(const Virtual& v, int type, const Rational& width, const Rational& target, const Rational& lo,
                     const Rational& hi);

}  // namespace fairdiv::necklace::detail
