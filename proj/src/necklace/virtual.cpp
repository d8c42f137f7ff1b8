#include "virtual.hpp"

#include "fairdiv/error.hpp"

#include <algorithm>

namespace fairdiv::necklace::detail {

namespace {

mpz_class floor_of(const Rational& x) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return f;
}

}  // namespace

Rational original_prefix(const Necklace& necklace, int type, const Rational& y) {
    const long n = static_cast<long>(necklace.size());
    if (y <= 0) return 0;
    Rational total = 0;
    const long whole = std::min(n, floor_of(y).get_si());
    for (long m = 0; m < whole; ++m)
        if (necklace.beads[static_cast<size_t>(m)] == type) total += 1;
    if (whole < n && necklace.beads[static_cast<size_t>(whole)] == type) total += y - whole;
    return total;
}

Virtual::Virtual(const Necklace& necklace, std::vector<Segment> parts) : necklace_(&necklace) {
    for (auto& p : parts)
        if (p.end > p.start) {
            length_ += p.end - p.start;
            parts_.push_back(std::move(p));
        }
}

Rational Virtual::prefix(int type, const Rational& p) const {
    Rational acc = 0, pos = 0;
    for (const auto& part : parts_) {
        Rational len = part.end - part.start;
        if (pos + len <= p) {
            acc += original_prefix(*necklace_, type, part.end) - original_prefix(*necklace_, type, part.start);
            pos += len;
            continue;
        }
        if (p > pos)
            acc += original_prefix(*necklace_, type, part.start + (p - pos)) - original_prefix(*necklace_, type, part.start);
        break;
    }
    return acc;
}

std::vector<Rational> Virtual::breakpoints() const {
    std::vector<Rational> out{0};
    Rational pos = 0;
    for (const auto& part : parts_) {
        mpz_class m = floor_of(part.start) + 1;
        for (; Rational(m) < part.end; ++m) out.push_back(pos + (Rational(m) - part.start));
        pos += part.end - part.start;
        out.push_back(pos);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Virtual Virtual::slice(const Rational& a, const Rational& b) const {
    std::vector<Segment> out;
    Rational pos = 0;
    for (const auto& part : parts_) {
        Rational len = part.end - part.start;
        Rational lo = std::max(a, pos), hi = std::min(b, Rational(pos + len));
        if (hi > lo) out.push_back({part.start + (lo - pos), part.start + (hi - pos)});
        pos += len;
    }
    return Virtual(*necklace_, std::move(out));
}

Virtual Virtual::join(const Virtual& tail) const {
    std::vector<Segment> out = parts_;
    out.insert(out.end(), tail.parts_.begin(), tail.parts_.end());
    return Virtual(*necklace_, std::move(out));
}

Virtual Virtual::repeat(int copies) const {
    std::vector<Segment> out;
    for (int i = 0; i < copies; ++i) out.insert(out.end(), parts_.begin(), parts_.end());
    return Virtual(*necklace_, std::move(out));
}

Rational window_root(const Virtual& v, int type, const Rational& width, const Rational& target, const Rational& lo,
                     const Rational& hi) {
    auto g = [&](const Rational& t) -> Rational { return v.prefix(type, t + width) - v.prefix(type, t) - target; };
    std::vector<Rational> ts{lo, hi};
    for (const auto& x : v.breakpoints()) {
        if (x > lo && x < hi) ts.push_back(x);
        Rational y = x - width;
        if (y > lo && y < hi) ts.push_back(y);
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    Rational prev_t = ts[0], prev_g = g(ts[0]);
    if (prev_g == 0) return prev_t;
    for (size_t i = 1; i < ts.size(); ++i) {
        Rational cur_g = g(ts[i]);
        if (cur_g == 0) return ts[i];
        if (sgn(cur_g) != sgn(prev_g)) {
            // g is affine between consecutive breakpoints.
            return prev_t - prev_g * (ts[i] - prev_t) / (cur_g - prev_g);
        }
        prev_t = ts[i];
        prev_g = cur_g;
    }
    throw Error("NotFound", "window content does not cross the target");
}

}  // namespace fairdiv::necklace::detail
