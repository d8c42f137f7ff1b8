#include "fairdiv/necklace/moment_curve.hpp"

#include "fairdiv/error.hpp"

namespace fairdiv::necklace {

Rational Hyperplane::operator()(const std::vector<Rational>& x) const {
    if (x.size() != coeffs.size()) throw Error("BadConfig", "hyperplane dimension mismatch");
    Rational v = offset;
    for (size_t i = 0; i < x.size(); ++i) v += coeffs[i] * x[i];
    return v;
}

namespace {

int orthant(bool p1, bool p2) {
    if (p1) return p2 ? 1 : 2;
    return p2 ? 4 : 3;
}

}  // namespace

Splitting moment_curve_cuts(const Necklace& necklace, int d, const Hyperplane& h1, const Hyperplane& h2) {
    if (d < 1) throw Error("BadConfig", "curve dimension must be positive");
    const long n = static_cast<long>(necklace.size());
    std::vector<std::pair<bool, bool>> signs;
    for (long m = 1; m <= n; ++m) {
        std::vector<Rational> x(static_cast<size_t>(d));
        Rational p = 1;
        for (auto& xi : x) xi = p *= m;
        const Rational a = h1(x), b = h2(x);
        if (a == 0 || b == 0) throw Error("BeadOnHyperplane", "bead " + std::to_string(m) + " lies on a hyperplane");
        signs.emplace_back(a > 0, b > 0);
    }

    Splitting s;
    if (signs.empty()) {
        s.owners = {1};
        return s;
    }
    s.owners.push_back(orthant(signs[0].first, signs[0].second));
    for (size_t i = 1; i < signs.size(); ++i) {
        auto [a0, b0] = signs[i - 1];
        auto [a1, b1] = signs[i];
        if (a0 == a1 && b0 == b1) continue;
        Rational at(static_cast<long>(i), n);
        at.canonicalize();
        if (a0 != a1 && b0 != b1) {
            s.cuts.push_back(at);
            s.owners.push_back(orthant(a1, b0));
        }
        s.cuts.push_back(at);
        s.owners.push_back(orthant(a1, b1));
    }
    return s;
}

}  // namespace fairdiv::necklace
