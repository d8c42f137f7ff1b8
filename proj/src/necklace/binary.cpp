#include "fairdiv/necklace/binary.hpp"

#include "fairdiv/error.hpp"
#include "fairdiv/necklace/adjust.hpp"
#include "virtual.hpp"

#include <algorithm>

namespace fairdiv::necklace {

using detail::Segment;
using detail::Virtual;

namespace {

void check_two_color(const Necklace& necklace, int k) {
    if (k < 1) throw Error("NotDivisible", "need at least one thief");
    if (necklace.q > 2) throw Error("NotTwoColor", "necklace has " + std::to_string(necklace.q) + " bead types");
    for (int c : necklace.counts())
        if (c % k != 0) throw Error("NotDivisible", "type counts must be divisible by " + std::to_string(k));
}

struct Window {
    Rational start;
    int thieves;  // how many thieves the window feeds
};

// Balanced window for b of the kk thieves sharing `v`; unit = length per thief.
Window balanced_window(const Virtual& v, int kk, int b, const Rational& unit) {
    const Rational total = v.prefix(0, v.length());
    const Rational width = unit * b;
    Rational target = total * b / kk;
    const Virtual copies = v.repeat(b);
    auto g = [&](const Rational& t) -> Rational { return copies.prefix(0, t + width) - copies.prefix(0, t) - target; };

    // kk consecutive windows of width b tile the b copies; their excesses sum to zero.
    Rational start = -1;
    Rational prev = g(0);
    if (prev == 0) start = 0;
    for (int i = 1; i < kk && start < 0; ++i) {
        Rational t = width * i;
        Rational cur = g(t);
        if (cur == 0) start = t;
        else if (sgn(cur) != sgn(prev)) start = detail::window_root(copies, 0, width, target, width * (i - 1), t);
        prev = cur;
    }
    if (start < 0) throw Error("NotFound", "balanced window search failed");

    const Rational len = v.length();
    mpz_class copy;
    Rational q = start / len;
    mpz_fdiv_q(copy.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    Rational local = start - len * Rational(copy);
    if (local + width <= len) return {local, b};
    // Straddles two copies: the complement inside one copy is balanced.
    return {local + width - len, kk - b};
}

struct Piece {
    Rational start, end;
    int owner;  // local thief id
};

struct Solution {
    std::vector<Piece> pieces;
    std::vector<std::string> strings;  // per local thief
};

std::string xor_bits(const std::string& a, const std::string& b) {
    std::string r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] = a[i] == b[i] ? '0' : '1';
    return r;
}

Solution solve(const Virtual& v, int kk, const Rational& unit) {
    if (kk == 1) return {{{0, v.length(), 0}}, {""}};

    const int half = kk / 2;
    const Window w = balanced_window(v, kk, half, unit);
    const int nt = w.thieves, nu = kk - w.thieves;
    const Rational b = w.start, tlen = unit * nt;

    const Virtual tv = v.slice(b, b + tlen);
    const Virtual uv = v.slice(0, b).join(v.slice(b + tlen, v.length()));
    Solution ts = solve(tv, nt, unit);
    Solution us = solve(uv, nu, unit);

    // Compose: U pieces before b, the T block, U pieces after b (shifted by tlen).
    std::vector<Piece> left, right;
    std::optional<Piece> split;
    for (const auto& p : us.pieces) {
        if (p.end <= b) left.push_back(p);
        else if (p.start < b) split = p;
        else right.push_back({p.start + tlen, p.end + tlen, p.owner});
    }
    std::vector<Piece> out = left;
    std::vector<Piece> tblock;
    for (const auto& p : ts.pieces) tblock.push_back({p.start + b, p.end + b, p.owner});
    const int u_first = us.pieces.front().owner + nt;
    const int u_last = us.pieces.back().owner + nt;
    for (auto& p : right) p.owner += nt;
    for (auto& p : out) p.owner += nt;
    if (split) {
        out.push_back({split->start, b, split->owner + nt});
        out.insert(out.end(), tblock.begin(), tblock.end());
        out.push_back({b + tlen, split->end + tlen, split->owner + nt});
    } else if (left.empty()) {
        // T opens the necklace: an empty U piece in front keeps first and last owners equal.
        out.push_back({b, b, u_last});
        out.insert(out.end(), tblock.begin(), tblock.end());
    } else {
        // The join sits on a U cut; an empty piece after T leaves a single T-U contact.
        out.insert(out.end(), tblock.begin(), tblock.end());
        out.push_back({b + tlen, b + tlen, right.empty() ? u_first : right.front().owner});
    }
    out.insert(out.end(), right.begin(), right.end());

    // The unique adjacent (t, u) pair.
    int tx = 0, uy = nt;
    int contacts = 0;
    for (size_t i = 1; i < out.size(); ++i) {
        const Piece &p = out[i - 1], &c = out[i];
        if (p.end <= p.start || c.end <= c.start) continue;
        bool pt = p.owner < nt, ct = c.owner < nt;
        if (pt == ct) continue;
        int t = pt ? p.owner : c.owner, u = pt ? c.owner : p.owner;
        if (contacts > 0 && (t != tx || u != uy)) throw Error("NotFound", "composition produced two T-U contacts");
        tx = t;
        uy = u;
        ++contacts;
    }

    const size_t width = static_cast<size_t>(hypercube_dim(kk) - 1);
    auto pad = [&](std::string s) {
        s.resize(width, '0');
        return s;
    };
    Solution sol;
    sol.pieces = std::move(out);
    for (const auto& s : ts.strings) sol.strings.push_back("0" + pad(s));
    const std::string shift = xor_bits(pad(ts.strings[static_cast<size_t>(tx)]), pad(us.strings[static_cast<size_t>(uy - nt)]));
    for (const auto& s : us.strings) sol.strings.push_back("1" + xor_bits(pad(s), shift));
    return sol;
}

}  // namespace

BalancedWindow find_balanced_subnecklace(const Necklace& necklace, int k, int b) {
    check_two_color(necklace, k);
    if (b < 1 || b >= k) throw Error("BadConfig", "window length must be in 1..k-1");
    const Rational n(static_cast<long>(necklace.size()));
    Virtual v(necklace, {Segment{0, n}});
    Rational unit = n / k;
    Window w = balanced_window(v, k, b, unit);
    BalancedWindow out{w.start / unit, (w.start + unit * w.thieves) / unit, w.thieves};
    out.start.canonicalize();
    out.end.canonicalize();
    return out;
}

Splitting solve_binary_two_color(const Necklace& necklace, int k) {
    check_two_color(necklace, k);
    const Rational n(static_cast<long>(necklace.size()));
    Splitting s;
    if (k == 1 || necklace.size() == 0) {
        s.owners = {1};
        s.strings = {std::string(static_cast<size_t>(hypercube_dim(k)), '0')};
        if (k > 1) throw Error("NotDivisible", "empty necklace");
        return s;
    }
    Solution sol = solve(Virtual(necklace, {Segment{0, n}}), k, n / k);
    for (size_t i = 0; i < sol.pieces.size(); ++i) {
        if (i > 0) {
            Rational c = sol.pieces[i].start / n;
            c.canonicalize();
            s.cuts.push_back(c);
        }
        s.owners.push_back(sol.pieces[i].owner + 1);
    }
    s.strings = sol.strings;
    return adjust_cuts(necklace, k, s);
}

}  // namespace fairdiv::necklace
