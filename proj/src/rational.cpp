#include "fairdiv/rational.hpp"

#include "fairdiv/error.hpp"

#include <cctype>

namespace fairdiv {

Rational parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    size_t start = 0;
    while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
    s = s.substr(start);
    if (s.empty()) throw Error("ParseError", "empty rational");

    auto dot = s.find('.');
    if (dot != std::string::npos) {
        bool negative = s[0] == '-';
        std::string body = negative || s[0] == '+' ? s.substr(1) : s;
        dot = body.find('.');
        std::string digits = body.substr(0, dot) + body.substr(dot + 1);
        size_t scale = body.size() - dot - 1;
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw Error("ParseError", "bad decimal '" + s + "'");
        mpz_class num(digits, 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
        Rational r(num, den);
        r.canonicalize();
        return negative ? Rational(-r) : r;
    }
    try {
        Rational r(s, 10);
        if (r.get_den() == 0) throw Error("ParseError", "zero denominator in '" + s + "'");
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw Error("ParseError", "bad rational '" + s + "'");
    }
}

std::string to_string(const Rational& value) {
    Rational v = value;
    v.canonicalize();
    return v.get_str();
}

std::optional<RationalMatrix> inverse(RationalMatrix a) {
    const size_t n = a.size();
    RationalMatrix inv(n, RationalVector(n));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        const Rational p = a[col][col];
        for (size_t k = 0; k < n; ++k) {
            a[col][k] /= p;
            inv[col][k] /= p;
        }
        for (size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0) continue;
            const Rational m = a[row][col];
            for (size_t k = 0; k < n; ++k) {
                a[row][k] -= m * a[col][k];
                inv[row][k] -= m * inv[col][k];
            }
        }
    }
    return inv;
}

}  // namespace fairdiv
