#include "urnlab/exact.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "urnlab/errors.hpp"

namespace urnlab {

namespace {

using boost::multiprecision::cpp_int;

cpp_int pow10(int e) {
    cpp_int r = 1;
    for (int i = 0; i < e; ++i) r *= 10;
    return r;
}

// [sign] digits [. digits] [(e|E) [sign] digits]
std::optional<Rational> parse_decimal(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::size_t i = 0;
    bool negative = false;
    if (s[i] == '+' || s[i] == '-') {
        negative = s[i] == '-';
        ++i;
    }
    cpp_int mantissa = 0;
    int frac_digits = 0;
    bool any_digit = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        mantissa = mantissa * 10 + (s[i] - '0');
        any_digit = true;
        ++i;
    }
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            mantissa = mantissa * 10 + (s[i] - '0');
            ++frac_digits;
            any_digit = true;
            ++i;
        }
    }
    if (!any_digit) return std::nullopt;
    int exponent = 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        auto rest = s.substr(i);
        if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
        auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), exponent);
        if (ec != std::errc() || ptr != rest.data() + rest.size()) return std::nullopt;
        if (exponent > 400 || exponent < -400) return std::nullopt;
        i = s.size();
    }
    if (i != s.size()) return std::nullopt;
    const int scale = exponent - frac_digits;
    Rational q = scale >= 0 ? Rational(mantissa * pow10(scale)) : Rational(mantissa, pow10(-scale));
    return negative ? Rational(-q) : q;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

std::optional<Rational> parse_exact(std::string_view text) {
    text = trim(text);
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return parse_decimal(text);
    auto num = parse_decimal(trim(text.substr(0, slash)));
    auto den = parse_decimal(trim(text.substr(slash + 1)));
    if (!num || !den || *den == 0) return std::nullopt;
    return *num / *den;
}

double parse_real(std::string_view text) {
    text = trim(text);
    if (auto q = parse_exact(text)) return to_double(*q);
    std::string s(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) throw ParseError("not a finite number: '" + s + "'");
    return v;
}

SparseMeasure exact_measure(std::vector<std::pair<Color, Rational>> entries) {
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<Color, Rational>> merged;
    for (auto& e : entries) {
        if (e.second < 0) throw NegativeEntry(0, e.first);
        if (!merged.empty() && merged.back().first == e.first) {
            merged.back().second += e.second;
        } else {
            merged.push_back(std::move(e));
        }
    }
    std::erase_if(merged, [](const auto& e) { return e.second == 0; });
    std::vector<SparseMeasure::Entry> approx;
    approx.reserve(merged.size());
    for (const auto& [c, q] : merged) approx.emplace_back(c, to_double(q));
    auto shadow = std::make_shared<ExactEntries>();
    shadow->entries = std::move(merged);
    return SparseMeasure::with_exact(std::move(approx), std::move(shadow));
}

}  // namespace urnlab
