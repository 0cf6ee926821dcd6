#include "urnlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "urnlab/errors.hpp"
#include "urnlab/exact.hpp"

namespace urnlab {

namespace {

void normalize_entries(std::vector<SparseMeasure::Entry>& entries) {
    for (const auto& [c, w] : entries) {
        if (w < 0.0 || std::isnan(w)) throw NegativeEntry(0, c);
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<SparseMeasure::Entry> merged;
    merged.reserve(entries.size());
    for (const auto& e : entries) {
        if (!merged.empty() && merged.back().first == e.first) {
            merged.back().second += e.second;
        } else {
            merged.push_back(e);
        }
    }
    std::erase_if(merged, [](const auto& e) { return e.second == 0.0; });
    entries = std::move(merged);
}

double sum_of(const std::vector<SparseMeasure::Entry>& entries) {
    double s = 0.0;
    for (const auto& e : entries) s += e.second;
    return s;
}

}  // namespace

SparseMeasure SparseMeasure::from_entries(std::vector<Entry> entries) {
    normalize_entries(entries);
    SparseMeasure m;
    m.total_ = sum_of(entries);
    m.entries_ = std::move(entries);
    return m;
}

SparseMeasure SparseMeasure::from_dense(std::span<const double> weights) {
    std::vector<Entry> entries;
    for (std::size_t c = 0; c < weights.size(); ++c) entries.emplace_back(c, weights[c]);
    return from_entries(std::move(entries));
}

SparseMeasure SparseMeasure::point(Color c, double mass) {
    return from_entries({{c, mass}});
}

SparseMeasure SparseMeasure::with_exact(std::vector<Entry> entries, std::shared_ptr<const ExactEntries> shadow) {
    auto m = from_entries(std::move(entries));
    m.exact_ = std::move(shadow);
    return m;
}

SparseMeasure SparseMeasure::parse(std::string_view text) {
    std::vector<std::pair<Color, std::string>> raw;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        auto item = text.substr(pos, comma - pos);
        pos = comma + 1;
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (item.empty()) continue;
        auto colon = item.find(':');
        if (colon == std::string_view::npos) throw ParseError("measure item '" + std::string(item) + "' lacks ':'");
        auto color_text = std::string(item.substr(0, colon));
        auto weight_text = std::string(item.substr(colon + 1));
        std::size_t used = 0;
        unsigned long long c = 0;
        try {
            c = std::stoull(color_text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != color_text.size() || color_text.front() == '-') {
            throw ParseError("bad color '" + color_text + "'");
        }
        raw.emplace_back(c, weight_text);
    }

    bool all_exact = true;
    std::vector<std::pair<Color, Rational>> exact;
    std::vector<Entry> entries;
    for (const auto& [c, w] : raw) {
        entries.emplace_back(c, parse_real(w));
        if (auto q = parse_exact(w)) {
            exact.emplace_back(c, *q);
        } else {
            all_exact = false;
        }
    }
    if (all_exact) return exact_measure(std::move(exact));
    return from_entries(std::move(entries));
}

double SparseMeasure::at(Color c) const noexcept {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), c,
                               [](const Entry& e, Color key) { return e.first < key; });
    return (it != entries_.end() && it->first == c) ? it->second : 0.0;
}

SparseMeasure SparseMeasure::scaled(double factor) const {
    SparseMeasure m;
    m.entries_ = entries_;
    for (auto& e : m.entries_) e.second *= factor;
    std::erase_if(m.entries_, [](const Entry& e) { return e.second == 0.0; });
    m.total_ = sum_of(m.entries_);
    return m;
}

SparseMeasure SparseMeasure::normalized() const {
    if (total_ <= 0.0) throw ZeroMass();
    return scaled(1.0 / total_);
}

void SparseMeasure::add(const SparseMeasure& other, double factor) {
    exact_.reset();
    if (other.entries_.empty() || factor == 0.0) return;
    // Fast path: every color of `other` already present.
    bool all_present = true;
    auto it = entries_.begin();
    for (const auto& [c, w] : other.entries_) {
        it = std::lower_bound(it, entries_.end(), c, [](const Entry& e, Color key) { return e.first < key; });
        if (it == entries_.end() || it->first != c) {
            all_present = false;
            break;
        }
        ++it;
    }
    if (all_present) {
        it = entries_.begin();
        for (const auto& [c, w] : other.entries_) {
            it = std::lower_bound(it, entries_.end(), c, [](const Entry& e, Color key) { return e.first < key; });
            it->second += factor * w;
            ++it;
        }
    } else {
        std::vector<Entry> merged;
        merged.reserve(entries_.size() + other.entries_.size());
        auto a = entries_.begin();
        auto b = other.entries_.begin();
        while (a != entries_.end() || b != other.entries_.end()) {
            if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
                merged.push_back(*a++);
            } else if (a == entries_.end() || b->first < a->first) {
                merged.emplace_back(b->first, factor * b->second);
                ++b;
            } else {
                merged.emplace_back(a->first, a->second + factor * b->second);
                ++a;
                ++b;
            }
        }
        entries_ = std::move(merged);
    }
    if (factor < 0.0) std::erase_if(entries_, [](const Entry& e) { return e.second <= 0.0; });
    total_ += factor * other.total_;
}

Color SparseMeasure::sample(double u) const {
    const double target = u * total_;
    double acc = 0.0;
    for (const auto& [c, w] : entries_) {
        acc += w;
        if (target < acc) return c;
    }
    // Rounding can leave `target` just past the accumulated sum.
    return entries_.back().first;
}

double SparseMeasure::prune(double budget) {
    if (budget <= 0.0 || entries_.empty()) return 0.0;
    std::vector<std::size_t> order(entries_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return entries_[a].second < entries_[b].second; });
    double dropped = 0.0;
    std::vector<bool> drop(entries_.size(), false);
    for (auto i : order) {
        if (dropped + entries_[i].second > budget) break;
        dropped += entries_[i].second;
        drop[i] = true;
    }
    if (dropped == 0.0) return 0.0;
    std::vector<Entry> kept;
    kept.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (!drop[i]) kept.push_back(entries_[i]);
    }
    entries_ = std::move(kept);
    total_ = sum_of(entries_);
    exact_.reset();
    return dropped;
}

std::string SparseMeasure::to_string() const {
    std::ostringstream out;
    out.precision(17);
    out << '{';
    bool first = true;
    for (const auto& [c, w] : entries_) {
        if (!first) out << ", ";
        first = false;
        out << c << ':' << w;
    }
    out << '}';
    return out.str();
}

double l1_distance(const SparseMeasure& a, const SparseMeasure& b) {
    double d = 0.0;
    auto x = a.begin();
    auto y = b.begin();
    while (x != a.end() || y != b.end()) {
        if (y == b.end() || (x != a.end() && x->first < y->first)) {
            d += x->second;
            ++x;
        } else if (x == a.end() || y->first < x->first) {
            d += y->second;
            ++y;
        } else {
            d += std::abs(x->second - y->second);
            ++x;
            ++y;
        }
    }
    return d;
}

double sup_distance(const SparseMeasure& a, const SparseMeasure& b) {
    double d = 0.0;
    auto x = a.begin();
    auto y = b.begin();
    while (x != a.end() || y != b.end()) {
        if (y == b.end() || (x != a.end() && x->first < y->first)) {
            d = std::max(d, x->second);
            ++x;
        } else if (x == a.end() || y->first < x->first) {
            d = std::max(d, y->second);
            ++y;
        } else {
            d = std::max(d, std::abs(x->second - y->second));
            ++x;
            ++y;
        }
    }
    return d;
}

}  // namespace urnlab
