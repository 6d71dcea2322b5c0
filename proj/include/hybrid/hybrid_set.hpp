#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "hybrid/point.hpp"

namespace hybrid {

using Multiplicity = std::int64_t;

class Element;

/// A point of a function graph: (x, value). The value is an atom name or a
/// rendered scalar.
struct GraphPoint {
    std::shared_ptr<const Element> x;
    std::string value;
};

struct Token {
    std::string name;
    auto operator<=>(const Token&) const = default;
};

/// Carrier for members of a universe. Ordered structurally: points before
/// tokens before graph points, then by content.
class Element {
  public:
    using Storage = std::variant<Point, Token, GraphPoint>;

    Element(Point p) : value_(std::move(p)) {}
    Element(Token t) : value_(std::move(t)) {}
    Element(const Element& x, std::string value)
        : value_(GraphPoint{std::make_shared<const Element>(x), std::move(value)}) {}

    static Element token(std::string name) { return Element(Token{std::move(name)}); }
    static Element point(Point p) { return Element(std::move(p)); }

    const Storage& storage() const { return value_; }
    bool is_point() const { return std::holds_alternative<Point>(value_); }
    const Point& as_point() const { return std::get<Point>(value_); }

    std::strong_ordering operator<=>(const Element& other) const;
    bool operator==(const Element& other) const { return (*this <=> other) == 0; }

  private:
    Storage value_;
};

std::string to_string(const Element& e);

/// A finite-support map U -> Z. Zero multiplicities are never stored, so two
/// sets are equal exactly when their entry maps are equal.
class HybridSet {
  public:
    using Entries = std::map<Element, Multiplicity>;

    HybridSet() = default;
    explicit HybridSet(std::string universe) : universe_(std::move(universe)) {}
    HybridSet(std::initializer_list<std::pair<Element, Multiplicity>> entries, std::string universe = {});

    const std::string& universe() const { return universe_; }
    const Entries& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    /// H(x); zero outside the support.
    Multiplicity operator()(const Element& x) const;

    /// Adds `m` to the multiplicity of `x`, dropping the entry if it reaches 0.
    void add(const Element& x, Multiplicity m);

    bool operator==(const HybridSet& other) const = default;

  private:
    std::string universe_;
    Entries entries_;
};

HybridSet oplus(const HybridSet& a, const HybridSet& b);
HybridSet ominus(const HybridSet& a, const HybridSet& b);
HybridSet ominus(const HybridSet& a);
HybridSet otimes(const HybridSet& a, const HybridSet& b);
HybridSet scalar(Multiplicity n, const HybridSet& h);

std::set<Element> support(const HybridSet& h);
bool disjoint(const HybridSet& a, const HybridSet& b);
bool reducible(const HybridSet& h);

/// The classical set of members. Throws ReducibilityError naming the first
/// member whose multiplicity is not 1.
std::set<Element> reduce(const HybridSet& h);

inline HybridSet operator+(const HybridSet& a, const HybridSet& b) { return oplus(a, b); }
inline HybridSet operator-(const HybridSet& a, const HybridSet& b) { return ominus(a, b); }
inline HybridSet operator-(const HybridSet& a) { return ominus(a); }
inline HybridSet operator*(Multiplicity n, const HybridSet& h) { return scalar(n, h); }

/// `{a^2, (1/2)^-1}` in element order.
std::string to_string(const HybridSet& h);

/// Parses the rendering above. Entries may be unsorted and repeated; repeated
/// elements are merged and zeros dropped. A missing `^m` means multiplicity 1.
HybridSet parse_hybrid_set(std::string_view text, std::string universe = {});

} // namespace hybrid
