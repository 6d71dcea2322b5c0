#include "hybrid/hybrid_set.hpp"

#include <cctype>
#include <stdexcept>

#include "hybrid/checked.hpp"
#include "hybrid/error.hpp"

namespace hybrid {

namespace {

std::strong_ordering compare_points(const Point& a, const Point& b) {
    if (a.size() != b.size())
        return a.size() <=> b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i])
            return std::strong_ordering::less;
        if (b[i] < a[i])
            return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

// An untagged operand adopts the other's universe.
std::string common_universe(const HybridSet& a, const HybridSet& b) {
    if (a.universe().empty())
        return b.universe();
    if (b.universe().empty() || a.universe() == b.universe())
        return a.universe();
    throw DomainError("universe mismatch: '" + a.universe() + "' vs '" + b.universe() + "'");
}

} // namespace

std::strong_ordering Element::operator<=>(const Element& other) const {
    if (value_.index() != other.value_.index())
        return value_.index() <=> other.value_.index();
    switch (value_.index()) {
    case 0:
        return compare_points(std::get<Point>(value_), std::get<Point>(other.value_));
    case 1:
        return std::get<Token>(value_) <=> std::get<Token>(other.value_);
    default: {
        const auto& a = std::get<GraphPoint>(value_);
        const auto& b = std::get<GraphPoint>(other.value_);
        if (auto c = *a.x <=> *b.x; c != 0)
            return c;
        return a.value <=> b.value;
    }
    }
}

std::string to_string(const Element& e) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Point>)
                return to_string(v);
            else if constexpr (std::is_same_v<T, Token>)
                return v.name;
            else
                return "<" + to_string(*v.x) + "|" + v.value + ">";
        },
        e.storage());
}

HybridSet::HybridSet(std::initializer_list<std::pair<Element, Multiplicity>> entries, std::string universe)
    : universe_(std::move(universe)) {
    for (const auto& [x, m] : entries)
        add(x, m);
}

Multiplicity HybridSet::operator()(const Element& x) const {
    auto it = entries_.find(x);
    return it == entries_.end() ? 0 : it->second;
}

void HybridSet::add(const Element& x, Multiplicity m) {
    if (m == 0)
        return;
    auto [it, inserted] = entries_.try_emplace(x, m);
    if (inserted)
        return;
    it->second = checked_add(it->second, m);
    if (it->second == 0)
        entries_.erase(it);
}

HybridSet oplus(const HybridSet& a, const HybridSet& b) {
    HybridSet r(common_universe(a, b));
    for (const auto& [x, m] : a.entries())
        r.add(x, m);
    for (const auto& [x, m] : b.entries())
        r.add(x, m);
    return r;
}

HybridSet ominus(const HybridSet& a) { return scalar(-1, a); }

HybridSet ominus(const HybridSet& a, const HybridSet& b) {
    HybridSet r(common_universe(a, b));
    for (const auto& [x, m] : a.entries())
        r.add(x, m);
    for (const auto& [x, m] : b.entries())
        r.add(x, checked_neg(m));
    return r;
}

HybridSet otimes(const HybridSet& a, const HybridSet& b) {
    HybridSet r(common_universe(a, b));
    for (const auto& [x, m] : a.entries())
        if (auto n = b(x); n != 0)
            r.add(x, checked_mul(m, n));
    return r;
}

HybridSet scalar(Multiplicity n, const HybridSet& h) {
    HybridSet r(h.universe());
    if (n == 0)
        return r;
    for (const auto& [x, m] : h.entries())
        r.add(x, checked_mul(n, m));
    return r;
}

std::set<Element> support(const HybridSet& h) {
    std::set<Element> s;
    for (const auto& entry : h.entries())
        s.insert(entry.first);
    return s;
}

bool disjoint(const HybridSet& a, const HybridSet& b) {
    for (const auto& entry : a.entries())
        if (b(entry.first) != 0)
            return false;
    return true;
}

bool reducible(const HybridSet& h) {
    for (const auto& entry : h.entries())
        if (entry.second != 1)
            return false;
    return true;
}

std::set<Element> reduce(const HybridSet& h) {
    for (const auto& [x, m] : h.entries())
        if (m != 1)
            throw ReducibilityError("not reducible: " + to_string(x) + " has multiplicity " + std::to_string(m));
    return support(h);
}

std::string to_string(const HybridSet& h) {
    std::string out = "{";
    bool first = true;
    for (const auto& [x, m] : h.entries()) {
        if (!first)
            out += ", ";
        first = false;
        out += to_string(x) + "^" + std::to_string(m);
    }
    return out + "}";
}

namespace {

class SetParser {
  public:
    explicit SetParser(std::string_view text) : s_(text) {}

    HybridSet parse(std::string universe) {
        HybridSet h(std::move(universe));
        skip();
        expect('{');
        skip();
        if (peek() == '}') {
            ++pos_;
            finish();
            return h;
        }
        while (true) {
            Element x = element();
            skip();
            Multiplicity m = 1;
            if (peek() == '^') {
                ++pos_;
                skip();
                m = integer();
            }
            h.add(x, m);
            skip();
            if (peek() == ',') {
                ++pos_;
                skip();
                continue;
            }
            expect('}');
            finish();
            return h;
        }
    }

  private:
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    void expect(char c) {
        if (peek() != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    void finish() {
        skip();
        if (pos_ != s_.size())
            fail("trailing input");
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(1, pos_ + 1, "hybrid set: " + what);
    }

    Multiplicity integer() {
        std::size_t start = pos_;
        if (peek() == '-' || peek() == '+')
            ++pos_;
        while (std::isdigit(static_cast<unsigned char>(peek())))
            ++pos_;
        try {
            return std::stoll(std::string(s_.substr(start, pos_ - start)));
        } catch (const std::out_of_range&) {
            throw ArithmeticError("multiplicity out of range");
        } catch (const std::invalid_argument&) {
            fail("expected an integer");
        }
    }

    std::string_view scalar_text() {
        std::size_t start = pos_;
        if (peek() == '-' || peek() == '+')
            ++pos_;
        while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '/' || peek() == '.')
            ++pos_;
        return s_.substr(start, pos_ - start);
    }

    Element element() {
        char c = peek();
        if (c == '<') {
            ++pos_;
            skip();
            Element x = element();
            skip();
            expect('|');
            std::size_t start = pos_;
            while (pos_ < s_.size() && s_[pos_] != '>')
                ++pos_;
            std::string value(s_.substr(start, pos_ - start));
            expect('>');
            while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back())))
                value.pop_back();
            while (!value.empty() && std::isspace(static_cast<unsigned char>(value.front())))
                value.erase(value.begin());
            return Element(x, value);
        }
        if (c == '(') {
            std::size_t close = s_.find(')', pos_);
            if (close == std::string_view::npos)
                fail("unterminated point");
            auto text = s_.substr(pos_, close + 1 - pos_);
            pos_ = close + 1;
            return Element(parse_point(text));
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.')
            return Element(Point{parse_rational(scalar_text())});
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
                ++pos_;
            return Element::token(std::string(s_.substr(start, pos_ - start)));
        }
        fail("expected an element");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace

HybridSet parse_hybrid_set(std::string_view text, std::string universe) {
    return SetParser(text).parse(std::move(universe));
}

} // namespace hybrid
