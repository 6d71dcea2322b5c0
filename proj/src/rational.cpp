#include "hybrid/rational.hpp"

#include <cctype>
#include <stdexcept>

#include "hybrid/error.hpp"
#include "hybrid/point.hpp"

namespace hybrid {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

} // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = trim(text);
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    Rational value;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw ParseError(1, 1, "malformed rational '" + std::string(text) + "'");
        Integer d{std::string(den)};
        if (d == 0)
            throw ArithmeticError("zero denominator in '" + std::string(text) + "'");
        value = Rational(Integer(std::string(num)), d);
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        auto whole = s.substr(0, dot);
        auto frac = s.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac))
            throw ParseError(1, 1, "malformed decimal '" + std::string(text) + "'");
        Integer scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i)
            scale *= 10;
        Integer w = whole.empty() ? Integer(0) : Integer(std::string(whole));
        value = Rational(w * scale + Integer(std::string(frac)), scale);
    } else {
        if (!all_digits(s))
            throw ParseError(1, 1, "malformed rational '" + std::string(text) + "'");
        value = Rational(Integer(std::string(s)));
    }
    return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& r) {
    if (denominator(r) == 1)
        return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

bool is_integer(const Rational& r) { return denominator(r) == 1; }

std::string to_string(const Point& p) {
    if (p.size() == 1)
        return to_string(p.front());
    std::string out = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i)
            out += ", ";
        out += to_string(p[i]);
    }
    return out + ")";
}

Point parse_point(std::string_view text) {
    std::string_view s = trim(text);
    if (!s.empty() && s.front() == '(') {
        if (s.back() != ')')
            throw ParseError(1, 1, "unterminated point '" + std::string(text) + "'");
        s = s.substr(1, s.size() - 2);
    }
    Point p;
    while (true) {
        auto comma = s.find(',');
        p.push_back(parse_rational(s.substr(0, comma)));
        if (comma == std::string_view::npos)
            break;
        s.remove_prefix(comma + 1);
    }
    return p;
}

} // namespace hybrid
