#pragma once

// Classical piecewise semantics over finite enumerated universes. Kept free of
// the hybrid machinery so it can serve as an independent reference.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hybrid::oracle {

template <class X, class V>
using Partial = std::function<std::optional<V>(const X&)>;

template <class X>
using Predicate = std::function<bool(const X&)>;

/// f^A: f on A, undefined elsewhere.
template <class X, class V>
Partial<X, V> restrict(Partial<X, V> f, Predicate<X> a) {
    return [f = std::move(f), a = std::move(a)](const X& x) -> std::optional<V> {
        if (!a(x))
            return std::nullopt;
        return f(x);
    };
}

template <class X, class V>
Partial<X, V> total(std::function<V(const X&)> f) {
    return [f = std::move(f)](const X& x) -> std::optional<V> { return f(x); };
}

/// Defined exactly where one side is.
template <class X, class V>
Partial<X, V> join(Partial<X, V> f, Partial<X, V> g) {
    return [f = std::move(f), g = std::move(g)](const X& x) -> std::optional<V> {
        auto a = f(x);
        auto b = g(x);
        if (a && !b)
            return a;
        if (b && !a)
            return b;
        return std::nullopt;
    };
}

template <class X, class V>
struct Piece {
    Predicate<X> contains;
    std::function<V(const X&)> f;
    std::string label;
};

/// Pieces must be pairwise disjoint and cover the universe.
template <class X, class V>
struct ClassicalPiecewise {
    std::vector<X> universe;
    std::vector<Piece<X, V>> pieces;

    /// Index of the unique piece containing x, or nullopt when x is in none.
    /// Throws std::logic_error when x lies in several.
    std::optional<std::size_t> chi(const X& x) const {
        std::optional<std::size_t> found;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (!pieces[i].contains(x))
                continue;
            if (found)
                throw std::logic_error("pieces " + pieces[*found].label + " and " + pieces[i].label + " overlap");
            found = i;
        }
        return found;
    }

    bool valid() const {
        try {
            return std::all_of(universe.begin(), universe.end(), [&](const X& x) { return chi(x).has_value(); });
        } catch (const std::logic_error&) {
            return false;
        }
    }

    bool in_universe(const X& x) const { return std::find(universe.begin(), universe.end(), x) != universe.end(); }
};

template <class X, class V>
std::optional<V> classical_eval(const ClassicalPiecewise<X, V>& f, const X& x) {
    if (!f.in_universe(x))
        return std::nullopt;
    auto i = f.chi(x);
    if (!i)
        return std::nullopt;
    return f.pieces[*i].f(x);
}

/// f_1^{P_1} ⊛ … ⊛ f_n^{P_n} as a partial function.
template <class X, class V>
Partial<X, V> as_join(const ClassicalPiecewise<X, V>& f) {
    Partial<X, V> acc = [](const X&) -> std::optional<V> { return std::nullopt; };
    for (const auto& p : f.pieces)
        acc = join<X, V>(acc, restrict<X, V>(total<X, V>(p.f), p.contains));
    return acc;
}

/// Every non-empty intersection of one piece from each operand, with the
/// operand values folded by `star`. The number of cases is the product of
/// the piece counts before emptiness filtering.
template <class X, class V>
ClassicalPiecewise<X, V> classical_star(const std::function<V(const V&, const V&)>& star,
                                        std::span<const ClassicalPiecewise<X, V>> fs) {
    if (fs.empty())
        throw std::invalid_argument("classical_star needs an operand");
    ClassicalPiecewise<X, V> acc = fs.front();
    for (std::size_t k = 1; k < fs.size(); ++k) {
        const auto& g = fs[k];
        if (g.universe != acc.universe)
            throw std::invalid_argument("operands have different universes");
        ClassicalPiecewise<X, V> next{acc.universe, {}};
        for (const auto& p : acc.pieces) {
            for (const auto& q : g.pieces) {
                Predicate<X> both = [a = p.contains, b = q.contains](const X& x) { return a(x) && b(x); };
                bool nonempty = std::any_of(acc.universe.begin(), acc.universe.end(), both);
                if (!nonempty)
                    continue;
                next.pieces.push_back({both, [s = star, f = p.f, h = q.f](const X& x) { return s(f(x), h(x)); },
                                       p.label + "&" + q.label});
            }
        }
        acc = std::move(next);
    }
    return acc;
}

template <class X, class V>
ClassicalPiecewise<X, V> classical_star(const std::function<V(const V&, const V&)>& star,
                                        const ClassicalPiecewise<X, V>& f, const ClassicalPiecewise<X, V>& g) {
    std::vector<ClassicalPiecewise<X, V>> fs{f, g};
    return classical_star<X, V>(star, fs);
}

} // namespace hybrid::oracle
