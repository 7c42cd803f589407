#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rk/errors.hpp"
#include "rk/rational.hpp"
#include "rk/tableau.hpp"

namespace rk {

/// Canonical unlabeled rooted tree.
///
/// Children are kept sorted by (order, serialization), descending, so
/// structurally equal trees have identical serializations and compare equal.
/// The serialization grammar is nested parentheses: "()" is the single
/// vertex, "(()())" the bushy order-3 tree.
class RootedTree {
public:
    RootedTree() : order_(1), repr_("()") {}

    explicit RootedTree(std::vector<RootedTree> children) : children_(std::move(children)) {
        std::sort(children_.begin(), children_.end(), [](const RootedTree& x, const RootedTree& y) {
            if (x.order_ != y.order_) return x.order_ > y.order_;
            return x.repr_ > y.repr_;
        });
        order_ = 1;
        repr_ = "(";
        for (const RootedTree& child : children_) {
            order_ += child.order_;
            repr_ += child.repr_;
        }
        repr_ += ")";
    }

    int order() const { return order_; }
    const std::vector<RootedTree>& children() const { return children_; }
    const std::string& repr() const { return repr_; }

    friend bool operator==(const RootedTree& x, const RootedTree& y) { return x.repr_ == y.repr_; }
    friend bool operator!=(const RootedTree& x, const RootedTree& y) { return !(x == y); }
    /// Canonical total order (by order, then serialization).
    friend bool operator<(const RootedTree& x, const RootedTree& y) {
        if (x.order_ != y.order_) return x.order_ < y.order_;
        return x.repr_ < y.repr_;
    }

    /// Parses the nested-parentheses grammar.
    static RootedTree parse(std::string_view text) {
        std::size_t pos = 0;
        RootedTree tree = parse_at(text, pos);
        if (pos != text.size())
            throw ValidationError("tree literal has trailing characters at position " +
                                  std::to_string(pos));
        return tree;
    }

private:
    static RootedTree parse_at(std::string_view text, std::size_t& pos) {
        if (pos >= text.size() || text[pos] != '(')
            throw ValidationError("tree literal: expected '(' at position " + std::to_string(pos));
        ++pos;
        std::vector<RootedTree> children;
        while (pos < text.size() && text[pos] == '(') children.push_back(parse_at(text, pos));
        if (pos >= text.size() || text[pos] != ')')
            throw ValidationError("tree literal: expected ')' at position " + std::to_string(pos));
        ++pos;
        return children.empty() ? RootedTree() : RootedTree(std::move(children));
    }

    std::vector<RootedTree> children_;
    int order_ = 1;
    std::string repr_;
};

/// All rooted trees of order 1..max_order, grouped by order, each exactly
/// once in canonical form. Deterministic: trees of order n are built from
/// non-ascending canonical sequences of smaller trees.
inline std::vector<std::vector<RootedTree>> enumerate_trees(int max_order) {
    if (max_order < 1 || max_order > 10)
        throw ValidationError("enumerate_trees: max_order must be in [1, 10]");
    std::vector<std::vector<RootedTree>> by_order(max_order);
    by_order[0] = {RootedTree()};
    for (int n = 2; n <= max_order; ++n) {
        // Pool of candidate children, sorted by the same descending key the
        // canonical form uses, so picked index sequences are canonical.
        std::vector<RootedTree> pool;
        for (int k = n - 1; k >= 1; --k) {
            std::vector<RootedTree> group = by_order[k - 1];
            std::sort(group.begin(), group.end(),
                      [](const RootedTree& x, const RootedTree& y) { return y < x; });
            pool.insert(pool.end(), group.begin(), group.end());
        }
        std::vector<RootedTree> out;
        std::vector<RootedTree> acc;
        auto pick = [&](auto&& self, std::size_t start, int remaining) -> void {
            if (remaining == 0) {
                out.emplace_back(acc);
                return;
            }
            for (std::size_t i = start; i < pool.size(); ++i) {
                if (pool[i].order() > remaining) continue;
                acc.push_back(pool[i]);
                self(self, i, remaining - pool[i].order());
                acc.pop_back();
            }
        };
        pick(pick, 0, n - 1);
        by_order[n - 1] = std::move(out);
    }
    return by_order;
}

/// t! = |t| * prod over children of (child)!; the single vertex has t! = 1.
inline BigInt tree_factorial(const RootedTree& t) {
    BigInt result = t.order();
    for (const RootedTree& child : t.children()) result *= tree_factorial(child);
    return result;
}

/// sigma(t), the order of the symmetry group: product over maximal runs of
/// identical children of multiplicity! * sigma(child)^multiplicity.
inline BigInt symmetry_order(const RootedTree& t) {
    BigInt result = 1;
    const auto& ch = t.children();
    std::size_t i = 0;
    while (i < ch.size()) {
        std::size_t j = i;
        while (j < ch.size() && ch[j] == ch[i]) ++j;
        const std::size_t mult = j - i;
        const BigInt sig = symmetry_order(ch[i]);
        for (std::size_t k = 1; k <= mult; ++k) result *= BigInt(k);
        for (std::size_t k = 0; k < mult; ++k) result *= sig;
        i = j;
    }
    return result;
}

/// alpha(t), the number of monotonic labelings, through the exact identity
/// alpha(t) * t! * sigma(t) = |t|!.
inline BigInt monotonic_labelings(const RootedTree& t) {
    BigInt num = 1;
    for (int k = 2; k <= t.order(); ++k) num *= k;
    const BigInt den = tree_factorial(t) * symmetry_order(t);
    BigInt quotient;
    BigInt remainder;
    boost::multiprecision::divide_qr(num, den, quotient, remainder);
    if (remainder != 0)
        throw NumericalError("monotonic_labelings: |t|! not divisible by t! sigma(t) for " +
                             t.repr());
    return quotient;
}

/// Derivative weights Phi(t): Phi(single vertex) = 1, and otherwise the
/// element-wise product over children of A * Phi(child).
inline Vec derivative_weights(const RootedTree& t, const ButcherTableau& tab) {
    Vec phi = ones(tab.b.size());
    for (const RootedTree& child : t.children())
        phi = elementwise(phi, matvec(tab.A, derivative_weights(child, tab)));
    return phi;
}

/// Elementary weight b * Phi(t).
inline double elementary_weight(const RootedTree& t, const ButcherTableau& tab) {
    return dot(tab.b, derivative_weights(t, tab));
}

}  // namespace rk
