#pragma once

#include "hybrid/trajectory.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace hybrid {

/// Approximation order on the partial space: durations grow, the domain of
/// definedness grows with pointwise agreement, and a trajectory that already
/// ends in a defined point (a finished computation) cannot grow in duration.
template <class V>
bool leq(const trajectory<V>& a, const trajectory<V>& b) {
    if (!(a.dur <= b.dur)) return false;
    if (a.dur.is_finite() && a.ev.eval(a.dur.value()).has_value() && !(a.dur == b.dur))
        return false;

    std::vector<rat> pts = a.ev.breakpoints();
    pts.insert(pts.end(), b.ev.breakpoints().begin(), b.ev.breakpoints().end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    for (const rat& t : pts) {
        auto va = a.ev.eval(t);
        if (va && !(va == b.ev.eval(t))) return false;
        auto ga = a.ev.just_after(t);
        if (ga && !(ga == b.ev.just_after(t))) return false;
    }
    return true;
}

enum class order_result { less, equal, greater, incomparable };

template <class V>
order_result order_compare(const trajectory<V>& a, const trajectory<V>& b) {
    bool ab = leq(a, b);
    bool ba = leq(b, a);
    if (ab && ba) return order_result::equal;
    if (ab) return order_result::less;
    if (ba) return order_result::greater;
    return order_result::incomparable;
}

struct chain_violation : std::runtime_error {
    explicit chain_violation(std::size_t index)
        : std::runtime_error("chain violates the approximation order at element " +
                             std::to_string(index)),
          at(index) {}
    std::size_t at;
};

/// Join of an ascending chain served by a generator. Returns the join when
/// the chain becomes constant (or ends) within `budget` pulls; a
/// non-stabilizing chain yields the last approximant, never a guessed limit.
template <class V>
struct join_result {
    bool stabilized;
    trajectory<V> value; // the join, or the last approximant when not stabilized
};

template <class V>
join_result<V> join_chain(const std::function<std::optional<trajectory<V>>()>& next,
                          std::size_t budget) {
    std::optional<trajectory<V>> prev;
    for (std::size_t i = 0; i < budget; ++i) {
        std::optional<trajectory<V>> cur = next();
        if (!cur) {
            if (!prev) throw std::invalid_argument("join_chain: empty chain");
            return {true, *prev}; // finite chain: join is its last element
        }
        if (prev) {
            if (!leq(*prev, *cur)) throw chain_violation(i);
            if (prev->same_shape(*cur)) return {true, *cur};
        }
        prev = std::move(cur);
    }
    if (!prev) throw std::invalid_argument("join_chain: empty chain");
    return {false, *prev};
}

} // namespace hybrid
