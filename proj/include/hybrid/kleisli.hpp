#pragma once

#include "hybrid/retract.hpp"
#include "hybrid/trajectory.hpp"

#include <cassert>
#include <functional>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace hybrid {

/// Binary sum with explicit tags; nests for iterated constructions.
template <class L, class R>
class either {
public:
    static either left(L v) { return either(std::variant<L, R>(std::in_place_index<0>, std::move(v))); }
    static either right(R v) { return either(std::variant<L, R>(std::in_place_index<1>, std::move(v))); }

    bool is_left() const { return v_.index() == 0; }
    bool is_right() const { return v_.index() == 1; }
    const L& left_value() const { return std::get<0>(v_); }
    const R& right_value() const { return std::get<1>(v_); }

    friend bool operator==(const either& a, const either& b) { return a.v_ == b.v_; }

private:
    explicit either(std::variant<L, R> v) : v_(std::move(v)) {}
    std::variant<L, R> v_;
};

template <class L, class R>
std::string value_str(const either<L, R>& v) {
    return v.is_left() ? "L(" + value_str(v.left_value()) + ")"
                       : "R(" + value_str(v.right_value()) + ")";
}

/// Unit: the zero-duration constant trajectory on x.
template <class V>
trajectory<V> unit(space sp, V x) {
    return make_traj(qtime(0), step_evolution<V>::constant_of(std::move(x)), sp);
}

namespace detail {

/// Splices a mapped prefix with a shifted continuation: the result equals
/// g0(e(t)) on [0,d] and cont(t-d) on (d,inf).
template <class X, class Y, class G0>
step_evolution<Y> splice_at(const step_evolution<X>& e, const rat& d, G0&& g0,
                            const step_evolution<Y>& cont) {
    std::vector<rat> bp;
    std::vector<maybe<Y>> at, after;
    const auto& ebp = e.breakpoints();
    for (std::size_t i = 0; i < ebp.size() && ebp[i] < d; ++i) {
        bp.push_back(ebp[i]);
        at.push_back(g0(e.at_breakpoint(i)));
        after.push_back(g0(e.after_breakpoint(i)));
    }
    bp.push_back(d);
    at.push_back(g0(e.eval(d)));
    after.push_back(cont.just_after(rat(0)));
    const auto& cbp = cont.breakpoints();
    for (std::size_t j = 1; j < cbp.size(); ++j) {
        bp.push_back(d + cbp[j]);
        at.push_back(cont.at_breakpoint(j));
        after.push_back(cont.after_breakpoint(j));
    }
    return step_evolution<Y>::from_raw(std::move(bp), std::move(at), std::move(after));
}

/// Shared Kleisli-extension core over the maybe-extended view: `khat` maps a
/// possibly-undefined value to its continuation trajectory.
template <class X, class KHat>
auto bind_core(KHat&& khat, const trajectory<X>& m, space out) {
    using TY = std::decay_t<decltype(khat(std::declval<const maybe<X>&>()))>;
    using Y = std::decay_t<decltype(*std::declval<TY>().ev.eval(rat(0)))>;
    auto g0 = [&](const maybe<X>& v) -> maybe<Y> { return khat(v).ev.eval(rat(0)); };
    if (m.dur.is_infinite())
        return make_traj(time_q::infinity(), m.ev.map_partial(g0), out);
    const rat& d = m.dur.value();
    trajectory<Y> c = khat(m.ev.eval(d));
    auto ev = splice_at(m.ev, d, g0, c.ev);
    return make_traj(m.dur + c.dur, std::move(ev), out);
}

} // namespace detail

/// Kleisli extension for the total space.
template <class X, class F>
auto bind_h0(F&& f, const trajectory<X>& m) {
    assert(m.sp == space::h0);
    auto khat = [&](const maybe<X>& v) {
        assert(v.has_value());
        return f(*v);
    };
    return detail::bind_core<X>(khat, m, space::h0);
}

/// Kleisli extension for the partial space: undefined values continue as the
/// bottom unit, so undefinedness propagates and a trajectory ending
/// undefined keeps its duration.
template <class X, class F>
auto bind_h0m(F&& f, const trajectory<X>& m) {
    assert(m.sp == space::h0m);
    using TY = std::decay_t<decltype(f(std::declval<const X&>()))>;
    using Y = std::decay_t<decltype(*std::declval<TY>().ev.eval(rat(0)))>;
    auto khat = [&](const maybe<X>& v) -> trajectory<Y> {
        if (!v) return bottom<Y>();
        trajectory<Y> r = f(*v);
        assert(r.sp == space::h0m);
        return r;
    };
    return detail::bind_core<X>(khat, m, space::h0m);
}

/// Kleisli extension for the progressive space; the interior branch is
/// strict (t < d), and a trajectory whose endpoint is undefined keeps
/// duration d with nothing spliced after it.
template <class X, class F>
auto bind_hplus(F&& f, const trajectory<X>& m) {
    assert(m.sp == space::hplus);
    using TY = std::decay_t<decltype(f(std::declval<const X&>()))>;
    using Y = std::decay_t<decltype(*std::declval<TY>().ev.eval(rat(0)))>;
    auto g0 = [&](const maybe<X>& v) -> maybe<Y> {
        if (!v) return std::nullopt;
        return f(*v).ev.eval(rat(0));
    };
    if (m.dur.is_infinite())
        return make_traj(time_q::infinity(), m.ev.map_partial(g0), space::hplus);
    const rat& d = m.dur.value();
    maybe<X> ed = m.ev.eval(d);
    if (!ed) {
        auto ev = m.ev.truncate(d, /*keep_end=*/false).map_partial(g0);
        return make_traj(m.dur, std::move(ev), space::hplus);
    }
    trajectory<Y> c = f(*ed);
    assert(c.sp == space::hplus);
    auto ev = detail::splice_at(m.ev, d, g0, c.ev);
    return make_traj(m.dur + c.dur, std::move(ev), space::hplus);
}

/// Direct Kleisli extension for the divergence-closed space, computed from
/// the maximal closed prefix on which the pointwise continuation values are
/// defined. `bind_h_via_retraction` is the independent route kept for
/// cross-checking.
template <class X, class F>
auto bind_h(F&& f, const trajectory<X>& m) {
    assert(m.sp == space::h);
    using TY = std::decay_t<decltype(f(std::declval<const X&>()))>;
    using Y = std::decay_t<decltype(*std::declval<TY>().ev.eval(rat(0)))>;
    auto g0 = [&](const maybe<X>& v) -> maybe<Y> {
        if (!v) return std::nullopt;
        trajectory<Y> r = f(*v);
        assert(r.sp == space::h);
        return r.ev.eval(rat(0));
    };
    auto g = m.ev.map_partial(g0);
    auto pre = g.defined_prefix();
    if (pre.total) {
        if (m.dur.is_infinite()) return make_traj(time_q::infinity(), std::move(g), space::h);
        const rat& d = m.dur.value();
        maybe<X> ed = m.ev.eval(d); // defined: g total forces e total
        trajectory<Y> c = f(*ed);
        auto ev = detail::splice_at(m.ev, d, g0, c.ev);
        return make_traj(m.dur + c.dur, std::move(ev), space::h);
    }
    assert(pre.end.is_finite());
    auto ev = g.truncate(pre.end.value(), /*keep_end=*/pre.closed);
    return make_traj(time_q::infinity(), std::move(ev), space::h);
}

/// The defining composite route for the divergence-closed extension:
/// widen, extend in the partial space, seal.
template <class X, class F>
auto bind_h_via_retraction(F&& f, const trajectory<X>& m) {
    assert(m.sp == space::h);
    auto fw = [&](const X& x) { return widen(f(x)); };
    return seal(bind_h0m(fw, widen(m)));
}

/// Space-dispatched bind; `f`'s outputs must be tagged with `sp`.
template <class X, class F>
auto bind(space sp, F&& f, const trajectory<X>& m) {
    switch (sp) {
        case space::h0: return bind_h0(f, m);
        case space::h0m: return bind_h0m(f, m);
        case space::hplus: return bind_hplus(f, m);
        case space::h: return bind_h(f, m);
    }
    throw std::logic_error("bind: bad space");
}

/// Kleisli composition: x -> bind(g, f(x)).
template <class G, class F>
auto kleisli_compose(space sp, G g, F f) {
    return [sp, g = std::move(g), f = std::move(f)](const auto& x) { return bind(sp, g, f(x)); };
}

/// Pointwise if-then-else combinator on Kleisli morphisms.
template <class F, class G, class B>
auto choose(F f, G g, B pred) {
    return [f = std::move(f), g = std::move(g), pred = std::move(pred)](const auto& x) {
        return pred(x) ? f(x) : g(x);
    };
}

/// Finite-table Kleisli morphism over the carrier {0,...,n-1}; the value
/// carrier of the codomain is arbitrary.
template <class Y>
struct table_morphism {
    space sp = space::h0m;
    std::vector<trajectory<Y>> rows;

    const trajectory<Y>& operator()(int x) const {
        assert(x >= 0 && static_cast<std::size_t>(x) < rows.size());
        return rows[static_cast<std::size_t>(x)];
    }
    int domain_size() const { return static_cast<int>(rows.size()); }

    friend bool operator==(const table_morphism& a, const table_morphism& b) {
        return a.sp == b.sp && a.rows == b.rows;
    }
};

} // namespace hybrid
