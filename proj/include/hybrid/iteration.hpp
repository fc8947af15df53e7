#pragma once

#include "hybrid/kleisli.hpp"
#include "hybrid/order.hpp"
#include "hybrid/retract.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace hybrid {

struct not_progressive_error : std::invalid_argument {
    explicit not_progressive_error(int x)
        : std::invalid_argument("morphism is not progressive at carrier element " +
                                std::to_string(x)),
          at(x) {}
    int at;
};

/// Loop body over the carrier {0..n-1}: left = exit value, right = next
/// carrier element.
template <class Y>
using loop_table = table_morphism<either<Y, int>>;

/// Progressiveness in the iterated summand: the time-0 value exists and is
/// an exit-tagged value for every carrier element, so iteration makes
/// strict progress in time.
template <class Y>
bool is_progressive(const loop_table<Y>& f) {
    for (int x = 0; x < f.domain_size(); ++x) {
        auto v0 = f(x).ev.eval(rat(0));
        if (!v0 || !v0->is_left()) return false;
    }
    return true;
}

/// One Kleene unfolding: x -> [unit, approx]* f(x) in the partial space.
template <class Y>
table_morphism<Y> kleene_step(const loop_table<Y>& f, const table_morphism<Y>& approx) {
    auto cotuple = [&](const either<Y, int>& v) -> trajectory<Y> {
        if (v.is_left()) return unit(space::h0m, v.left_value());
        return approx(v.right_value());
    };
    table_morphism<Y> next;
    next.sp = space::h0m;
    next.rows.reserve(f.rows.size());
    for (int x = 0; x < f.domain_size(); ++x) {
        trajectory<either<Y, int>> row = f(x);
        row.sp = space::h0m;
        next.rows.push_back(bind_h0m(cotuple, row));
    }
    return next;
}

template <class Y>
table_morphism<Y> bottom_table(int n) {
    table_morphism<Y> t;
    t.sp = space::h0m;
    t.rows.assign(static_cast<std::size_t>(n), bottom<Y>());
    return t;
}

/// Answer of a pointwise query against an iteration chain.
template <class Y>
struct point_answer {
    enum class kind { defined, undefined, budget_exhausted } k;
    maybe<Y> value; // set iff k == defined

    static point_answer defined(Y v) {
        return {kind::defined, maybe<Y>(std::move(v))};
    }
    static point_answer undefined() { return {kind::undefined, std::nullopt}; }
    static point_answer exhausted() { return {kind::budget_exhausted, std::nullopt}; }

    friend bool operator==(const point_answer& a, const point_answer& b) {
        return a.k == b.k && a.value == b.value;
    }
};

/// Result of running the Kleene chain in the partial space. When the chain
/// stabilizes within budget the table is the least fixpoint and answers are
/// exact; otherwise only pointwise queries are served, each one sound
/// because a value is reported only once some finite approximant defines it.
template <class Y>
class iter_outcome {
public:
    iter_outcome(loop_table<Y> f, int budget) : f_(std::move(f)) {
        table_ = bottom_table<Y>(f_.domain_size());
        for (steps_ = 0; steps_ < budget; ++steps_) {
            table_morphism<Y> next = kleene_step(f_, table_);
            if (next == table_) {
                stabilized_ = true;
                break;
            }
            table_ = std::move(next);
        }
    }

    bool stabilized() const { return stabilized_; }
    int steps() const { return steps_; }
    const loop_table<Y>& body() const { return f_; }
    int domain_size() const { return f_.domain_size(); }

    /// Last approximant (the least fixpoint when stabilized).
    const trajectory<Y>& approximant(int x) const { return table_(x); }

    const trajectory<Y>& exact(int x) const {
        if (!stabilized_) throw std::logic_error("iteration did not stabilize");
        return table_(x);
    }

    /// Approximant durations only grow along the chain, so this bounds the
    /// limit's duration from below.
    time_q duration_lower_bound(int x) const { return table_(x).dur; }

    /// Pointwise query by pure re-unfolding: report a value as soon as a
    /// finite approximant defines it.
    point_answer<Y> at(int x, const rat& t, int budget) const {
        table_morphism<Y> cur = bottom_table<Y>(f_.domain_size());
        for (int n = 0; n < budget; ++n) {
            auto v = cur(x).ev.eval(t);
            if (v) return point_answer<Y>::defined(*v);
            table_morphism<Y> next = kleene_step(f_, cur);
            if (next == cur) {
                auto vf = cur(x).ev.eval(t);
                return vf ? point_answer<Y>::defined(*vf) : point_answer<Y>::undefined();
            }
            cur = std::move(next);
        }
        auto v = cur(x).ev.eval(t);
        if (v) return point_answer<Y>::defined(*v);
        return point_answer<Y>::exhausted();
    }

private:
    loop_table<Y> f_;
    table_morphism<Y> table_;
    bool stabilized_ = false;
    int steps_ = 0;
};

/// Least-fixpoint iteration in the partial space (total operator).
template <class Y>
iter_outcome<Y> iter_h0m(loop_table<Y> f, int budget) {
    return iter_outcome<Y>(std::move(f), budget);
}

/// Progressive iteration: the restriction of the partial-space operator to
/// progressive morphisms of the progressive space.
template <class Y>
iter_outcome<Y> iter_hplus(const loop_table<Y>& f, int budget) {
    for (int x = 0; x < f.domain_size(); ++x) {
        auto v0 = f(x).ev.eval(rat(0));
        if (!v0 || !v0->is_left()) throw not_progressive_error(x);
    }
    return iter_outcome<Y>(f, budget);
}

/// Certified exit of progressive iteration: exact answers retagged into the
/// progressive space, membership checked.
template <class Y>
trajectory<Y> exact_hplus(const iter_outcome<Y>& out, int x) {
    trajectory<Y> t = out.exact(x);
    t.sp = space::hplus;
    auto rep = check_membership(t);
    if (!rep.ok)
        throw std::logic_error("progressive iteration left the progressive space: " + rep.clause);
    return t;
}

/// Total iteration on the divergence-closed space: the partial-space chain
/// followed by the retraction.
template <class Y>
class sealed_outcome {
public:
    sealed_outcome(loop_table<Y> f, int budget) : base_(std::move(f), budget) {}

    bool stabilized() const { return base_.stabilized(); }
    int steps() const { return base_.steps(); }

    trajectory<Y> exact(int x) const {
        trajectory<Y> t = base_.exact(x);
        t.sp = space::h0m;
        return seal(t);
    }

    const iter_outcome<Y>& chain() const { return base_; }

    time_q duration_lower_bound(int x) const { return base_.duration_lower_bound(x); }

    /// Pointwise query with the retraction's gap truncation: a value is
    /// reported only when some approximant is defined on the whole of [0,t],
    /// which pins the sealed value at t.
    point_answer<Y> at(int x, const rat& t, int budget) const {
        table_morphism<Y> cur = bottom_table<Y>(base_.domain_size());
        for (int n = 0; n < budget; ++n) {
            if (auto a = sealed_point(cur(x), t)) return *a;
            table_morphism<Y> next = kleene_step(base_.body(), cur);
            if (next == cur) {
                trajectory<Y> fix = cur(x);
                fix.sp = space::h0m;
                auto v = seal(fix).ev.eval(t);
                return v ? point_answer<Y>::defined(*v) : point_answer<Y>::undefined();
            }
            cur = std::move(next);
        }
        if (auto a = sealed_point(cur(x), t)) return *a;
        return point_answer<Y>::exhausted();
    }

private:
    static maybe<point_answer<Y>> sealed_point(const trajectory<Y>& approx, const rat& t) {
        auto prefix = approx.ev.defined_prefix();
        bool covered = prefix.total || time_q::finite(t) < prefix.end ||
                       (time_q::finite(t) == prefix.end && prefix.closed);
        if (!covered) return std::nullopt;
        auto v = approx.ev.eval(t);
        if (!v) return std::nullopt;
        return point_answer<Y>::defined(*v);
    }

    iter_outcome<Y> base_;
};

template <class Y>
sealed_outcome<Y> iter_h(loop_table<Y> f, int budget) {
    return sealed_outcome<Y>(std::move(f), budget);
}

/// Splits a loop body into its zero-progress part: the time-0 continuation
/// tag moves to a fresh outer summand while every positive-time value is
/// wrapped as an exit of the outer loop.
template <class Y>
loop_table<either<Y, int>> hat(const loop_table<Y>& f) {
    using inner = either<Y, int>;
    using outer = either<inner, int>;
    loop_table<either<Y, int>> result;
    result.sp = f.sp;
    result.rows.reserve(f.rows.size());
    for (const auto& row : f.rows) {
        const auto& ev = row.ev;
        std::vector<maybe<outer>> at, after;
        auto lift_pos = [](const maybe<inner>& v) -> maybe<outer> {
            if (!v) return std::nullopt;
            return outer::left(*v);
        };
        auto lift_zero = [](const maybe<inner>& v) -> maybe<outer> {
            if (!v) return std::nullopt;
            if (v->is_right()) return outer::right(v->right_value());
            return outer::left(*v);
        };
        for (std::size_t i = 0; i < ev.breakpoint_count(); ++i) {
            at.push_back(i == 0 ? lift_zero(ev.at_breakpoint(i)) : lift_pos(ev.at_breakpoint(i)));
            after.push_back(lift_pos(ev.after_breakpoint(i)));
        }
        result.rows.push_back(make_traj(
            row.dur,
            step_evolution<outer>::from_raw(ev.breakpoints(), std::move(at), std::move(after)),
            row.sp));
    }
    return result;
}

/// Collapse of the split: merges the outer summand back, `[id, inr]`.
template <class Y>
loop_table<Y> unhat(const loop_table<either<Y, int>>& f) {
    using inner = either<Y, int>;
    loop_table<Y> result;
    result.sp = f.sp;
    result.rows.reserve(f.rows.size());
    for (const auto& row : f.rows) {
        result.rows.push_back(make_traj(row.dur, row.ev.map([](const either<inner, int>& v) {
            if (v.is_left()) return v.left_value();
            return inner::right(v.right_value());
        }), row.sp));
    }
    return result;
}

/// Basic iteration of an endomorphism body: wraps the body so that the
/// time-0 value exits and every later value continues, then iterates
/// progressively. A body of zero duration therefore exits immediately with
/// its time-0 value; positive durations iterate forever.
template <class Y>
loop_table<Y> wrap_basic(const table_morphism<Y>& f) {
    using sum = either<Y, int>;
    loop_table<Y> g;
    g.sp = f.sp;
    g.rows.reserve(f.rows.size());
    auto lift_exit = [](const maybe<Y>& v) -> maybe<sum> {
        if (!v) return std::nullopt;
        return sum::left(*v);
    };
    for (const auto& row : f.rows) {
        const auto& ev = row.ev;
        std::vector<maybe<sum>> at, after;
        for (std::size_t i = 0; i < ev.breakpoint_count(); ++i) {
            const auto& a = ev.at_breakpoint(i);
            const auto& g_ = ev.after_breakpoint(i);
            if (i == 0) {
                at.push_back(lift_exit(a));
            } else {
                at.push_back(a ? maybe<sum>(sum::right(*a)) : std::nullopt);
            }
            after.push_back(g_ ? maybe<sum>(sum::right(*g_)) : std::nullopt);
        }
        g.rows.push_back(make_traj(
            row.dur,
            step_evolution<sum>::from_raw(ev.breakpoints(), std::move(at), std::move(after)),
            row.sp));
    }
    return g;
}

// Basic iteration needs the continuation values to be carrier indices; the
// general numeric variant lives with the lazy trajectory streams.
inline iter_outcome<int> basic_iteration(const table_morphism<int>& f, int budget) {
    return iter_hplus(wrap_basic(f), budget);
}

/// The while-loop's boundary map: retags every strictly-interior
/// continuation point into an exit point, so the loop test only sees the
/// trajectory's endpoint. Values are preserved.
template <class V>
trajectory<either<V, V>> retag_interior(const trajectory<either<V, V>>& t) {
    using sum = either<V, V>;
    const auto& ev = t.ev;
    std::vector<rat> bp = ev.breakpoints();
    std::vector<maybe<sum>> at, after;
    for (std::size_t i = 0; i < bp.size(); ++i) {
        at.push_back(ev.at_breakpoint(i));
        after.push_back(ev.after_breakpoint(i));
    }
    if (t.dur.is_finite()) {
        const rat& d = t.dur.value();
        auto pos = std::lower_bound(bp.begin(), bp.end(), d);
        if (pos == bp.end() || *pos != d) {
            std::size_t idx = static_cast<std::size_t>(std::distance(bp.begin(), pos));
            bp.insert(pos, d);
            at.insert(at.begin() + static_cast<std::ptrdiff_t>(idx), ev.eval(d));
            after.insert(after.begin() + static_cast<std::ptrdiff_t>(idx), ev.just_after(d));
        }
    }
    auto to_exit = [](const maybe<sum>& v) -> maybe<sum> {
        if (!v || v->is_left()) return v;
        return maybe<sum>(sum::left(v->right_value()));
    };
    for (std::size_t i = 0; i < bp.size(); ++i) {
        bool point_interior = t.dur.is_infinite() || time_q::finite(bp[i]) < t.dur;
        bool gap_interior =
            t.dur.is_infinite() || (i + 1 < bp.size() ? time_q::finite(bp[i + 1]) <= t.dur : false);
        if (point_interior) at[i] = to_exit(at[i]);
        if (gap_interior) after[i] = to_exit(after[i]);
    }
    return make_traj(t.dur, step_evolution<sum>::from_raw(std::move(bp), std::move(at),
                                                          std::move(after)),
                     t.sp);
}

} // namespace hybrid
