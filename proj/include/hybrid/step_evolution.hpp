#pragma once

#include "hybrid/ext_time.hpp"
#include "hybrid/rational.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <string>
#include <vector>

namespace hybrid {

template <class V>
using maybe = std::optional<V>;

/// Piecewise-constant total map [0,inf) -> V + Undefined with rational
/// breakpoints. Partiality is an explicit `nullopt` value, so every evolution
/// is a finite object and pointwise equality is decidable.
///
/// Representation: sorted breakpoints bp[0]=0 < bp[1] < ... < bp[k], the
/// value at each breakpoint (`at`), and the value on each open gap
/// (bp[i], bp[i+1]) -- the last gap extends to infinity (`after`).
/// Canonical form merges every breakpoint whose point value and trailing gap
/// value both equal the preceding gap value, which makes structural equality
/// coincide with pointwise equality.
template <class V>
class step_evolution {
public:
    using value_type = maybe<V>;

    step_evolution() : bp_{rat(0)}, at_{value_type{}}, after_{value_type{}} {}

    static step_evolution constant(value_type v) {
        step_evolution e;
        e.at_[0] = v;
        e.after_[0] = std::move(v);
        return e;
    }

    static step_evolution constant_of(V v) { return constant(value_type(std::move(v))); }

    static step_evolution undefined_everywhere() { return constant(value_type{}); }

    /// Builds from raw arrays and canonicalizes. `bp` must be strictly
    /// increasing and start at 0; `at`/`after` must match its length.
    static step_evolution from_raw(std::vector<rat> bp, std::vector<value_type> at,
                                   std::vector<value_type> after) {
        step_evolution e = unnormalized(std::move(bp), std::move(at), std::move(after));
        e.canonicalize();
        return e;
    }

    /// Raw constructor that skips canonicalization (canonicalization-agreement
    /// tests need the un-normalized object).
    static step_evolution unnormalized(std::vector<rat> bp, std::vector<value_type> at,
                                       std::vector<value_type> after) {
        assert(!bp.empty() && bp.front() == 0);
        assert(bp.size() == at.size() && bp.size() == after.size());
        assert(std::is_sorted(bp.begin(), bp.end()));
        step_evolution e;
        e.bp_ = std::move(bp);
        e.at_ = std::move(at);
        e.after_ = std::move(after);
        return e;
    }

    std::size_t breakpoint_count() const { return bp_.size(); }
    const std::vector<rat>& breakpoints() const { return bp_; }
    const value_type& at_breakpoint(std::size_t i) const { return at_[i]; }
    const value_type& after_breakpoint(std::size_t i) const { return after_[i]; }

    /// Total evaluation into V + Undefined at a finite time t >= 0.
    value_type eval(const rat& t) const {
        assert(t >= 0);
        std::size_t i = locate(t);
        if (bp_[i] == t) return at_[i];
        return after_[i];
    }

    /// Value on the open gap immediately right of time t (i.e. the value held
    /// on (t, t+eps) for small eps).
    value_type just_after(const rat& t) const {
        assert(t >= 0);
        return after_[locate(t)];
    }

    bool is_undefined_everywhere() const {
        for (const auto& v : at_)
            if (v) return false;
        for (const auto& v : after_)
            if (v) return false;
        return true;
    }

    bool is_total() const {
        for (const auto& v : at_)
            if (!v) return false;
        for (const auto& v : after_)
            if (!v) return false;
        return true;
    }

    /// Map defined values through `f` (V -> W); Undefined is preserved.
    template <class F>
    auto map(F&& f) const {
        using W = decltype(f(std::declval<const V&>()));
        std::vector<maybe<W>> at, after;
        at.reserve(at_.size());
        after.reserve(after_.size());
        auto lift = [&](const value_type& v) -> maybe<W> {
            if (!v) return std::nullopt;
            return maybe<W>(f(*v));
        };
        for (const auto& v : at_) at.push_back(lift(v));
        for (const auto& v : after_) after.push_back(lift(v));
        return step_evolution<W>::from_raw(bp_, std::move(at), std::move(after));
    }

    /// Map including Undefined: `f` takes maybe<V> and returns maybe<W>.
    template <class F>
    auto map_partial(F&& f) const {
        using W = typename decltype(f(std::declval<const value_type&>()))::value_type;
        std::vector<maybe<W>> at, after;
        at.reserve(at_.size());
        after.reserve(after_.size());
        for (const auto& v : at_) at.push_back(f(v));
        for (const auto& v : after_) after.push_back(f(v));
        return step_evolution<W>::from_raw(bp_, std::move(at), std::move(after));
    }

    /// Description of the maximal downward-closed chunk of the domain of
    /// definedness starting at 0.
    struct prefix_info {
        time_q end;           // sup of the prefix (infinite when total)
        bool closed;          // prefix is [0,end] rather than [0,end)
        bool total;           // defined everywhere
        bool downward_closed; // the whole domain equals the prefix
    };

    prefix_info defined_prefix() const {
        prefix_info info{time_q::infinity(), false, true, true};
        bool found_undef = false;
        bool defined_after_undef = false;
        auto visit = [&](const value_type& v, const rat& start, bool is_point) {
            if (!v) {
                if (!found_undef) {
                    found_undef = true;
                    info.total = false;
                    info.end = time_q::finite(start);
                    info.closed = !is_point; // undefined gap after `start` keeps the point
                }
            } else if (found_undef) {
                defined_after_undef = true;
            }
        };
        for (std::size_t i = 0; i < bp_.size(); ++i) {
            visit(at_[i], bp_[i], true);
            visit(after_[i], bp_[i], false);
        }
        info.downward_closed = !defined_after_undef;
        return info;
    }

    /// Keeps values on [0,end] (or [0,end) when `keep_end` is false) and puts
    /// Undefined everywhere after.
    step_evolution truncate(const rat& end, bool keep_end) const {
        std::vector<rat> bp;
        std::vector<value_type> at, after;
        for (std::size_t i = 0; i < bp_.size() && bp_[i] < end; ++i) {
            bp.push_back(bp_[i]);
            at.push_back(at_[i]);
            after.push_back(after_[i]);
        }
        // clamp the last open gap so it stops at `end`
        bp.push_back(end);
        at.push_back(keep_end ? eval(end) : value_type{});
        after.push_back(value_type{});
        return from_raw(std::move(bp), std::move(at), std::move(after));
    }

    /// True when the evolution is constantly equal to eval(d) from d on.
    bool flat_from(const time_q& d) const {
        if (d.is_infinite()) return true;
        const rat& t = d.value();
        value_type v = eval(t);
        std::size_t i = locate(t);
        if (!(after_[i] == v)) return false;
        for (std::size_t j = i + 1; j < bp_.size(); ++j) {
            if (!(at_[j] == v) || !(after_[j] == v)) return false;
        }
        return true;
    }

    void canonicalize() {
        std::vector<rat> bp{bp_[0]};
        std::vector<value_type> at{at_[0]}, after{after_[0]};
        for (std::size_t i = 1; i < bp_.size(); ++i) {
            if (at_[i] == after.back() && after_[i] == after.back()) continue;
            bp.push_back(bp_[i]);
            at.push_back(at_[i]);
            after.push_back(after_[i]);
        }
        bp_ = std::move(bp);
        at_ = std::move(at);
        after_ = std::move(after);
    }

    friend bool operator==(const step_evolution& a, const step_evolution& b) {
        return a.bp_ == b.bp_ && a.at_ == b.at_ && a.after_ == b.after_;
    }

private:
    // index of the last breakpoint <= t
    std::size_t locate(const rat& t) const {
        auto it = std::upper_bound(bp_.begin(), bp_.end(), t);
        assert(it != bp_.begin());
        return static_cast<std::size_t>(std::distance(bp_.begin(), it)) - 1;
    }

    std::vector<rat> bp_;
    std::vector<value_type> at_;
    std::vector<value_type> after_;
};

} // namespace hybrid
