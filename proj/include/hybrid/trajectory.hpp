#pragma once

#include "hybrid/ext_time.hpp"
#include "hybrid/step_evolution.hpp"

#include <sstream>
#include <string>

namespace hybrid {

/// The four trajectory spaces. `h0` is the total-evolution space with the
/// flattening condition, `h0m` its partial extension, `hplus` the
/// progressive subspace (defined on all of [0,d)), and `h` the
/// divergence-closed space (total, or infinite duration with downward-closed
/// domain).
enum class space { h0, h0m, hplus, h };

inline const char* to_string(space s) {
    switch (s) {
        case space::h0: return "H0";
        case space::h0m: return "H0M";
        case space::hplus: return "H+";
        case space::h: return "H";
    }
    return "?";
}

// Rendering hooks for debug output; specialized per value type.
inline std::string value_str(int v) { return std::to_string(v); }
inline std::string value_str(const rat& v) { return to_string(v); }
inline std::string value_str(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

template <class V>
std::string value_str(const maybe<V>& v) {
    return v ? value_str(*v) : std::string("_");
}

/// A duration paired with an evolution, tagged with the space it claims to
/// live in. Membership is checked, not assumed: see `check_membership`.
template <class V>
struct trajectory {
    time_q dur;
    step_evolution<V> ev;
    space sp = space::h0;

    friend bool operator==(const trajectory& a, const trajectory& b) {
        return a.sp == b.sp && a.dur == b.dur && a.ev == b.ev;
    }

    /// Equality ignoring the space tag (used when comparing across
    /// retaggings).
    bool same_shape(const trajectory& o) const { return dur == o.dur && ev == o.ev; }
};

template <class V>
trajectory<V> make_traj(time_q d, step_evolution<V> e, space s) {
    return trajectory<V>{std::move(d), std::move(e), s};
}

/// The bottom element (0, undefined-everywhere) of the partial space.
template <class V>
trajectory<V> bottom() {
    return make_traj<V>(time_q::finite(rat(0)), step_evolution<V>::undefined_everywhere(),
                        space::h0m);
}

/// Result of a membership check; `ok()` or a named violated clause plus a
/// witness time where the violation shows.
struct membership_report {
    bool ok = true;
    std::string clause;
    time_q witness;

    static membership_report good() { return {}; }
    static membership_report bad(std::string clause, time_q witness) {
        return membership_report{false, std::move(clause), witness};
    }
};

template <class V>
membership_report check_membership(const trajectory<V>& t) {
    const auto& ev = t.ev;
    auto prefix = ev.defined_prefix();
    switch (t.sp) {
        case space::h0:
            if (!prefix.total) return membership_report::bad("evolution not total", prefix.end);
            if (!ev.flat_from(t.dur))
                return membership_report::bad("flattening fails beyond duration", t.dur);
            return membership_report::good();
        case space::h0m:
            // Undefined is an ordinary value of the extended codomain here;
            // only flattening is required.
            if (!ev.flat_from(t.dur))
                return membership_report::bad("flattening fails beyond duration", t.dur);
            return membership_report::good();
        case space::hplus: {
            if (!ev.flat_from(t.dur))
                return membership_report::bad("flattening fails beyond duration", t.dur);
            if (ev.is_undefined_everywhere())
                return membership_report::bad("evolution undefined everywhere",
                                              time_q::finite(rat(0)));
            if (prefix.total) return membership_report::good();
            // otherwise the domain must be exactly [0,dur) with dur > 0
            if (!prefix.downward_closed)
                return membership_report::bad("domain has a gap", prefix.end);
            if (prefix.closed)
                return membership_report::bad("domain closed at its sup", prefix.end);
            if (!(prefix.end == t.dur))
                return membership_report::bad("domain does not reach the duration", prefix.end);
            if (!(t.dur > time_q::finite(rat(0))))
                return membership_report::bad("open domain with zero duration", t.dur);
            return membership_report::good();
        }
        case space::h: {
            if (prefix.total) {
                if (!ev.flat_from(t.dur))
                    return membership_report::bad("flattening fails beyond duration", t.dur);
                return membership_report::good();
            }
            if (!prefix.downward_closed)
                return membership_report::bad("domain not downward closed", prefix.end);
            if (!t.dur.is_infinite())
                return membership_report::bad("partial evolution with finite duration", t.dur);
            return membership_report::good();
        }
    }
    return membership_report::bad("unknown space", time_q::finite(rat(0)));
}

/// Debug text rendering: `dur=<q|inf>; [l,r)->v; {p}->v; tail->v|_`.
/// A `[l,r)` piece directly following a `{l}` piece covers (l,r).
template <class V>
std::string render(const trajectory<V>& t) {
    std::ostringstream os;
    os << "dur=" << to_string(t.dur);
    const auto& ev = t.ev;
    std::size_t k = ev.breakpoint_count();
    for (std::size_t i = 0; i < k; ++i) {
        bool last = i + 1 == k;
        bool merged = ev.at_breakpoint(i) == ev.after_breakpoint(i);
        if (!merged) os << "; {" << to_string(ev.breakpoints()[i]) << "}->"
                        << value_str(ev.at_breakpoint(i));
        if (last) {
            os << "; tail->" << value_str(ev.after_breakpoint(i));
        } else if (merged) {
            os << "; [" << to_string(ev.breakpoints()[i]) << ","
               << to_string(ev.breakpoints()[i + 1]) << ")->" << value_str(ev.at_breakpoint(i));
        } else {
            os << "; [" << to_string(ev.breakpoints()[i]) << ","
               << to_string(ev.breakpoints()[i + 1]) << ")->" << value_str(ev.after_breakpoint(i));
        }
    }
    return os.str();
}

} // namespace hybrid
