#pragma once

#include "hybrid/iteration.hpp"

#include <random>

namespace hybrid::gen {

/// Seeded source of small exact instances for the law suites. Carriers stay
/// at size <= 4 and breakpoints at <= 3 small rationals so every comparison
/// is exact and fast.
class source {
public:
    explicit source(std::uint64_t seed) : rng_(seed) {}

    int range(int lo, int hi) { // inclusive
        return std::uniform_int_distribution<int>(lo, hi)(rng_);
    }

    bool coin(double p) { return std::uniform_real_distribution<>(0.0, 1.0)(rng_) < p; }

    rat small_rat(bool positive = false) {
        int num = range(positive ? 1 : 0, 8);
        int den = range(1, 4);
        return rat(num, den);
    }

    /// Strictly increasing breakpoints starting at 0.
    std::vector<rat> breakpoints(int max_extra = 3) {
        std::vector<rat> bp{rat(0)};
        int extra = range(0, max_extra);
        for (int i = 0; i < extra; ++i) {
            rat t = small_rat(true);
            bp.push_back(t);
        }
        std::sort(bp.begin(), bp.end());
        bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
        return bp;
    }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Replaces everything from `d` on by the value at `d` (the flattening
/// repair used by every trajectory generator).
template <class V>
step_evolution<V> flatten_from(const step_evolution<V>& e, const rat& d) {
    auto v = e.eval(d);
    std::vector<rat> bp;
    std::vector<maybe<V>> at, after;
    const auto& ebp = e.breakpoints();
    for (std::size_t i = 0; i < ebp.size() && ebp[i] < d; ++i) {
        bp.push_back(ebp[i]);
        at.push_back(e.at_breakpoint(i));
        after.push_back(e.after_breakpoint(i));
    }
    bp.push_back(d);
    at.push_back(v);
    after.push_back(v);
    return step_evolution<V>::from_raw(std::move(bp), std::move(at), std::move(after));
}

/// Random evolution over values produced by `val` (returning maybe<V>).
template <class F>
auto random_evolution(source& s, F&& val, int max_extra_bp = 3) {
    using MV = std::decay_t<decltype(val())>;
    using V = typename MV::value_type;
    auto bp = s.breakpoints(max_extra_bp);
    std::vector<maybe<V>> at, after;
    for (std::size_t i = 0; i < bp.size(); ++i) {
        at.push_back(val());
        after.push_back(val());
    }
    return step_evolution<V>::from_raw(std::move(bp), std::move(at), std::move(after));
}

/// Random member of the partial space: random values (with undefined mixed
/// in), random duration, flattening repaired.
inline trajectory<int> random_h0m(source& s, int value_range = 4, double undef_p = 0.25) {
    auto ev = random_evolution(s, [&]() -> maybe<int> {
        if (s.coin(undef_p)) return std::nullopt;
        return s.range(0, value_range - 1);
    });
    if (s.coin(0.15)) {
        return make_traj(time_q::infinity(), std::move(ev), space::h0m);
    }
    rat d = s.small_rat();
    return make_traj(time_q::finite(d), flatten_from(ev, d), space::h0m);
}

inline trajectory<int> random_h0(source& s, int value_range = 4) {
    auto t = random_h0m(s, value_range, 0.0);
    t.sp = space::h0;
    return t;
}

/// Random member of the progressive space: total, or defined exactly on
/// [0,d) with d > 0.
inline trajectory<int> random_hplus(source& s, int value_range = 4) {
    auto ev = random_evolution(s, [&]() -> maybe<int> { return s.range(0, value_range - 1); });
    if (s.coin(0.5)) { // total
        if (s.coin(0.2)) return make_traj(time_q::infinity(), std::move(ev), space::hplus);
        rat d = s.small_rat();
        return make_traj(time_q::finite(d), flatten_from(ev, d), space::hplus);
    }
    rat d = s.small_rat(true);
    auto cut = ev.truncate(d, /*keep_end=*/false);
    return make_traj(time_q::finite(d), std::move(cut), space::hplus);
}

/// Random member of the divergence-closed space: total, or infinite
/// duration with a downward-closed domain (possibly empty).
inline trajectory<int> random_h(source& s, int value_range = 4) {
    auto ev = random_evolution(s, [&]() -> maybe<int> { return s.range(0, value_range - 1); });
    if (s.coin(0.5)) {
        if (s.coin(0.2)) return make_traj(time_q::infinity(), std::move(ev), space::h);
        rat d = s.small_rat();
        return make_traj(time_q::finite(d), flatten_from(ev, d), space::h);
    }
    if (s.coin(0.15))
        return make_traj(time_q::infinity(), step_evolution<int>::undefined_everywhere(), space::h);
    rat p = s.small_rat(true);
    auto cut = ev.truncate(p, /*keep_end=*/s.coin(0.5));
    return make_traj(time_q::infinity(), std::move(cut), space::h);
}

inline trajectory<int> random_traj(source& s, space sp, int value_range = 4) {
    switch (sp) {
        case space::h0: return random_h0(s, value_range);
        case space::h0m: return random_h0m(s, value_range);
        case space::hplus: return random_hplus(s, value_range);
        case space::h: return random_h(s, value_range);
    }
    throw std::logic_error("random_traj: bad space");
}

/// Random Kleisli table X -> T Y with |X| = domain and values in
/// {0..codomain-1}.
inline table_morphism<int> random_table(source& s, space sp, int domain, int codomain) {
    table_morphism<int> f;
    f.sp = sp;
    for (int x = 0; x < domain; ++x) f.rows.push_back(random_traj(s, sp, codomain));
    return f;
}

/// Produces an element below `b` in the approximation order by cutting b's
/// values after a chosen point. Every result is a valid member of the
/// partial space.
inline trajectory<int> restrict_below(source& s, const trajectory<int>& b, const maybe<rat>& at = {}) {
    if (!at && s.coin(0.15)) return b;
    if (!at && s.coin(0.15)) return bottom<int>();
    rat cut = at ? *at : s.small_rat();
    if (b.dur.is_finite() && cut > b.dur.value()) cut = b.dur.value();
    auto open = b.ev.truncate(cut, /*keep_end=*/false);
    // the cut point itself is undefined, so the finished-computation clause
    // is vacuous and any duration between cut and b's works
    time_q d = (!at && s.coin(0.5)) ? b.dur : time_q::finite(cut);
    return make_traj(d, std::move(open), space::h0m);
}

/// Sum-valued loop row helpers.
using loop_sum = either<int, int>;

/// Random loop table X -> T(Y + X) whose boundary orbit strictly descends,
/// so every iteration stabilizes within |X|+2 unfoldings. Interior and
/// time-0 values are unconstrained (cycles there only affect values).
inline loop_table<int> random_loop_table(source& s, space sp, int domain, int exits,
                                         double undef_p = 0.2) {
    loop_table<int> f;
    f.sp = sp;
    bool partial_ok = sp == space::h0m; // gaps allowed only in the partial space
    for (int x = 0; x < domain; ++x) {
        auto val = [&]() -> maybe<loop_sum> {
            if (partial_ok && s.coin(undef_p)) return std::nullopt;
            if (s.coin(0.5)) return loop_sum::left(s.range(0, exits - 1));
            return loop_sum::right(s.range(0, domain - 1));
        };
        auto ev = random_evolution(s, val);
        time_q d;
        bool divergent_row = sp == space::h && s.coin(0.2);
        if (divergent_row) {
            rat p = s.small_rat(true);
            auto cut = ev.truncate(p, s.coin(0.5));
            f.rows.push_back(make_traj(time_q::infinity(), std::move(cut), sp));
            continue;
        }
        if (sp == space::hplus && s.coin(0.3)) { // open progressive row: domain [0,d)
            rat p = s.small_rat(true);
            f.rows.push_back(make_traj(time_q::finite(p), ev.truncate(p, false), sp));
            continue;
        }
        d = s.coin(0.12) ? time_q::infinity() : time_q::finite(s.small_rat());
        if (d.is_infinite()) {
            f.rows.push_back(make_traj(d, std::move(ev), sp));
            continue;
        }
        // force the boundary value: exit, undefined, or strict descent
        maybe<loop_sum> boundary;
        int mode = s.range(0, partial_ok ? 2 : 1);
        if (mode == 0 || (mode == 1 && x == 0)) {
            boundary = loop_sum::left(s.range(0, exits - 1));
        } else if (mode == 1) {
            boundary = loop_sum::right(s.range(0, x - 1));
        } else {
            boundary = std::nullopt;
        }
        auto flat = flatten_from(ev, d.value());
        // overwrite the flat tail with the chosen boundary value
        std::vector<rat> bp = flat.breakpoints();
        std::vector<maybe<loop_sum>> at, after;
        for (std::size_t i = 0; i < bp.size(); ++i) {
            at.push_back(flat.at_breakpoint(i));
            after.push_back(flat.after_breakpoint(i));
        }
        at.back() = boundary;
        after.back() = boundary;
        f.rows.push_back(make_traj(
            d, step_evolution<loop_sum>::from_raw(std::move(bp), std::move(at), std::move(after)),
            sp));
    }
    return f;
}

/// Random doubly-tagged loop table X -> T((Y+X)+X) for the codiagonal law.
/// Boundary values exit or strictly descend through either continue layer,
/// so both nested iterations stabilize.
inline loop_table<either<int, int>> random_codiag_table(source& s, int domain, int exits) {
    using inner = either<int, int>;
    using outer = either<inner, int>;
    loop_table<inner> f;
    f.sp = space::h;
    for (int x = 0; x < domain; ++x) {
        auto val = [&]() -> maybe<outer> {
            int pick = s.range(0, 2);
            if (pick == 0) return outer::left(inner::left(s.range(0, exits - 1)));
            if (pick == 1) return outer::left(inner::right(s.range(0, domain - 1)));
            return outer::right(s.range(0, domain - 1));
        };
        auto ev = random_evolution(s, val);
        if (s.coin(0.15)) { // divergent row
            rat p = s.small_rat(true);
            f.rows.push_back(make_traj(time_q::infinity(), ev.truncate(p, s.coin(0.5)), space::h));
            continue;
        }
        if (s.coin(0.1)) {
            f.rows.push_back(make_traj(time_q::infinity(), std::move(ev), space::h));
            continue;
        }
        rat d = s.small_rat();
        maybe<outer> boundary;
        int mode = s.range(0, 2);
        if (x == 0 || mode == 0) {
            boundary = outer::left(inner::left(s.range(0, exits - 1)));
        } else if (mode == 1) {
            boundary = outer::left(inner::right(s.range(0, x - 1)));
        } else {
            boundary = outer::right(s.range(0, x - 1));
        }
        auto flat = flatten_from(ev, d);
        std::vector<rat> bp = flat.breakpoints();
        std::vector<maybe<outer>> at, after;
        for (std::size_t i = 0; i < bp.size(); ++i) {
            at.push_back(flat.at_breakpoint(i));
            after.push_back(flat.after_breakpoint(i));
        }
        at.back() = boundary;
        after.back() = boundary;
        f.rows.push_back(make_traj(
            time_q::finite(d),
            step_evolution<outer>::from_raw(std::move(bp), std::move(at), std::move(after)),
            space::h));
    }
    return f;
}

/// Random progressive loop table: time-0 values are exits, and the boundary
/// orbit strictly descends.
inline loop_table<int> random_progressive_table(source& s, int domain, int exits) {
    loop_table<int> f = random_loop_table(s, space::hplus, domain, exits, 0.0);
    for (auto& row : f.rows) {
        // force the time-0 value to an exit
        const auto& ev = row.ev;
        std::vector<rat> bp = ev.breakpoints();
        std::vector<maybe<loop_sum>> at, after;
        for (std::size_t i = 0; i < bp.size(); ++i) {
            at.push_back(ev.at_breakpoint(i));
            after.push_back(ev.after_breakpoint(i));
        }
        at[0] = loop_sum::left(s.range(0, exits - 1));
        if (row.dur == qtime(0)) {
            // zero duration: flattening forces the whole row constant
            after[0] = at[0];
            bp = {rat(0)};
            at.resize(1);
            after.resize(1);
        }
        row.ev = step_evolution<loop_sum>::from_raw(std::move(bp), std::move(at), std::move(after));
    }
    // progressive rows must be genuine members of the progressive space
    for (auto& row : f.rows) {
        if (!check_membership(row).ok) row = make_traj(qtime(0), step_evolution<loop_sum>::constant_of(loop_sum::left(0)), space::hplus);
    }
    return f;
}

} // namespace hybrid::gen
