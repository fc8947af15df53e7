#pragma once

#include "hybrid/gen.hpp"
#include "hybrid/iteration.hpp"

#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace hybrid::laws {

struct config {
    std::uint64_t seed = 42;
    int cases = 1000;
    int budget = 64;
};

struct failure {
    int case_index;
    std::string what;
    std::string instance;
};

struct report {
    std::string suite;
    int cases = 0;
    std::uint64_t seed = 0;
    std::vector<failure> failures;

    bool ok() const { return failures.empty(); }

    std::string text() const {
        std::ostringstream os;
        os << "suite " << suite << ": " << cases << " cases, seed " << seed << ", "
           << failures.size() << " failure(s)" << (ok() ? " [ok]" : " [FAIL]") << "\n";
        for (const auto& f : failures) {
            os << "  case " << f.case_index << ": " << f.what << "\n";
            if (!f.instance.empty()) os << "    shrunk instance: " << f.instance << "\n";
        }
        return os.str();
    }

    std::string json() const {
        auto esc = [](const std::string& s) {
            std::string r;
            for (char c : s) {
                if (c == '"' || c == '\\') r += '\\';
                if (c == '\n') {
                    r += "\\n";
                    continue;
                }
                r += c;
            }
            return r;
        };
        std::ostringstream os;
        os << "{\"law\":\"" << suite << "\",\"cases\":" << cases << ",\"seed\":" << seed
           << ",\"failures\":[";
        for (std::size_t i = 0; i < failures.size(); ++i) {
            if (i) os << ",";
            os << "{\"case\":" << failures[i].case_index << ",\"what\":\""
               << esc(failures[i].what) << "\",\"instance\":\"" << esc(failures[i].instance)
               << "\"}";
        }
        os << "],\"ok\":" << (ok() ? "true" : "false") << "}";
        return os.str();
    }
};

namespace detail {

using gen::loop_sum;

template <class Y>
std::string render_table(const table_morphism<Y>& f) {
    std::ostringstream os;
    os << to_string(f.sp);
    for (std::size_t i = 0; i < f.rows.size(); ++i)
        os << " | " << i << " -> " << render(f.rows[i]);
    return os.str();
}

/// Greedy shrink: tries per-row simplifications while the law keeps failing.
template <class Y>
table_morphism<Y> shrink_table(table_morphism<Y> cur,
                               const std::function<bool(const table_morphism<Y>&)>& holds,
                               const std::function<trajectory<Y>(const trajectory<Y>&)>& trivial) {
    bool progress = true;
    int rounds = 0;
    while (progress && rounds++ < 64) {
        progress = false;
        for (std::size_t i = 0; i < cur.rows.size(); ++i) {
            // candidate 1: trivial row
            {
                auto cand = cur;
                cand.rows[i] = trivial(cur.rows[i]);
                if (!(cand == cur) && !holds(cand)) {
                    cur = cand;
                    progress = true;
                    continue;
                }
            }
            // candidate 2: flatten the row to its time-0 value
            {
                auto cand = cur;
                const auto& r = cur.rows[i];
                cand.rows[i] =
                    make_traj(r.dur, step_evolution<Y>::constant(r.ev.eval(rat(0))), r.sp);
                if (check_membership(cand.rows[i]).ok && !(cand == cur) && !holds(cand)) {
                    cur = cand;
                    progress = true;
                    continue;
                }
            }
            // candidate 3: zero duration
            {
                auto cand = cur;
                const auto& r = cur.rows[i];
                cand.rows[i] = make_traj(qtime(0), gen::flatten_from(r.ev, rat(0)), r.sp);
                if (check_membership(cand.rows[i]).ok && !(cand == cur) && !holds(cand)) {
                    cur = cand;
                    progress = true;
                    continue;
                }
            }
        }
    }
    return cur;
}

struct case_log {
    report* rep;
    int index;
    bool failed = false;

    void check(bool cond, const std::string& what, const std::string& instance = "") {
        if (cond || failed) return; // one failure per case keeps reports readable
        failed = true;
        rep->failures.push_back({index, what, instance});
    }
};

inline trajectory<int> retag(trajectory<int> t, space sp) {
    t.sp = sp;
    return t;
}

inline loop_table<int> retag_rows(loop_table<int> f, space sp) {
    f.sp = sp;
    for (auto& r : f.rows) r.sp = sp;
    return f;
}

/// Rows sealed through the retraction (and left tagged for the target bind).
inline loop_table<int> seal_rows(const loop_table<int>& f, space row_tag) {
    loop_table<int> out;
    out.sp = row_tag;
    for (const auto& r : f.rows) {
        auto s = seal(make_traj(r.dur, r.ev, space::h0m));
        s.sp = row_tag;
        out.rows.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------- monads --

inline void run_monad_case(report& rep, int idx, gen::source& s, space sp) {
    case_log log{&rep, idx};
    int nx = s.range(1, 4), ny = s.range(1, 4), nz = s.range(1, 4);
    auto f = gen::random_table(s, sp, nx, ny);
    auto g = gen::random_table(s, sp, ny, nz);
    auto m = gen::random_traj(s, sp, nx);
    int x0 = s.range(0, nx - 1);

    auto holds_left_unit = [&](const table_morphism<int>& fc) {
        return bind(sp, fc, unit(sp, x0)) == fc(x0);
    };
    if (!holds_left_unit(f)) {
        auto shrunk = shrink_table<int>(
            f, holds_left_unit, [&](const trajectory<int>&) { return unit(sp, 0); });
        log.check(false, "left unit: bind(f, unit(x)) != f(x)", render_table(shrunk));
        return;
    }

    auto eta = [sp](int v) { return unit(sp, v); };
    log.check(bind(sp, eta, m) == m, "right unit: bind(unit, m) != m", render(m));

    auto lhs = bind(sp, g, bind(sp, f, m));
    auto rhs = bind(sp, kleisli_compose(sp, g, f), m);
    log.check(lhs == rhs, "associativity: bind(g, bind(f, m)) != bind(g . f, m)",
              render_table(f) + " ; " + render_table(g) + " ; m = " + render(m));

    if (sp == space::hplus || sp == space::h) {
        auto out = bind(sp, f, m);
        auto memb = check_membership(out);
        log.check(memb.ok, "closure: bind output leaves the space (" + memb.clause + ")",
                  render(out));
    }
    if (sp == space::h) {
        auto direct = bind_h(f, m);
        auto composite = bind_h_via_retraction(f, m);
        log.check(direct == composite,
                  "direct extension disagrees with the retraction composite",
                  render_table(f) + " ; m = " + render(m));
    }
}

// ----------------------------------------------------------------- order --

inline void run_order_case(report& rep, int idx, gen::source& s) {
    case_log log{&rep, idx};
    auto c = gen::random_h0m(s);
    auto b = gen::restrict_below(s, c);
    auto a = gen::restrict_below(s, b);

    log.check(leq(a, a) && leq(b, b) && leq(c, c), "reflexivity fails", render(a));
    log.check(leq(a, b) && leq(b, c), "generator produced a non-chain",
              render(a) + " ; " + render(b) + " ; " + render(c));
    log.check(leq(a, c), "transitivity fails", render(a) + " ; " + render(b) + " ; " + render(c));
    if (leq(a, b) && leq(b, a))
        log.check(a.same_shape(b), "antisymmetry fails", render(a) + " ; " + render(b));
    log.check(leq(bottom<int>(), c), "bottom is not below everything", render(c));

    auto f = gen::random_table(s, space::h0m, 4, 4);
    log.check(bind_h0m(f, bottom<int>()) == bottom<int>(), "right strictness fails",
              render_table(f));

    // monotone in the trajectory argument
    log.check(leq(bind_h0m(f, a), bind_h0m(f, b)), "bind not monotone in the trajectory",
              render_table(f) + " ; " + render(a) + " ; " + render(b));

    // monotone in the morphism argument: f_low(x) below f(x) pointwise
    table_morphism<int> f_low;
    f_low.sp = space::h0m;
    for (const auto& row : f.rows) f_low.rows.push_back(gen::restrict_below(s, row));
    log.check(leq(bind_h0m(f_low, c), bind_h0m(f, c)), "bind not monotone in the morphism",
              render_table(f_low) + " ; " + render_table(f) + " ; m = " + render(c));

    // continuity over a stabilizing chain of restrictions
    rat c1 = s.small_rat(), c2 = c1 + s.small_rat(true);
    std::vector<trajectory<int>> chain{gen::restrict_below(s, c, maybe<rat>(c1)),
                                       gen::restrict_below(s, c, maybe<rat>(c2)), c, c};
    std::size_t ci = 0;
    auto next = [&]() -> std::optional<trajectory<int>> {
        if (ci >= chain.size()) return std::nullopt;
        return chain[ci++];
    };
    auto join = join_chain<int>(next, 10);
    std::size_t mi = 0;
    auto mapped = [&]() -> std::optional<trajectory<int>> {
        if (mi >= chain.size()) return std::nullopt;
        return bind_h0m(f, chain[mi++]);
    };
    auto mapped_join = join_chain<int>(mapped, 10);
    log.check(join.stabilized && mapped_join.stabilized &&
                  mapped_join.value == bind_h0m(f, join.value),
              "bind not continuous on a stabilizing chain", render(c));
}

// ------------------------------------------------------------- iteration --

inline loop_table<int> cotuple_free_iteration(const loop_table<int>& f) {
    return retag_rows(f, space::h);
}

inline void run_fixpoint_case(report& rep, int idx, gen::source& s, int budget) {
    case_log log{&rep, idx};
    int nx = s.range(1, 4), ny = s.range(1, 4);
    auto f = gen::random_loop_table(s, space::h, nx, ny);
    auto out = iter_h(f, budget);
    if (!out.stabilized()) {
        log.check(false, "iteration did not stabilize (generator bound violated)",
                  render_table(f));
        return;
    }
    auto holds = [&](const loop_table<int>& fc) {
        auto o = iter_h(fc, budget);
        if (!o.stabilized()) return true; // only judge comparable instances
        for (int x = 0; x < fc.domain_size(); ++x) {
            auto step = bind_h(
                [&](const loop_sum& v) {
                    return v.is_left() ? unit(space::h, v.left_value()) : o.exact(v.right_value());
                },
                make_traj(fc(x).dur, fc(x).ev, space::h));
            if (!(step == o.exact(x))) return false;
        }
        return true;
    };
    if (!holds(f)) {
        auto shrunk = shrink_table<loop_sum>(
            f, holds, [](const trajectory<loop_sum>&) {
                return make_traj(qtime(0), step_evolution<loop_sum>::constant_of(loop_sum::left(0)),
                                 space::h);
            });
        log.check(false, "fixpoint law fails", render_table(shrunk));
    }
}

inline trajectory<loop_sum> map_left(const trajectory<int>& t) {
    return make_traj(t.dur, t.ev.map([](int v) { return loop_sum::left(v); }), t.sp);
}

inline void run_naturality_case(report& rep, int idx, gen::source& s, int budget) {
    case_log log{&rep, idx};
    int nx = s.range(1, 4), ny = s.range(1, 4), nz = s.range(1, 4);
    auto f = gen::random_loop_table(s, space::h, nx, ny);
    auto g = gen::random_table(s, space::h, ny, nz);

    auto fout = iter_h(f, budget);
    if (!fout.stabilized()) {
        log.check(false, "iteration did not stabilize", render_table(f));
        return;
    }

    loop_table<int> r;
    r.sp = space::h;
    for (int x = 0; x < nx; ++x) {
        r.rows.push_back(bind_h(
            [&](const loop_sum& v) -> trajectory<loop_sum> {
                if (v.is_left()) {
                    auto t = map_left(g(v.left_value()));
                    t.sp = space::h;
                    return t;
                }
                return unit(space::h, loop_sum::right(v.right_value()));
            },
            make_traj(f(x).dur, f(x).ev, space::h)));
    }
    auto rout = iter_h(r, budget);
    if (!rout.stabilized()) {
        log.check(false, "rewritten iteration did not stabilize", render_table(r));
        return;
    }
    for (int x = 0; x < nx; ++x) {
        auto lhs = bind_h(g, fout.exact(x));
        log.check(lhs == rout.exact(x), "naturality fails",
                  render_table(f) + " ; g = " + render_table(g));
        if (log.failed) return;
    }
}

inline void run_codiagonal_case(report& rep, int idx, gen::source& s, int budget) {
    case_log log{&rep, idx};
    int nx = s.range(1, 4), ny = s.range(1, 3);
    auto f = gen::random_codiag_table(s, nx, ny);

    auto collapsed = iter_h(unhat(f), budget);
    auto inner = iter_h(f, budget);
    if (!collapsed.stabilized() || !inner.stabilized()) {
        log.check(false, "iteration did not stabilize", "");
        return;
    }
    loop_table<int> outer;
    outer.sp = space::h;
    for (int x = 0; x < nx; ++x) outer.rows.push_back(inner.exact(x));
    auto oout = iter_h(outer, budget);
    if (!oout.stabilized()) {
        log.check(false, "outer iteration did not stabilize", "");
        return;
    }
    for (int x = 0; x < nx; ++x) {
        log.check(oout.exact(x) == collapsed.exact(x), "codiagonal fails", render_table(f));
        if (log.failed) return;
    }
}

inline void run_uniformity_case(report& rep, int idx, gen::source& s, int budget) {
    case_log log{&rep, idx};
    int nx = s.range(1, 4), ny = s.range(1, 4), nz = s.range(1, 4);
    std::vector<int> h(static_cast<std::size_t>(nz));
    for (auto& v : h) v = s.range(0, nx - 1);

    std::vector<int> image;
    for (int v : h)
        if (std::find(image.begin(), image.end(), v) == image.end()) image.push_back(v);
    std::sort(image.begin(), image.end());

    auto pick_image = [&](int near) {
        return image[static_cast<std::size_t>(near) % image.size()];
    };
    auto first_preimage = [&](int x) {
        for (int z = 0; z < nz; ++z)
            if (h[static_cast<std::size_t>(z)] == x) return z;
        return 0; // unreachable for image values
    };

    auto f = gen::random_loop_table(s, space::h, nx, ny);
    // clamp continue-targets into the image of h, keeping boundary descent
    for (int x = 0; x < nx; ++x) {
        auto& row = f.rows[static_cast<std::size_t>(x)];
        const auto& ev = row.ev;
        std::vector<maybe<loop_sum>> at, after;
        auto clamp_interior = [&](const maybe<loop_sum>& v) -> maybe<loop_sum> {
            if (!v || v->is_left()) return v;
            return maybe<loop_sum>(loop_sum::right(pick_image(v->right_value())));
        };
        for (std::size_t i = 0; i < ev.breakpoint_count(); ++i) {
            at.push_back(clamp_interior(ev.at_breakpoint(i)));
            after.push_back(clamp_interior(ev.after_breakpoint(i)));
        }
        step_evolution<loop_sum> clamped =
            step_evolution<loop_sum>::from_raw(ev.breakpoints(), at, after);
        // boundary: keep strict descent inside the image or exit
        if (row.dur.is_finite()) {
            auto bval = clamped.eval(row.dur.value());
            if (bval && bval->is_right()) {
                int tgt = -1;
                for (int cand : image)
                    if (cand < x) tgt = cand;
                maybe<loop_sum> b = tgt >= 0 ? maybe<loop_sum>(loop_sum::right(tgt))
                                             : maybe<loop_sum>(loop_sum::left(s.range(0, ny - 1)));
                clamped = gen::flatten_from(clamped, row.dur.value());
                std::vector<rat> bp = clamped.breakpoints();
                std::vector<maybe<loop_sum>> a2, g2;
                for (std::size_t i = 0; i < bp.size(); ++i) {
                    a2.push_back(clamped.at_breakpoint(i));
                    g2.push_back(clamped.after_breakpoint(i));
                }
                a2.back() = b;
                g2.back() = b;
                clamped = step_evolution<loop_sum>::from_raw(std::move(bp), std::move(a2),
                                                             std::move(g2));
            }
        }
        row = make_traj(row.dur, std::move(clamped), space::h);
        if (!check_membership(row).ok)
            row = make_traj(qtime(0), step_evolution<loop_sum>::constant_of(loop_sum::left(0)),
                            space::h);
    }

    // g := the lift of f along h; the premise f . h = T(id+h) . g then holds
    loop_table<int> g;
    g.sp = space::h;
    for (int z = 0; z < nz; ++z) {
        const auto& row = f(h[static_cast<std::size_t>(z)]);
        g.rows.push_back(make_traj(row.dur, row.ev.map([&](const loop_sum& v) {
            if (v.is_left()) return v;
            return loop_sum::right(first_preimage(v.right_value()));
        }), space::h));
    }
    for (int z = 0; z < nz; ++z) {
        auto mapped = make_traj(g(z).dur, g(z).ev.map([&](const loop_sum& v) {
            if (v.is_left()) return v;
            return loop_sum::right(h[static_cast<std::size_t>(v.right_value())]);
        }), space::h);
        log.check(mapped == f(h[static_cast<std::size_t>(z)]),
                  "generator broke the uniformity premise", render_table(g));
        if (log.failed) return;
    }

    auto fout = iter_h(f, budget);
    auto gout = iter_h(g, budget);
    if (!fout.stabilized() || !gout.stabilized()) {
        log.check(false, "iteration did not stabilize", render_table(f));
        return;
    }
    for (int z = 0; z < nz; ++z) {
        log.check(fout.exact(h[static_cast<std::size_t>(z)]) == gout.exact(z),
                  "uniformity fails", render_table(f) + " ; " + render_table(g));
        if (log.failed) return;
    }
}

// ------------------------------------------------------------ guardedness --

inline void check_swap_rejected(report& rep) {
    loop_table<int> swap;
    swap.sp = space::hplus;
    swap.rows = {
        make_traj(qtime(0), step_evolution<loop_sum>::constant_of(loop_sum::right(1)),
                  space::hplus),
        make_traj(qtime(0), step_evolution<loop_sum>::constant_of(loop_sum::right(0)),
                  space::hplus)};
    if (is_progressive(swap))
        rep.failures.push_back({-1, "swap witness accepted by is_progressive", ""});
    bool threw = false;
    try {
        iter_hplus(swap, 4);
    } catch (const not_progressive_error&) {
        threw = true;
    }
    if (!threw)
        rep.failures.push_back({-1, "iter_hplus accepted the swap witness", ""});
}

inline void run_guard_trv_case(report& rep, int idx, gen::source& s) {
    case_log log{&rep, idx};
    auto f = gen::random_table(s, space::hplus, s.range(1, 4), 4);
    loop_table<int> injected;
    injected.sp = space::hplus;
    for (const auto& row : f.rows) injected.rows.push_back(map_left(row));
    log.check(is_progressive(injected), "post-composition with the exit injection not progressive",
              render_table(f));
}

inline void run_guard_sum_case(report& rep, int idx, gen::source& s) {
    case_log log{&rep, idx};
    auto f = gen::random_progressive_table(s, s.range(1, 3), 4);
    auto g = gen::random_progressive_table(s, s.range(1, 3), 4);
    loop_table<int> cot;
    cot.sp = space::hplus;
    cot.rows = f.rows;
    cot.rows.insert(cot.rows.end(), g.rows.begin(), g.rows.end());
    log.check(is_progressive(cot), "cotuple of progressive morphisms not progressive",
              render_table(f) + " ; " + render_table(g));
}

inline void run_guard_cmp_case(report& rep, int idx, gen::source& s) {
    case_log log{&rep, idx};
    int nx = s.range(1, 4), ny = s.range(1, 3), nz = s.range(1, 3);
    // f : X -> T(Y+Z) progressive in Z; g : Y -> T(V+W) progressive in W;
    // h : Z -> T(V+W) arbitrary
    auto f = gen::random_progressive_table(s, nx, ny); // exits name Y elements
    auto g = gen::random_progressive_table(s, ny, 4);
    auto h = gen::random_loop_table(s, space::hplus, nz, 4);
    // rewire f's continue-targets into Z's range
    for (auto& row : f.rows)
        row = make_traj(row.dur, row.ev.map([&](const loop_sum& v) {
            if (v.is_left()) return v;
            return loop_sum::right(v.right_value() % nz);
        }), row.sp);

    auto composed = [&](int x) {
        return bind_hplus(
            [&](const loop_sum& v) { return v.is_left() ? g(v.left_value()) : h(v.right_value()); },
            f(x));
    };
    for (int x = 0; x < nx; ++x) {
        auto out = composed(x);
        auto v0 = out.ev.eval(rat(0));
        log.check(v0.has_value() && v0->is_left(),
                  "composition axiom fails: time-0 value continues",
                  render_table(f) + " ; " + render_table(g) + " ; " + render_table(h));
        if (log.failed) return;
    }
}

// ------------------------------------------------------------- retraction --

inline void run_retraction_case(report& rep, int idx, gen::source& s, int budget) {
    case_log log{&rep, idx};
    int nx = s.range(1, 4), ny = s.range(1, 4);

    // the retraction preserves Kleisli extension
    auto f = gen::random_table(s, space::h0m, nx, ny);
    auto m = gen::random_h0m(s, nx);
    auto lhs = seal(bind_h0m(f, m));
    auto sealed_f = [&](int x) { return seal(f(x)); };
    auto rhs = bind_h([&](int x) { return sealed_f(x); }, seal(m));
    log.check(lhs == rhs, "retraction is not a monad morphism on this instance",
              render_table(f) + " ; m = " + render(m));

    // iteration-congruence
    auto fl = gen::random_loop_table(s, space::h0m, nx, ny);
    auto direct = iter_h0m(fl, budget);
    auto through = iter_h0m(retag_rows(seal_rows(fl, space::h0m), space::h0m), budget);
    if (!direct.stabilized() || !through.stabilized()) {
        log.check(false, "iteration did not stabilize", render_table(fl));
        return;
    }
    for (int x = 0; x < nx; ++x) {
        auto l = retag(direct.exact(x), space::h0m);
        auto r = retag(through.exact(x), space::h0m);
        log.check(seal(l) == seal(r), "iteration-congruence fails", render_table(fl));
        if (log.failed) return;
    }
}

/// The printed witness that the section is not a monad morphism, asserted in
/// both directions, plus the time-0 reconstruction's sealed fixpoint.
inline void check_retraction_witnesses(report& rep) {
    // section side: extension in the partial space leaves the closed space
    auto f = [](const rat& x) {
        if (x == 0)
            return make_traj(time_q::infinity(), step_evolution<rat>::undefined_everywhere(),
                             space::h);
        return make_traj(qtime(1), step_evolution<rat>::constant_of(rat(1)), space::h);
    };
    auto e = step_evolution<rat>::from_raw({rat(0), rat(1)},
                                           {maybe<rat>(rat(0)), maybe<rat>(rat(1))},
                                           {maybe<rat>(rat(0)), maybe<rat>(rat(1))});
    auto m = make_traj(time_q::infinity(), e, space::h);
    auto via_h0m = bind_h0m([&](const rat& x) { return widen(f(x)); }, widen(m));
    auto retagged = make_traj(via_h0m.dur, via_h0m.ev, space::h);
    if (check_membership(retagged).ok)
        rep.failures.push_back(
            {-1, "witness failure expected: section route stayed inside the closed space", ""});
    auto direct = bind_h(f, m);
    if (!check_membership(direct).ok)
        rep.failures.push_back({-1, "direct extension left the closed space on the witness", ""});
    if (!(direct.dur.is_infinite() && direct.ev.is_undefined_everywhere()))
        rep.failures.push_back({-1, "witness direct extension is not the empty trajectory", ""});

    // the reconstruction: continue at time 0, exit at positive times
    loop_table<int> recon;
    recon.sp = space::h0m;
    recon.rows = {make_traj(
        qtime(1),
        step_evolution<loop_sum>::from_raw({rat(0)}, {maybe<loop_sum>(loop_sum::right(0))},
                                           {maybe<loop_sum>(loop_sum::left(1))}),
        space::h0m)};
    auto direct_it = iter_h0m(recon, 16);
    auto through_it = iter_h0m(retag_rows(seal_rows(recon, space::h0m), space::h0m), 16);
    if (!direct_it.stabilized() || !through_it.stabilized()) {
        rep.failures.push_back({-1, "reconstruction iteration did not stabilize", ""});
        return;
    }
    auto l = retag(direct_it.exact(0), space::h0m);
    auto r = retag(through_it.exact(0), space::h0m);
    if (!(seal(l) == seal(r)))
        rep.failures.push_back({-1, "iteration-congruence fails on the reconstruction", ""});
    auto prefix = direct_it.exact(0).ev.defined_prefix();
    if (prefix.total || !(prefix.end == qtime(0)) || prefix.downward_closed)
        rep.failures.push_back({-1, "reconstruction fixpoint does not have domain (0,inf)", ""});
}

// ------------------------------------------------------------ restriction --

inline void run_restriction_case(report& rep, int idx, gen::source& s, int budget) {
    case_log log{&rep, idx};
    int nx = s.range(1, 4), ny = s.range(1, 4);
    auto f = gen::random_progressive_table(s, nx, ny);
    iter_outcome<int> out = iter_hplus(f, budget);
    if (!out.stabilized()) {
        log.check(false, "progressive iteration did not stabilize", render_table(f));
        return;
    }
    loop_table<int> lifted;
    lifted.sp = space::h;
    for (const auto& row : f.rows) {
        auto t = make_traj(row.dur, row.ev, space::hplus);
        lifted.rows.push_back(seal_progressive(t));
    }
    auto hout = iter_h(lifted, budget);
    if (!hout.stabilized()) {
        log.check(false, "lifted iteration did not stabilize", render_table(lifted));
        return;
    }
    for (int x = 0; x < nx; ++x) {
        auto lhs = seal_progressive(exact_hplus(out, x));
        auto rhs = hout.exact(x);
        log.check(lhs == rhs, "restriction identity fails", render_table(f));
        if (log.failed) return;
        // the pointwise protocol agrees at the union of breakpoints
        for (const rat& t : rhs.ev.breakpoints()) {
            auto q = hout.at(x, t, budget);
            bool same = (q.k == point_answer<int>::kind::defined)
                            ? (rhs.ev.eval(t) == q.value)
                            : !rhs.ev.eval(t).has_value();
            log.check(same, "pointwise query disagrees with the exact answer", render(rhs));
            if (log.failed) return;
        }
    }
}

// ---------------------------------------------------------- decomposition --

inline void run_decomposition_case(report& rep, int idx, gen::source& s, int budget) {
    case_log log{&rep, idx};
    int nx = s.range(1, 4), ny = s.range(1, 4);
    auto f = gen::random_loop_table(s, space::h, nx, ny);
    auto split = hat(f);
    auto inner = iter_h(split, budget);
    auto direct = iter_h(f, budget);
    if (!inner.stabilized() || !direct.stabilized()) {
        log.check(false, "iteration did not stabilize", render_table(f));
        return;
    }
    loop_table<int> outer;
    outer.sp = space::h;
    for (int x = 0; x < nx; ++x) {
        outer.rows.push_back(inner.exact(x));
        auto v0 = outer.rows.back().ev.eval(rat(0));
        log.check(!v0 || v0->is_left(), "singular part left a continue at time 0",
                  render_table(f));
        if (log.failed) return;
    }
    auto oout = iter_h(outer, budget);
    if (!oout.stabilized()) {
        log.check(false, "outer iteration did not stabilize", render_table(outer));
        return;
    }
    for (int x = 0; x < nx; ++x) {
        log.check(oout.exact(x) == direct.exact(x), "decomposition identity fails",
                  render_table(f));
        if (log.failed) return;
    }
}

} // namespace detail

inline std::vector<std::string> suite_names() {
    return {"monad-h0",  "monad-h0m", "monad-hplus", "monad-h",     "order",
            "fixpoint",  "naturality", "codiagonal",  "uniformity",  "guard-trv",
            "guard-sum", "guard-cmp",  "retraction",  "restriction", "decomposition"};
}

inline report run_suite(const std::string& name, config cfg) {
    report rep;
    rep.suite = name;
    rep.cases = cfg.cases;
    rep.seed = cfg.seed;
    gen::source s(cfg.seed);

    auto loop = [&](auto&& one) {
        for (int i = 0; i < cfg.cases; ++i) one(rep, i, s);
    };

    if (name == "monad-h0")
        loop([&](report& r, int i, gen::source& g) { detail::run_monad_case(r, i, g, space::h0); });
    else if (name == "monad-h0m")
        loop([&](report& r, int i, gen::source& g) { detail::run_monad_case(r, i, g, space::h0m); });
    else if (name == "monad-hplus")
        loop([&](report& r, int i, gen::source& g) { detail::run_monad_case(r, i, g, space::hplus); });
    else if (name == "monad-h")
        loop([&](report& r, int i, gen::source& g) { detail::run_monad_case(r, i, g, space::h); });
    else if (name == "order" || name == "order-suite")
        loop([&](report& r, int i, gen::source& g) { detail::run_order_case(r, i, g); });
    else if (name == "fixpoint")
        loop([&](report& r, int i, gen::source& g) { detail::run_fixpoint_case(r, i, g, cfg.budget); });
    else if (name == "naturality")
        loop([&](report& r, int i, gen::source& g) { detail::run_naturality_case(r, i, g, cfg.budget); });
    else if (name == "codiagonal")
        loop([&](report& r, int i, gen::source& g) { detail::run_codiagonal_case(r, i, g, cfg.budget); });
    else if (name == "uniformity")
        loop([&](report& r, int i, gen::source& g) { detail::run_uniformity_case(r, i, g, cfg.budget); });
    else if (name == "guard-trv") {
        detail::check_swap_rejected(rep);
        loop([&](report& r, int i, gen::source& g) { detail::run_guard_trv_case(r, i, g); });
    } else if (name == "guard-sum") {
        detail::check_swap_rejected(rep);
        loop([&](report& r, int i, gen::source& g) { detail::run_guard_sum_case(r, i, g); });
    } else if (name == "guard-cmp") {
        detail::check_swap_rejected(rep);
        loop([&](report& r, int i, gen::source& g) { detail::run_guard_cmp_case(r, i, g); });
    } else if (name == "retraction") {
        detail::check_retraction_witnesses(rep);
        loop([&](report& r, int i, gen::source& g) { detail::run_retraction_case(r, i, g, cfg.budget); });
    } else if (name == "restriction")
        loop([&](report& r, int i, gen::source& g) { detail::run_restriction_case(r, i, g, cfg.budget); });
    else if (name == "decomposition")
        loop([&](report& r, int i, gen::source& g) { detail::run_decomposition_case(r, i, g, cfg.budget); });
    else
        throw std::invalid_argument("unknown law suite: " + name);
    return rep;
}

} // namespace hybrid::laws
