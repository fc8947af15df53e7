#include <catch2/catch_amalgamated.hpp>

#include "hybrid/gen.hpp"
#include "hybrid/kleisli.hpp"

using namespace hybrid;

namespace {

step_evolution<int> two_piece(int a, const rat& cut, int b) {
    return step_evolution<int>::from_raw({rat(0), cut}, {maybe<int>(a), maybe<int>(b)},
                                         {maybe<int>(a), maybe<int>(b)});
}

} // namespace

TEST_CASE("unit shapes") {
    auto u = unit(space::h0, 5);
    CHECK(u.dur == qtime(0));
    CHECK(u.ev == step_evolution<int>::constant_of(5));
    CHECK(check_membership(unit(space::h, 3)).ok);
    CHECK(!(unit(space::h0m, 3) == bottom<int>()));
}

TEST_CASE("bind_h0 unit laws") {
    auto f = [](int x) { return make_traj(qtime(1), two_piece(x, rat(1), x + 1), space::h0); };
    auto m = make_traj(qtime(1), two_piece(0, rat(1), 1), space::h0);

    CHECK(bind_h0(f, unit(space::h0, 4)) == f(4));
    auto eta = [](int x) { return unit(space::h0, x); };
    CHECK(bind_h0(eta, m) == m);
}

TEST_CASE("bind_h0 splices the continuation after the duration") {
    auto f = [](int x) { return make_traj(qtime(1), two_piece(x, rat(1), x + 1), space::h0); };
    auto m = make_traj(qtime(1), two_piece(0, rat(1), 1), space::h0);
    auto r = bind_h0(f, m);
    CHECK(r.dur == qtime(2));
    CHECK(r.ev.eval(rat(1, 2)) == maybe<int>(0));  // f0 of interior value 0
    CHECK(r.ev.eval(rat(3, 2)) == maybe<int>(1));  // f(1) evaluated at local 1/2
    CHECK(r.ev.eval(rat(3)) == maybe<int>(2));     // flattened continuation
    CHECK(check_membership(r).ok);
}

TEST_CASE("bind_h0 with infinite duration maps through the time-0 component") {
    auto f = [](int x) { return make_traj(qtime(1), two_piece(x * 10, rat(1), 0), space::h0); };
    auto m = make_traj(time_q::infinity(), two_piece(1, rat(2), 2), space::h0);
    auto r = bind_h0(f, m);
    CHECK(r.dur.is_infinite());
    CHECK(r.ev.eval(rat(1)) == maybe<int>(10));
    CHECK(r.ev.eval(rat(5)) == maybe<int>(20));
}

TEST_CASE("bind_h0m is right-strict") {
    auto f = [](int x) { return unit(space::h0m, x + 1); };
    CHECK(bind_h0m(f, bottom<int>()) == bottom<int>());
}

TEST_CASE("bind_h0m is not left-strict") {
    auto to_bottom = [](int) { return bottom<int>(); };
    auto m = make_traj(qtime(1), step_evolution<int>::undefined_everywhere(), space::h0m);
    auto r = bind_h0m(to_bottom, m);
    CHECK(r == m);
    CHECK(!(r == bottom<int>()));
}

TEST_CASE("bind_h0m unit law and undefined propagation") {
    auto eta = [](int x) { return unit(space::h0m, x); };
    auto m = make_traj(qtime(2),
                       step_evolution<int>::from_raw({rat(0), rat(1), rat(2)},
                                                     {maybe<int>(4), maybe<int>(), maybe<int>(4)},
                                                     {maybe<int>(4), maybe<int>(), maybe<int>(4)}),
                       space::h0m);
    CHECK(bind_h0m(eta, m) == m);

    // endpoint undefined: duration kept, nothing spliced
    auto cut = make_traj(qtime(1),
                         step_evolution<int>::from_raw({rat(0), rat(1)},
                                                       {maybe<int>(4), maybe<int>()},
                                                       {maybe<int>(4), maybe<int>()}),
                         space::h0m);
    auto f = [](int x) { return make_traj(qtime(3), step_evolution<int>::constant_of(x), space::h0m); };
    auto r = bind_h0m(f, cut);
    CHECK(r.dur == qtime(1));
    CHECK(r.ev.eval(rat(1)) == maybe<int>());
    CHECK(r.ev.eval(rat(2)) == maybe<int>());
    CHECK(r.ev.eval(rat(1, 2)) == maybe<int>(4));
}

TEST_CASE("bind_hplus endpoint-undefined case keeps the duration") {
    auto m = make_traj(qtime(1),
                       step_evolution<int>::from_raw({rat(0), rat(1)},
                                                     {maybe<int>(4), maybe<int>()},
                                                     {maybe<int>(4), maybe<int>()}),
                       space::hplus);
    auto f = [](int x) {
        return make_traj(qtime(2), step_evolution<int>::constant_of(x * 2), space::hplus);
    };
    auto r = bind_hplus(f, m);
    CHECK(r.dur == qtime(1));
    CHECK(r.ev.eval(rat(1, 2)) == maybe<int>(8));
    CHECK(r.ev.eval(rat(1)) == maybe<int>());
    CHECK(check_membership(r).ok);
}

TEST_CASE("bind_hplus agrees with bind_h0m when the endpoint is defined") {
    auto m = make_traj(qtime(1), two_piece(1, rat(1, 2), 2), space::hplus);
    auto fp = [](int x) { return make_traj(qtime(1), two_piece(x, rat(1), x + 1), space::hplus); };
    auto fm = [](int x) { return make_traj(qtime(1), two_piece(x, rat(1), x + 1), space::h0m); };
    auto a = bind_hplus(fp, m);
    auto b = bind_h0m(fm, make_traj(m.dur, m.ev, space::h0m));
    CHECK(a.same_shape(b));
    CHECK(check_membership(a).ok);
    CHECK(bind_hplus([](int x) { return unit(space::hplus, x); }, m) == m);
}

TEST_CASE("bind_h total path splices like the partial space") {
    auto m = make_traj(qtime(1), two_piece(1, rat(1, 2), 2), space::h);
    auto f = [](int x) { return make_traj(qtime(1), two_piece(x, rat(1), x + 1), space::h); };
    auto r = bind_h(f, m);
    CHECK(r.dur == qtime(2));
    CHECK(r.ev.eval(rat(0)) == maybe<int>(1));
    CHECK(r.ev.eval(rat(3, 4)) == maybe<int>(2));
    CHECK(r.ev.eval(rat(3, 2)) == maybe<int>(2));
    CHECK(r.ev.eval(rat(5, 2)) == maybe<int>(3));
    CHECK(check_membership(r).ok);
    CHECK(bind_h([](int x) { return unit(space::h, x); }, m) == m);
    CHECK(bind_h_via_retraction(f, m).same_shape(r));
}

TEST_CASE("bind_h truncates at the first pointwise-undefined continuation") {
    // the printed non-monad-morphism witness: f(0) diverges immediately,
    // f(t>0) terminates; the input visits 0 at time 0
    auto f = [](const rat& x) {
        if (x == 0)
            return make_traj(time_q::infinity(), step_evolution<rat>::undefined_everywhere(),
                             space::h);
        return make_traj(qtime(1), step_evolution<rat>::constant_of(rat(1)), space::h);
    };
    auto e = step_evolution<rat>::from_raw({rat(0), rat(1)}, {maybe<rat>(rat(0)), maybe<rat>(rat(1))},
                                           {maybe<rat>(rat(0)), maybe<rat>(rat(1))});
    auto m = make_traj(time_q::infinity(), e, space::h);
    REQUIRE(check_membership(m).ok);

    // the partial-space route produces a gap at 0, violating membership in H
    auto fw = [&](const rat& x) { return widen(f(x)); };
    auto via_h0m = bind_h0m(fw, widen(m));
    CHECK(via_h0m.ev.eval(rat(0)) == maybe<rat>());
    CHECK(via_h0m.ev.eval(rat(2)) == maybe<rat>(rat(1)));
    auto retagged = make_traj(via_h0m.dur, via_h0m.ev, space::h);
    auto rep = check_membership(retagged);
    CHECK(!rep.ok);
    CHECK(rep.clause == "domain not downward closed");

    // the divergence-closed extension collapses everything after the gap
    auto direct = bind_h(f, m);
    CHECK(direct.dur.is_infinite());
    CHECK(direct.ev.is_undefined_everywhere());
    CHECK(check_membership(direct).ok);
    CHECK(bind_h_via_retraction(f, m) == direct);
}

TEST_CASE("binds agree with the pointwise defining formulas at sampled times") {
    // independent oracle: evaluate the branch formulas one time instant at a
    // time instead of splicing piece structure
    gen::source s(424242);
    auto sample_points = [&](const trajectory<int>& m, const trajectory<int>& out) {
        std::vector<rat> pts = out.ev.breakpoints();
        for (const rat& b : m.ev.breakpoints()) pts.push_back(b);
        for (int i = 0; i < 25; ++i) pts.push_back(s.small_rat());
        return pts;
    };

    for (int inst = 0; inst < 300; ++inst) {
        auto f = gen::random_table(s, space::h0m, 4, 4);
        auto m = gen::random_h0m(s, 4);
        auto out = bind_h0m(f, m);
        auto f0 = [&](const maybe<int>& v) -> maybe<int> {
            if (!v) return std::nullopt;
            return f(*v).ev.eval(rat(0));
        };
        for (const rat& t : sample_points(m, out)) {
            maybe<int> expect;
            if (m.dur.is_infinite() || time_q::finite(t) <= m.dur) {
                expect = f0(m.ev.eval(t));
            } else {
                auto ed = m.ev.eval(m.dur.value());
                if (!ed)
                    expect = std::nullopt;
                else
                    expect = f(*ed).ev.eval(t - m.dur.value());
            }
            INFO("instance " << inst << " t=" << to_string(t) << " m=" << render(m));
            REQUIRE(out.ev.eval(t) == expect);
        }
        // duration formula
        if (m.dur.is_infinite()) {
            CHECK(out.dur.is_infinite());
        } else {
            auto ed = m.ev.eval(m.dur.value());
            time_q expect_dur = ed ? m.dur + f(*ed).dur : m.dur;
            CHECK(out.dur == expect_dur);
        }
    }

    for (int inst = 0; inst < 300; ++inst) {
        auto f = gen::random_table(s, space::hplus, 4, 4);
        auto m = gen::random_hplus(s, 4);
        auto out = bind_hplus(f, m);
        CHECK(check_membership(out).ok);
        for (const rat& t : sample_points(m, out)) {
            maybe<int> expect;
            if (m.dur.is_infinite()) {
                auto et = m.ev.eval(t);
                expect = et ? f(*et).ev.eval(rat(0)) : maybe<int>{};
            } else {
                const rat& d = m.dur.value();
                auto ed = m.ev.eval(d);
                if (!ed) {
                    auto et = m.ev.eval(t);
                    expect = (t < d && et) ? f(*et).ev.eval(rat(0)) : maybe<int>{};
                } else if (t < d) {
                    auto et = m.ev.eval(t);
                    expect = et ? f(*et).ev.eval(rat(0)) : maybe<int>{};
                } else {
                    expect = f(*ed).ev.eval(t - d);
                }
            }
            INFO("instance " << inst << " t=" << to_string(t) << " m=" << render(m));
            REQUIRE(out.ev.eval(t) == expect);
        }
    }
}

TEST_CASE("kleisli composition is associative with unit as identity") {
    auto f = [](int x) { return make_traj(qtime(1), two_piece(x, rat(1), x + 1), space::h0); };
    auto g = [](int x) { return make_traj(qtime(1, 2), step_evolution<int>::constant_of(2 * x), space::h0); };
    auto h = [](int x) { return unit(space::h0, x - 1); };

    auto gf = kleisli_compose(space::h0, g, f);
    auto hg = kleisli_compose(space::h0, h, g);
    auto left = kleisli_compose(space::h0, h, gf);
    auto right = kleisli_compose(space::h0, hg, f);
    for (int x = 0; x < 4; ++x) CHECK(left(x) == right(x));

    auto eta = [](int x) { return unit(space::h0, x); };
    auto fe = kleisli_compose(space::h0, f, eta);
    auto ef = kleisli_compose(space::h0, eta, f);
    for (int x = 0; x < 4; ++x) {
        CHECK(fe(x) == f(x));
        CHECK(ef(x) == f(x));
    }
}

TEST_CASE("choose selects pointwise") {
    auto f = [](int x) { return unit(space::h0, x + 1); };
    auto g = [](int x) { return unit(space::h0, x - 1); };
    auto always = choose(f, g, [](int) { return true; });
    CHECK(always(5) == f(5));
    auto same = choose(f, f, [](int x) { return x % 2 == 0; });
    CHECK(same(3) == f(3));
    auto speed = choose(f, g, [](int v) { return v <= 120; });
    CHECK(speed(100) == f(100));
    CHECK(speed(121) == g(121));
}
