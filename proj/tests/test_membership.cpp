#include <catch2/catch_amalgamated.hpp>

#include "hybrid/trajectory.hpp"

using namespace hybrid;

namespace {

step_evolution<int> ev_dom_open_from_zero() {
    // undefined exactly at 0, value 1 on (0,inf)
    return step_evolution<int>::from_raw({rat(0)}, {maybe<int>()}, {maybe<int>(1)});
}

step_evolution<int> ev_dom_upto(const rat& r, bool closed) {
    return closed ? step_evolution<int>::from_raw({rat(0), r}, {maybe<int>(5), maybe<int>(5)},
                                                  {maybe<int>(5), maybe<int>()})
                  : step_evolution<int>::from_raw({rat(0), r}, {maybe<int>(5), maybe<int>()},
                                                  {maybe<int>(5), maybe<int>()});
}

} // namespace

TEST_CASE("unit is a member everywhere") {
    for (space sp : {space::h0, space::h0m, space::hplus, space::h}) {
        auto t = make_traj(qtime(0), step_evolution<int>::constant_of(3), sp);
        CHECK(check_membership(t).ok);
    }
}

TEST_CASE("H rejects a non-downward-closed domain") {
    auto t = make_traj(qtime(1), ev_dom_open_from_zero(), space::h);
    auto r = check_membership(t);
    CHECK(!r.ok);
    CHECK(r.clause == "domain not downward closed");
}

TEST_CASE("H rejects finite duration with partial evolution") {
    auto t = make_traj(qtime(2), ev_dom_upto(rat(1), false), space::h);
    auto r = check_membership(t);
    CHECK(!r.ok);
    CHECK(r.clause == "partial evolution with finite duration");
}

TEST_CASE("H accepts both divergence classes and totals") {
    CHECK(check_membership(make_traj(time_q::infinity(), ev_dom_upto(rat(1), false), space::h)).ok);
    CHECK(check_membership(make_traj(time_q::infinity(), ev_dom_upto(rat(1), true), space::h)).ok);
    CHECK(check_membership(
              make_traj(time_q::infinity(), step_evolution<int>::undefined_everywhere(), space::h))
              .ok);
    CHECK(check_membership(make_traj(qtime(1),
                                     step_evolution<int>::from_raw({rat(0), rat(1)},
                                                                   {maybe<int>(0), maybe<int>(2)},
                                                                   {maybe<int>(0), maybe<int>(2)}),
                                     space::h))
              .ok);
}

TEST_CASE("H0 needs totality and flattening") {
    auto partial = make_traj(qtime(1), ev_dom_upto(rat(1), false), space::h0);
    CHECK(!check_membership(partial).ok);

    auto unflat = make_traj(qtime(1),
                            step_evolution<int>::from_raw({rat(0), rat(2)},
                                                          {maybe<int>(0), maybe<int>(9)},
                                                          {maybe<int>(0), maybe<int>(9)}),
                            space::h0);
    auto r = check_membership(unflat);
    CHECK(!r.ok);
    CHECK(r.clause == "flattening fails beyond duration");

    // infinite duration: flattening vacuous
    auto open = make_traj(time_q::infinity(),
                          step_evolution<int>::from_raw({rat(0), rat(2)},
                                                        {maybe<int>(0), maybe<int>(9)},
                                                        {maybe<int>(0), maybe<int>(9)}),
                          space::h0);
    CHECK(check_membership(open).ok);
}

TEST_CASE("H0M treats undefined as an ordinary value") {
    auto t = make_traj(qtime(1), ev_dom_upto(rat(1), false), space::h0m);
    CHECK(check_membership(t).ok);
    // but flattening with the undefined value still applies
    auto bad = make_traj(qtime(3), ev_dom_open_from_zero(), space::h0m);
    CHECK(check_membership(bad).ok); // constant 1 from (0,inf); flat at 3
    auto unflat =
        make_traj(qtime(1, 2),
                  step_evolution<int>::from_raw({rat(0), rat(1)}, {maybe<int>(), maybe<int>(4)},
                                                {maybe<int>(), maybe<int>(4)}),
                  space::h0m);
    CHECK(!check_membership(unflat).ok);
}

TEST_CASE("Hplus membership: total, or domain exactly [0,dur) with dur > 0") {
    CHECK(check_membership(make_traj(qtime(2), ev_dom_upto(rat(2), false), space::hplus)).ok);
    CHECK(check_membership(
              make_traj(qtime(1), step_evolution<int>::constant_of(1), space::hplus))
              .ok);

    auto everywhere_undef =
        make_traj(qtime(1), step_evolution<int>::undefined_everywhere(), space::hplus);
    auto r0 = check_membership(everywhere_undef);
    CHECK(!r0.ok);
    CHECK(r0.clause == "evolution undefined everywhere");

    // closed domain [0,1] with dur 1 is not progressive material
    auto closed = make_traj(qtime(1), ev_dom_upto(rat(1), true), space::hplus);
    CHECK(!check_membership(closed).ok);

    // domain shorter than the duration
    auto shortdom = make_traj(qtime(2), ev_dom_upto(rat(1), false), space::hplus);
    CHECK(!check_membership(shortdom).ok);

    // Hplus members widen into H0M members (subfunctor property)
    auto ok = make_traj(qtime(2), ev_dom_upto(rat(2), false), space::hplus);
    auto wid = make_traj(ok.dur, ok.ev, space::h0m);
    CHECK(check_membership(wid).ok);
}
