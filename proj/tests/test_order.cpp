#include <catch2/catch_amalgamated.hpp>

#include "hybrid/order.hpp"

using namespace hybrid;

namespace {

trajectory<int> h0m(time_q d, step_evolution<int> e) {
    return make_traj(std::move(d), std::move(e), space::h0m);
}

trajectory<int> bot() { return bottom<int>(); }

step_evolution<int> upto(const rat& r, int v) {
    return step_evolution<int>::from_raw({rat(0), r}, {maybe<int>(v), maybe<int>()},
                                         {maybe<int>(v), maybe<int>()});
}

} // namespace

TEST_CASE("bottom is below everything") {
    CHECK(leq(bot(), bot()));
    CHECK(leq(bot(), h0m(qtime(5), step_evolution<int>::constant_of(1))));
    CHECK(leq(bot(), h0m(time_q::infinity(), upto(rat(2), 3))));
}

TEST_CASE("the finished-computation clause pins the duration") {
    // growing undefined trajectories may grow in duration
    CHECK(leq(h0m(qtime(1), step_evolution<int>::undefined_everywhere()),
              h0m(qtime(2), step_evolution<int>::undefined_everywhere())));
    // but a trajectory with a defined endpoint cannot
    CHECK(!leq(h0m(qtime(1), step_evolution<int>::constant_of(7)),
               h0m(qtime(2), step_evolution<int>::constant_of(7))));
    CHECK(leq(h0m(qtime(1), step_evolution<int>::constant_of(7)),
              h0m(qtime(1), step_evolution<int>::constant_of(7))));
}

TEST_CASE("domain growth with pointwise agreement") {
    auto small = h0m(qtime(2), upto(rat(1), 5));
    auto big = h0m(qtime(2), step_evolution<int>::from_raw(
                                 {rat(0), rat(1), rat(2)},
                                 {maybe<int>(5), maybe<int>(5), maybe<int>()},
                                 {maybe<int>(5), maybe<int>(5), maybe<int>()}));
    CHECK(leq(small, big));
    CHECK(!leq(big, small));

    auto clash = h0m(qtime(2), step_evolution<int>::from_raw(
                                   {rat(0), rat(1)}, {maybe<int>(6), maybe<int>()},
                                   {maybe<int>(6), maybe<int>()}));
    CHECK(!leq(small, clash));
    CHECK(order_compare(small, clash) == order_result::incomparable);
}

TEST_CASE("order_compare classifies") {
    auto a = h0m(qtime(1), upto(rat(1), 5));
    CHECK(order_compare(a, a) == order_result::equal);
    CHECK(order_compare(bot(), a) == order_result::less);
    CHECK(order_compare(a, bot()) == order_result::greater);
}

TEST_CASE("join_chain returns a stabilizing chain's limit") {
    auto a = bot();
    auto b = h0m(qtime(1), step_evolution<int>::undefined_everywhere());
    auto c = h0m(qtime(1), step_evolution<int>::constant_of(9));
    std::vector<trajectory<int>> chain{a, b, c, c, c};
    std::size_t i = 0;
    auto next = [&]() -> std::optional<trajectory<int>> {
        if (i >= chain.size()) return std::nullopt;
        return chain[i++];
    };
    auto r = join_chain<int>(next, 100);
    CHECK(r.stabilized);
    CHECK(r.value == c);
}

TEST_CASE("join_chain on a constant chain") {
    auto c = h0m(qtime(1), step_evolution<int>::constant_of(2));
    auto next = [&]() -> std::optional<trajectory<int>> { return c; };
    auto r = join_chain<int>(next, 10);
    CHECK(r.stabilized);
    CHECK(r.value == c);
}

TEST_CASE("join_chain refuses to guess on growing durations") {
    int n = 0;
    auto next = [&]() -> std::optional<trajectory<int>> {
        return h0m(qtime(n++), step_evolution<int>::undefined_everywhere());
    };
    auto r = join_chain<int>(next, 10);
    CHECK(!r.stabilized);
    CHECK(r.value.dur == qtime(9));
}

TEST_CASE("join_chain reports order violations") {
    auto good = h0m(qtime(1), step_evolution<int>::constant_of(7));
    auto other = h0m(qtime(1), step_evolution<int>::constant_of(8));
    std::vector<trajectory<int>> chain{good, other};
    std::size_t i = 0;
    auto next = [&]() -> std::optional<trajectory<int>> {
        if (i >= chain.size()) return std::nullopt;
        return chain[i++];
    };
    CHECK_THROWS_AS(join_chain<int>(next, 10), chain_violation);
}
