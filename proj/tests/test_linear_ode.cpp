#include <catch2/catch_amalgamated.hpp>

#include "hybrid/linear_ode.hpp"
#include "oracle_rk.hpp"

#include <random>

using namespace hybrid::ode;

namespace {

dynamics make_dyn(int n, const std::vector<double>& a_rowmajor, const std::vector<double>& c) {
    dynamics d = dynamics::zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d.A(i, j) = a_rowmajor[static_cast<std::size_t>(i * n + j)];
    for (int i = 0; i < n; ++i) d.c(i) = c[static_cast<std::size_t>(i)];
    return d;
}

dynamics ball_dynamics() { return make_dyn(2, {0, 1, 0, 0}, {0, -9.8}); }

} // namespace

TEST_CASE("term, predicate and guard evaluation") {
    lin_term t = lin_term::variable(0, 1, 2.0);
    t += lin_term::literal(1.0, 1);
    CHECK(t.eval({3.0}) == 7.0);
    CHECK_THROWS_AS(t.eval({1.0, 2.0}), std::invalid_argument);

    auto psi = predicate::conj(predicate::atom_le(lin_term::variable(0, 2), lin_term::literal(0, 2)),
                               predicate::atom_le(lin_term::variable(1, 2), lin_term::literal(0, 2)));
    CHECK(!psi.eval({0.5, -1.0}));
    CHECK(psi.eval({-0.1, -1.0}));
    CHECK(psi.eval({0.0, 0.0}));

    auto g = guard::neg(guard::lt(lin_term::variable(0, 1), lin_term::literal(0, 1)));
    CHECK(g.eval({0.0}));
    CHECK(!g.eval({-0.5}));
    CHECK(guard::eq(lin_term::variable(0, 1), lin_term::literal(1, 1)).eval({1.0}));
    CHECK(guard::lit(false).children.empty());
}

TEST_CASE("flow_at closed forms") {
    auto still = dynamics::zero(3);
    vec x0{1.0, -2.0, 0.5};
    CHECK(flow_at(still, x0, 11.0) == x0);
    CHECK(flow_at(still, x0, 0.0) == x0);

    auto down = make_dyn(1, {0}, {-1});
    auto x = flow_at(down, {3.0}, 3.0);
    CHECK(std::abs(x[0]) < 1e-12);

    auto ball = ball_dynamics();
    for (double t : {0.1, 0.3, 0.7, 1.3}) {
        auto y = flow_at(ball, {1.0, 0.0}, t);
        CHECK(std::abs(y[0] - (1.0 - 4.9 * t * t)) < 1e-9);
        CHECK(std::abs(y[1] - (-9.8 * t)) < 1e-9);
    }
}

TEST_CASE("flow semigroup property") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> entry(-2.0, 2.0);
    for (int inst = 0; inst < 25; ++inst) {
        int n = 1 + static_cast<int>(rng() % 4);
        dynamics d = dynamics::zero(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) d.A(i, j) = entry(rng);
            d.c(i) = entry(rng);
        }
        vec x0(static_cast<std::size_t>(n));
        for (auto& v : x0) v = entry(rng);
        double t = std::abs(entry(rng)), s = std::abs(entry(rng));
        auto direct = flow_at(d, x0, t + s);
        auto hop = flow_at(d, flow_at(d, x0, t), s);
        double scale = 1.0;
        for (std::size_t i = 0; i < direct.size(); ++i) scale = std::max(scale, std::abs(direct[i]));
        for (std::size_t i = 0; i < direct.size(); ++i)
            CHECK(std::abs(direct[i] - hop[i]) <= 1e-9 * scale);
    }
}

TEST_CASE("flow_at agrees with an independent adaptive integrator") {
    std::mt19937_64 rng(20250809);
    std::uniform_real_distribution<double> entry(-2.0, 2.0);
    std::uniform_real_distribution<double> tdist(0.0, 10.0);
    for (int inst = 0; inst < 100; ++inst) {
        int n = 1 + static_cast<int>(rng() % 4);
        dynamics d = dynamics::zero(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) d.A(i, j) = entry(rng);
            d.c(i) = entry(rng);
        }
        vec x0(static_cast<std::size_t>(n));
        for (auto& v : x0) v = entry(rng);
        double t = tdist(rng);

        auto exact = flow_at(d, x0, t);
        auto rhs = [&](const oracle::vec& y) {
            oracle::vec dy(y.size());
            for (int i = 0; i < n; ++i) {
                double acc = d.c(i);
                for (int j = 0; j < n; ++j) acc += d.A(i, j) * y[static_cast<std::size_t>(j)];
                dy[static_cast<std::size_t>(i)] = acc;
            }
            return dy;
        };
        auto approx = oracle::integrate(rhs, x0, t);
        double scale = 1.0;
        for (double v : exact) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < exact.size(); ++i) {
            INFO("instance " << inst << " n=" << n << " t=" << t);
            CHECK(std::abs(exact[i] - approx[i]) <= 1e-7 * scale);
        }
    }
}

TEST_CASE("least_crossing on closed forms") {
    ode_options opt;
    opt.horizon = 100;

    auto up = make_dyn(1, {0}, {1});
    auto hit = least_crossing(up, {0.0}, predicate::atom_ge(lin_term::variable(0, 1),
                                                            lin_term::literal(1, 1)),
                              opt);
    REQUIRE(hit.found);
    CHECK(std::abs(hit.t - 1.0) <= opt.event_tol * 2);

    auto psi = predicate::conj(predicate::atom_le(lin_term::variable(0, 2), lin_term::literal(0, 2)),
                               predicate::atom_le(lin_term::variable(1, 2), lin_term::literal(0, 2)));
    auto ball = least_crossing(ball_dynamics(), {1.0, 0.0}, psi, opt);
    REQUIRE(ball.found);
    CHECK(std::abs(ball.t - std::sqrt(2.0 / 9.8)) <= 1e-6);

    // satisfaction is re-verified at the returned instant
    CHECK(psi.eval(flow_at(ball_dynamics(), {1.0, 0.0}, ball.t)));
    // and fails at scan points strictly before it
    for (double t = 0; t < ball.t - opt.event_tol; t += 0.01)
        CHECK(!psi.eval(flow_at(ball_dynamics(), {1.0, 0.0}, t)));

    // already satisfied at time 0
    auto zero = least_crossing(up, {5.0}, predicate::atom_ge(lin_term::variable(0, 1),
                                                             lin_term::literal(1, 1)),
                               opt);
    REQUIRE(zero.found);
    CHECK(zero.t == 0.0);

    // constant flow never satisfying the bound
    opt.horizon = 2.0;
    auto never = least_crossing(dynamics::zero(1), {0.0},
                                predicate::atom_ge(lin_term::variable(0, 1),
                                                   lin_term::literal(1, 1)),
                                opt);
    CHECK(!never.found);
    CHECK(!never.aborted_nonfinite);
}

TEST_CASE("interp_atomic shapes") {
    ode_options opt;
    // simultaneous assignment
    atomic_program assign;
    assign.k = atomic_program::kind::assign;
    lin_term xplus1 = lin_term::variable(0, 1);
    xplus1 += lin_term::literal(1, 1);
    assign.updates = {xplus1};
    auto run = interp_atomic(assign, {4.0}, opt);
    CHECK(run.duration == 0.0);
    REQUIRE(run.end.has_value());
    CHECK((*run.end)[0] == 5.0);
    CHECK(run.eval(0.0)[0] == 5.0);

    // wait(r): all derivatives zero for r time units
    atomic_program wait;
    wait.k = atomic_program::kind::ode_timed;
    wait.dyn = dynamics::zero(2);
    wait.bound_r = 2.5;
    auto wrun = interp_atomic(wait, {1.0, -1.0}, opt);
    CHECK(wrun.duration == 2.5);
    CHECK(wrun.eval(1.7) == vec{1.0, -1.0});
    CHECK(*wrun.end == vec{1.0, -1.0});

    // predicate-bounded fall of the ball
    atomic_program fall;
    fall.k = atomic_program::kind::ode_pred;
    fall.dyn = ball_dynamics();
    fall.bound_pred =
        predicate::conj(predicate::atom_le(lin_term::variable(0, 2), lin_term::literal(0, 2)),
                        predicate::atom_le(lin_term::variable(1, 2), lin_term::literal(0, 2)));
    auto frun = interp_atomic(fall, {1.0, 0.0}, opt);
    CHECK(std::abs(frun.duration - 0.451754) < 1e-4);
    auto mid = frun.eval(0.2);
    CHECK(std::abs(mid[0] - (1.0 - 4.9 * 0.04)) < 1e-9);

    // no crossing within the horizon: infinite duration, flagged
    atomic_program stuck;
    stuck.k = atomic_program::kind::ode_pred;
    stuck.dyn = dynamics::zero(1);
    stuck.bound_pred = predicate::atom_ge(lin_term::variable(0, 1), lin_term::literal(1, 1));
    ode_options small;
    small.horizon = 1.0;
    auto srun = interp_atomic(stuck, {0.0}, small);
    CHECK(std::isinf(srun.duration));
    CHECK(srun.none_within_horizon);
    CHECK(!srun.end.has_value());
}
