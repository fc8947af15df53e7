#pragma once

#include "hybrid/lang.hpp"
#include "hybrid/segment_stream.hpp"

#include <memory>

namespace hybrid::lang {

struct run_options {
    ode::ode_options ode;
    lazy::stream_options stream;
    int time0_budget = 4096; // unfoldings allowed when chasing a successor's time-0 value
};

/// Denotation of a program: a numeric Kleisli endomorphism on R^n, served
/// demand-driven. `run` starts a fresh unfolding from a state; `at0` is the
/// program's time-0 value map, which sequencing applies to every interior
/// point of its first operand.
class den_program {
public:
    den_program() = default;
    den_program(std::function<lazy::producer(const ode::vec&)> make,
                std::shared_ptr<const run_options> opts)
        : make_(std::move(make)), opts_(std::move(opts)) {}

    lazy::producer run(const ode::vec& x) const { return make_(x); }

    lazy::segment_stream stream(const ode::vec& x) const {
        return lazy::segment_stream(run(x), opts_->stream);
    }

    lazy::sample_value at0(const ode::vec& x) const {
        auto st = stream(x);
        auto q = st.at(0.0, opts_->time0_budget);
        switch (q.k) {
            case lazy::segment_stream::query_result::kind::defined:
                return lazy::sample_value::ok_(std::move(q.value));
            case lazy::segment_stream::query_result::kind::budget_exhausted:
                return lazy::sample_value::budget_();
            default: return lazy::sample_value::diverged_();
        }
    }

    const run_options& options() const { return *opts_; }

private:
    std::function<lazy::producer(const ode::vec&)> make_;
    std::shared_ptr<const run_options> opts_;
};

namespace detail {

inline lazy::segment exit_segment(ode::vec x) {
    lazy::segment s;
    s.length = 0.0;
    s.end = lazy::segment::ending::exits;
    s.endpoint = std::move(x);
    s.eval = [v = s.endpoint](double) { return lazy::sample_value::ok_(v); };
    return s;
}

inline lazy::producer one_shot(lazy::segment seg) {
    auto fired = std::make_shared<bool>(false);
    return [fired, seg]() -> std::optional<lazy::segment> {
        if (*fired) return std::nullopt;
        *fired = true;
        return seg;
    };
}

inline den_program make_atomic(ode::atomic_program atom,
                               std::shared_ptr<const run_options> opts) {
    auto make = [atom, opts](const ode::vec& x) -> lazy::producer {
        ode::atomic_run run = ode::interp_atomic(atom, x, opts->ode);
        lazy::segment s;
        if (run.none_within_horizon) {
            s.length = std::numeric_limits<double>::infinity();
            s.end = lazy::segment::ending::unbounded;
            s.horizon_limited = true;
            s.eval = [e = run.eval](double t) { return lazy::sample_value::ok_(e(t)); };
        } else {
            s.length = run.duration;
            s.end = lazy::segment::ending::exits;
            s.endpoint = *run.end;
            s.eval = [e = run.eval](double t) { return lazy::sample_value::ok_(e(t)); };
        }
        return one_shot(std::move(s));
    };
    return den_program(std::move(make), std::move(opts));
}

inline den_program make_skip(std::shared_ptr<const run_options> opts) {
    auto make = [](const ode::vec& x) { return one_shot(exit_segment(x)); };
    return den_program(make, std::move(opts));
}

/// Sequencing: the first operand's pieces have the second's time-0 map
/// applied to every value strictly before the seam; at the seam the second
/// operand takes over.
inline den_program make_seq(den_program p, den_program q,
                            std::shared_ptr<const run_options> opts) {
    auto make = [p, q](const ode::vec& x) -> lazy::producer {
        struct state {
            lazy::producer cur;
            bool in_q = false;
        };
        auto st = std::make_shared<state>();
        st->cur = p.run(x);
        return [st, q]() -> std::optional<lazy::segment> {
            while (true) {
                auto seg = st->cur();
                if (!seg) return std::nullopt;
                if (st->in_q) return seg;
                auto wrap = [q, inner = seg->eval](double t) -> lazy::sample_value {
                    auto v = inner(t);
                    if (v.st != lazy::sample_value::status::ok) return v;
                    return q.at0(v.v);
                };
                switch (seg->end) {
                    case lazy::segment::ending::continues:
                    case lazy::segment::ending::diverged:
                    case lazy::segment::ending::unbounded: {
                        lazy::segment out = *seg;
                        out.eval = wrap;
                        return out;
                    }
                    case lazy::segment::ending::exits: {
                        lazy::segment out = *seg;
                        out.eval = wrap;
                        out.end = lazy::segment::ending::continues;
                        st->cur = q.run(seg->endpoint);
                        st->in_q = true;
                        return out;
                    }
                }
            }
        };
    };
    return den_program(std::move(make), std::move(opts));
}

inline den_program make_choice(ode::guard b, den_program p, den_program q,
                               std::shared_ptr<const run_options> opts) {
    auto make = [b, p, q](const ode::vec& x) -> lazy::producer {
        return b.eval(x) ? p.run(x) : q.run(x);
    };
    return den_program(std::move(make), std::move(opts));
}

} // namespace detail

/// While-loop semantics: the guard is evaluated only at unfolding
/// boundaries; a body's trajectory piece is emitted untouched (its interior
/// points are final values of the loop's trajectory) and its endpoint seeds
/// the next round. A false guard exits with the current state.
inline den_program while_sem(ode::guard b, den_program body) {
    auto opts = std::make_shared<const run_options>(body.options());
    auto make = [b, body](const ode::vec& x0) -> lazy::producer {
        struct state {
            ode::vec cur;
            std::optional<lazy::producer> inner;
            bool finished = false;
        };
        auto st = std::make_shared<state>();
        st->cur = x0;
        return [st, b, body]() -> std::optional<lazy::segment> {
            while (true) {
                if (st->finished) return std::nullopt;
                if (!st->inner) {
                    if (!b.eval(st->cur)) {
                        st->finished = true;
                        return detail::exit_segment(st->cur);
                    }
                    st->inner = body.run(st->cur);
                }
                auto seg = (*st->inner)();
                if (!seg) { // body finished silently: rerun the guard
                    st->inner.reset();
                    continue;
                }
                switch (seg->end) {
                    case lazy::segment::ending::continues:
                    case lazy::segment::ending::diverged:
                    case lazy::segment::ending::unbounded: return seg;
                    case lazy::segment::ending::exits: {
                        lazy::segment out = *seg;
                        out.end = lazy::segment::ending::continues;
                        st->cur = seg->endpoint;
                        st->inner.reset();
                        return out;
                    }
                }
            }
        };
    };
    return den_program(std::move(make), opts);
}

/// Compositional interpreter.
inline den_program interp(const program& p, std::shared_ptr<const run_options> opts) {
    switch (p.k) {
        case program::kind::atomic: return detail::make_atomic(p.atom, opts);
        case program::kind::skip: return detail::make_skip(opts);
        case program::kind::seq:
            return detail::make_seq(interp(p.children[0], opts), interp(p.children[1], opts),
                                    opts);
        case program::kind::choice:
            return detail::make_choice(p.test, interp(p.children[0], opts),
                                       interp(p.children[1], opts), opts);
        case program::kind::loop: return while_sem(p.test, interp(p.children[0], opts));
    }
    throw std::logic_error("interp: bad node");
}

inline den_program interp(const program& p, run_options opts = {}) {
    return interp(p, std::make_shared<const run_options>(std::move(opts)));
}

} // namespace hybrid::lang
