#pragma once

#include "hybrid/linear_ode.hpp"

#include <cstring>
#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hybrid::lazy {

using ode::vec;

/// Value produced by evaluating a trajectory point. Divergence can surface
/// pointwise when an enclosing composition's successor diverges at time 0.
struct sample_value {
    enum class status { ok, diverged, budget } st = status::ok;
    vec v;

    static sample_value ok_(vec x) { return {status::ok, std::move(x)}; }
    static sample_value diverged_() { return {status::diverged, {}}; }
    static sample_value budget_() { return {status::budget, {}}; }
};

using evaluator = std::function<sample_value(double)>; // local time in [0, length)

/// One unfolding step of a run: a piece of trajectory plus what happens at
/// its end.
struct segment {
    double length = 0.0; // may be +infinity (then no ending is ever reached)
    evaluator eval;
    enum class ending { exits, continues, diverged, unbounded } end = ending::exits;
    vec endpoint;                // exits: final state; continues: state passed onward
    bool horizon_limited = false; // unbounded because an event search gave up at its horizon
};

using producer = std::function<std::optional<segment>()>;

struct stream_options {
    double probe_horizon = 1e4; // cumulative duration that counts as an infinite run
    double zeno_eps = 1e-12;    // window advance below this is Zeno
    int probation_window = 64;  // consecutive unfoldings examined by both probation rules
};

/// Demand-driven numeric trajectory over R^n. Unfolds its producer only as
/// queries require, keeps everything it has seen, and classifies runs as
/// terminating, divergent (zero time progress), Zeno (positive increments
/// with vanishing advance), or infinite.
class segment_stream {
public:
    segment_stream(producer p, stream_options opt = {}) : next_(std::move(p)), opt_(opt) {}

    struct query_result {
        enum class kind { defined, undefined_diverged, undefined_zeno, budget_exhausted } k;
        vec value;         // defined
        double at = 0.0;   // divergence time / Zeno estimate / duration lower bound

        static query_result defined(vec v) {
            return {kind::defined, std::move(v), 0.0};
        }
    };

    struct duration_result {
        enum class kind { exact, zeno_estimate, lower_bound } k;
        double value = 0.0;          // +infinity allowed for exact
        double last_increment = 0.0; // certificate for Zeno estimates
    };

    struct classification {
        enum class kind { terminates, diverges_at, zeno, infinite_run, unknown } k;
        enum class evidence { none, state_cycle, zero_progress_window } ev = evidence::none;
        double time = 0.0;
        vec final_state;
    };

    /// Value at time t, unfolding at most `budget` segments in total across
    /// the stream's lifetime. Defined answers are stable under larger
    /// budgets.
    query_result at(double t, int budget) {
        while (true) {
            // a materialized segment covering t answers directly
            for (const auto& ms : seen_) {
                bool covers = std::isinf(ms.length) ? t >= ms.onset
                                                    : (t >= ms.onset && t < ms.onset + ms.length);
                if (!covers) continue;
                auto sv = ms.eval(t - ms.onset);
                switch (sv.st) {
                    case sample_value::status::ok: return query_result::defined(std::move(sv.v));
                    case sample_value::status::diverged:
                        return {query_result::kind::undefined_diverged, {}, t};
                    case sample_value::status::budget:
                        return {query_result::kind::budget_exhausted, {}, cum_};
                }
            }
            if (exited_ && t >= cum_)
                return query_result::defined(final_state_); // flattening past the end
            if (diverged_ && t >= diverged_at_)
                return {query_result::kind::undefined_diverged, {}, diverged_at_};
            if (zeno_ && t >= cum_)
                return {query_result::kind::undefined_zeno, {}, zeno_estimate_};
            if (done() || !pump(budget))
                return {query_result::kind::budget_exhausted, {}, cum_};
        }
    }

    duration_result duration(int budget) {
        while (!done() && pump(budget)) {
        }
        if (exited_) return {duration_result::kind::exact, cum_, 0.0};
        if (unbounded_ || diverged_)
            return {duration_result::kind::exact, std::numeric_limits<double>::infinity(), 0.0};
        if (zeno_) return {duration_result::kind::zeno_estimate, zeno_estimate_, last_increment_};
        return {duration_result::kind::lower_bound, cum_, last_increment_};
    }

    classification classify(int budget) {
        while (!done() && cum_ <= opt_.probe_horizon && pump(budget)) {
        }
        if (exited_)
            return {classification::kind::terminates, classification::evidence::none, cum_,
                    final_state_};
        if (diverged_)
            return {classification::kind::diverges_at, divergence_evidence_, diverged_at_, {}};
        if (zeno_)
            return {classification::kind::zeno, classification::evidence::none, zeno_estimate_, {}};
        if (unbounded_ || cum_ > opt_.probe_horizon)
            return {classification::kind::infinite_run, classification::evidence::none,
                    opt_.probe_horizon, {}};
        return {classification::kind::unknown, classification::evidence::none, cum_, {}};
    }

    std::vector<std::pair<double, query_result>> sample(const std::vector<double>& grid,
                                                        int budget) {
        std::vector<std::pair<double, query_result>> rows;
        rows.reserve(grid.size());
        for (double t : grid) rows.emplace_back(t, at(t, budget));
        return rows;
    }

    double cumulative() const { return cum_; }
    int pulled() const { return pulled_; }
    bool has_terminated() const { return exited_; }
    /// An event search gave up at its finite horizon somewhere in this run,
    /// so an "infinite" piece may merely be horizon-limited.
    bool horizon_limited() const { return horizon_limited_; }

private:
    struct mat_segment {
        double onset;
        double length;
        evaluator eval;
    };

    bool done() const { return exited_ || diverged_ || zeno_ || unbounded_; }

    bool pump(int budget) {
        if (pulled_ >= budget) return false;
        auto seg = next_();
        ++pulled_;
        if (!seg) { // producer finished without an exit marker: treat as exit at cum
            exited_ = true;
            return true;
        }
        if (seg->length < 0) throw std::logic_error("segment with negative length");
        if (seg->length > 0 || std::isinf(seg->length))
            seen_.push_back({cum_, seg->length, seg->eval});

        switch (seg->end) {
            case segment::ending::unbounded:
                unbounded_ = true;
                horizon_limited_ |= seg->horizon_limited;
                return true;
            case segment::ending::diverged:
                diverged_ = true;
                diverged_at_ = cum_;
                divergence_evidence_ = classification::evidence::none;
                return true;
            case segment::ending::exits:
                cum_ += seg->length;
                exited_ = true;
                final_state_ = seg->endpoint;
                return true;
            case segment::ending::continues: break;
        }

        double inc = seg->length;
        cum_ += inc;

        if (inc == 0.0) {
            // exact state repetition at zero time progress is a true cycle
            for (const auto& s : zero_run_states_) {
                if (s == seg->endpoint) {
                    diverged_ = true;
                    diverged_at_ = cum_;
                    divergence_evidence_ = classification::evidence::state_cycle;
                    return true;
                }
            }
            zero_run_states_.push_back(seg->endpoint);
            if (static_cast<int>(zero_run_states_.size()) >= opt_.probation_window) {
                diverged_ = true;
                diverged_at_ = cum_;
                divergence_evidence_ = classification::evidence::zero_progress_window;
            }
            return true;
        }

        // positive progress: zero-length bookkeeping segments of the same
        // unfolding do not enter the Zeno window
        zero_run_states_.clear();
        last_increment_ = inc;
        window_.push_back(inc);
        if (static_cast<int>(window_.size()) > opt_.probation_window) window_.pop_front();
        if (static_cast<int>(window_.size()) == opt_.probation_window) {
            double advance = 0.0;
            for (double w : window_) advance += w;
            if (advance < opt_.zeno_eps) {
                zeno_ = true;
                zeno_estimate_ = cum_;
            }
        }
        return true;
    }

    producer next_;
    stream_options opt_;
    std::vector<mat_segment> seen_;
    std::deque<double> window_;
    std::vector<vec> zero_run_states_;
    double cum_ = 0.0;
    int pulled_ = 0;
    bool exited_ = false, diverged_ = false, zeno_ = false, unbounded_ = false;
    bool horizon_limited_ = false;
    double diverged_at_ = 0.0, zeno_estimate_ = 0.0, last_increment_ = 0.0;
    classification::evidence divergence_evidence_ = classification::evidence::none;
    vec final_state_;
};

/// Numeric loop body for basic iteration: a state-dependent duration and a
/// local-time evaluator. The endpoint of each unfolding seeds the next.
struct numeric_body {
    std::function<double(const vec&)> duration;
    std::function<vec(const vec&, double)> eval; // (state, local time)
};

/// Basic iteration as a stream: a body of zero duration exits with its
/// time-0 value, a positive one contributes its piece and continues from its
/// endpoint.
inline producer basic_loop(numeric_body f, vec x0) {
    auto state = std::make_shared<vec>(std::move(x0));
    auto body = std::make_shared<numeric_body>(std::move(f));
    auto finished = std::make_shared<bool>(false);
    return [state, body, finished]() -> std::optional<segment> {
        if (*finished) return std::nullopt;
        vec x = *state;
        double d = body->duration(x);
        segment seg;
        if (d == 0.0) {
            *finished = true;
            seg.length = 0.0;
            seg.end = segment::ending::exits;
            seg.endpoint = body->eval(x, 0.0);
            seg.eval = [v = seg.endpoint](double) { return sample_value::ok_(v); };
            return seg;
        }
        seg.length = d;
        seg.end = segment::ending::continues;
        seg.endpoint = body->eval(x, d);
        seg.eval = [body, x](double t) { return sample_value::ok_(body->eval(x, t)); };
        *state = seg.endpoint;
        return seg;
    };
}

} // namespace hybrid::lazy
