#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hybrid::ode {

using vec = std::vector<double>;

/// Affine term c . v + b over the declared variables.
struct lin_term {
    std::vector<double> coeff;
    double constant = 0.0;

    static lin_term literal(double b, std::size_t n) {
        lin_term t;
        t.coeff.assign(n, 0.0);
        t.constant = b;
        return t;
    }

    static lin_term variable(std::size_t i, std::size_t n, double scale = 1.0) {
        lin_term t;
        t.coeff.assign(n, 0.0);
        t.coeff[i] = scale;
        return t;
    }

    double eval(const vec& v) const {
        if (v.size() != coeff.size()) throw std::invalid_argument("lin_term: dimension mismatch");
        double r = constant;
        for (std::size_t i = 0; i < coeff.size(); ++i) r += coeff[i] * v[i];
        return r;
    }

    lin_term& operator+=(const lin_term& o) {
        if (coeff.size() != o.coeff.size())
            throw std::invalid_argument("lin_term: dimension mismatch");
        for (std::size_t i = 0; i < coeff.size(); ++i) coeff[i] += o.coeff[i];
        constant += o.constant;
        return *this;
    }

    lin_term& scale(double s) {
        for (auto& c : coeff) c *= s;
        constant *= s;
        return *this;
    }
};

/// Positive boolean combination of closed atoms (lhs <= rhs, lhs >= rhs);
/// the termination bounds of predicate ODEs.
struct predicate {
    enum class node { atom, conj, disj };
    node k = node::atom;
    lin_term lhs, rhs;
    bool is_le = true;
    std::vector<predicate> children;

    static predicate atom_le(lin_term l, lin_term r) {
        predicate p;
        p.lhs = std::move(l);
        p.rhs = std::move(r);
        p.is_le = true;
        return p;
    }
    static predicate atom_ge(lin_term l, lin_term r) {
        predicate p = atom_le(std::move(l), std::move(r));
        p.is_le = false;
        return p;
    }
    static predicate conj(predicate a, predicate b) {
        predicate p;
        p.k = node::conj;
        p.children = {std::move(a), std::move(b)};
        return p;
    }
    static predicate disj(predicate a, predicate b) {
        predicate p;
        p.k = node::disj;
        p.children = {std::move(a), std::move(b)};
        return p;
    }

    bool eval(const vec& v) const {
        switch (k) {
            case node::atom: {
                double l = lhs.eval(v), r = rhs.eval(v);
                return is_le ? l <= r : l >= r;
            }
            case node::conj:
                return children[0].eval(v) && children[1].eval(v);
            case node::disj:
                return children[0].eval(v) || children[1].eval(v);
        }
        return false;
    }
};

/// Free boolean algebra over equality and strict-less atoms, with literals;
/// the tests of if-then-else and while. Comparisons are exact on floats:
/// equality atoms compare with no tolerance.
struct guard {
    enum class node { lit, eq, lt, neg, conj, disj };
    node k = node::lit;
    bool value = true;
    lin_term lhs, rhs;
    std::vector<guard> children;

    static guard lit(bool b) {
        guard g;
        g.value = b;
        return g;
    }
    static guard eq(lin_term l, lin_term r) {
        guard g;
        g.k = node::eq;
        g.lhs = std::move(l);
        g.rhs = std::move(r);
        return g;
    }
    static guard lt(lin_term l, lin_term r) {
        guard g = eq(std::move(l), std::move(r));
        g.k = node::lt;
        return g;
    }
    static guard neg(guard a) {
        guard g;
        g.k = node::neg;
        g.children = {std::move(a)};
        return g;
    }
    static guard conj(guard a, guard b) {
        guard g;
        g.k = node::conj;
        g.children = {std::move(a), std::move(b)};
        return g;
    }
    static guard disj(guard a, guard b) {
        guard g;
        g.k = node::disj;
        g.children = {std::move(a), std::move(b)};
        return g;
    }

    bool eval(const vec& v) const {
        switch (k) {
            case node::lit: return value;
            case node::eq: return lhs.eval(v) == rhs.eval(v);
            case node::lt: return lhs.eval(v) < rhs.eval(v);
            case node::neg: return !children[0].eval(v);
            case node::conj: return children[0].eval(v) && children[1].eval(v);
            case node::disj: return children[0].eval(v) || children[1].eval(v);
        }
        return false;
    }
};

/// Linear dynamics dx/dt = A x + c.
struct dynamics {
    Eigen::MatrixXd A;
    Eigen::VectorXd c;

    int dim() const { return static_cast<int>(A.rows()); }

    static dynamics zero(int n) {
        dynamics d;
        d.A = Eigen::MatrixXd::Zero(n, n);
        d.c = Eigen::VectorXd::Zero(n);
        return d;
    }
};

namespace detail {

inline Eigen::MatrixXd augmented(const dynamics& d) {
    int n = d.dim();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
    m.topLeftCorner(n, n) = d.A;
    m.topRightCorner(n, 1) = d.c;
    return m;
}

inline Eigen::VectorXd lift(const vec& x) {
    Eigen::VectorXd y(x.size() + 1);
    for (std::size_t i = 0; i < x.size(); ++i) y[static_cast<int>(i)] = x[i];
    y[static_cast<int>(x.size())] = 1.0;
    return y;
}

inline vec lower(const Eigen::VectorXd& y) {
    vec x(static_cast<std::size_t>(y.size() - 1));
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = y[static_cast<int>(i)];
    return x;
}

} // namespace detail

/// Closed-form solution at time t: the exponential of the augmented
/// homogeneous system applied to (x0, 1).
inline vec flow_at(const dynamics& d, const vec& x0, double t) {
    if (static_cast<int>(x0.size()) != d.dim())
        throw std::invalid_argument("flow_at: dimension mismatch");
    if (t == 0.0) return x0; // exact by the flow property
    Eigen::MatrixXd m = detail::augmented(d) * t;
    return detail::lower(m.exp() * detail::lift(x0));
}

/// A dynamics anchored at an initial state, evaluable at any t >= 0.
class flow {
public:
    flow(dynamics d, vec x0) : dyn_(std::move(d)), x0_(std::move(x0)) {
        if (static_cast<int>(x0_.size()) != dyn_.dim())
            throw std::invalid_argument("flow: dimension mismatch");
    }

    vec at(double t) const { return flow_at(dyn_, x0_, t); }
    const dynamics& dyn() const { return dyn_; }
    const vec& start() const { return x0_; }

private:
    dynamics dyn_;
    vec x0_;
};

struct ode_options {
    double horizon = 1e6;
    double scan_step = 1e-3;
    double event_tol = 1e-9;
};

struct crossing_result {
    bool found = false;
    double t = 0.0;
    bool aborted_nonfinite = false; // scan left the representable range
};

/// Least time in [0,horizon] at which the flow satisfies the predicate, to
/// within `tol`. Scans with a fixed step using one precomputed exponential,
/// then bisects the bracketing interval; satisfaction at the returned point
/// is re-verified. Crossings narrower than the scan step can be missed.
inline crossing_result least_crossing(const dynamics& d, const vec& x0, const predicate& psi,
                                      const ode_options& opt = {}) {
    if (psi.eval(x0)) return {true, 0.0, false};
    double h = opt.scan_step;
    if (h <= 0 || opt.event_tol <= 0) throw std::invalid_argument("least_crossing: bad options");
    Eigen::MatrixXd step = (detail::augmented(d) * h).exp();
    Eigen::VectorXd y = detail::lift(x0);
    double t_prev = 0.0;
    for (double t = h; t_prev < opt.horizon; t += h) {
        if (t > opt.horizon) t = opt.horizon;
        y = step * y;
        vec xt = detail::lower(y);
        bool finite = true;
        for (double v : xt) finite &= std::isfinite(v);
        if (!finite) return {false, 0.0, true};
        if (psi.eval(xt)) {
            // bisect [t_prev, t] with fresh closed-form evaluations; after
            // the absolute tolerance is met keep refining to near relative
            // precision so cascades of shrinking events stay resolvable
            double lo = t_prev, hi = t;
            int iter = 0;
            while ((hi - lo > opt.event_tol || hi - lo > hi * 1e-13) && iter++ < 240) {
                double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                if (psi.eval(flow_at(d, x0, mid)))
                    hi = mid;
                else
                    lo = mid;
            }
            return {true, hi, false};
        }
        if (t >= opt.horizon) break;
        t_prev = t;
    }
    return {false, 0.0, false};
}

/// Atomic hybrid programs: simultaneous assignment, an ODE run for a fixed
/// time, or an ODE run until its bound predicate first holds.
struct atomic_program {
    enum class kind { assign, ode_timed, ode_pred };
    kind k = kind::assign;
    std::vector<lin_term> updates; // assign: one term per variable
    dynamics dyn;                  // both ODE forms
    double bound_r = 0.0;          // timed bound
    predicate bound_pred;          // predicate bound
};

/// One numeric Kleisli step: duration, local evaluator, endpoint.
struct atomic_run {
    double duration = 0.0;               // may be +infinity
    bool none_within_horizon = false;    // infinite because no crossing was found
    std::function<vec(double)> eval;     // local time in [0, duration]
    std::optional<vec> end;              // state at the duration when finite
};

inline atomic_run interp_atomic(const atomic_program& a, const vec& x, const ode_options& opt = {}) {
    atomic_run run;
    switch (a.k) {
        case atomic_program::kind::assign: {
            if (a.updates.size() != x.size())
                throw std::invalid_argument("assignment: dimension mismatch");
            vec next(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) next[i] = a.updates[i].eval(x);
            run.duration = 0.0;
            run.end = next;
            run.eval = [next](double) { return next; };
            return run;
        }
        case atomic_program::kind::ode_timed: {
            flow f(a.dyn, x);
            run.duration = a.bound_r;
            run.end = f.at(a.bound_r);
            run.eval = [f](double t) { return f.at(t); };
            return run;
        }
        case atomic_program::kind::ode_pred: {
            flow f(a.dyn, x);
            auto crossing = least_crossing(a.dyn, x, a.bound_pred, opt);
            if (crossing.found) {
                run.duration = crossing.t;
                run.end = f.at(crossing.t);
            } else {
                run.duration = std::numeric_limits<double>::infinity();
                run.none_within_horizon = true;
            }
            run.eval = [f](double t) { return f.at(t); };
            return run;
        }
    }
    throw std::logic_error("interp_atomic: bad atomic kind");
}

} // namespace hybrid::ode
