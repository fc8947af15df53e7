#pragma once

#include "hybrid/rational.hpp"

#include <cassert>
#include <compare>
#include <string>

namespace hybrid {

/// A time scalar in [0, infinity]. Addition saturates at infinity; the order
/// is total with infinity strictly greatest. `S` is `rat` in the exact layer
/// and `double` in the numeric layer.
template <class S>
class ext_time {
public:
    ext_time() : inf_(false), val_(0) {}

    static ext_time finite(S v) {
        assert(v >= 0);
        ext_time t;
        t.val_ = std::move(v);
        return t;
    }

    static ext_time infinity() {
        ext_time t;
        t.inf_ = true;
        return t;
    }

    bool is_infinite() const { return inf_; }
    bool is_finite() const { return !inf_; }

    /// Finite value; must not be called on infinity.
    const S& value() const {
        assert(!inf_);
        return val_;
    }

    friend ext_time operator+(const ext_time& a, const ext_time& b) {
        if (a.inf_ || b.inf_) return infinity();
        return finite(a.val_ + b.val_);
    }

    friend bool operator==(const ext_time& a, const ext_time& b) {
        if (a.inf_ != b.inf_) return false;
        return a.inf_ || a.val_ == b.val_;
    }

    friend bool operator<(const ext_time& a, const ext_time& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.val_ < b.val_;
    }

    friend bool operator<=(const ext_time& a, const ext_time& b) { return a < b || a == b; }
    friend bool operator>(const ext_time& a, const ext_time& b) { return b < a; }
    friend bool operator>=(const ext_time& a, const ext_time& b) { return b <= a; }

private:
    bool inf_;
    S val_;
};

using time_q = ext_time<rat>;

inline time_q qtime(std::int64_t num, std::int64_t den = 1) {
    return time_q::finite(make_rat(num, den));
}

inline std::string to_string(const time_q& t) {
    return t.is_infinite() ? "inf" : to_string(t.value());
}

} // namespace hybrid
