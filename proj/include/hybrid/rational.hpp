#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <sstream>
#include <string>

namespace hybrid {

/// Exact scalar for the law-checking layer. Breakpoints and durations are
/// arbitrary-precision rationals so trajectory equality and the
/// approximation order are decidable without tolerances.
using rat = boost::multiprecision::cpp_rational;

inline rat make_rat(std::int64_t num, std::int64_t den = 1) {
    return rat(num, den);
}

inline std::string to_string(const rat& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

inline double to_double(const rat& q) {
    return static_cast<double>(q);
}

} // namespace hybrid
