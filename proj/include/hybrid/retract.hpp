#pragma once

#include "hybrid/trajectory.hpp"

#include <cassert>

namespace hybrid {

/// Retraction from the partial space onto the divergence-closed space.
/// A trajectory with a total evolution passes through unchanged; a partial
/// one is cut after the maximal downward-closed chunk of its domain and gets
/// infinite duration, which marks the moment of divergence.
template <class V>
trajectory<V> seal(const trajectory<V>& t) {
    assert(t.sp == space::h0m);
    auto prefix = t.ev.defined_prefix();
    if (prefix.total) return make_traj(t.dur, t.ev, space::h);
    // d_star = min(dur, prefix end): sup{ u < dur : [0,u) defined }
    time_q dstar = prefix.end < t.dur ? prefix.end : t.dur;
    assert(dstar.is_finite());
    auto cut = t.ev.truncate(dstar.value(), /*keep_end=*/true);
    return make_traj(time_q::infinity(), std::move(cut), space::h);
}

/// Inclusion of the divergence-closed space back into the partial space
/// (the section of `seal`).
template <class V>
trajectory<V> widen(const trajectory<V>& t) {
    assert(t.sp == space::h || t.sp == space::hplus);
    return make_traj(t.dur, t.ev, space::h0m);
}

/// Composite injection of the progressive space into the divergence-closed
/// one: widen, then seal.
template <class V>
trajectory<V> seal_progressive(const trajectory<V>& t) {
    assert(t.sp == space::hplus);
    return seal(widen(t));
}

} // namespace hybrid
