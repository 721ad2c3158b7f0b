#pragma once

#include "partq/rational.hpp"

namespace partq {

/// Open subinterval of (0,1) with exact rational endpoints.
struct Interval {
    BigRational lo;
    BigRational hi;

    Interval() : lo(0), hi(1) {}
    Interval(BigRational l, BigRational h) : lo(std::move(l)), hi(std::move(h)) {
        if (!(lo < hi) || lo < 0 || hi > 1)
            throw DomainError("Interval: endpoints must satisfy 0 <= lo < hi <= 1");
    }

    BigRational length() const { return hi - lo; }

    /// Strict interior membership.
    bool contains(const BigRational& x) const { return lo < x && x < hi; }

    /// Containment of open intervals: (a,b) subset of (c,d) iff c<=a and b<=d.
    bool contains(const Interval& other) const {
        return lo <= other.lo && other.hi <= hi;
    }

    bool operator==(const Interval& other) const {
        return lo == other.lo && hi == other.hi;
    }
};

} // namespace partq
