#pragma once

#include <cstdint>
#include <variant>

#include "partq/cf.hpp"
#include "partq/interval.hpp"
#include "partq/rational.hpp"
#include "partq/rng.hpp"

namespace partq {

/// How a point came to be; reported with experiment artifacts.
struct SampledDyadic {
    std::uint64_t seed;
    std::uint64_t index;
    int attempt;
};
struct ExplicitPoint {};
struct FromCFRule {
    CFRule rule;
    std::size_t depth;
};

/// A point of (0,1) known exactly as a rational, together with a
/// resolution radius: the real number the point stands for is guaranteed
/// to lie within `radius` of `value`. Explicit points have radius 0 and
/// stand for themselves. All cell computations must certify that the whole
/// window (value-radius, value+radius) lands in one cell ("guard"), so
/// results transfer to the represented real.
struct UnitPoint {
    BigRational value;
    long resolution_bits = 0;  // radius <= 2^-resolution_bits (0 for exact)
    BigRational radius{0};
    std::variant<ExplicitPoint, SampledDyadic, FromCFRule> provenance = ExplicitPoint{};
};

/// Uniform dyadic sample: an odd numerator over 2^bits, drawn from the
/// (seed, index, attempt) stream. Lebesgue sampling at resolution 2^-bits.
UnitPoint sample_dyadic(std::uint64_t seed, std::uint64_t index, long bits, int attempt = 0);

/// Wrap an exact rational in (0,1).
UnitPoint explicit_point(BigRational value);

/// Surrogate for the number generated by a rule: the convergent p_K/q_K
/// with K chosen so the surrogate is within 2^-min_bits of the real number
/// (radius 1/(q_K q_{K+1})).
UnitPoint materialize(const CFRule& rule, long min_bits, long bit_bound = kDefaultBitBound);

/// Stable provenance tag for reports: how the point was produced, with all
/// parameters needed to reproduce it.
std::string point_id(const UnitPoint& x);

/// True iff the whole resolution window around x lies strictly inside I.
bool guard_ok(const UnitPoint& x, const Interval& I);

/// Throws PrecisionError when the guard fails (the window is too coarse to
/// certify which cell the represented real falls in).
void require_guard(const UnitPoint& x, const Interval& I, const char* what);

} // namespace partq
