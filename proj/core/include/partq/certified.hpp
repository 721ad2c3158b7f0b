#pragma once

#include <mpfr.h>

#include <functional>
#include <optional>
#include <utility>

#include "partq/rational.hpp"

namespace partq {

/// Enclosure [lo, hi] of a real number, computed with MPFR directed
/// rounding at a fixed working precision. All operations round lo down and
/// hi up, so enclosures stay rigorous; precision escalation is handled by
/// the certify_* drivers below.
class IReal {
  public:
    explicit IReal(mpfr_prec_t prec);
    IReal(const IReal& other);
    IReal(IReal&& other) noexcept;
    IReal& operator=(const IReal& other);
    IReal& operator=(IReal&& other) noexcept;
    ~IReal();

    static IReal from(const BigRational& x, mpfr_prec_t prec);
    static IReal from(const BigInt& x, mpfr_prec_t prec);
    static IReal from_long(long x, mpfr_prec_t prec);
    static IReal pi(mpfr_prec_t prec);

    mpfr_prec_t precision() const { return prec_; }

    IReal operator+(const IReal& rhs) const;
    IReal operator-(const IReal& rhs) const;
    IReal operator*(const IReal& rhs) const;
    IReal operator/(const IReal& rhs) const;
    IReal neg() const;

    /// Natural log; requires the enclosure to be strictly positive.
    IReal log() const;
    IReal exp() const;

    /// x^e for strictly positive x, via exp(e*log x).
    IReal pow(const IReal& e) const;

    bool strictly_positive() const;
    bool strictly_negative() const;

    /// -1, 0 is impossible, +1 if the enclosure is strictly separated from
    /// the rational threshold; nullopt when it straddles.
    std::optional<int> compare(const BigRational& threshold) const;

    /// floor(value) when both endpoints certify the same integer.
    std::optional<BigInt> floor() const;

    /// Width <= 2^-bits * max(|lo|,|hi|), or width below an absolute escape
    /// hatch for values indistinguishable from zero.
    bool certified(long bits) const;

    double midpoint_double() const;

    double lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

  private:
    mpfr_t lo_;
    mpfr_t hi_;
    mpfr_prec_t prec_;

    friend IReal scale_sym_value(int, mpfr_prec_t);
};

/// Evaluate `build(prec)` at escalating precision until the enclosure
/// certifies `bits` significant bits, then return its midpoint.
/// Throws PrecisionError beyond the precision cap.
double certify_double(const std::function<IReal(mpfr_prec_t)>& build, long bits = 50);

/// Escalate until the enclosure separates from the exact threshold.
/// Returns -1 or +1. Throws PrecisionError if separation never happens
/// (caller must handle potential exact equality beforehand).
int certify_compare(const std::function<IReal(mpfr_prec_t)>& build,
                    const BigRational& threshold);

/// Escalate until floor is certified.
BigInt certify_floor(const std::function<IReal(mpfr_prec_t)>& build);

} // namespace partq
