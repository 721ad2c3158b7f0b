#include "partq/certified.hpp"

#include <algorithm>

#include "partq/errors.hpp"

namespace partq {

IReal::IReal(mpfr_prec_t prec) : prec_(prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

IReal::IReal(const IReal& other) : prec_(other.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

IReal::IReal(IReal&& other) noexcept : prec_(other.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
}

IReal& IReal::operator=(const IReal& other) {
    if (this != &other) {
        mpfr_set_prec(lo_, other.prec_);
        mpfr_set_prec(hi_, other.prec_);
        prec_ = other.prec_;
        mpfr_set(lo_, other.lo_, MPFR_RNDD);
        mpfr_set(hi_, other.hi_, MPFR_RNDU);
    }
    return *this;
}

IReal& IReal::operator=(IReal&& other) noexcept {
    if (this != &other) {
        mpfr_swap(lo_, other.lo_);
        mpfr_swap(hi_, other.hi_);
        std::swap(prec_, other.prec_);
    }
    return *this;
}

IReal::~IReal() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

IReal IReal::from(const BigRational& x, mpfr_prec_t prec) {
    IReal r(prec);
    mpfr_set_q(r.lo_, x.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, x.get_mpq_t(), MPFR_RNDU);
    return r;
}

IReal IReal::from(const BigInt& x, mpfr_prec_t prec) {
    IReal r(prec);
    mpfr_set_z(r.lo_, x.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi_, x.get_mpz_t(), MPFR_RNDU);
    return r;
}

IReal IReal::from_long(long x, mpfr_prec_t prec) {
    IReal r(prec);
    mpfr_set_si(r.lo_, x, MPFR_RNDD);
    mpfr_set_si(r.hi_, x, MPFR_RNDU);
    return r;
}

IReal IReal::pi(mpfr_prec_t prec) {
    IReal r(prec);
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
}

IReal IReal::operator+(const IReal& rhs) const {
    IReal r(std::max(prec_, rhs.prec_));
    mpfr_add(r.lo_, lo_, rhs.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, hi_, rhs.hi_, MPFR_RNDU);
    return r;
}

IReal IReal::operator-(const IReal& rhs) const {
    IReal r(std::max(prec_, rhs.prec_));
    mpfr_sub(r.lo_, lo_, rhs.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, hi_, rhs.lo_, MPFR_RNDU);
    return r;
}

IReal IReal::operator*(const IReal& rhs) const {
    IReal r(std::max(prec_, rhs.prec_));
    // General sign handling: min/max over the four endpoint products,
    // rounded down for the lower bound and up for the upper bound.
    mpfr_t cand, best;
    mpfr_init2(cand, r.prec_);
    mpfr_init2(best, r.prec_);

    const mpfr_srcptr ls[2] = {lo_, hi_};
    const mpfr_srcptr rs[2] = {rhs.lo_, rhs.hi_};

    bool first = true;
    for (auto a : ls)
        for (auto b : rs) {
            mpfr_mul(cand, a, b, MPFR_RNDD);
            if (first || mpfr_less_p(cand, best)) mpfr_set(best, cand, MPFR_RNDD);
            first = false;
        }
    mpfr_set(r.lo_, best, MPFR_RNDD);

    first = true;
    for (auto a : ls)
        for (auto b : rs) {
            mpfr_mul(cand, a, b, MPFR_RNDU);
            if (first || mpfr_greater_p(cand, best)) mpfr_set(best, cand, MPFR_RNDU);
            first = false;
        }
    mpfr_set(r.hi_, best, MPFR_RNDU);

    mpfr_clear(cand);
    mpfr_clear(best);
    return r;
}

IReal IReal::operator/(const IReal& rhs) const {
    if (!(rhs.strictly_positive() || rhs.strictly_negative()))
        throw PrecisionError("IReal division: divisor enclosure touches zero");
    IReal r(std::max(prec_, rhs.prec_));
    mpfr_t cand, best;
    mpfr_init2(cand, r.prec_);
    mpfr_init2(best, r.prec_);

    const mpfr_srcptr ls[2] = {lo_, hi_};
    const mpfr_srcptr rs[2] = {rhs.lo_, rhs.hi_};

    bool first = true;
    for (auto a : ls)
        for (auto b : rs) {
            mpfr_div(cand, a, b, MPFR_RNDD);
            if (first || mpfr_less_p(cand, best)) mpfr_set(best, cand, MPFR_RNDD);
            first = false;
        }
    mpfr_set(r.lo_, best, MPFR_RNDD);

    first = true;
    for (auto a : ls)
        for (auto b : rs) {
            mpfr_div(cand, a, b, MPFR_RNDU);
            if (first || mpfr_greater_p(cand, best)) mpfr_set(best, cand, MPFR_RNDU);
            first = false;
        }
    mpfr_set(r.hi_, best, MPFR_RNDU);

    mpfr_clear(cand);
    mpfr_clear(best);
    return r;
}

IReal IReal::neg() const {
    IReal r(prec_);
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

IReal IReal::log() const {
    if (!strictly_positive()) throw PrecisionError("IReal::log: enclosure not positive");
    IReal r(prec_);
    mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    return r;
}

IReal IReal::exp() const {
    IReal r(prec_);
    mpfr_exp(r.lo_, lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, hi_, MPFR_RNDU);
    return r;
}

IReal IReal::pow(const IReal& e) const {
    return (e * log()).exp();
}

bool IReal::strictly_positive() const { return mpfr_sgn(lo_) > 0; }
bool IReal::strictly_negative() const { return mpfr_sgn(hi_) < 0; }

std::optional<int> IReal::compare(const BigRational& threshold) const {
    if (mpfr_cmp_q(hi_, const_cast<mpq_ptr>(threshold.get_mpq_t())) < 0) return -1;
    if (mpfr_cmp_q(lo_, const_cast<mpq_ptr>(threshold.get_mpq_t())) > 0) return 1;
    return std::nullopt;
}

std::optional<BigInt> IReal::floor() const {
    BigInt fl, fh;
    mpfr_get_z(fl.get_mpz_t(), lo_, MPFR_RNDD);
    mpfr_get_z(fh.get_mpz_t(), hi_, MPFR_RNDD);
    if (fl == fh) return fl;
    return std::nullopt;
}

bool IReal::certified(long bits) const {
    if (mpfr_equal_p(lo_, hi_)) return true;
    mpfr_t width, mag, tol;
    mpfr_init2(width, prec_);
    mpfr_init2(mag, prec_);
    mpfr_init2(tol, prec_);
    mpfr_sub(width, hi_, lo_, MPFR_RNDU);
    mpfr_abs(mag, lo_, MPFR_RNDD);
    mpfr_t magh;
    mpfr_init2(magh, prec_);
    mpfr_abs(magh, hi_, MPFR_RNDD);
    if (mpfr_greater_p(magh, mag)) mpfr_set(mag, magh, MPFR_RNDD);
    mpfr_mul_2si(tol, mag, -bits, MPFR_RNDD);
    bool ok = mpfr_lessequal_p(width, tol);
    if (!ok) {
        // Absolute escape hatch for values indistinguishable from zero.
        mpfr_set_d(tol, 1e-300, MPFR_RNDD);
        ok = mpfr_lessequal_p(width, tol);
    }
    mpfr_clear(width);
    mpfr_clear(mag);
    mpfr_clear(magh);
    mpfr_clear(tol);
    return ok;
}

double IReal::midpoint_double() const {
    mpfr_t mid;
    mpfr_init2(mid, prec_);
    mpfr_add(mid, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(mid, mid, 1, MPFR_RNDN);
    double v = mpfr_get_d(mid, MPFR_RNDN);
    mpfr_clear(mid);
    return v;
}

namespace {
constexpr mpfr_prec_t kStartPrec = 96;
constexpr mpfr_prec_t kMaxPrec = mpfr_prec_t(1) << 22;
} // namespace

double certify_double(const std::function<IReal(mpfr_prec_t)>& build, long bits) {
    for (mpfr_prec_t prec = kStartPrec; prec <= kMaxPrec; prec *= 2) {
        IReal r = build(prec);
        if (r.certified(bits)) return r.midpoint_double();
    }
    throw PrecisionError("certify_double: precision cap reached");
}

int certify_compare(const std::function<IReal(mpfr_prec_t)>& build,
                    const BigRational& threshold) {
    for (mpfr_prec_t prec = kStartPrec; prec <= kMaxPrec; prec *= 2) {
        IReal r = build(prec);
        if (auto c = r.compare(threshold)) return *c;
    }
    throw PrecisionError("certify_compare: enclosure never separated from threshold");
}

BigInt certify_floor(const std::function<IReal(mpfr_prec_t)>& build) {
    for (mpfr_prec_t prec = kStartPrec; prec <= kMaxPrec; prec *= 2) {
        IReal r = build(prec);
        if (auto f = r.floor()) return *f;
    }
    throw PrecisionError("certify_floor: floor never certified");
}

} // namespace partq
