#include "partq/weights.hpp"

#include <utility>

namespace partq {

namespace {

// Guard for exact power computations: the result may not exceed this many
// bits, else exact comparison falls back / fails loudly.
constexpr long kPowerBitBudget = 1L << 27;

BigInt pow_int(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

unsigned long as_ulong_exponent(const BigInt& e, const char* what) {
    if (e < 0 || !e.fits_ulong_p()) throw ResourceError(std::string(what) + ": exponent too large");
    return e.get_ui();
}

} // namespace

IReal Scale::eval(mpfr_prec_t prec) const {
    IReal r = IReal::from(rat, prec);
    switch (sym) {
        case Sym::One:
            return r;
        case Sym::LogRat:
            return r * IReal::from(log_arg, prec).log();
        case Sym::Pi2Over6: {
            IReal pi = IReal::pi(prec);
            return r * (pi * pi) / IReal::from_long(6, prec);
        }
        case Sym::CFEntropy: {
            IReal pi = IReal::pi(prec);
            IReal log2 = IReal::from_long(2, prec).log();
            return r * (pi * pi) / (IReal::from_long(6, prec) * log2);
        }
        case Sym::Levy: {
            IReal pi = IReal::pi(prec);
            IReal log2 = IReal::from_long(2, prec).log();
            return r * (pi * pi) / (IReal::from_long(12, prec) * log2);
        }
    }
    throw InvariantViolation("Scale::eval: unknown symbol");
}

std::string Scale::spec_string() const {
    std::string prefix = rat == 1 ? std::string() : rat.get_str() + "*";
    switch (sym) {
        case Sym::One:
            return rat.get_str();
        case Sym::LogRat:
            return prefix + "log(" + log_arg.get_str() + ")";
        case Sym::Pi2Over6:
            return prefix + "pi2/6";
        case Sym::CFEntropy:
            return prefix + "pi2/(6log2)";
        case Sym::Levy:
            return prefix + "pi2/(12log2)";
    }
    return "?";
}

std::optional<BigRational> rational_power_exact(const BigRational& u, const BigRational& e) {
    if (!(u > 0)) throw DomainError("rational_power_exact: base must be positive");
    if (e == 0) return BigRational(1);
    BigInt p = e.get_num();
    const BigInt& q = e.get_den();
    bool invert = p < 0;
    if (invert) p = -p;

    unsigned long qi = as_ulong_exponent(q, "rational_power_exact");
    BigInt root_num, root_den;
    if (qi == 1) {
        root_num = u.get_num();
        root_den = u.get_den();
    } else {
        if (!mpz_root(root_num.get_mpz_t(), u.get_num().get_mpz_t(), qi)) return std::nullopt;
        if (!mpz_root(root_den.get_mpz_t(), u.get_den().get_mpz_t(), qi)) return std::nullopt;
    }
    unsigned long pi = as_ulong_exponent(p, "rational_power_exact");
    if ((bit_length(root_num) + bit_length(root_den)) * static_cast<long>(pi) > kPowerBitBudget)
        throw ResourceError("rational_power_exact: result exceeds bit budget");
    BigRational r = make_rational(pow_int(root_num, pi), pow_int(root_den, pi));
    if (invert) r = 1 / r;
    return r;
}

int compare_with_rational_power(const BigRational& x, const BigRational& u,
                                const BigRational& e) {
    if (!(x > 0) || !(u > 0))
        throw DomainError("compare_with_rational_power: values must be positive");
    // x <=> u^(p/q)  iff  x^q <=> u^p  (q > 0; for p < 0 use the inverse base).
    BigInt p = e.get_num();
    const BigInt& q = e.get_den();
    BigRational base = u;
    if (p < 0) {
        p = -p;
        base = 1 / base;
    }
    unsigned long qe = as_ulong_exponent(q, "compare_with_rational_power");
    unsigned long pe = as_ulong_exponent(p, "compare_with_rational_power");
    long bits = (bit_length(x.get_num()) + bit_length(x.get_den())) * static_cast<long>(qe) +
                (bit_length(base.get_num()) + bit_length(base.get_den())) * static_cast<long>(pe);
    if (bits > kPowerBitBudget)
        throw ResourceError("compare_with_rational_power: exceeds bit budget");
    BigRational lhs = make_rational(pow_int(x.get_num(), qe), pow_int(x.get_den(), qe));
    BigRational rhs = make_rational(pow_int(base.get_num(), pe), pow_int(base.get_den(), pe));
    return lhs < rhs ? -1 : (lhs == rhs ? 0 : 1);
}

WeightFunction WeightFunction::linear(Scale c) {
    if (!(c.rat > 0)) throw DomainError("WeightFunction::linear: scale must be positive");
    return WeightFunction(Kind::Linear, std::move(c), 1);
}
WeightFunction WeightFunction::two_log() { return WeightFunction(Kind::TwoLog, Scale::one(), 1); }
WeightFunction WeightFunction::one_log() { return WeightFunction(Kind::OneLog, Scale::one(), 1); }
WeightFunction WeightFunction::n_over_log_n(Scale c) {
    if (!(c.rat > 0)) throw DomainError("WeightFunction::n_over_log_n: scale must be positive");
    return WeightFunction(Kind::NOverLogN, std::move(c), 1);
}
WeightFunction WeightFunction::power_law(BigRational exponent, Scale c) {
    if (!(exponent > 0)) throw DomainError("WeightFunction::power_law: exponent must be positive");
    if (!(c.rat > 0)) throw DomainError("WeightFunction::power_law: scale must be positive");
    return WeightFunction(Kind::PowerLaw, std::move(c), std::move(exponent));
}

IReal WeightFunction::eval(const BigInt& n, mpfr_prec_t prec) const {
    if (n < 0) throw DomainError("WeightFunction::eval: negative depth");
    if (n == 0) return IReal::from_long(0, prec);
    switch (kind_) {
        case Kind::Linear:
            return c_.eval(prec) * IReal::from(n, prec);
        case Kind::TwoLog:
            return IReal::from(n, prec).log() * IReal::from_long(2, prec);
        case Kind::OneLog:
            return IReal::from(n, prec).log();
        case Kind::NOverLogN: {
            IReal cn = c_.eval(prec) * IReal::from(n, prec);
            // max(1, log n) switches branch between n=2 and n=3 (e is not an
            // integer, so the branch is decided exactly by n).
            if (n <= 2) return cn;
            return cn / IReal::from(n, prec).log();
        }
        case Kind::PowerLaw: {
            if (auto exact_pow = rational_power_exact(BigRational(n), s_))
                return c_.eval(prec) * IReal::from(*exact_pow, prec);
            IReal npz = IReal::from(n, prec);
            return c_.eval(prec) * npz.pow(IReal::from(s_, prec));
        }
    }
    throw InvariantViolation("WeightFunction::eval: unknown kind");
}

std::optional<BigRational> WeightFunction::exact_value(const BigInt& n) const {
    if (n < 0) throw DomainError("WeightFunction::exact_value: negative depth");
    if (n == 0) return BigRational(0);
    switch (kind_) {
        case Kind::Linear:
            if (auto c = c_.exact()) return *c * BigRational(n);
            return std::nullopt;
        case Kind::TwoLog:
        case Kind::OneLog:
            if (n == 1) return BigRational(0);
            return std::nullopt;
        case Kind::NOverLogN:
            if (n <= 2)
                if (auto c = c_.exact()) return *c * BigRational(n);
            return std::nullopt;
        case Kind::PowerLaw:
            if (auto c = c_.exact())
                if (auto pw = rational_power_exact(BigRational(n), s_)) return *c * *pw;
            return std::nullopt;
    }
    return std::nullopt;
}

std::optional<BigRational> WeightFunction::exact_exp(const BigInt& n) const {
    if (n < 0) throw DomainError("WeightFunction::exact_exp: negative depth");
    if (n == 0) return BigRational(1);
    switch (kind_) {
        case Kind::TwoLog:
            return BigRational(n) * BigRational(n);
        case Kind::OneLog:
            return BigRational(n);
        case Kind::Linear:
            if (c_.sym == Scale::Sym::LogRat)
                return rational_power_exact(c_.log_arg, c_.rat * BigRational(n));
            if (c_.rat == 0) return BigRational(1);
            return std::nullopt;
        case Kind::PowerLaw:
            if (c_.sym == Scale::Sym::LogRat)
                if (auto pw = rational_power_exact(BigRational(n), s_))
                    return rational_power_exact(c_.log_arg, c_.rat * *pw);
            return std::nullopt;
        case Kind::NOverLogN:
            return std::nullopt;
    }
    return std::nullopt;
}

int WeightFunction::compare(const BigInt& n, const BigRational& y) const {
    if (auto v = exact_value(n)) return *v < y ? -1 : (*v == y ? 0 : 1);
    // No kind takes a rational value off its exact path (transcendence of
    // log/pi combinations), so the certified comparison must separate.
    return certify_compare([&](mpfr_prec_t prec) { return eval(n, prec); }, y);
}

std::string WeightFunction::spec_string() const {
    switch (kind_) {
        case Kind::Linear:
            return "linear:" + c_.spec_string();
        case Kind::TwoLog:
            return "twolog";
        case Kind::OneLog:
            return "onelog";
        case Kind::NOverLogN:
            return "noverlog:" + c_.spec_string();
        case Kind::PowerLaw:
            return "power:" + s_.get_str() + ":" + c_.spec_string();
    }
    return "?";
}

BigInt inverse_weight(const WeightFunction& f, const BigRational& y) {
    if (y <= 0) return 0;  // f(0) = 0 already satisfies f(n) >= y
    BigInt lo = 0, hi = 1;
    while (f.compare(hi, y) < 0) {
        lo = hi;
        hi *= 2;
    }
    // Smallest n in (lo, hi] with f(n) >= y.
    while (hi - lo > 1) {
        BigInt mid = lo + (hi - lo) / 2;
        if (f.compare(mid, y) < 0)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

} // namespace partq
