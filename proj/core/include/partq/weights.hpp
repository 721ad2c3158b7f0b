#pragma once

#include <optional>
#include <string>

#include "partq/certified.hpp"
#include "partq/rational.hpp"

namespace partq {

/// A positive constant of the form  rat * sym  where sym is one of a few
/// symbolic factors that appear as growth rates:
///   One        : 1
///   LogRat     : log(log_arg)        (log_arg rational > 1)
///   Pi2Over6   : pi^2 / 6
///   CFEntropy  : pi^2 / (6 log 2)
///   Levy       : pi^2 / (12 log 2)
/// Keeping the symbol separate allows exact arithmetic whenever the symbol
/// cancels (e.g. e^{c n log b} = b^{c n}).
struct Scale {
    enum class Sym { One, LogRat, Pi2Over6, CFEntropy, Levy };

    BigRational rat{1};
    Sym sym = Sym::One;
    BigRational log_arg{2};

    static Scale one(BigRational r = BigRational(1)) { return {std::move(r), Sym::One, 2}; }
    static Scale log_of(BigRational arg, BigRational r = BigRational(1)) {
        if (!(arg > 1)) throw DomainError("Scale::log_of: argument must exceed 1");
        return {std::move(r), Sym::LogRat, std::move(arg)};
    }
    static Scale pi2_over_6(BigRational r = BigRational(1)) {
        return {std::move(r), Sym::Pi2Over6, 2};
    }
    static Scale cf_entropy(BigRational r = BigRational(1)) {
        return {std::move(r), Sym::CFEntropy, 2};
    }
    static Scale levy(BigRational r = BigRational(1)) { return {std::move(r), Sym::Levy, 2}; }

    IReal eval(mpfr_prec_t prec) const;
    std::optional<BigRational> exact() const {
        if (sym == Sym::One) return rat;
        return std::nullopt;
    }
    std::string spec_string() const;
};

/// u^(p/q) as an exact rational when it is one (u > 0 rational), otherwise
/// nullopt. Negative exponents invert.
std::optional<BigRational> rational_power_exact(const BigRational& u, const BigRational& e);

/// Exact three-way comparison of x against u^e (x, u > 0 rational, e
/// rational), performed by clearing denominators into integer powers.
int compare_with_rational_power(const BigRational& x, const BigRational& u,
                                const BigRational& e);

/// Nondecreasing weight functions f : N -> [0, inf), f(0) = 0.
///   Linear(c)      : f(n) = c n
///   TwoLog         : f(n) = 2 log n          (n >= 1)
///   OneLog         : f(n) = log n            (n >= 1)
///   NOverLogN(c)   : f(n) = c n / max(1, log n)
///   PowerLaw(s, c) : f(n) = c n^s            (s positive rational)
class WeightFunction {
  public:
    enum class Kind { Linear, TwoLog, OneLog, NOverLogN, PowerLaw };

    static WeightFunction linear(Scale c);
    static WeightFunction two_log();
    static WeightFunction one_log();
    static WeightFunction n_over_log_n(Scale c);
    static WeightFunction power_law(BigRational exponent, Scale c);

    Kind kind() const { return kind_; }
    const Scale& scale() const { return c_; }
    const BigRational& exponent() const { return s_; }

    /// Enclosure of f(n); requires n >= 0.
    IReal eval(const BigInt& n, mpfr_prec_t prec) const;

    /// f(n) as an exact rational when representable.
    std::optional<BigRational> exact_value(const BigInt& n) const;

    /// e^{f(n)} as an exact rational when representable.
    std::optional<BigRational> exact_exp(const BigInt& n) const;

    /// Certified comparison f(n) <=> y.
    int compare(const BigInt& n, const BigRational& y) const;

    std::string spec_string() const;

  private:
    WeightFunction(Kind k, Scale c, BigRational s)
        : kind_(k), c_(std::move(c)), s_(std::move(s)) {}

    Kind kind_;
    Scale c_;
    BigRational s_;
};

/// min { n : f(n) >= y } by galloping + binary search with certified
/// comparisons (exact where the weight is exactly rational).
BigInt inverse_weight(const WeightFunction& f, const BigRational& y);

} // namespace partq
