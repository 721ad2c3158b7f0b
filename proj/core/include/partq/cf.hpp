#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "partq/interval.hpp"
#include "partq/rational.hpp"

namespace partq {

/// Default cap on the bit size of any continuant produced by expansion or
/// generation. Exceeding it raises ResourceError.
inline constexpr long kDefaultBitBound = 1'000'000;

/// Continued-fraction data for a number in (0,1):
///   x = [0; a_1, a_2, ...],  a_i >= 1,
/// with convergents p_i/q_i given by
///   p_{-1} = 1, p_0 = 0, q_{-1} = 0, q_0 = 1,
///   p_i = a_i p_{i-1} + p_{i-2},  q_i = a_i q_{i-1} + q_{i-2}.
///
/// An expansion is "complete" when it is the full (terminating) expansion of
/// a rational; rational expansions always end with a last quotient >= 2.
/// Prefix sums of the partial quotients are maintained alongside.
class CFExpansion {
  public:
    explicit CFExpansion(long bit_bound = kDefaultBitBound);

    /// Number of known partial quotients.
    std::size_t size() const { return a_.size(); }
    bool complete() const { return complete_; }

    /// Partial quotient a_i, 1-based, 1 <= i <= size().
    const BigInt& a(std::size_t i) const;

    /// Numerator/denominator of the i-th convergent, -1 <= i <= size().
    const BigInt& p(long i) const;
    const BigInt& q(long i) const;

    /// Convergent p_i/q_i for 0 <= i <= size().
    BigRational convergent(long i) const;

    /// a_1 + ... + a_i (i = 0 gives 0).
    const BigInt& prefix_sum(std::size_t i) const;

    /// Append the next partial quotient (must be >= 1; >= 2 would be needed
    /// for a final quotient, which append cannot know, so completeness is
    /// managed by the producing routines).
    void append(const BigInt& next);

    void mark_complete() { complete_ = true; }

    /// The open cylinder of all y in (0,1) whose expansion starts a_1..a_n.
    /// Endpoints are p_n/q_n and (p_{n-1}+p_n)/(q_{n-1}+q_n), ordered by the
    /// parity of n. Requires 1 <= n <= size(); n = 0 gives (0,1).
    Interval cylinder(long n) const;

    /// Largest i with q_i + q_{i-1} <= bound, or nullopt if q_1 + q_0 already
    /// exceeds it. Throws InsufficientDepth if the expansion is too short to
    /// decide (incomplete and all known q_i + q_{i-1} <= bound).
    std::optional<std::size_t> last_index_with_continuant_sum_at_most(
        const BigInt& bound) const;

  private:
    std::vector<BigInt> a_;        // a_1..a_K
    std::vector<BigInt> p_, q_;    // index shifted by 1: p_[0] = p_{-1}
    std::vector<BigInt> sum_;      // sum_[i] = a_1 + ... + a_i
    bool complete_ = false;
    long bit_bound_;
};

/// Early-stop knobs for expansion of rationals. Expansion halts (leaving the
/// result incomplete) once every requested limit is satisfied.
struct CFLimits {
    std::optional<std::size_t> min_terms;  // at least this many quotients
    std::optional<BigInt> min_sum;         // prefix sum of quotients reaches this
    std::optional<BigInt> min_continuant;  // q_i reaches this
};

/// Full expansion of a rational in (0,1). The terminating Euclid algorithm
/// yields a final quotient >= 2 automatically.
CFExpansion cf_expand(const BigRational& x, long bit_bound = kDefaultBitBound);

/// Expansion of a rational in (0,1), stopping early once all limits in
/// `limits` are met. The result may be incomplete.
CFExpansion cf_expand_limited(const BigRational& x, const CFLimits& limits,
                              long bit_bound = kDefaultBitBound);

/// Rules generating partial quotients of distinguished numbers.
struct CFRule {
    /// A fixed finite word of quotients (generation beyond it throws).
    struct Finite {
        std::vector<BigInt> a;
    };
    /// Eventually periodic quotients: preperiod then repeating period.
    struct Periodic {
        std::vector<BigInt> preperiod;
        std::vector<BigInt> period;
    };
    /// All quotients 1 (reciprocal golden ratio).
    struct Golden {};
    /// Quotients of e-2: blocks (1, 2k, 1) for k = 1, 2, ...
    struct EulerEMinus2 {};
    /// a_1 = 1, a_{k+1} = ceil(q_k^s) for a positive rational exponent s.
    struct Power {
        BigRational s;
    };

    std::variant<Finite, Periodic, Golden, EulerEMinus2, Power> v;

    std::string spec_string() const;
};

/// First k partial quotients from a rule (incomplete by construction).
CFExpansion cf_generate(const CFRule& rule, std::size_t k,
                        long bit_bound = kDefaultBitBound);

/// ceil(base^(num/den)) for base >= 1 and positive rational exponent,
/// in exact integer arithmetic.
BigInt ceil_rational_power(const BigInt& base, const BigRational& exponent);

} // namespace partq
