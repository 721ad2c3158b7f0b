#include "partq/cf.hpp"

#include <utility>

namespace partq {

CFExpansion::CFExpansion(long bit_bound) : bit_bound_(bit_bound) {
    p_.reserve(8);
    q_.reserve(8);
    p_.emplace_back(1);  // p_{-1}
    p_.emplace_back(0);  // p_0
    q_.emplace_back(0);  // q_{-1}
    q_.emplace_back(1);  // q_0
    sum_.emplace_back(0);
}

const BigInt& CFExpansion::a(std::size_t i) const {
    if (i < 1 || i > a_.size()) throw InsufficientDepth("CFExpansion::a: index out of range");
    return a_[i - 1];
}

const BigInt& CFExpansion::p(long i) const {
    if (i < -1 || i > static_cast<long>(a_.size()))
        throw InsufficientDepth("CFExpansion::p: index out of range");
    return p_[static_cast<std::size_t>(i + 1)];
}

const BigInt& CFExpansion::q(long i) const {
    if (i < -1 || i > static_cast<long>(a_.size()))
        throw InsufficientDepth("CFExpansion::q: index out of range");
    return q_[static_cast<std::size_t>(i + 1)];
}

BigRational CFExpansion::convergent(long i) const {
    if (i < 0) throw DomainError("CFExpansion::convergent: index must be >= 0");
    return make_rational(p(i), q(i));
}

const BigInt& CFExpansion::prefix_sum(std::size_t i) const {
    if (i >= sum_.size()) throw InsufficientDepth("CFExpansion::prefix_sum: index out of range");
    return sum_[i];
}

void CFExpansion::append(const BigInt& next) {
    if (next < 1) throw DomainError("CFExpansion::append: partial quotient must be >= 1");
    const BigInt& pm1 = p_[p_.size() - 2];
    const BigInt& pm0 = p_.back();
    const BigInt& qm1 = q_[q_.size() - 2];
    const BigInt& qm0 = q_.back();
    BigInt pn = next * pm0 + pm1;
    BigInt qn = next * qm0 + qm1;
    if (bit_length(qn) > bit_bound_)
        throw ResourceError("CFExpansion::append: continuant exceeds bit bound");
    a_.push_back(next);
    p_.push_back(std::move(pn));
    q_.push_back(std::move(qn));
    sum_.push_back(sum_.back() + next);
}

Interval CFExpansion::cylinder(long n) const {
    if (n < 0) throw DomainError("CFExpansion::cylinder: negative depth");
    if (n == 0) return Interval(BigRational(0), BigRational(1));
    if (static_cast<std::size_t>(n) > a_.size())
        throw InsufficientDepth("CFExpansion::cylinder: expansion too short");
    BigRational conv = convergent(n);
    BigRational edge = make_rational(p(n - 1) + p(n), q(n - 1) + q(n));
    // Even depth: the cylinder lies to the right of p_n/q_n; odd: to the left.
    if (n % 2 == 0) return Interval(conv, edge);
    return Interval(edge, conv);
}

std::optional<std::size_t> CFExpansion::last_index_with_continuant_sum_at_most(
    const BigInt& bound) const {
    if (a_.empty()) throw InsufficientDepth("continuant search: empty expansion");
    if (q(1) + q(0) > bound) return std::nullopt;
    // q_i + q_{i-1} is strictly increasing; binary search the last index <= bound.
    std::size_t lo = 1, hi = a_.size();
    if (q(static_cast<long>(hi)) + q(static_cast<long>(hi) - 1) <= bound) {
        if (!complete_)
            throw InsufficientDepth("continuant search: expansion too short for bound");
        return hi;
    }
    while (hi - lo > 1) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (q(static_cast<long>(mid)) + q(static_cast<long>(mid) - 1) <= bound)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

namespace {

bool limits_met(const CFExpansion& e, const CFLimits& limits) {
    if (limits.min_terms && e.size() < *limits.min_terms) return false;
    if (limits.min_sum && e.prefix_sum(e.size()) < *limits.min_sum) return false;
    if (limits.min_continuant && e.q(static_cast<long>(e.size())) < *limits.min_continuant)
        return false;
    return true;
}

CFExpansion expand_impl(const BigRational& x, const CFLimits* limits, long bit_bound) {
    if (!(x > 0 && x < 1)) throw DomainError("cf_expand: argument must lie in (0,1)");
    CFExpansion e(bit_bound);
    // Euclid on num/den: x = [0; a_1, a_2, ...] with a_i = floor(den/num) steps.
    BigInt num = x.get_num(), den = x.get_den();
    // State: remaining tail value num/den in (0,1); quotient a = floor(den/num).
    while (num != 0) {
        BigInt a, rem;
        mpz_fdiv_qr(a.get_mpz_t(), rem.get_mpz_t(), den.get_mpz_t(), num.get_mpz_t());
        e.append(a);
        den = num;
        num = rem;
        if (limits && num != 0 && limits_met(e, *limits)) return e;
    }
    e.mark_complete();
    return e;
}

} // namespace

CFExpansion cf_expand(const BigRational& x, long bit_bound) {
    return expand_impl(x, nullptr, bit_bound);
}

CFExpansion cf_expand_limited(const BigRational& x, const CFLimits& limits, long bit_bound) {
    return expand_impl(x, &limits, bit_bound);
}

BigInt ceil_rational_power(const BigInt& base, const BigRational& exponent) {
    if (base < 1) throw DomainError("ceil_rational_power: base must be >= 1");
    if (!(exponent > 0)) throw DomainError("ceil_rational_power: exponent must be positive");
    const BigInt& num = exponent.get_num();
    const BigInt& den = exponent.get_den();
    if (!num.fits_ulong_p() || !den.fits_ulong_p())
        throw DomainError("ceil_rational_power: exponent too large");
    BigInt powered;
    mpz_pow_ui(powered.get_mpz_t(), base.get_mpz_t(), num.get_ui());
    // ceil(powered^(1/den)): take the floor root, bump unless it is exact.
    BigInt root;
    int exact = mpz_root(root.get_mpz_t(), powered.get_mpz_t(), den.get_ui());
    if (!exact) root += 1;
    return root;
}

namespace {

struct RuleGenerator {
    std::size_t k;
    long bit_bound;

    CFExpansion operator()(const CFRule::Finite& r) const {
        if (k > r.a.size())
            throw InsufficientDepth("cf_generate: finite rule shorter than requested depth");
        CFExpansion e(bit_bound);
        for (std::size_t i = 0; i < k; ++i) e.append(r.a[i]);
        if (k == r.a.size()) e.mark_complete();
        return e;
    }

    CFExpansion operator()(const CFRule::Periodic& r) const {
        if (r.period.empty()) throw DomainError("cf_generate: empty period");
        CFExpansion e(bit_bound);
        for (std::size_t i = 0; i < k; ++i) {
            if (i < r.preperiod.size())
                e.append(r.preperiod[i]);
            else
                e.append(r.period[(i - r.preperiod.size()) % r.period.size()]);
        }
        return e;
    }

    CFExpansion operator()(const CFRule::Golden&) const {
        CFExpansion e(bit_bound);
        for (std::size_t i = 0; i < k; ++i) e.append(1);
        return e;
    }

    CFExpansion operator()(const CFRule::EulerEMinus2&) const {
        CFExpansion e(bit_bound);
        // Blocks (1, 2j, 1), j = 1, 2, ...: quotients 1,2,1,1,4,1,1,6,1,...
        std::size_t emitted = 0;
        for (unsigned long j = 1; emitted < k; ++j) {
            const BigInt block[3] = {BigInt(1), BigInt(2 * j), BigInt(1)};
            for (const auto& v : block) {
                if (emitted == k) break;
                e.append(v);
                ++emitted;
            }
        }
        return e;
    }

    CFExpansion operator()(const CFRule::Power& r) const {
        if (!(r.s > 0)) throw DomainError("cf_generate: power rule needs s > 0");
        CFExpansion e(bit_bound);
        if (k == 0) return e;
        e.append(1);  // a_1 = 1
        for (std::size_t i = 1; i < k; ++i)
            e.append(ceil_rational_power(e.q(static_cast<long>(i)), r.s));
        return e;
    }
};

} // namespace

CFExpansion cf_generate(const CFRule& rule, std::size_t k, long bit_bound) {
    return std::visit(RuleGenerator{k, bit_bound}, rule.v);
}

std::string CFRule::spec_string() const {
    struct Visitor {
        std::string operator()(const Finite& r) const {
            std::string s = "finite:";
            for (std::size_t i = 0; i < r.a.size(); ++i) {
                if (i) s += ',';
                s += r.a[i].get_str();
            }
            return s;
        }
        std::string operator()(const Periodic& r) const {
            std::string s = "periodic:";
            for (std::size_t i = 0; i < r.preperiod.size(); ++i) {
                if (i) s += ',';
                s += r.preperiod[i].get_str();
            }
            s += ':';
            for (std::size_t i = 0; i < r.period.size(); ++i) {
                if (i) s += ',';
                s += r.period[i].get_str();
            }
            return s;
        }
        std::string operator()(const Golden&) const { return "golden"; }
        std::string operator()(const EulerEMinus2&) const { return "e-2"; }
        std::string operator()(const Power& r) const { return "power:" + r.s.get_str(); }
    };
    return std::visit(Visitor{}, v);
}

} // namespace partq
