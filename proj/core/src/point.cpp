#include "partq/point.hpp"

#include <algorithm>
#include <string>

namespace partq {

UnitPoint sample_dyadic(std::uint64_t seed, std::uint64_t index, long bits, int attempt) {
    if (bits < 2) throw DomainError("sample_dyadic: need at least 2 bits");
    SplitMix64 rng = derive_stream(seed, index, 0x5a5a0000ULL + static_cast<std::uint64_t>(attempt));
    // Odd numerator in (0, 2^bits): bits-1 random high bits, low bit forced.
    BigInt num = random_bits(rng, bits - 1);
    num = (num << 1) | 1;
    BigInt den = 1;
    den <<= static_cast<unsigned long>(bits);
    UnitPoint p;
    p.value = make_rational(num, den);
    p.resolution_bits = bits;
    p.radius = dyadic_ulp(bits);
    p.provenance = SampledDyadic{seed, index, attempt};
    return p;
}

UnitPoint explicit_point(BigRational value) {
    if (!(value > 0 && value < 1)) throw DomainError("explicit_point: value must lie in (0,1)");
    UnitPoint p;
    p.value = std::move(value);
    p.resolution_bits = 0;
    p.radius = 0;
    p.provenance = ExplicitPoint{};
    return p;
}

UnitPoint materialize(const CFRule& rule, long min_bits, long bit_bound) {
    // |x - p_K/q_K| < 1/(q_K q_{K+1}); grow K until that radius certifies
    // min_bits. Generation is restarted geometrically, which stays cheap
    // because continuant growth is at least Fibonacci. A finite rule denotes
    // an exact rational, returned with radius 0 regardless of min_bits.
    std::size_t k = 8;
    for (;;) {
        std::size_t request = k + 1;
        if (const auto* fin = std::get_if<CFRule::Finite>(&rule.v))
            request = std::min(request, fin->a.size());
        CFExpansion e = cf_generate(rule, request, bit_bound);
        if (e.complete()) {
            UnitPoint p;
            p.value = e.convergent(static_cast<long>(e.size()));
            p.radius = 0;
            p.resolution_bits = 0;
            p.provenance = FromCFRule{rule, e.size()};
            if (!(p.value > 0 && p.value < 1))
                throw DomainError("materialize: rule does not generate a point of (0,1)");
            return p;
        }
        if (e.size() == k + 1 && e.size() >= 2) {
            std::size_t kk = e.size() - 1;
            BigInt prod = e.q(static_cast<long>(kk)) * e.q(static_cast<long>(kk) + 1);
            if (bit_length(prod) - 1 >= min_bits) {
                UnitPoint p;
                p.value = e.convergent(static_cast<long>(kk));
                p.radius = make_rational(1, prod);
                p.resolution_bits = bit_length(prod) - 1;
                p.provenance = FromCFRule{rule, e.size()};
                if (!(p.value > 0 && p.value < 1))
                    throw DomainError("materialize: rule does not generate a point of (0,1)");
                return p;
            }
        }
        k *= 2;
    }
}

std::string point_id(const UnitPoint& x) {
    struct Visitor {
        const UnitPoint& p;
        std::string operator()(const SampledDyadic& s) const {
            return "dyadic:bits=" + std::to_string(p.resolution_bits) +
                   ":seed=" + std::to_string(s.seed) +
                   ":index=" + std::to_string(s.index) +
                   ":attempt=" + std::to_string(s.attempt);
        }
        std::string operator()(const ExplicitPoint&) const {
            return "explicit:" + to_string(p.value);
        }
        std::string operator()(const FromCFRule& f) const {
            return "rule:" + f.rule.spec_string() + ":depth=" + std::to_string(f.depth);
        }
    };
    return std::visit(Visitor{x}, x.provenance);
}

bool guard_ok(const UnitPoint& x, const Interval& I) {
    if (x.radius == 0) return I.contains(x.value);
    return I.lo < x.value - x.radius && x.value + x.radius < I.hi;
}

void require_guard(const UnitPoint& x, const Interval& I, const char* what) {
    if (!guard_ok(x, I))
        throw PrecisionError(std::string(what) +
                             ": resolution window touches a cell boundary");
}

} // namespace partq
