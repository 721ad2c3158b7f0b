#include "partq/lochs.hpp"

#include <string>

#include "partq/certified.hpp"
#include "partq/errors.hpp"

namespace partq {

namespace {

/// Shared containment oracle for the generic search and the linear scan.
/// Probes the target family with an exact copy of the proxy value: once the
/// source cell passed its resolution guard, containment of that cell in a
/// target cell is decided by any interior point, so no second guard is
/// needed. A target endpoint landing on the probe lies strictly inside the
/// source cell, which settles containment as false.
class ContainmentOracle {
  public:
    ContainmentOracle(const PartitionFamily& target, const UnitPoint& x, Interval source_cell)
        : target_(target), source_cell_(std::move(source_cell)) {
        probe_.value = x.value;
        probe_.resolution_bits = 0;
        probe_.radius = 0;
        probe_.provenance = x.provenance;
    }

    bool contained(const BigInt& depth) {
        try {
            Interval cell = cell_of(target_, probe_, depth, cache_);
            return cell.contains(source_cell_);
        } catch (const EndpointHit&) {
            return false;
        }
    }

  private:
    const PartitionFamily& target_;
    Interval source_cell_;
    UnitPoint probe_;
    PointCache cache_;
};

} // namespace

BigInt lochs_default_cap(const WeightFunction& source_weight,
                         const WeightFunction& target_weight, const BigInt& n) {
    if (n < 0) throw DomainError("lochs_default_cap: depth must be nonnegative");
    if (n == 0) return 64;
    if (auto y = source_weight.exact_value(n)) {
        return inverse_weight(target_weight, 3 * *y) + 64;
    }
    // Certified comparison f2(m) >= 3 f1(n). An enclosure that stays
    // undecided at the precision ceiling is treated as ">=": that can only
    // shrink the reported inverse by a hair, and the +64 slack absorbs it.
    auto at_least = [&](const BigInt& m) -> bool {
        if (m <= 0) return false;
        for (mpfr_prec_t prec = 128; prec <= (mpfr_prec_t{1} << 16); prec *= 2) {
            IReal diff = target_weight.eval(m, prec) -
                         source_weight.eval(n, prec) * IReal::from_long(3, prec);
            if (diff.strictly_negative()) return false;
            if (diff.strictly_positive()) return true;
        }
        return true;
    };
    BigInt m = 1;
    while (!at_least(m)) {
        m *= 2;
        if (bit_length(m) > (1L << 20))
            throw ResourceError("lochs_default_cap: cap exceeds 2^(2^20); "
                                "supply an explicit cap for this pairing");
    }
    BigInt lo = m / 2;
    BigInt hi = m;
    while (hi - lo > 1) {
        BigInt mid = (lo + hi) / 2;
        if (at_least(mid)) hi = mid;
        else lo = mid;
    }
    return hi + 64;
}

LochsRecord lochs_generic(const UnitPoint& x, const PartitionFamily& source,
                          const PartitionFamily& target, const BigInt& n,
                          const BigInt& cap) {
    if (!target.self_refining())
        throw NotSelfRefining("lochs_generic: target family is not self-refining, so "
                              "feasible depths need not be downward closed; use "
                              "lochs_linear_scan for it instead");
    if (cap < 0) throw DomainError("lochs_generic: cap must be nonnegative");

    PointCache source_cache;
    Interval source_cell = cell_of(source, x, n, source_cache);
    ContainmentOracle oracle(target, x, source_cell);

    if (oracle.contained(cap))
        throw CapExceeded("lochs_generic: containment still holds at cap " + cap.get_str());

    // Depth 0 is the whole interval, so containment holds there; gallop to
    // bracket the threshold, then bisect.
    BigInt lo = 0;
    BigInt hi = cap;
    BigInt g = 1;
    while (g < cap) {
        if (oracle.contained(g)) {
            lo = g;
            g *= 2;
        } else {
            hi = g;
            break;
        }
    }
    while (hi - lo > 1) {
        BigInt mid = (lo + hi) / 2;
        if (oracle.contained(mid)) lo = mid;
        else hi = mid;
    }

    // Re-check the defining property directly, independent of search order.
    if (!oracle.contained(lo) || oracle.contained(lo + 1))
        throw InvariantViolation("lochs_generic: search result fails the defining property");

    return LochsRecord{n, lo, source, target, point_id(x), LochsMethod::Generic};
}

LochsRecord lochs_linear_scan(const UnitPoint& x, const PartitionFamily& source,
                              const PartitionFamily& target, const BigInt& n,
                              const BigInt& cap) {
    if (cap < 0) throw DomainError("lochs_linear_scan: cap must be nonnegative");

    PointCache source_cache;
    Interval source_cell = cell_of(source, x, n, source_cache);
    ContainmentOracle oracle(target, x, source_cell);

    if (oracle.contained(cap))
        throw CapExceeded("lochs_linear_scan: containment holds at cap " + cap.get_str() +
                          ", so the maximum below the cap may be an artifact");

    // Feasible depths may be scattered; walk down from the cap and stop at
    // the first hit, which is the maximum. Depth 0 always holds.
    BigInt depth = cap;
    while (depth > 0) {
        depth -= 1;
        if (oracle.contained(depth)) break;
    }

    return LochsRecord{n, depth, source, target, point_id(x), LochsMethod::LinearScan};
}

LochsRecord lochs_cf_to_farey(const CFExpansion& xcf, long n) {
    if (n < 0) throw DomainError("lochs_cf_to_farey: depth must be nonnegative");
    BigInt L = 2 * xcf.q(n) + xcf.q(n - 1) - 2;
    return LochsRecord{BigInt(n),     L,
                       PartitionFamily::cf(), PartitionFamily::farey(),
                       "expansion",   LochsMethod::ClosedForm};
}

LochsRecord lochs_farey_to_cf(const CFExpansion& xcf, const BigInt& n) {
    if (n < 0) throw DomainError("lochs_farey_to_cf: depth must be nonnegative");
    if (xcf.complete() && xcf.q(static_cast<long>(xcf.size())) <= n + 1)
        throw EndpointHit("lochs_farey_to_cf: x is itself a fraction of the depth-" +
                          n.get_str() + " Farey partition");
    auto k = xcf.last_index_with_continuant_sum_at_most(n + 1);
    long kk = k ? static_cast<long>(*k) : 0;
    return LochsRecord{n,           BigInt(kk),
                       PartitionFamily::farey(), PartitionFamily::cf(),
                       "expansion", LochsMethod::ClosedForm};
}

BigInt cf_depth_in_farey(const CFExpansion& xcf, long n) {
    if (n < 0) throw DomainError("cf_depth_in_farey: depth must be nonnegative");
    return xcf.q(n) + xcf.q(n - 1) - 1;
}

} // namespace partq
