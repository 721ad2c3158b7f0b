#pragma once

#include <string>

#include "partq/cf.hpp"
#include "partq/partitions.hpp"
#include "partq/point.hpp"
#include "partq/weights.hpp"

namespace partq {

/// How a base-conversion index was obtained.
enum class LochsMethod { Generic, ClosedForm, LinearScan };

/// Result of one base-conversion index computation: the largest depth L
/// such that the depth-n cell of x in the source sequence is contained in
/// the depth-L cell of x in the target sequence.
struct LochsRecord {
    BigInt n;
    BigInt L;
    PartitionFamily source;
    PartitionFamily target;
    std::string point_id;
    LochsMethod method;
};

/// Heuristic search cap for lochs_generic: the depth m at which the target
/// weight reaches three times the source weight at n, plus slack. With
/// correct weight calibrations the true index stays well below this.
BigInt lochs_default_cap(const WeightFunction& source_weight,
                         const WeightFunction& target_weight, const BigInt& n);

/// Largest L <= cap with cell(source, x, n) contained in cell(target, x, L),
/// found by exponential doubling followed by binary search. Requires the
/// target family to be self-refining, so that containment is monotone in L
/// and the set of feasible depths is downward closed.
///
/// Throws NotSelfRefining if the target family is not self-refining,
/// CapExceeded if containment still holds at the cap, and propagates
/// EndpointHit from the source cell when x is one of its endpoints. A
/// target-cell endpoint falling strictly inside the source cell simply
/// decides containment as false; it is not an error.
LochsRecord lochs_generic(const UnitPoint& x, const PartitionFamily& source,
                          const PartitionFamily& target, const BigInt& n,
                          const BigInt& cap);

/// Largest L <= cap with cell(source, x, n) contained in cell(target, x, L),
/// checking every depth 0..cap individually. Works for non-self-refining
/// targets, where feasible depths need not be contiguous, but costs O(cap)
/// cell computations; intended for cross-checks and small depths only.
/// Throws CapExceeded when depth `cap` itself is feasible, since then the
/// reported maximum could be an artifact of the cap.
LochsRecord lochs_linear_scan(const UnitPoint& x, const PartitionFamily& source,
                              const PartitionFamily& target, const BigInt& n,
                              const BigInt& cap);

/// Closed form for source = continued-fraction cylinders, target = Farey:
/// L = 2 q_n + q_{n-1} - 2 where q are the continuants of x. Needs the
/// expansion to depth n (InsufficientDepth otherwise).
LochsRecord lochs_cf_to_farey(const CFExpansion& xcf, long n);

/// Closed form for source = Farey, target = continued-fraction cylinders:
/// L = the unique k with q_k + q_{k-1} <= n + 1 < q_{k+1} + q_k.
/// InsufficientDepth if the expansion is too short to locate k;
/// EndpointHit if x is itself a Farey point of order n+1.
LochsRecord lochs_farey_to_cf(const CFExpansion& xcf, const BigInt& n);

/// Depth at which the Farey cell of x first coincides with its depth-n
/// continued-fraction cylinder: q_n + q_{n-1} - 1.
BigInt cf_depth_in_farey(const CFExpansion& xcf, long n);

} // namespace partq
