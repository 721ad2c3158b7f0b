#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "partq/cf.hpp"
#include "partq/errors.hpp"
#include "partq/interval.hpp"
#include "partq/point.hpp"
#include "partq/rational.hpp"
#include "partq/weights.hpp"

namespace partq {

enum class MeasureKind { Lebesgue, Gauss };

/// b-adic intervals (k/b^n, (k+1)/b^n).
struct FamilyBary {
    BigInt base;  // >= 2
};

/// Cylinders of the greedy beta-expansion x -> beta*x mod 1, beta > 1
/// rational. Non-full cylinders are handled by exact interval pull-back.
struct FamilyBeta {
    BigRational beta;
};

/// Continued-fraction cylinders.
struct FamilyCF {};

/// Intervals between consecutive reduced fractions of denominator <= n+1.
struct FamilyFarey {};

/// Level sets of the Stern-Brocot mediant tree restricted to [0,1]:
/// depth n has 2^n intervals.
struct FamilySternBrocot {};

/// Intervals cut by {0, 1} and the rotation orbit {i*alpha mod 1 : i <= n}.
struct FamilyThreeDist {
    UnitPoint alpha;
};

/// The log-balanced construction: depth n refines the dyadic partition of
/// mesh 2^-k, splitting the leftmost slots in half so the total count is
/// floor(exp(f(n))).
struct FamilySynthetic {
    WeightFunction f;
};

/// One member of the supported zoo of interval-partition sequences. All
/// families start from P_0 = {(0,1)}.
struct PartitionFamily {
    std::variant<FamilyBary, FamilyBeta, FamilyCF, FamilyFarey,
                 FamilySternBrocot, FamilyThreeDist, FamilySynthetic>
        v;

    static PartitionFamily bary(BigInt base);
    static PartitionFamily beta(BigRational b);
    static PartitionFamily cf();
    static PartitionFamily farey();
    static PartitionFamily stern_brocot();
    static PartitionFamily three_distance(UnitPoint alpha);
    static PartitionFamily synthetic(WeightFunction f);

    /// Whether every depth-(n+1) cell sits inside a depth-n cell. True for
    /// all supported families except the rotation-orbit one, whose cells are
    /// not nested in general as n grows.
    bool self_refining() const;

    /// Stable textual tag used in CLI configs and reports.
    std::string spec_string() const;
};

/// Position of a Farey / Stern-Brocot cell relative to the continued
/// fraction of the point: the governing convergent index m and the residual
/// mediant count r.
struct DepthDecomposition {
    long m = 0;
    BigInt r{0};
};

struct FareyCell {
    Interval interval;
    DepthDecomposition dec;
};

/// Cell of the b-adic partition at depth n. Exact; EndpointHit if x is a
/// b-adic rational of depth <= n.
Interval cell_bary(const UnitPoint& x, long n, const BigInt& base);

/// Depth-n continued-fraction cylinder of an expansion. EndpointHit when
/// the expansion is complete (x rational) and n reaches its length;
/// InsufficientDepth when more quotients would be needed.
Interval cell_cf(const CFExpansion& xcf, long n);

/// The interval between consecutive fractions of denominator <= n+1 that
/// contains the number with expansion xcf, together with its (m, r)
/// decomposition: m is the largest index with q_m + q_{m-1} <= n+1 and
///   (r+1) q_m + q_{m-1} <= n+1 < (r+2) q_m + q_{m-1}.
/// Endpoints are p_m/q_m and ((r+1)p_m + p_{m-1}) / ((r+1)q_m + q_{m-1}),
/// ordered by the parity of m; the length is 1/(((r+1)q_m + q_{m-1}) q_m).
FareyCell cell_farey(const CFExpansion& xcf, const BigInt& n);

/// The depth-n Stern-Brocot cell. Same endpoint shape as cell_farey, with
/// m, r read off the partial-quotient prefix sums:
///   sum_{i<=m} a_i <= n < sum_{i<=m+1} a_i,  r = n - sum_{i<=m} a_i.
FareyCell cell_stern_brocot(const CFExpansion& xcf, const BigInt& n);

/// Depth-n cylinder of the greedy beta-expansion, computed by exact
/// pull-back of the digit windows. Agrees with cell_bary for integer beta.
Interval cell_beta(const UnitPoint& x, long n, const BigRational& beta);

/// Cell of the log-balanced partition with target count floor(exp(f(n))).
/// PrecisionError if that floor cannot be certified.
Interval cell_synthetic(const UnitPoint& x, long n, const WeightFunction& f);

/// The gap of {0,1} union {i*alpha mod 1 : 1 <= i <= n} containing x.
/// alpha must be rational with denominator > n (DegenerateAlpha otherwise);
/// EndpointHit if x coincides with an orbit point. Neighbor search runs by
/// direct sorting for small n and by a convergent-ladder counting argument
/// for large n; the gap found is always validated against the three-length
/// profile.
Interval cell_three_distance(const UnitPoint& alpha, const BigInt& n,
                             const UnitPoint& x);

/// One batch of equal rotation gaps: their common exact length and how many
/// occur at this depth.
struct GapClass {
    BigRational length;
    BigInt count;
};

/// The full gap-length statistics of the rotation partition at depth n:
/// at most three distinct lengths, aggregated and sorted increasing. With
/// eta_j = |q_j alpha - p_j| and n = m q_k + q_{k-1} + r the classes are
///   eta_k                      (n + 1 - q_k gaps),
///   eta_{k-1} - m eta_k        (r + 1 gaps),
///   eta_{k-1} - (m-1) eta_k    (q_k - r - 1 gaps),
/// zero-count classes dropped and equal lengths merged. Counts sum to n+1
/// and the weighted lengths sum to 1, both checked exactly.
std::vector<GapClass> three_distance_profile(const UnitPoint& alpha,
                                             const BigInt& n);

/// The (k, m, r) data underlying three_distance_profile, exposed for
/// diagnostics: n = m q_k + q_{k-1} + r with 1 <= m <= a_{k+1},
/// 0 <= r < q_k.
struct ThreeDistDecomposition {
    long k = 0;
    BigInt m{0};
    BigInt r{0};
    BigRational eta_k;        // |q_k alpha - p_k|
    BigRational eta_k_minus;  // |q_{k-1} alpha - p_{k-1}|
};
ThreeDistDecomposition three_distance_decomposition(const UnitPoint& alpha,
                                                    const BigInt& n);

/// True iff l = p/q and r = p'/q' are consecutive in the Farey set of
/// denominators <= n+1: q, q' <= n+1, |p'q - pq'| = 1 and q + q' > n+1.
bool farey_adjacency_check(const BigRational& l, const BigRational& r,
                           const BigInt& n);

/// Piecewise-monotone interval maps supported by the join oracle.
struct MapBary {
    BigInt base;
};
struct MapFarey {};
struct MapGauss {
    long a_max;  // truncate the countable branch family at 1/(y+a_max)
};
using MapSpec = std::variant<MapBary, MapFarey, MapGauss>;

/// Brute-force cells of the join of base under the first n-1 preimages of
/// the map, as exact sorted intervals. `base` must be the map's branch
/// partition (validated). Test oracle only; ResourceError past max_cells.
std::vector<Interval> fibred_join_oracle(const MapSpec& map,
                                         const std::vector<Interval>& base,
                                         long n,
                                         std::size_t max_cells = (1u << 21));

/// All cells of the family at depth n, sorted, for enumerable families
/// (everything except the continued-fraction cylinders, which are countably
/// infinite per depth). ResourceError past max_cells.
std::vector<Interval> enumerate_cells(const PartitionFamily& fam, long n,
                                      std::size_t max_cells = (1u << 21));

/// Largest cell measure at depth n, exact. Closed forms are used where the
/// extremal cell is known (b-adic, continued fraction, Farey, Stern-Brocot,
/// log-balanced, rotation); the beta family falls back to enumeration.
/// Only the Lebesgue measure admits an exact rational answer; Gauss raises
/// DomainError.
BigRational partition_norm(const PartitionFamily& fam, const BigInt& n,
                           MeasureKind measure = MeasureKind::Lebesgue);

/// Reusable per-point scratch: the point's full continued fraction and the
/// beta-expansion prefix, both grown lazily across queries.
struct PointCache {
    std::optional<CFExpansion> cf;

    struct BetaProgress {
        BigRational beta;
        std::vector<Interval> cells;  // cells[i] = cylinder at depth i+1
        BigRational image_lo, image_hi;  // forward image of the last cell
        BigRational orbit;               // T^depth(x)
        BigRational pow;                 // beta^depth
    };
    std::optional<BetaProgress> beta;

    const CFExpansion& ensure_cf(const UnitPoint& x, long bit_bound = kDefaultBitBound);
};

/// Family dispatch with the resolution guard: computes the depth-n cell of
/// x.value and certifies that the whole window x +- radius lies inside it,
/// so the answer is the cell of every real the point stands for. Guard
/// failure raises PrecisionError; for windowed points an exact endpoint
/// coincidence is also reported as PrecisionError (the proxy, not the real,
/// hit the boundary), while exact points keep EndpointHit.
Interval cell_of(const PartitionFamily& fam, const UnitPoint& x,
                 const BigInt& n, PointCache& cache);
Interval cell_of(const PartitionFamily& fam, const UnitPoint& x,
                 const BigInt& n);

namespace detail {

/// sum_{i=0}^{n-1} floor((a*i + b) / m) for n >= 0, m >= 1, a, b >= 0.
BigInt floor_sum(const BigInt& n, const BigInt& m, const BigInt& a,
                 const BigInt& b);

/// #{ 0 <= i <= nmax : (i*p) mod q <= c }.
BigInt count_residues_at_most(const BigInt& nmax, const BigInt& p,
                              const BigInt& q, const BigInt& c);

/// max{ (i*p) mod q : 0 <= i <= nmax, (i*p) mod q <= c }, or nullopt when
/// no residue is <= c (only possible for c < 0).
std::optional<BigInt> max_residue_at_most(const BigInt& nmax, const BigInt& p,
                                          const BigInt& q, const BigInt& c);

/// min{ (i*p) mod q : 0 <= i <= nmax, (i*p) mod q >= c }, or nullopt.
std::optional<BigInt> min_residue_at_least(const BigInt& nmax, const BigInt& p,
                                           const BigInt& q, const BigInt& c);

} // namespace detail

} // namespace partq
