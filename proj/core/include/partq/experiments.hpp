#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "partq/lochs.hpp"
#include "partq/partitions.hpp"
#include "partq/point.hpp"
#include "partq/weights.hpp"

namespace partq {

/// AlmostEverywhere fixes the sampled points and reads each point's ratio
/// trajectory across the depth list; InMeasure reads the cross-section
/// distribution over points at each fixed depth. The sampling and the
/// numbers are identical — the mode records which question a report
/// answers and whether traces are meaningful.
enum class SweepMode { AlmostEverywhere, InMeasure };

struct DepthStats {
    BigInt depth;
    long n_samples = 0;    // accepted samples = requested minus rejections
    long rejections = 0;   // samples dropped after guard retries
    long cap_exceeded = 0; // samples dropped because containment ran past the cap
    double mean = 0;
    double median = 0;
    double q05 = 0;
    double q95 = 0;
    double target = 0;
    double abs_err_median = 0;
};

struct EstimatorReport {
    SweepMode mode = SweepMode::InMeasure;
    long samples_requested = 0;
    std::vector<DepthStats> stats;
    /// Per-sample value trajectories, traces[sample][depth index]; retained
    /// only on request. Dropped samples carry NaN rows.
    std::vector<std::vector<double>> traces;
};

/// The weight function canonically attached to a family: the growth rate
/// of -log(cell length) along the family's limit theorem.
WeightFunction canonical_weight(const PartitionFamily& fam);

/// Heuristic dyadic resolution making the depth-n cell guard of the family
/// pass with high probability for a uniform sample.
long guard_bits_estimate(const PartitionFamily& fam, const BigInt& n);

/// -log lambda(I_n(x)) / f(n) with the cell measure exact (Lebesgue) or in
/// closed form (Gauss) and the final division certified to >= 50 bits.
double weight_ratio(const UnitPoint& x, const PartitionFamily& fam, const BigInt& n,
                    MeasureKind measure, const WeightFunction& f);

struct SweepConfig {
    PartitionFamily family = PartitionFamily::cf();
    WeightFunction f = WeightFunction::linear(Scale::one());
    MeasureKind measure = MeasureKind::Lebesgue;
    std::vector<BigInt> depths;
    long samples = 100;
    std::uint64_t seed = 1;
    SweepMode mode = SweepMode::InMeasure;
    long initial_bits = 0; // 0: guard_bits_estimate at the deepest depth
    bool retain_traces = false;
    double target_value = 1.0;
    int threads = 0; // 0: hardware concurrency
};

/// Ratio distribution of weight_ratio over sampled points per depth.
/// Guard failures resample the same slot with doubled resolution up to a
/// cap, then count as rejections. Deterministic for fixed (seed, config),
/// regardless of thread count.
EstimatorReport convergence_sweep(const SweepConfig& cfg);

/// Monte Carlo mean of -log lambda(I_n(x)) / n over `samples` points.
double entropy_estimate(const PartitionFamily& fam, const BigInt& n, long samples,
                        std::uint64_t seed, int threads = 0);

struct GaussianDiagnostic {
    BigInt n;
    long samples = 0;
    long rejections = 0;
    double mean_log_q_over_n = 0;
    double b_hat = 0; // empirical sd of log q_n scaled by 1/sqrt(n)
    double ks_stat = 0;
    double skewness = 0;
    double excess_kurtosis = 0;
};

/// Distribution of log q_n(x) over sampled points: centered at the a.e.
/// growth rate, scaled by the empirical deviation, and tested against the
/// standard normal.
GaussianDiagnostic clt_diagnostic(const BigInt& n, long samples, std::uint64_t seed,
                                  int threads = 0);

/// How to normalize the index L at source depth n before aggregating.
enum class LochsTransform {
    LOverN,            // L / n
    LogLOverN,         // log(L) / n          (needs L >= 1)
    LOverLogN,         // L / log(n)          (needs n >= 2)
    LOverNOverLogN,    // L / (n / log n)     (needs n >= 2)
    LOverNLogL,        // L / (n log L)       (needs L >= 2)
    TargetWeightRatio, // f2(L) / f1(n) for the canonical family weights
};

struct LochsConfig {
    PartitionFamily source = PartitionFamily::cf();
    PartitionFamily target = PartitionFamily::farey();
    LochsTransform transform = LochsTransform::LOverN;
    std::vector<BigInt> depths;
    long samples = 100;
    std::uint64_t seed = 1;
    long initial_bits = 0;
    std::optional<BigInt> cap; // default: lochs_default_cap per depth
    bool force_generic = false; // bypass closed forms even when available
    bool retain_traces = false;
    double target_value = 1.0;
    int threads = 0;
};

/// Distribution of the normalized base-conversion index per depth. Uses
/// the closed forms for the two continued-fraction/Farey pairings unless
/// force_generic is set; other self-refining targets run the containment
/// search with a weight-calibrated cap, and non-self-refining targets fall
/// back to the flagged linear scan.
EstimatorReport lochs_limit_experiment(const LochsConfig& cfg);

/// One exact row of the slowly-refining family demonstration at index k.
struct NonbalancedRow {
    long k = 0;
    BigInt a_next; // partial quotient a_{k+1}
    BigInt m;      // ceil(a_{k+1} / 2)
    BigInt r;      // q_k - 1
    BigInt n;      // m q_k + q_{k-1} + r
    BigRational eta;   // smallest gap length at depth n
    BigRational delta; // eta_{k-1} - m eta_k
    BigRational mass;  // (m q_k + q_{k-1}) * eta_k
    double ratio_eta = 0;   // -log eta / log n
    double ratio_delta = 0; // -log delta / log n
};

/// Exact per-k report for the power-rule point: the depth n_k sits mid-way
/// through the k-th quotient, where a fixed fraction of mass lies in cells
/// of length eta_k while the remaining cells have length about eta_k
/// squared, so the two -log-length ratios cluster around different limits.
std::vector<NonbalancedRow> nonbalanced_demo(const BigRational& s, long k_max);

/// True iff e^{-(1+eps) f(n)} < lambda(I_n(x)) < e^{-(1-eps) f(n)}, decided
/// exactly when e^{f(n)} is rational and by certified enclosures otherwise.
bool epsilon_good(const UnitPoint& x, const PartitionFamily& fam, const WeightFunction& f,
                  const BigInt& n, const BigRational& eps, MeasureKind measure);

} // namespace partq
