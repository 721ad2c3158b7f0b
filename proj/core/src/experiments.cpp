#include "partq/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "partq/certified.hpp"
#include "partq/errors.hpp"
#include "partq/stats.hpp"

namespace partq {

namespace {

long to_long_depth(const BigInt& n, const char* what) {
    if (!n.fits_slong_p())
        throw ResourceError(std::string(what) + ": depth does not fit a machine word");
    return n.get_si();
}

/// Enclosure of -log(measure of I) for the requested measure.
IReal neg_log_measure(const Interval& I, MeasureKind measure, mpfr_prec_t prec) {
    if (measure == MeasureKind::Lebesgue)
        return IReal::from(I.length(), prec).log().neg();
    IReal num = (IReal::from(1 + I.hi, prec) / IReal::from(1 + I.lo, prec)).log();
    IReal lam = num / IReal::from(BigInt(2), prec).log();
    return lam.log().neg();
}

/// Outcome status per sample slot.
enum : char { kOk = 0, kRejected = 1, kCapExceeded = 2 };

struct EngineOutcome {
    std::vector<std::vector<double>> rows;
    std::vector<char> status;

    long count(char st) const {
        long c = 0;
        for (char s : status)
            if (s == st) ++c;
        return c;
    }
};

/// Evaluates `eval` on `samples` independently seeded points. A guard
/// failure (PrecisionError or EndpointHit) resamples the same slot with a
/// fresh attempt at doubled resolution until the bit cap, then records a
/// rejection; CapExceeded records its own status. Rows are written by
/// sample index, so the outcome is identical for any worker count.
EngineOutcome run_sampled(long samples, std::uint64_t seed, long bits0, int threads,
                          const std::function<std::vector<double>(const UnitPoint&)>& eval) {
    if (samples < 1) throw DomainError("experiments: need at least one sample");
    if (bits0 < 2) throw DomainError("experiments: initial resolution too small");

    EngineOutcome out;
    out.rows.resize(static_cast<std::size_t>(samples));
    out.status.assign(static_cast<std::size_t>(samples), kRejected);

    std::atomic<long> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mu;

    const long bit_cap = std::max(4096L, 4 * bits0);

    auto worker = [&]() {
        for (;;) {
            long i = next.fetch_add(1);
            if (i >= samples || failed.load()) return;
            auto slot = static_cast<std::size_t>(i);
            try {
                long bits = bits0;
                for (int attempt = 0;; ++attempt) {
                    UnitPoint x =
                        sample_dyadic(seed, static_cast<std::uint64_t>(i), bits, attempt);
                    try {
                        out.rows[slot] = eval(x);
                        out.status[slot] = kOk;
                        break;
                    } catch (const PrecisionError&) {
                    } catch (const EndpointHit&) {
                    } catch (const CapExceeded&) {
                        out.status[slot] = kCapExceeded;
                        break;
                    }
                    if (bits >= bit_cap) break; // stays kRejected
                    bits = std::min(2 * bits, bit_cap);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };

    long want = threads > 0 ? threads
                            : static_cast<long>(std::max(1u, std::thread::hardware_concurrency()));
    long nthreads = std::min(want, samples);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (long t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
    return out;
}

EstimatorReport assemble_report(const EngineOutcome& eo, const std::vector<BigInt>& depths,
                                double target, SweepMode mode, long requested,
                                bool retain_traces) {
    EstimatorReport rep;
    rep.mode = mode;
    rep.samples_requested = requested;
    long rejections = eo.count(kRejected);
    long cap_exceeded = eo.count(kCapExceeded);
    for (std::size_t di = 0; di < depths.size(); ++di) {
        std::vector<double> col;
        col.reserve(eo.rows.size());
        for (std::size_t i = 0; i < eo.rows.size(); ++i)
            if (eo.status[i] == kOk) col.push_back(eo.rows[i][di]);
        if (col.empty())
            throw ResourceError("experiments: every sample was rejected; raise the "
                                "resolution or loosen the configuration");
        DepthStats ds;
        ds.depth = depths[di];
        ds.n_samples = static_cast<long>(col.size());
        ds.rejections = rejections;
        ds.cap_exceeded = cap_exceeded;
        ds.mean = stats::mean(col);
        ds.median = stats::median(col);
        ds.q05 = stats::quantile(col, 0.05);
        ds.q95 = stats::quantile(col, 0.95);
        ds.target = target;
        ds.abs_err_median = std::abs(ds.median - target);
        rep.stats.push_back(std::move(ds));
    }
    if (retain_traces) {
        rep.traces.reserve(eo.rows.size());
        for (std::size_t i = 0; i < eo.rows.size(); ++i) {
            if (eo.status[i] == kOk) {
                rep.traces.push_back(eo.rows[i]);
            } else {
                rep.traces.emplace_back(depths.size(),
                                        std::numeric_limits<double>::quiet_NaN());
            }
        }
    }
    return rep;
}

void validate_depths(const std::vector<BigInt>& depths, const BigInt& min_depth,
                     const char* what) {
    if (depths.empty()) throw DomainError(std::string(what) + ": depth list is empty");
    for (std::size_t i = 0; i < depths.size(); ++i) {
        if (depths[i] < min_depth)
            throw DomainError(std::string(what) + ": depths must be at least " +
                              min_depth.get_str());
        if (i > 0 && !(depths[i - 1] < depths[i]))
            throw DomainError(std::string(what) + ": depths must be strictly increasing");
    }
}

} // namespace

WeightFunction canonical_weight(const PartitionFamily& fam) {
    struct Visitor {
        WeightFunction operator()(const FamilyBary& f) const {
            return WeightFunction::linear(Scale::log_of(BigRational(f.base)));
        }
        WeightFunction operator()(const FamilyBeta& f) const {
            return WeightFunction::linear(Scale::log_of(f.beta));
        }
        WeightFunction operator()(const FamilyCF&) const {
            return WeightFunction::linear(Scale::cf_entropy());
        }
        WeightFunction operator()(const FamilyFarey&) const { return WeightFunction::two_log(); }
        WeightFunction operator()(const FamilySternBrocot&) const {
            return WeightFunction::n_over_log_n(Scale::pi2_over_6());
        }
        WeightFunction operator()(const FamilyThreeDist&) const {
            return WeightFunction::one_log();
        }
        WeightFunction operator()(const FamilySynthetic& f) const { return f.f; }
    };
    return std::visit(Visitor{}, fam.v);
}

long guard_bits_estimate(const PartitionFamily& fam, const BigInt& n) {
    if (n < 0) throw DomainError("guard_bits_estimate: depth must be nonnegative");
    if (n == 0) return 256;
    WeightFunction f = canonical_weight(fam);
    // Typical cells have -log2(length) close to f(n)/log 2; half again as
    // much resolution leaves room for the guard and unlucky samples.
    double v = f.eval(n, 96).midpoint_double();
    double bits = 1.5 * v / 0.6931471805599453 + 128.0;
    if (bits < 256) return 256;
    if (bits > 1e6)
        throw ResourceError("guard_bits_estimate: this depth would need more than 10^6 bits");
    return static_cast<long>(bits);
}

double weight_ratio(const UnitPoint& x, const PartitionFamily& fam, const BigInt& n,
                    MeasureKind measure, const WeightFunction& f) {
    if (n < 1) throw DomainError("weight_ratio: depth must be positive");
    PointCache cache;
    Interval I = cell_of(fam, x, n, cache);
    return certify_double([&](mpfr_prec_t prec) {
        return neg_log_measure(I, measure, prec) / f.eval(n, prec);
    });
}

EstimatorReport convergence_sweep(const SweepConfig& cfg) {
    validate_depths(cfg.depths, BigInt(1), "convergence_sweep");
    long bits0 = cfg.initial_bits > 0 ? cfg.initial_bits
                                      : guard_bits_estimate(cfg.family, cfg.depths.back());
    auto eval = [&](const UnitPoint& x) {
        PointCache cache;
        std::vector<double> row;
        row.reserve(cfg.depths.size());
        for (const BigInt& d : cfg.depths) {
            Interval I = cell_of(cfg.family, x, d, cache);
            row.push_back(certify_double([&](mpfr_prec_t prec) {
                return neg_log_measure(I, cfg.measure, prec) / cfg.f.eval(d, prec);
            }));
        }
        return row;
    };
    EngineOutcome eo = run_sampled(cfg.samples, cfg.seed, bits0, cfg.threads, eval);
    return assemble_report(eo, cfg.depths, cfg.target_value, cfg.mode, cfg.samples,
                           cfg.retain_traces);
}

double entropy_estimate(const PartitionFamily& fam, const BigInt& n, long samples,
                        std::uint64_t seed, int threads) {
    SweepConfig cfg;
    cfg.family = fam;
    cfg.f = WeightFunction::linear(Scale::one());
    cfg.depths = {n};
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.target_value = 0.0;
    return convergence_sweep(cfg).stats.at(0).mean;
}

GaussianDiagnostic clt_diagnostic(const BigInt& n, long samples, std::uint64_t seed,
                                  int threads) {
    if (n < 50) throw DomainError("clt_diagnostic: depth must be at least 50");
    if (samples < 500) throw DomainError("clt_diagnostic: need at least 500 samples");
    long depth = to_long_depth(n, "clt_diagnostic");

    PartitionFamily fam = PartitionFamily::cf();
    long bits0 = guard_bits_estimate(fam, n);
    auto eval = [&](const UnitPoint& x) -> std::vector<double> {
        PointCache cache;
        (void)cell_of(fam, x, n, cache); // window must sit inside the depth-n cylinder
        BigInt q = cache.cf->q(depth);
        return {certify_double(
            [&](mpfr_prec_t prec) { return IReal::from(q, prec).log(); })};
    };
    EngineOutcome eo = run_sampled(samples, seed, bits0, threads, eval);

    std::vector<double> v;
    v.reserve(eo.rows.size());
    for (std::size_t i = 0; i < eo.rows.size(); ++i)
        if (eo.status[i] == kOk) v.push_back(eo.rows[i][0]);
    if (v.size() < 2) throw ResourceError("clt_diagnostic: not enough accepted samples");

    GaussianDiagnostic g;
    g.n = n;
    g.samples = static_cast<long>(v.size());
    g.rejections = eo.count(kRejected);
    auto nd = static_cast<double>(depth);
    g.mean_log_q_over_n = stats::mean(v) / nd;
    double sd = stats::sample_stddev(v);
    if (!(sd > 0)) throw InvariantViolation("clt_diagnostic: degenerate log q_n sample");
    g.b_hat = sd / std::sqrt(nd);

    // Center at the a.e. growth rate of log q_n, which is half the
    // continued-fraction entropy.
    double center =
        certify_double([](mpfr_prec_t prec) { return Scale::levy().eval(prec); }) * nd;
    std::vector<double> z;
    z.reserve(v.size());
    for (double val : v) z.push_back((val - center) / sd);
    g.ks_stat = stats::ks_normal(z);
    g.skewness = stats::skewness(z);
    g.excess_kurtosis = stats::excess_kurtosis(z);
    return g;
}

namespace {

double transform_value(LochsTransform t, const BigInt& L, const BigInt& n,
                       const WeightFunction& f1, const WeightFunction& f2) {
    switch (t) {
    case LochsTransform::LOverN:
        return certify_double([&](mpfr_prec_t prec) {
            return IReal::from(L, prec) / IReal::from(n, prec);
        });
    case LochsTransform::LogLOverN:
        // log L is undefined below 1; the engine retries the slot with a
        // fresh sample and eventually records a rejection.
        if (L < 1) throw PrecisionError("transform log(L)/n: sample has L = 0");
        return certify_double([&](mpfr_prec_t prec) {
            return IReal::from(L, prec).log() / IReal::from(n, prec);
        });
    case LochsTransform::LOverLogN:
        return certify_double([&](mpfr_prec_t prec) {
            return IReal::from(L, prec) / IReal::from(n, prec).log();
        });
    case LochsTransform::LOverNOverLogN:
        return certify_double([&](mpfr_prec_t prec) {
            return IReal::from(L, prec) * IReal::from(n, prec).log() / IReal::from(n, prec);
        });
    case LochsTransform::LOverNLogL:
        if (L < 2) throw PrecisionError("transform L/(n log L): sample has L < 2");
        return certify_double([&](mpfr_prec_t prec) {
            return IReal::from(L, prec) /
                   (IReal::from(n, prec) * IReal::from(L, prec).log());
        });
    case LochsTransform::TargetWeightRatio:
        return certify_double([&](mpfr_prec_t prec) {
            return f2.eval(L, prec) / f1.eval(n, prec);
        });
    }
    throw DomainError("transform_value: unknown transform");
}

} // namespace

EstimatorReport lochs_limit_experiment(const LochsConfig& cfg) {
    BigInt min_depth = (cfg.transform == LochsTransform::LOverLogN ||
                        cfg.transform == LochsTransform::LOverNOverLogN)
                           ? BigInt(2)
                           : BigInt(1);
    validate_depths(cfg.depths, min_depth, "lochs_limit_experiment");

    WeightFunction f1 = canonical_weight(cfg.source);
    WeightFunction f2 = canonical_weight(cfg.target);

    bool cf_to_farey = !cfg.force_generic &&
                       std::holds_alternative<FamilyCF>(cfg.source.v) &&
                       std::holds_alternative<FamilyFarey>(cfg.target.v);
    bool farey_to_cf = !cfg.force_generic &&
                       std::holds_alternative<FamilyFarey>(cfg.source.v) &&
                       std::holds_alternative<FamilyCF>(cfg.target.v);

    // Only the source cell needs a guard; target cells in the containment
    // search are probed with the exact proxy value.
    long bits0 = cfg.initial_bits > 0
                     ? cfg.initial_bits
                     : guard_bits_estimate(cfg.source, cfg.depths.back()) + 64;

    std::vector<BigInt> caps;
    if (!cf_to_farey && !farey_to_cf) {
        caps.reserve(cfg.depths.size());
        for (const BigInt& d : cfg.depths)
            caps.push_back(cfg.cap ? *cfg.cap : lochs_default_cap(f1, f2, d));
    }

    auto eval = [&](const UnitPoint& x) {
        PointCache cache;
        std::vector<double> row;
        row.reserve(cfg.depths.size());
        for (std::size_t di = 0; di < cfg.depths.size(); ++di) {
            const BigInt& d = cfg.depths[di];
            BigInt L;
            if (cf_to_farey) {
                long dl = to_long_depth(d, "lochs_limit_experiment");
                (void)cell_of(cfg.source, x, d, cache); // guards quotients 1..n
                L = lochs_cf_to_farey(*cache.cf, dl).L;
            } else if (farey_to_cf) {
                const CFExpansion& e = cache.ensure_cf(x);
                L = lochs_farey_to_cf(e, d).L;
                // The index only depends on quotients 1..L+1; guarding that
                // cylinder transfers it to the real point.
                (void)cell_of(PartitionFamily::cf(), x, L + 1, cache);
            } else if (cfg.target.self_refining()) {
                L = lochs_generic(x, cfg.source, cfg.target, d, caps[di]).L;
            } else {
                L = lochs_linear_scan(x, cfg.source, cfg.target, d, caps[di]).L;
            }
            row.push_back(transform_value(cfg.transform, L, d, f1, f2));
        }
        return row;
    };
    EngineOutcome eo = run_sampled(cfg.samples, cfg.seed, bits0, cfg.threads, eval);
    return assemble_report(eo, cfg.depths, cfg.target_value,
                           cfg.retain_traces ? SweepMode::AlmostEverywhere
                                             : SweepMode::InMeasure,
                           cfg.samples, cfg.retain_traces);
}

std::vector<NonbalancedRow> nonbalanced_demo(const BigRational& s, long k_max) {
    if (!(s > 0)) throw DomainError("nonbalanced_demo: exponent must be positive");
    if (k_max < 1) throw DomainError("nonbalanced_demo: k_max must be at least 1");

    // Work with a rational surrogate: the expansion truncated a few levels
    // past k_max. Continuants square at each level, so the surrogate's
    // relative error is far below every inequality tested.
    CFRule rule{CFRule::Power{s}};
    auto terms = static_cast<std::size_t>(k_max) + 3;
    CFExpansion e = cf_generate(rule, terms);
    auto K = static_cast<long>(e.size());
    BigRational alpha = e.convergent(K);
    UnitPoint alpha_pt = explicit_point(alpha);

    auto eta_at = [&](long j) {
        BigRational d = e.q(j) * alpha - e.p(j);
        return d < 0 ? BigRational(-d) : d;
    };

    std::vector<NonbalancedRow> out;
    out.reserve(static_cast<std::size_t>(k_max));
    for (long k = 1; k <= k_max; ++k) {
        NonbalancedRow row;
        row.k = k;
        row.a_next = e.a(static_cast<std::size_t>(k) + 1);
        row.m = (row.a_next + 1) / 2;
        row.r = e.q(k) - 1;
        row.n = row.m * e.q(k) + e.q(k - 1) + row.r;
        row.eta = eta_at(k);
        BigRational eta_prev = eta_at(k - 1);
        row.delta = eta_prev - row.m * row.eta;
        row.mass = BigRational(row.m * e.q(k) + e.q(k - 1)) * row.eta;
        if (!(row.eta > 0) || !(row.delta > 0))
            throw InvariantViolation("nonbalanced_demo: surrogate expansion too shallow");

        // The chosen depth must decompose as (k, m, r); cross-check against
        // the rotation-partition machinery.
        ThreeDistDecomposition dec = three_distance_decomposition(alpha_pt, row.n);
        if (dec.k != k || dec.m != row.m || dec.r != row.r)
            throw InvariantViolation("nonbalanced_demo: depth decomposition mismatch at k=" +
                                     std::to_string(k));

        row.ratio_eta = certify_double([&](mpfr_prec_t prec) {
            return IReal::from(row.eta, prec).log().neg() / IReal::from(row.n, prec).log();
        });
        row.ratio_delta = certify_double([&](mpfr_prec_t prec) {
            return IReal::from(row.delta, prec).log().neg() / IReal::from(row.n, prec).log();
        });
        out.push_back(std::move(row));
    }
    return out;
}

namespace {

/// f(n) written as m * log(u) with m, u rational, when the weight has that
/// shape. The epsilon-band boundaries are then u^{-(1 +- eps) m}, which are
/// exactly comparable against a rational cell length even when e^{f(n)}
/// itself is irrational.
std::optional<std::pair<BigRational, BigRational>> log_multiple_form(
    const WeightFunction& f, const BigInt& n) {
    const Scale& c = f.scale();
    if (c.sym != Scale::Sym::LogRat) return std::nullopt;
    switch (f.kind()) {
        case WeightFunction::Kind::Linear:
            return std::make_pair(BigRational(c.rat * n), c.log_arg);
        case WeightFunction::Kind::PowerLaw:
            if (auto p = rational_power_exact(BigRational(n), f.exponent()))
                return std::make_pair(BigRational(c.rat * *p), c.log_arg);
            return std::nullopt;
        default:
            return std::nullopt;
    }
}

} // namespace

bool epsilon_good(const UnitPoint& x, const PartitionFamily& fam, const WeightFunction& f,
                  const BigInt& n, const BigRational& eps, MeasureKind measure) {
    if (!(eps > 0)) throw DomainError("epsilon_good: eps must be positive");
    if (n < 1) throw DomainError("epsilon_good: depth must be positive");
    PointCache cache;
    Interval I = cell_of(fam, x, n, cache);

    if (measure == MeasureKind::Lebesgue) {
        BigRational lam = I.length();
        if (auto E = f.exact_exp(n)) {
            // lambda vs E^{-(1+eps)} and E^{-(1-eps)}, decided exactly.
            return compare_with_rational_power(lam, *E, -(1 + eps)) > 0 &&
                   compare_with_rational_power(lam, *E, -(1 - eps)) < 0;
        }
        if (auto lm = log_multiple_form(f, n)) {
            const BigRational& m = lm->first;
            const BigRational& u = lm->second;
            return compare_with_rational_power(lam, u, BigRational(-((1 + eps) * m))) > 0 &&
                   compare_with_rational_power(lam, u, BigRational(-((1 - eps) * m))) < 0;
        }
    }

    // Certified enclosures: (1-eps) f(n) < -log lambda < (1+eps) f(n).
    for (mpfr_prec_t prec = 128; prec <= (mpfr_prec_t{1} << 16); prec *= 2) {
        IReal nl = neg_log_measure(I, measure, prec);
        IReal fn = f.eval(n, prec);
        IReal upper = IReal::from(1 + eps, prec) * fn - nl;
        IReal lower = nl - IReal::from(1 - eps, prec) * fn;
        if (upper.strictly_negative() || lower.strictly_negative()) return false;
        if (upper.strictly_positive() && lower.strictly_positive()) return true;
    }
    throw PrecisionError("epsilon_good: comparison undecided at the precision ceiling");
}

} // namespace partq
