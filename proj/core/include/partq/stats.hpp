#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "partq/errors.hpp"

namespace partq::stats {

inline double mean(const std::vector<double>& v) {
    if (v.empty()) throw DomainError("stats::mean: empty sample");
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// Quantile with linear interpolation between order statistics (the common
/// "type 7" convention), p in [0,1].
inline double quantile(std::vector<double> v, double p) {
    if (v.empty()) throw DomainError("stats::quantile: empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("stats::quantile: p outside [0,1]");
    std::sort(v.begin(), v.end());
    double h = p * static_cast<double>(v.size() - 1);
    auto i = static_cast<std::size_t>(h);
    if (i + 1 >= v.size()) return v.back();
    double frac = h - static_cast<double>(i);
    return v[i] * (1.0 - frac) + v[i + 1] * frac;
}

inline double median(const std::vector<double>& v) { return quantile(v, 0.5); }

inline double sample_stddev(const std::vector<double>& v) {
    if (v.size() < 2) throw DomainError("stats::sample_stddev: need at least 2 samples");
    double m = mean(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

inline double skewness(const std::vector<double>& v) {
    if (v.size() < 2) throw DomainError("stats::skewness: need at least 2 samples");
    double m = mean(v);
    double m2 = 0, m3 = 0;
    for (double x : v) {
        double d = x - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    auto n = static_cast<double>(v.size());
    m2 /= n;
    m3 /= n;
    return m3 / std::pow(m2, 1.5);
}

inline double excess_kurtosis(const std::vector<double>& v) {
    if (v.size() < 2) throw DomainError("stats::excess_kurtosis: need at least 2 samples");
    double m = mean(v);
    double m2 = 0, m4 = 0;
    for (double x : v) {
        double d = x - m;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    auto n = static_cast<double>(v.size());
    m2 /= n;
    m4 /= n;
    return m4 / (m2 * m2) - 3.0;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// One-sample Kolmogorov-Smirnov distance of the sample to the standard
/// normal distribution.
inline double ks_normal(std::vector<double> z) {
    if (z.empty()) throw DomainError("stats::ks_normal: empty sample");
    std::sort(z.begin(), z.end());
    auto n = static_cast<double>(z.size());
    double d = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        double f = normal_cdf(z[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

} // namespace partq::stats
