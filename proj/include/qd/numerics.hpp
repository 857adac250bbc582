#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qd {

/// Composite adaptive Simpson integration of f over [a, b] to absolute
/// tolerance abs_tol. Throws NumericError if the recursion depth limit is
/// hit before the tolerance is met.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth = 40);

/// Same, but integrating each [pts[i], pts[i+1]] segment separately. Used to
/// seed the subdivision when the integrand has known narrow features.
double adaptive_simpson_segments(const std::function<double(double)>& f,
                                 std::span<const double> pts, double abs_tol,
                                 int max_depth = 40);

struct GoldenResult {
    double x;
    double f;
    bool fallback_used;  // dense-scan fallback triggered (non-unimodal bracket)
};

/// Golden-section maximization of f on [a, b] with relative x tolerance.
/// Ties prefer the smaller x. If a bracket endpoint beats the interior
/// optimum, falls back to a dense grid scan.
GoldenResult golden_max(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-6);

/// One-sample Kolmogorov-Smirnov statistic D_n against a fully specified CDF.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

/// Two-sample KS statistic.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Critical value of D for the one-sample test: K_alpha / sqrt(n).
/// alpha = 0.01 -> K = 1.62762.
double ks_critical(double alpha, std::size_t n);

/// Two-sample critical value: K_alpha * sqrt((n+m)/(n m)).
double ks_critical_two_sample(double alpha, std::size_t n, std::size_t m);

double norm_cdf(double x);

struct MeanStderr {
    double mean;
    double stderr;
    std::size_t n;
};

/// Leave-one-out jackknife mean and standard error of f applied samplewise.
MeanStderr jackknife_mean(std::span<const double> values);

/// Streaming mean/variance accumulator; merges associatively.
struct RunningStats {
    std::size_t n = 0;
    double sum = 0.0;
    double sumsq = 0.0;
    void add(double x) {
        ++n;
        sum += x;
        sumsq += x * x;
    }
    void merge(const RunningStats& o) {
        n += o.n;
        sum += o.sum;
        sumsq += o.sumsq;
    }
    double mean() const { return n ? sum / n : 0.0; }
    double variance() const {
        if (n < 2) return 0.0;
        const double m = mean();
        return (sumsq - n * m * m) / (n - 1);
    }
    double stderr_mean() const;
};

/// Number of workers for n independent items: hardware concurrency capped by
/// the QD_THREADS environment variable (and by n itself).
unsigned worker_count(std::size_t n);

/// Runs fn(i) for i in [0, n) on worker_count(n) threads. Static block
/// partition; fn must only write to per-index slots, which keeps results
/// identical for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

std::uint64_t fnv1a(std::string_view s);

/// Locale-independent shortest-round-trip-ish formatting (%.12g equivalent
/// via std::to_chars), used everywhere bytes must be reproducible.
std::string format_double(double v, int precision = 12);

}  // namespace qd
