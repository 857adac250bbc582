#include "qd/numerics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "qd/errors.hpp"

namespace qd {

namespace {

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, a, m);
    const double right = simpson(fm, frm, fb, m, b);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0)
        throw NumericError("adaptive_simpson: depth limit before tolerance (interval [" +
                           std::to_string(a) + ", " + std::to_string(b) + "])");
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = simpson(fa, fm, fb, a, b);
    return simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

double adaptive_simpson_segments(const std::function<double(double)>& f,
                                 std::span<const double> pts, double abs_tol,
                                 int max_depth) {
    if (pts.size() < 2) throw DomainError("adaptive_simpson_segments: need >= 2 points");
    const double tol = abs_tol / static_cast<double>(pts.size() - 1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        total += adaptive_simpson(f, pts[i], pts[i + 1], tol, max_depth);
    return total;
}

GoldenResult golden_max(const std::function<double(double)>& f, double a, double b,
                        double rel_tol) {
    if (!(b > a)) throw DomainError("golden_max: empty bracket");
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = a, hi = b;
    double c = hi - invphi * (hi - lo);
    double d = lo + invphi * (hi - lo);
    double fc = f(c), fd = f(d);
    const double span = b - a;
    while (hi - lo > rel_tol * std::max(1.0, std::abs(lo)) &&
           hi - lo > 1e-15 * span) {
        if (fc >= fd) {  // ">=" keeps ties on the smaller-x side
            hi = d;
            d = c;
            fd = fc;
            c = hi - invphi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + invphi * (hi - lo);
            fd = f(d);
        }
    }
    double x = 0.5 * (lo + hi);
    double fx = f(x);
    // endpoint checks; a bracket endpoint beating the interior means the
    // function was not unimodal on [a, b] (or the max sits on the boundary)
    const double fa = f(a), fb = f(b);
    bool fallback = false;
    if (fa >= fx) {
        x = a;
        fx = fa;
    }
    if (fb > fx) {
        // genuine interior scan needed only if both endpoints competed
        fallback = true;
        const int kScan = 2001;
        for (int i = 0; i < kScan; ++i) {
            const double t = a + (b - a) * i / (kScan - 1);
            const double ft = f(t);
            if (ft > fx) {
                fx = ft;
                x = t;
            }
        }
    }
    return GoldenResult{x, fx, fallback};
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
    if (samples.empty()) throw DomainError("ks_statistic: no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double F = cdf(samples[i]);
        d = std::max(d, std::abs((i + 1) / n - F));
        d = std::max(d, std::abs(i / n - F));
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw DomainError("ks_two_sample: no samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return d;
}

namespace {
double ks_kalpha(double alpha) {
    // K solving Q_KS(K) = alpha; values for the usual levels.
    if (alpha == 0.01) return 1.62762;
    if (alpha == 0.05) return 1.35810;
    if (alpha == 0.10) return 1.22385;
    throw DomainError("ks_critical: unsupported alpha");
}
}  // namespace

double ks_critical(double alpha, std::size_t n) {
    return ks_kalpha(alpha) / std::sqrt(static_cast<double>(n));
}

double ks_critical_two_sample(double alpha, std::size_t n, std::size_t m) {
    const double nn = static_cast<double>(n), mm = static_cast<double>(m);
    return ks_kalpha(alpha) * std::sqrt((nn + mm) / (nn * mm));
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

MeanStderr jackknife_mean(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw DomainError("jackknife_mean: need >= 2 values");
    double total = 0.0;
    for (double v : values) total += v;
    const double mean = total / n;
    // leave-one-out estimates theta_i = (total - v_i)/(n-1)
    double ss = 0.0;
    for (double v : values) {
        const double ti = (total - v) / (n - 1);
        ss += (ti - mean) * (ti - mean);
    }
    const double var = (n - 1.0) / n * ss;
    return MeanStderr{mean, std::sqrt(var), n};
}

double RunningStats::stderr_mean() const {
    return n ? std::sqrt(variance() / n) : 0.0;
}

unsigned worker_count(std::size_t n) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("QD_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
    }
    if (n < hw) hw = static_cast<unsigned>(n == 0 ? 1 : n);
    return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = worker_count(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr error;
    std::mutex err_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string format_double(double v, int precision) {
    char buf[48];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, precision);
    return std::string(buf, res.ptr);
}

}  // namespace qd
