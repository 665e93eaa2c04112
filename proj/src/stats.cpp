#include "gapchain/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace gapchain {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 100000;

// Lower regularized incomplete gamma P(a, x) by power series, for x < a + 1.
double gamma_p_series(double a, double x) {
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 1; n < kMaxIter; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma Q(a, x) by continued fraction (modified
// Lentz), for x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double regularized_gamma_q(double a, double x) {
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_continued_fraction(a, x);
}

// Continued fraction for the regularized incomplete beta (modified Lentz).
double beta_continued_fraction(double x, double a, double b) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m < kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return h;
}

double regularized_incomplete_beta(double x, double a, double b) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front =
        std::exp(a * std::log(x) + b * std::log(1.0 - x) - std::lgamma(a) - std::lgamma(b) +
                 std::lgamma(a + b));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(x, a, b) / a;
    return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

// Root of a strictly decreasing tail function f(x) = target on x >= 0. The
// bracket starts at hi_start and doubles until it encloses the root; the
// interval is then bisected to floating-point resolution, which keeps the
// inverse accurate deep in the tail where any fixed probability tolerance
// would stop far too early.
double bisect_decreasing(const std::function<double(double)>& f, double target,
                         double hi_start) {
    double lo = 0.0;
    double hi = hi_start;
    while (f(hi) > target && hi < 1e12) hi *= 2.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (f(mid) > target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-14 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        std::ostringstream msg;
        msg << "alpha must lie in (0, 1), got " << alpha;
        throw Error(msg.str());
    }
}

double mean_of(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs, double mean) {
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(xs.size() - 1);
}

}  // namespace

double chi_square_upper_p(double x, std::size_t df) {
    if (df == 0) throw Error("chi-square degrees of freedom must be positive");
    if (!(x >= 0.0)) throw Error("chi-square statistic must be non-negative");
    return std::clamp(regularized_gamma_q(static_cast<double>(df) / 2.0, x / 2.0), 0.0, 1.0);
}

double chi_square_critical(double alpha, std::size_t df) {
    check_alpha(alpha);
    if (df == 0) throw Error("chi-square degrees of freedom must be positive");
    return bisect_decreasing([df](double x) { return chi_square_upper_p(x, df); }, alpha,
                             10.0 * static_cast<double>(df));
}

double student_t_two_tailed_p(double t, std::size_t df) {
    if (df == 0) throw Error("t-test degrees of freedom must be positive");
    if (t == 0.0) return 1.0;
    const double v = static_cast<double>(df);
    const double x = v / (v + t * t);
    return std::clamp(regularized_incomplete_beta(x, v / 2.0, 0.5), 0.0, 1.0);
}

double student_t_critical(double alpha, std::size_t df) {
    check_alpha(alpha);
    if (df == 0) throw Error("t-test degrees of freedom must be positive");
    return bisect_decreasing([df](double t) { return student_t_two_tailed_p(t, df); }, alpha,
                             10.0);
}

GofResult chi_square_gof(const std::vector<double>& observed,
                         const std::vector<double>& expected, double alpha) {
    if (observed.size() != expected.size()) {
        std::ostringstream msg;
        msg << "observed and expected lengths differ: " << observed.size() << " vs "
            << expected.size();
        throw Error(msg.str());
    }
    if (observed.size() < 2) throw Error("chi-square needs at least 2 observations");
    check_alpha(alpha);

    double statistic = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!(expected[i] > 0.0)) {
            std::ostringstream msg;
            msg << "expected value at position " << i << " must be positive, got " << expected[i];
            throw Error(msg.str());
        }
        const double diff = observed[i] - expected[i];
        statistic += diff * diff / expected[i];
    }
    const std::size_t df = observed.size() - 1;
    const double p = chi_square_upper_p(statistic, df);
    const double crit = chi_square_critical(alpha, df);
    return GofResult{statistic, df, p, crit, alpha, expected, statistic > crit};
}

TTestResult pooled_t_test(const std::vector<double>& sample1,
                          const std::vector<double>& sample2, double alpha) {
    if (sample1.size() < 2 || sample2.size() < 2)
        throw Error("pooled t-test needs at least 2 observations per sample");
    check_alpha(alpha);

    const std::size_t n1 = sample1.size();
    const std::size_t n2 = sample2.size();
    const std::size_t df = n1 + n2 - 2;
    const double m1 = mean_of(sample1);
    const double m2 = mean_of(sample2);
    const double pooled_var = ((n1 - 1) * sample_variance(sample1, m1) +
                               (n2 - 1) * sample_variance(sample2, m2)) /
                              static_cast<double>(df);

    double t_stat = 0.0;
    if (pooled_var == 0.0) {
        if (m1 != m2) throw Error("degenerate variance: samples are constant with unequal means");
    } else {
        t_stat = (m1 - m2) / std::sqrt(pooled_var * (1.0 / n1 + 1.0 / n2));
    }

    const double p = student_t_two_tailed_p(t_stat, df);
    const double crit = student_t_critical(alpha, df);
    return TTestResult{n1, n2, df, t_stat, crit, p, alpha, std::abs(t_stat) > crit};
}

}  // namespace gapchain
