#pragma once

#include <cstddef>
#include <vector>

#include "gapchain/error.hpp"

namespace gapchain {

/// Chi-square goodness-of-fit outcome.
struct GofResult {
    double statistic;
    std::size_t df;
    double p_value;
    double critical_value;  // upper-tail quantile at alpha
    double alpha;
    std::vector<double> expected;
    bool significant;  // statistic > critical_value
};

/// Pooled two-sample t-test outcome (equal variance assumed).
struct TTestResult {
    std::size_t n1;
    std::size_t n2;
    std::size_t df;  // n1 + n2 - 2
    double t_stat;
    double t_crit;  // two-tailed at alpha
    double p_value;
    double alpha;
    bool significant;  // |t_stat| > t_crit, equivalently p_value < alpha
};

/// Upper-tail probability of a chi-square variable with df degrees of
/// freedom: the regularized upper incomplete gamma Q(df/2, x/2).
double chi_square_upper_p(double x, std::size_t df);

/// Upper-tail quantile: x with chi_square_upper_p(x, df) == alpha, found by
/// bisection on the tail probability.
double chi_square_critical(double alpha, std::size_t df);

/// Two-tailed Student-t probability 2 P(T >= |t|), via the regularized
/// incomplete beta I(df/(df + t^2); df/2, 1/2).
double student_t_two_tailed_p(double t, std::size_t df);

/// Two-tailed critical value at alpha, by bisection.
double student_t_critical(double alpha, std::size_t df);

GofResult chi_square_gof(const std::vector<double>& observed,
                         const std::vector<double>& expected, double alpha);

TTestResult pooled_t_test(const std::vector<double>& sample1,
                          const std::vector<double>& sample2, double alpha);

}  // namespace gapchain
