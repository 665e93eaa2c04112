#include "gapchain/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace gapchain {

namespace {

double max_row_sum_error(std::size_t order, const std::vector<double>& entries) {
    double worst = 0.0;
    for (std::size_t i = 0; i < order; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < order; ++j) sum += entries[i * order + j];
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return worst;
}

}  // namespace

Distribution::Distribution(std::vector<double> probabilities, double tolerance)
    : probs_(std::move(probabilities)) {
    if (probs_.empty()) throw Error("distribution must have at least one entry");
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw Error("distribution entries must be non-negative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > tolerance) {
        std::ostringstream msg;
        msg << "distribution entries sum to " << sum << ", expected 1 within " << tolerance;
        throw Error(msg.str());
    }
}

StochasticMatrix::StochasticMatrix(std::size_t order, std::vector<double> entries,
                                   bool as_published)
    : StochasticMatrix(order, std::move(entries),
                       as_published ? kPublishedRowTolerance : kStrictRowTolerance, 0) {}

StochasticMatrix::StochasticMatrix(std::size_t order, std::vector<double> entries,
                                   double row_tolerance, int)
    : order_(order), entries_(std::move(entries)), row_tolerance_(row_tolerance) {
    if (order_ == 0) throw Error("stochastic matrix must have at least one state");
    if (entries_.size() != order_ * order_) {
        std::ostringstream msg;
        msg << "stochastic matrix of order " << order_ << " needs " << order_ * order_
            << " entries, got " << entries_.size();
        throw Error(msg.str());
    }
    for (double e : entries_) {
        if (!(e >= 0.0) || e > 1.0 + row_tolerance_)
            throw Error("stochastic matrix entries must lie in [0, 1]");
    }
    for (std::size_t i = 0; i < order_; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < order_; ++j) sum += entries_[i * order_ + j];
        if (std::abs(sum - 1.0) > row_tolerance_) {
            std::ostringstream msg;
            msg << "row " << i << " sums to " << sum << ", expected 1 within " << row_tolerance_;
            throw Error(msg.str());
        }
    }
}

StochasticMatrix StochasticMatrix::from_rows(const std::vector<std::vector<double>>& rows,
                                             bool as_published) {
    std::vector<double> flat;
    flat.reserve(rows.size() * rows.size());
    for (const auto& row : rows) {
        if (row.size() != rows.size()) throw Error("stochastic matrix rows must be square");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return StochasticMatrix(rows.size(), std::move(flat), as_published);
}

StochasticMatrix StochasticMatrix::identity(std::size_t order) {
    std::vector<double> flat(order * order, 0.0);
    for (std::size_t i = 0; i < order; ++i) flat[i * order + i] = 1.0;
    return StochasticMatrix(order, std::move(flat));
}

StochasticMatrix StochasticMatrix::with_row_tolerance(std::size_t order,
                                                      std::vector<double> entries,
                                                      double row_tolerance) {
    return StochasticMatrix(order, std::move(entries), row_tolerance, 0);
}

std::vector<double> StochasticMatrix::row(std::size_t i) const {
    return {entries_.begin() + static_cast<std::ptrdiff_t>(i * order_),
            entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * order_)};
}

StochasticMatrix multiply(const StochasticMatrix& a, const StochasticMatrix& b) {
    if (a.order() != b.order()) {
        std::ostringstream msg;
        msg << "matrix order mismatch: " << a.order() << " vs " << b.order();
        throw Error(msg.str());
    }
    const std::size_t r = a.order();
    std::vector<double> out(r * r, 0.0);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t k = 0; k < r; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < r; ++j) out[i * r + j] += aik * b(k, j);
        }
    }
    // Record the slack actually present, floored at the strict class.
    const double measured = max_row_sum_error(r, out);
    const double tol = std::max(StochasticMatrix::kStrictRowTolerance, 2.0 * measured);
    return StochasticMatrix::with_row_tolerance(r, std::move(out), tol);
}

StochasticMatrix power(const StochasticMatrix& p, std::size_t n) {
    if (n == 0) return StochasticMatrix::identity(p.order());
    if (n <= 16) {
        StochasticMatrix acc = p;
        for (std::size_t i = 1; i < n; ++i) acc = multiply(acc, p);
        return acc;
    }
    StochasticMatrix result = StochasticMatrix::identity(p.order());
    StochasticMatrix base = p;
    std::size_t e = n;
    while (e > 0) {
        if (e & 1u) result = multiply(result, base);
        e >>= 1u;
        if (e > 0) base = multiply(base, base);
    }
    return result;
}

ConvergenceReport find_equilibrium(const StochasticMatrix& p, double tolerance,
                                   std::size_t max_steps) {
    if (!(tolerance > 0.0)) throw Error("equilibrium tolerance must be positive");
    if (max_steps == 0) throw Error("max_steps must be at least 1");

    const std::size_t r = p.order();
    auto column_spread_below = [&](const StochasticMatrix& m) {
        for (std::size_t j = 0; j < r; ++j) {
            double lo = m(0, j), hi = m(0, j);
            for (std::size_t i = 1; i < r; ++i) {
                lo = std::min(lo, m(i, j));
                hi = std::max(hi, m(i, j));
            }
            if (!(hi - lo < tolerance)) return false;
        }
        return true;
    };
    auto row_mean = [&](const StochasticMatrix& m) {
        std::vector<double> mean(r, 0.0);
        for (std::size_t j = 0; j < r; ++j) {
            double sum = 0.0;
            for (std::size_t i = 0; i < r; ++i) sum += m(i, j);
            mean[j] = sum / static_cast<double>(r);
        }
        return mean;
    };

    StochasticMatrix acc = p;
    for (std::size_t n = 1; n <= max_steps; ++n) {
        if (n > 1) acc = multiply(acc, p);
        if (column_spread_below(acc)) {
            Distribution limit(row_mean(acc), acc.row_tolerance() + 1e-9);
            return ConvergenceReport{true, n, tolerance, std::move(limit), std::move(acc)};
        }
    }
    Distribution limit(row_mean(acc), acc.row_tolerance() + 1e-9);
    return ConvergenceReport{false, max_steps, tolerance, std::move(limit), std::move(acc)};
}

Distribution stationary_direct(const StochasticMatrix& p) {
    const std::size_t r = p.order();
    // (P^T - I) pi = 0 with the last balance equation replaced by sum(pi) = 1.
    std::vector<double> a(r * r, 0.0);
    std::vector<double> b(r, 0.0);
    for (std::size_t i = 0; i + 1 < r; ++i)
        for (std::size_t j = 0; j < r; ++j) a[i * r + j] = p(j, i) - (i == j ? 1.0 : 0.0);
    for (std::size_t j = 0; j < r; ++j) a[(r - 1) * r + j] = 1.0;
    b[r - 1] = 1.0;

    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    const double pivot_floor = 1e-10 * scale;

    for (std::size_t col = 0; col < r; ++col) {
        std::size_t piv = col;
        for (std::size_t row = col + 1; row < r; ++row)
            if (std::abs(a[row * r + col]) > std::abs(a[piv * r + col])) piv = row;
        if (std::abs(a[piv * r + col]) < pivot_floor)
            throw Error("stationary distribution not unique (reducible chain)");
        if (piv != col) {
            for (std::size_t j = 0; j < r; ++j) std::swap(a[piv * r + j], a[col * r + j]);
            std::swap(b[piv], b[col]);
        }
        for (std::size_t row = col + 1; row < r; ++row) {
            const double f = a[row * r + col] / a[col * r + col];
            if (f == 0.0) continue;
            for (std::size_t j = col; j < r; ++j) a[row * r + j] -= f * a[col * r + j];
            b[row] -= f * b[col];
        }
    }

    std::vector<double> pi(r, 0.0);
    for (std::size_t i = r; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < r; ++j) s -= a[i * r + j] * pi[j];
        pi[i] = s / a[i * r + i];
    }
    // Clear round-off dust so the result is a valid distribution.
    for (double& v : pi)
        if (v < 0.0 && v > -1e-12) v = 0.0;
    return Distribution(std::move(pi), 1e-9);
}

Distribution evolve(const Distribution& start, const StochasticMatrix& p, std::size_t n) {
    if (start.size() != p.order()) {
        std::ostringstream msg;
        msg << "distribution of size " << start.size() << " does not match matrix of order "
            << p.order();
        throw Error(msg.str());
    }
    const StochasticMatrix pn = power(p, n);
    const std::size_t r = p.order();
    std::vector<double> out(r, 0.0);
    for (std::size_t i = 0; i < r; ++i) {
        const double si = start[i];
        if (si == 0.0) continue;
        for (std::size_t j = 0; j < r; ++j) out[j] += si * pn(i, j);
    }
    return Distribution(std::move(out), pn.row_tolerance() + 1e-9);
}

}  // namespace gapchain
