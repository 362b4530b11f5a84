#include "rotor/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rotor/errors.hpp"

namespace rotor {

double rmse(std::span<const double> reference, std::span<const double> actual) {
    if (reference.size() != actual.size() || reference.empty()) {
        throw LengthMismatch("rmse: sequences must have equal non-zero length");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const double d = reference[i] - actual[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(reference.size()));
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw LengthMismatch("pearson: sequences must have equal length >= 2");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw ZeroVariance("pearson: zero variance input");
    }
    return sxy / std::sqrt(sxx * syy);
}

double fit_thrust_scale(std::span<const double> estimated, std::span<const double> truth) {
    if (estimated.size() != truth.size() || estimated.size() < 2) {
        throw LengthMismatch("fit_thrust_scale: sequences must have equal length >= 2");
    }
    double set = 0.0;
    double see = 0.0;
    for (std::size_t i = 0; i < estimated.size(); ++i) {
        set += estimated[i] * truth[i];
        see += estimated[i] * estimated[i];
    }
    if (see == 0.0) {
        throw DegenerateFit("fit_thrust_scale: estimates are all zero");
    }
    return set / see;
}

Aggregate aggregate(std::span<const double> values) {
    if (values.empty()) {
        throw LengthMismatch("aggregate: empty input");
    }
    Aggregate a;
    const double n = static_cast<double>(values.size());
    for (double v : values) {
        a.mean += v;
    }
    a.mean /= n;

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    a.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

    if (values.size() > 1) {
        double acc = 0.0;
        for (double v : values) {
            acc += (v - a.mean) * (v - a.mean);
        }
        a.stddev = std::sqrt(acc / (n - 1.0));
    }
    return a;
}

} // namespace rotor
