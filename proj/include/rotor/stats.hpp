#pragma once

#include <span>

namespace rotor {

// Root-mean-square difference. Throws LengthMismatch.
double rmse(std::span<const double> reference, std::span<const double> actual);

// Sample Pearson correlation. Throws LengthMismatch / ZeroVariance.
double pearson(std::span<const double> x, std::span<const double> y);

// Least-squares scale s minimizing sum (s*estimated - truth)^2, i.e.
// sum(e*t)/sum(e^2). Throws LengthMismatch / DegenerateFit.
double fit_thrust_scale(std::span<const double> estimated, std::span<const double> truth);

struct Aggregate {
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0; // sample standard deviation
};

Aggregate aggregate(std::span<const double> values);

} // namespace rotor
