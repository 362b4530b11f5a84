#include <doctest.h>

#include <cmath>
#include <vector>

#include "rotor/errors.hpp"
#include "rotor/rng.hpp"
#include "rotor/stats.hpp"

using namespace rotor;

namespace {

// Static test-stand columns for the two reference rotors (estimated, measured).
const std::vector<double> est_250 = {2.33,  7.35,  14.29, 22.58, 32.54,
                                     43.78, 56.55, 69.62, 79.26, 85.71};
const std::vector<double> mea_250 = {0.19, 0.63, 1.23, 2.06, 2.97, 4.25, 5.45, 7.39, 8.63, 9.62};
const std::vector<double> est_500 = {0.241, 0.83, 1.71, 2.86, 3.91, 5.93, 7.08, 8.36, 9.17, 9.56};
const std::vector<double> mea_500 = {0.32, 1.26, 2.57, 4.55,  5.92,
                                     8.94, 11.02, 13.96, 15.63, 16.30};

} // namespace

TEST_CASE("rmse") {
    const std::vector<double> a = {1.0, 2.0, 3.0};
    CHECK(rmse(a, a) == 0.0);

    const std::vector<double> b = {1.5, 2.5, 3.5}; // constant offset
    CHECK(rmse(a, b) == doctest::Approx(0.5).epsilon(1e-12));

    const std::vector<double> z = {0.0, 0.0};
    const std::vector<double> v = {3.0, 4.0};
    CHECK(rmse(z, v) == doctest::Approx(3.5355339059327378).epsilon(1e-12));

    // symmetric
    CHECK(rmse(v, z) == rmse(z, v));

    const std::vector<double> short_seq = {1.0};
    CHECK_THROWS_AS((void)rmse(a, short_seq), LengthMismatch);
}

TEST_CASE("pearson: perfect linear and error paths") {
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    std::vector<double> y;
    for (double v : x) {
        y.push_back(3.0 * v + 1.0);
    }
    CHECK(pearson(x, y) == doctest::Approx(1.0).epsilon(1e-12));

    const std::vector<double> flat = {2.0, 2.0, 2.0, 2.0};
    CHECK_THROWS_AS((void)pearson(x, flat), ZeroVariance);
    const std::vector<double> one = {1.0};
    CHECK_THROWS_AS((void)pearson(one, one), LengthMismatch);
    const std::vector<double> three = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS((void)pearson(x, three), LengthMismatch);
}

TEST_CASE("pearson on the shipped test-stand columns") {
    // frozen from an independent computation over the same columns
    CHECK(pearson(est_250, mea_250) == doctest::Approx(0.9964999393017501).epsilon(1e-12));
    CHECK(pearson(est_500, mea_500) == doctest::Approx(0.997483977683703).epsilon(1e-12));
}

TEST_CASE("pearson affine invariance") {
    const CounterRng rng{17};
    std::vector<double> x;
    std::vector<double> y;
    for (std::uint64_t i = 0; i < 64; ++i) {
        x.push_back(rng.normal(1, i));
        y.push_back(0.5 * x.back() + rng.normal(2, i));
    }
    const double r = pearson(x, y);
    for (std::uint64_t k = 0; k < 20; ++k) {
        double a = 4.0 * (rng.uniform(3, k) - 0.5);
        if (a == 0.0) {
            a = 1.0;
        }
        const double b = 10.0 * (rng.uniform(4, k) - 0.5);
        std::vector<double> ty;
        for (double v : y) {
            ty.push_back(a * v + b);
        }
        const double want = a > 0 ? r : -r;
        CHECK(pearson(x, ty) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("thrust-scale fit") {
    const std::vector<double> truth = {1.0, 2.0, 3.0, 4.0};
    CHECK(fit_thrust_scale(truth, truth) == doctest::Approx(1.0).epsilon(1e-15));

    std::vector<double> doubled;
    for (double v : truth) {
        doubled.push_back(2.0 * v);
    }
    CHECK(fit_thrust_scale(doubled, truth) == doctest::Approx(0.5).epsilon(1e-15));

    // frozen closed-form values, cross-checked by brute-force scans
    // (s over (0,1] and (0,2] at 1e-6 step: 0.105542 and 1.644971)
    CHECK(fit_thrust_scale(est_250, mea_250) ==
          doctest::Approx(0.10554167106488072).epsilon(1e-12));
    CHECK(fit_thrust_scale(est_500, mea_500) ==
          doctest::Approx(1.644971303291189).epsilon(1e-12));

    // scale-equivariance: scaling estimates by k divides the fit by k
    const double s0 = fit_thrust_scale(est_250, mea_250);
    std::vector<double> scaled;
    for (double v : est_250) {
        scaled.push_back(3.0 * v);
    }
    CHECK(fit_thrust_scale(scaled, mea_250) == doctest::Approx(s0 / 3.0).epsilon(1e-12));

    const std::vector<double> zeros = {0.0, 0.0, 0.0};
    const std::vector<double> any = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS((void)fit_thrust_scale(zeros, any), DegenerateFit);
    CHECK_THROWS_AS((void)fit_thrust_scale(any, zeros.data() ? std::span<const double>(zeros.data(), 2) : std::span<const double>()), LengthMismatch);
}

TEST_CASE("aggregate") {
    const std::vector<double> odd = {5.0, 1.0, 3.0};
    const auto a = aggregate(odd);
    CHECK(a.mean == doctest::Approx(3.0));
    CHECK(a.median == 3.0);
    CHECK(a.stddev == doctest::Approx(2.0));

    const std::vector<double> even = {4.0, 1.0, 2.0, 3.0};
    CHECK(aggregate(even).median == doctest::Approx(2.5));

    const std::vector<double> single = {7.0};
    CHECK(aggregate(single).stddev == 0.0);
    CHECK_THROWS_AS((void)aggregate({}), LengthMismatch);
}
