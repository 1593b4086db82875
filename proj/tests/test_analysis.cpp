#include "nqca/analysis.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace nqca;

namespace {

std::vector<double> centred(std::vector<double> x) {
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / double(x.size());
    for (auto& v : x) v -= mean;
    return x;
}

} // namespace

TEST_CASE("spectrum of a pure tone") {
    std::vector<double> x(64);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = 3.0 + std::cos(2 * pi * 8.0 * double(t) / 64.0);
    const auto s = spectrum(x);
    REQUIRE(s.frequencies.size() == 33);
    CHECK(s.frequencies[8] == doctest::Approx(0.125));
    CHECK(s.frequencies.back() == doctest::Approx(0.5));
    CHECK(s.magnitudes[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.magnitudes[8] == doctest::Approx(0.5).epsilon(1e-12));
    for (std::size_t k = 0; k < s.magnitudes.size(); ++k)
        if (k != 8) CHECK(s.magnitudes[k] < 1e-12);
    CHECK(s.samples == 64);
    CHECK(s.transform_length == 64);
    CHECK(s.mean_removed);
}

TEST_CASE("spectrum matches a naive DFT") {
    std::mt19937_64 rng(1);
    for (std::size_t len : {8u, 9u, 31u, 100u, 257u}) {
        std::vector<double> x(len);
        for (auto& v : x) v = oracle::uniform(rng, -1, 1);
        const auto s = spectrum(x);
        const auto ref = oracle::naive_dft(centred(x));
        REQUIRE(s.magnitudes.size() == len / 2 + 1);
        for (std::size_t k = 0; k < s.magnitudes.size(); ++k) {
            CHECK(s.magnitudes[k] == doctest::Approx(std::abs(ref[k]) / double(len)).epsilon(1e-10));
            CHECK(s.frequencies[k] == doctest::Approx(double(k) / double(len)));
        }
    }
}

TEST_CASE("Parseval with one-sided weights") {
    std::mt19937_64 rng(2);
    for (std::size_t len : {16u, 33u, 501u}) {
        std::vector<double> x(len);
        for (auto& v : x) v = oracle::uniform(rng, 0, 3);
        const auto c = centred(x);
        double var = 0;
        for (double v : c) var += v * v;
        var /= double(len);
        const auto s = spectrum(x);
        double sum = 0;
        for (std::size_t k = 0; k < s.magnitudes.size(); ++k) {
            const bool single = k == 0 || (len % 2 == 0 && k == len / 2);
            sum += (single ? 1.0 : 2.0) * s.magnitudes[k] * s.magnitudes[k];
        }
        CHECK(sum == doctest::Approx(var).epsilon(1e-10));
    }
}

TEST_CASE("zero padding refines the grid without moving bins") {
    std::mt19937_64 rng(3);
    std::vector<double> x(50);
    for (auto& v : x) v = oracle::uniform(rng, -1, 1);
    const auto base = spectrum(x);
    const auto padded = spectrum(x, {Window::rectangular, 200});
    CHECK(padded.transform_length == 200);
    CHECK(padded.samples == 50);
    REQUIRE(padded.magnitudes.size() == 101);
    for (std::size_t k = 0; k < base.magnitudes.size(); ++k) {
        CHECK(padded.magnitudes[4 * k] == doctest::Approx(base.magnitudes[k]).epsilon(1e-10));
        CHECK(padded.frequencies[4 * k] == doctest::Approx(base.frequencies[k]));
    }
}

TEST_CASE("hann window suppresses leakage") {
    std::vector<double> x(128);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = std::sin(2 * pi * 10.5 * double(t) / 128.0);
    const auto rect = spectrum(x);
    const auto hann = spectrum(x, {Window::hann, 0});
    CHECK(hann.window == Window::hann);
    CHECK(hann.magnitudes[40] < rect.magnitudes[40] / 10);
}

TEST_CASE("spectrum input checks") {
    std::vector<double> x(7, 1.0);
    CHECK_THROWS_AS(spectrum(x), DomainError);
    CHECK_THROWS_AS(window_from_string("kaiser"), DomainError);
}

TEST_CASE("low_frequency_fraction") {
    std::vector<double> x(100);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = std::cos(2 * pi * 0.02 * double(t));
    const auto s = spectrum(x);
    CHECK(low_frequency_fraction(s, 0.05) > 0.9);
    CHECK(low_frequency_fraction(s, 0.6) == doctest::Approx(1.0));
    CHECK(low_frequency_fraction(s, 0.0) == 0.0);
}

TEST_CASE("decay fit recovers a clean exponential") {
    std::vector<double> x(200);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = 2.0 * std::exp(-double(t) / 50.0);
    const auto f = fit_decoherence_time(x);
    CHECK(f.t_dec == doctest::Approx(50.0).epsilon(1e-8));
    CHECK(std::abs(f.t_dec - 50.0) < 1e-6);
    CHECK(f.amplitude == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.window_start == 0);
    CHECK(f.window_end == 199);
    CHECK(f.points == 200);
}

TEST_CASE("decay fit starts at the global maximum and stops at the threshold") {
    std::vector<double> x(300, 0.0);
    for (std::size_t t = 0; t < 5; ++t) x[t] = 0.1 * double(t);
    for (std::size_t t = 5; t < 300; ++t) x[t] = std::exp(-double(t - 5) / 10.0);
    const auto f = fit_decoherence_time(x, 1e-6);
    CHECK(f.window_start == 5);
    CHECK(x[f.window_end] > 1e-6);
    CHECK(x[f.window_end + 1] <= 1e-6);
    CHECK(f.t_dec == doctest::Approx(10.0).epsilon(1e-8));
}

TEST_CASE("decay fit is scale equivariant") {
    std::mt19937_64 rng(6);
    std::vector<double> x(150);
    for (std::size_t t = 0; t < x.size(); ++t)
        x[t] = std::exp(-double(t) / 30.0) * (1.0 + 0.2 * std::cos(0.7 * double(t)));
    const auto a = fit_decoherence_time(x);
    for (int k = 0; k < 5; ++k) {
        const double c = oracle::uniform(rng, 0.5, 20);
        std::vector<double> y(x);
        for (auto& v : y) v *= c;
        const auto b = fit_decoherence_time(y, 1e-6 * c);
        CHECK(b.t_dec == doctest::Approx(a.t_dec).epsilon(1e-10));
        CHECK(b.amplitude == doctest::Approx(c * a.amplitude).epsilon(1e-10));
    }
}

TEST_CASE("decay fit rejects non-decaying and short series") {
    std::vector<double> flat(100, 0.5);
    CHECK_THROWS_AS(fit_decoherence_time(flat), NoDecayError);

    std::vector<double> rising(100);
    for (std::size_t t = 0; t < rising.size(); ++t) rising[t] = 1.0 + double(t);
    CHECK_THROWS_AS(fit_decoherence_time(rising), DomainError);

    std::vector<double> brief(5, 1.0);
    CHECK_THROWS_AS(fit_decoherence_time(brief), DomainError);
}

TEST_CASE("envelope fit uses the local maxima") {
    std::vector<double> x(200);
    for (std::size_t t = 0; t < x.size(); ++t)
        x[t] = std::exp(-double(t) / 40.0) * (1.5 + std::cos(2 * pi * double(t) / 10.0));
    const auto raw = fit_decoherence_time(x, 1e-6, FitMode::raw);
    const auto env = fit_decoherence_time(x, 1e-6, FitMode::envelope);
    CHECK(env.mode == FitMode::envelope);
    CHECK(env.points < raw.points);
    CHECK(env.t_dec == doctest::Approx(40.0).epsilon(0.05));
    CHECK_THROWS_AS(fit_mode_from_string("smooth"), DomainError);
}

TEST_CASE("local_extrema on a monotone series is empty") {
    std::vector<double> x(50);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = std::exp(-double(t) / 7.0);
    const auto e = local_extrema(x, default_prominence(x));
    CHECK(e.minima.empty());
    CHECK(e.maxima.empty());
}

TEST_CASE("local_extrema on a triangle wave") {
    std::vector<double> x;
    for (int period = 0; period < 4; ++period) {
        for (int k = 0; k < 5; ++k) x.push_back(k);
        for (int k = 5; k > 0; --k) x.push_back(k);
    }
    x.push_back(0);
    const auto e = local_extrema(x, default_prominence(x));
    CHECK(e.maxima == std::vector<std::size_t>{5, 15, 25, 35});
    CHECK(e.minima == std::vector<std::size_t>{10, 20, 30});
    CHECK(peak_prominence(x, 15) == doctest::Approx(5.0));
    CHECK(default_prominence(x) == doctest::Approx(0.05));
}

TEST_CASE("local_extrema drops small wiggles") {
    std::vector<double> x{0, 10, 9.99, 10.001, 0, 5, 0};
    const auto all = local_extrema(x, 0.0);
    CHECK(all.maxima.size() == 3);
    const auto big = local_extrema(x, 1.0);
    CHECK(big.maxima == std::vector<std::size_t>{3, 5});
    CHECK(peak_prominence(x, 1) == doctest::Approx(0.01));
}

TEST_CASE("alignment_fraction") {
    const std::vector<std::size_t> pts{10, 20, 31, 50};
    const std::vector<std::size_t> targets{11, 29};
    CHECK(alignment_fraction(pts, targets, 2) == doctest::Approx(0.5));
    CHECK(alignment_fraction(pts, targets, 0) == 0.0);
    CHECK(alignment_fraction(std::vector<std::size_t>{}, targets, 3) == 0.0);
}
