#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "tpa/analysis.hpp"
#include "tpa/data.hpp"
#include "tpa/rng.hpp"

using namespace tpa;

namespace {

// Second, independently coded DFT for cross-checking: complex phasor
// accumulation instead of explicit cos/sin sums.
std::vector<double> dft_oracle(const std::vector<double>& s) {
  int n = static_cast<int>(s.size());
  std::vector<double> mags(static_cast<size_t>(n));
  for (int f = 0; f < n; ++f) {
    std::complex<double> acc{0.0, 0.0};
    for (int t = 0; t < n; ++t) {
      acc += s[static_cast<size_t>(t)] *
             std::polar(1.0, -2.0 * std::numbers::pi * f * t / n);
    }
    mags[static_cast<size_t>(f)] = std::abs(acc);
  }
  return mags;
}

std::vector<double> sine(int n, double period, double amp = 1.0, double phase = 0.0) {
  std::vector<double> s(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t) {
    s[static_cast<size_t>(t)] = amp * std::sin(2.0 * std::numbers::pi * t / period + phase);
  }
  return s;
}

}  // namespace

TEST_CASE("dft magnitude hand cases") {
  SUBCASE("constant signal concentrates at DC") {
    Spectrum s = dft_magnitude(std::vector<double>(8, 3.0));
    CHECK(s.bins() == 5);
    CHECK(s.magnitudes[0] == doctest::Approx(24.0).epsilon(1e-12));
    for (int b = 1; b < s.bins(); ++b) CHECK(std::fabs(s.magnitudes[static_cast<size_t>(b)]) <= 1e-9);
  }
  SUBCASE("pure sine of period 8 over 64 samples peaks at bin 8") {
    Spectrum s = dft_magnitude(sine(64, 8.0));
    CHECK(s.magnitudes[8] == doctest::Approx(32.0).epsilon(1e-9));
    for (int b = 0; b < s.bins(); ++b) {
      if (b != 8) CHECK(std::fabs(s.magnitudes[static_cast<size_t>(b)]) <= 1e-9);
    }
    CHECK(s.period(8) == doctest::Approx(8.0));
  }
  SUBCASE("two bin-aligned sines leave exactly two nonzero bins") {
    std::vector<double> a = sine(64, 16.0), b = sine(64, 4.0, 0.5);
    std::vector<double> s(64);
    for (int t = 0; t < 64; ++t) s[static_cast<size_t>(t)] = a[static_cast<size_t>(t)] + b[static_cast<size_t>(t)];
    Spectrum sp = dft_magnitude(s);
    int nonzero = 0;
    for (int f = 1; f < sp.bins(); ++f) {
      if (sp.magnitudes[static_cast<size_t>(f)] > 1e-6) ++nonzero;
    }
    CHECK(nonzero == 2);
    CHECK(sp.magnitudes[4] > 1.0);
    CHECK(sp.magnitudes[16] > 1.0);
  }
}

TEST_CASE("dft agrees with an independent implementation") {
  Rng rng(42);
  for (int it = 0; it < 30; ++it) {
    int n = 4 + rng.uniform_int(60);
    std::vector<double> s(static_cast<size_t>(n));
    for (double& v : s) v = rng.uniform(-3.0, 3.0);
    std::vector<double> mine = dft_full_magnitude(s);
    std::vector<double> want = dft_oracle(s);
    for (int f = 0; f < n; ++f) {
      CHECK(std::fabs(mine[static_cast<size_t>(f)] - want[static_cast<size_t>(f)]) <= 1e-9);
    }
  }
}

TEST_CASE("parseval identity on the full spectrum") {
  Rng rng(7);
  for (int it = 0; it < 20; ++it) {
    int n = 8 + rng.uniform_int(56);
    std::vector<double> s(static_cast<size_t>(n));
    for (double& v : s) v = rng.uniform(-2.0, 2.0);
    std::vector<double> mags = dft_full_magnitude(s);
    double lhs = 0.0;
    for (double m : mags) lhs += m * m;
    lhs /= n;
    double rhs = 0.0;
    for (double v : s) rhs += v * v;
    CHECK(std::fabs(lhs - rhs) / std::max(rhs, 1e-12) <= 1e-9);
  }
}

TEST_CASE("avg dft") {
  SUBCASE("single row equals its own spectrum") {
    std::vector<double> s = sine(32, 8.0);
    Tensor rows = Tensor::zeros({1, 32});
    for (int j = 0; j < 32; ++j) rows.at(0, j) = s[static_cast<size_t>(j)];
    Spectrum a = avg_dft(rows);
    Spectrum b = dft_magnitude(s);
    for (int f = 0; f < a.bins(); ++f) {
      CHECK(a.magnitudes[static_cast<size_t>(f)] ==
            doctest::Approx(b.magnitudes[static_cast<size_t>(f)]).epsilon(1e-12));
    }
  }
  SUBCASE("duplicated rows do not change the average") {
    Tensor one = Tensor::zeros({1, 16});
    for (int j = 0; j < 16; ++j) one.at(0, j) = std::sin(0.7 * j) + 0.2 * j;
    Tensor two = Tensor::zeros({2, 16});
    for (int j = 0; j < 16; ++j) two.at(0, j) = two.at(1, j) = one.at(0, j);
    Spectrum a = avg_dft(one), b = avg_dft(two);
    for (int f = 0; f < a.bins(); ++f) {
      CHECK(a.magnitudes[static_cast<size_t>(f)] ==
            doctest::Approx(b.magnitudes[static_cast<size_t>(f)]).epsilon(1e-12));
    }
  }
  SUBCASE("toy family D=2 over one period splits weight between bins 1 and 2") {
    TimeSeriesDataset toy = toy_series(2, ToyFamily::Independent, 64);
    Tensor rows = Tensor::zeros({2, 64});
    for (int t = 0; t < 64; ++t) {
      rows.at(0, t) = toy.at(t, 0);
      rows.at(1, t) = toy.at(t, 1);
    }
    Spectrum s = avg_dft(rows);
    CHECK(s.magnitudes[1] == doctest::Approx(16.0).epsilon(1e-9));
    CHECK(s.magnitudes[2] == doctest::Approx(16.0).epsilon(1e-9));
    for (int f = 3; f < s.bins(); ++f) CHECK(std::fabs(s.magnitudes[static_cast<size_t>(f)]) <= 1e-9);
  }
  SUBCASE("row order does not matter") {
    Rng rng(5);
    Tensor rows = Tensor::zeros({3, 20});
    for (int i = 0; i < rows.numel(); ++i) rows.at(i) = rng.uniform(-1.0, 1.0);
    Tensor swapped = Tensor::zeros({3, 20});
    for (int j = 0; j < 20; ++j) {
      swapped.at(0, j) = rows.at(2, j);
      swapped.at(1, j) = rows.at(0, j);
      swapped.at(2, j) = rows.at(1, j);
    }
    Spectrum a = avg_dft(rows), b = avg_dft(swapped);
    for (int f = 0; f < a.bins(); ++f) {
      CHECK(a.magnitudes[static_cast<size_t>(f)] ==
            doctest::Approx(b.magnitudes[static_cast<size_t>(f)]).epsilon(1e-12));
    }
  }
}

TEST_CASE("spectrum alignment") {
  SUBCASE("identical spectra match fully") {
    Spectrum s = dft_magnitude(sine(48, 24.0));
    AlignmentReport r = spectrum_alignment(s, s, 3);
    CHECK(r.fraction_matched == 1.0);
    CHECK(r.data_bin_matched(2));
  }
  SUBCASE("disjoint single peaks do not match") {
    Spectrum a = dft_magnitude(sine(48, 24.0));  // bin 2
    Spectrum b = dft_magnitude(sine(48, 6.0));   // bin 8
    AlignmentReport r = spectrum_alignment(a, b, 3);
    CHECK(r.fraction_matched == 0.0);
    CHECK(r.matches.empty());
  }
  SUBCASE("off-by-one bins still match") {
    Spectrum a = dft_magnitude(sine(48, 24.0));  // bin 2
    Spectrum b = dft_magnitude(sine(48, 16.0));  // bin 3
    AlignmentReport r = spectrum_alignment(a, b, 3);
    CHECK(r.fraction_matched == 1.0);
    CHECK(r.matches.size() == 1);
    CHECK(r.matches[0].filter_bin == 3);
  }
  SUBCASE("fewer maxima than requested is reported, not an error") {
    Spectrum s = dft_magnitude(sine(48, 24.0));
    AlignmentReport r = spectrum_alignment(s, s, 10);
    CHECK(static_cast<int>(r.data_peaks.size()) < 10);
    CHECK(r.fraction_matched == 1.0);
  }
  SUBCASE("bin-count mismatch errors") {
    Spectrum a = dft_magnitude(sine(48, 24.0));
    Spectrum b = dft_magnitude(sine(32, 8.0));
    CHECK_THROWS_AS(spectrum_alignment(a, b, 3), ShapeError);
  }
}

TEST_CASE("padding rows preserves spectra shape requirements") {
  Tensor filters = Tensor::zeros({2, 8});
  for (int i = 0; i < filters.numel(); ++i) filters.at(i) = 0.1 * i;
  Tensor padded = pad_rows(filters, 12);
  CHECK(padded.shape == Shape{2, 12});
  CHECK(padded.at(0, 7) == filters.at(0, 7));
  CHECK(padded.at(0, 11) == 0.0);
  CHECK_THROWS_AS(pad_rows(filters, 4), ShapeError);
}

TEST_CASE("spectrum csv layout") {
  Spectrum s = dft_magnitude(sine(8, 4.0));
  s.source = "dataset";
  std::string csv = spectrum_csv(s);
  CHECK(csv.find("bin,period,magnitude,source\n") == 0);
  CHECK(csv.find("0,,") != std::string::npos);       // DC has no period
  CHECK(csv.find(",dataset\n") != std::string::npos);
  CHECK(csv.find("2,4,") != std::string::npos);      // bin 2 has period 4
}
