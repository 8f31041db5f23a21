#pragma once

#include <string>
#include <vector>

#include "tpa/tensor.hpp"

namespace tpa {

struct Spectrum {
  int signal_length = 0;             // N
  std::vector<double> magnitudes;    // bins 0 .. floor(N/2)
  std::string source;                // "dataset" | "filters"

  int bins() const { return static_cast<int>(magnitudes.size()); }
  // Period axis N/f; defined for f >= 1 (DC has no period).
  double period(int bin) const;
};

// Direct-sum DFT magnitudes, O(N^2); N stays small here.
Spectrum dft_magnitude(const std::vector<double>& signal);

// All N bins, for Parseval-style checks.
std::vector<double> dft_full_magnitude(const std::vector<double>& signal);

// Elementwise mean of per-row magnitude spectra over a (R x N) matrix.
Spectrum avg_dft(const Tensor& rows);

// Rows right-padded with zeros to n columns.
Tensor pad_rows(const Tensor& rows, int n);

struct PeakMatch {
  int data_bin = 0;
  int filter_bin = 0;
  double data_magnitude = 0.0;
  double filter_magnitude = 0.0;
};

struct AlignmentReport {
  int top_j = 0;
  std::vector<int> data_peaks;    // bins, ordered by magnitude, DC excluded
  std::vector<int> filter_peaks;
  std::vector<PeakMatch> matches; // data peaks paired with a filter peak within +-1 bin
  double fraction_matched = 0.0;  // matched / |data_peaks|
  int signal_length = 0;

  bool data_bin_matched(int bin) const;
  std::string to_json_string() const;
};

// Top-j local maxima of both spectra (by magnitude, DC excluded), greedily
// paired within +-1 bin. Fewer than top_j maxima is not an error; the
// report covers what exists.
AlignmentReport spectrum_alignment(const Spectrum& dataset_spectrum,
                                   const Spectrum& filter_spectrum, int top_j);

// CSV rows: bin, period, magnitude, source (period empty for DC).
std::string spectrum_csv(const Spectrum& spectrum);

}  // namespace tpa
