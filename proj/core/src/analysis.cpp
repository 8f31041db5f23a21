#include "tpa/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tpa {

double Spectrum::period(int bin) const {
  if (bin < 1 || bin >= bins()) throw std::out_of_range("spectrum: period undefined for bin " + std::to_string(bin));
  return static_cast<double>(signal_length) / bin;
}

std::vector<double> dft_full_magnitude(const std::vector<double>& signal) {
  int n = static_cast<int>(signal.size());
  if (n == 0) throw ShapeError("dft: empty signal");
  std::vector<double> mags(static_cast<size_t>(n));
  const double two_pi = 2.0 * std::numbers::pi;
  for (int f = 0; f < n; ++f) {
    double re = 0.0, im = 0.0;
    for (int t = 0; t < n; ++t) {
      double angle = two_pi * f * t / n;
      re += signal[static_cast<size_t>(t)] * std::cos(angle);
      im -= signal[static_cast<size_t>(t)] * std::sin(angle);
    }
    mags[static_cast<size_t>(f)] = std::hypot(re, im);
  }
  return mags;
}

Spectrum dft_magnitude(const std::vector<double>& signal) {
  std::vector<double> full = dft_full_magnitude(signal);
  int n = static_cast<int>(signal.size());
  Spectrum s;
  s.signal_length = n;
  s.magnitudes.assign(full.begin(), full.begin() + n / 2 + 1);
  return s;
}

Spectrum avg_dft(const Tensor& rows) {
  if (rows.rank() != 2) throw ShapeError("avg_dft: expected a rank-2 tensor, got " + shape_str(rows.shape));
  int r = rows.rows(), n = rows.cols();
  Spectrum acc;
  acc.signal_length = n;
  acc.magnitudes.assign(static_cast<size_t>(n / 2 + 1), 0.0);
  std::vector<double> row(static_cast<size_t>(n));
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < n; ++j) row[static_cast<size_t>(j)] = rows.at(i, j);
    Spectrum s = dft_magnitude(row);
    for (int b = 0; b < acc.bins(); ++b) acc.magnitudes[static_cast<size_t>(b)] += s.magnitudes[static_cast<size_t>(b)];
  }
  for (double& m : acc.magnitudes) m /= r;
  return acc;
}

Tensor pad_rows(const Tensor& rows, int n) {
  if (rows.rank() != 2) throw ShapeError("pad_rows: expected a rank-2 tensor");
  if (rows.cols() > n) throw ShapeError("pad_rows: rows longer than target length");
  if (rows.cols() == n) return rows;
  Tensor out = Tensor::zeros({rows.rows(), n});
  for (int i = 0; i < rows.rows(); ++i) {
    for (int j = 0; j < rows.cols(); ++j) out.at(i, j) = rows.at(i, j);
  }
  return out;
}

namespace {

// Local maxima among bins 1..N/2 (DC never competes), strongest first,
// ties broken toward the lower bin. Bins below 1e-6 of the strongest
// non-DC magnitude are rounding noise, not peaks.
std::vector<int> top_local_maxima(const Spectrum& s, int top_j) {
  std::vector<int> peaks;
  int last = s.bins() - 1;
  double strongest = 0.0;
  for (int b = 1; b <= last; ++b) strongest = std::max(strongest, s.magnitudes[static_cast<size_t>(b)]);
  double floor_mag = 1e-6 * strongest;
  for (int b = 1; b <= last; ++b) {
    double m = s.magnitudes[static_cast<size_t>(b)];
    if (!(m > floor_mag)) continue;
    if (b > 1 && !(m > s.magnitudes[static_cast<size_t>(b - 1)])) continue;
    if (b < last && !(m > s.magnitudes[static_cast<size_t>(b + 1)])) continue;
    peaks.push_back(b);
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](int a, int b) {
    return s.magnitudes[static_cast<size_t>(a)] > s.magnitudes[static_cast<size_t>(b)];
  });
  if (static_cast<int>(peaks.size()) > top_j) peaks.resize(static_cast<size_t>(top_j));
  return peaks;
}

}  // namespace

bool AlignmentReport::data_bin_matched(int bin) const {
  for (const PeakMatch& m : matches) {
    if (m.data_bin == bin) return true;
  }
  return false;
}

std::string AlignmentReport::to_json_string() const {
  nlohmann::json j;
  j["top_j"] = top_j;
  j["signal_length"] = signal_length;
  auto peak_list = [&](const std::vector<int>& bins) {
    nlohmann::json arr = nlohmann::json::array();
    for (int b : bins) {
      arr.push_back({{"bin", b}, {"period", static_cast<double>(signal_length) / b}});
    }
    return arr;
  };
  j["dataset_peaks"] = peak_list(data_peaks);
  j["filter_peaks"] = peak_list(filter_peaks);
  nlohmann::json arr = nlohmann::json::array();
  for (const PeakMatch& m : matches) {
    arr.push_back({{"data_bin", m.data_bin},
                   {"filter_bin", m.filter_bin},
                   {"period", static_cast<double>(signal_length) / m.data_bin},
                   {"data_magnitude", m.data_magnitude},
                   {"filter_magnitude", m.filter_magnitude}});
  }
  j["matches"] = arr;
  j["fraction_matched"] = fraction_matched;
  return j.dump(2);
}

AlignmentReport spectrum_alignment(const Spectrum& dataset_spectrum,
                                   const Spectrum& filter_spectrum, int top_j) {
  if (dataset_spectrum.bins() != filter_spectrum.bins()) {
    throw ShapeError("spectrum_alignment: bin counts differ (" +
                     std::to_string(dataset_spectrum.bins()) + " vs " +
                     std::to_string(filter_spectrum.bins()) + "); pad filters to the window length");
  }
  if (top_j < 1) throw std::invalid_argument("spectrum_alignment: top_j must be >= 1");

  AlignmentReport report;
  report.top_j = top_j;
  report.signal_length = dataset_spectrum.signal_length;
  report.data_peaks = top_local_maxima(dataset_spectrum, top_j);
  report.filter_peaks = top_local_maxima(filter_spectrum, top_j);

  std::vector<bool> used(report.filter_peaks.size(), false);
  for (int db : report.data_peaks) {
    int pick = -1;
    int pick_dist = 2;
    for (size_t i = 0; i < report.filter_peaks.size(); ++i) {
      if (used[i]) continue;
      int dist = std::abs(report.filter_peaks[i] - db);
      if (dist <= 1 && dist < pick_dist) {
        pick = static_cast<int>(i);
        pick_dist = dist;
      }
    }
    if (pick >= 0) {
      used[static_cast<size_t>(pick)] = true;
      PeakMatch m;
      m.data_bin = db;
      m.filter_bin = report.filter_peaks[static_cast<size_t>(pick)];
      m.data_magnitude = dataset_spectrum.magnitudes[static_cast<size_t>(db)];
      m.filter_magnitude = filter_spectrum.magnitudes[static_cast<size_t>(m.filter_bin)];
      report.matches.push_back(m);
    }
  }
  report.fraction_matched = report.data_peaks.empty()
                                ? 0.0
                                : static_cast<double>(report.matches.size()) / report.data_peaks.size();
  return report;
}

std::string spectrum_csv(const Spectrum& spectrum) {
  std::ostringstream os;
  os << "bin,period,magnitude,source\n";
  char buf[40];
  for (int b = 0; b < spectrum.bins(); ++b) {
    os << b << ",";
    if (b >= 1) {
      std::snprintf(buf, sizeof buf, "%.17g", spectrum.period(b));
      os << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", spectrum.magnitudes[static_cast<size_t>(b)]);
    os << "," << buf << "," << spectrum.source << "\n";
  }
  return os.str();
}

}  // namespace tpa
