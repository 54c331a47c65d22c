#pragma once

// Straightforward reference implementations used only by the tests. They
// share no code with the library.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace s2r::test {

inline std::vector<double> uniform_values(std::mt19937_64& rng, std::size_t n, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out(n);
  for (auto& v : out) v = dist(rng);
  return out;
}

// Pearson correlation, two passes in long double.
inline double pearson(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  long double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  long double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double da = a[i] - ma;
    const long double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  return static_cast<double>(sab / std::sqrt(saa * sbb));
}

// Column means and ddof=1 covariance of a row-major rows x cols matrix.
struct LoopStats {
  std::vector<double> mean;
  std::vector<double> cov;  // cols x cols, row-major
};

inline LoopStats loop_stats(std::span<const double> data, std::size_t rows, std::size_t cols) {
  LoopStats s{std::vector<double>(cols, 0.0), std::vector<double>(cols * cols, 0.0)};
  for (std::size_t j = 0; j < cols; ++j) {
    long double sum = 0;
    for (std::size_t i = 0; i < rows; ++i) sum += data[i * cols + j];
    s.mean[j] = static_cast<double>(sum / rows);
  }
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t k = 0; k < cols; ++k) {
      long double sum = 0;
      for (std::size_t i = 0; i < rows; ++i) {
        sum += (data[i * cols + j] - s.mean[j]) * static_cast<long double>(data[i * cols + k] - s.mean[k]);
      }
      s.cov[j * cols + k] = static_cast<double>(sum / (rows - 1));
    }
  }
  return s;
}

// Per-pixel sum over channels of squares, channel-major input.
inline std::vector<double> loop_sum_squares(std::span<const double> data, std::size_t c, std::size_t h, std::size_t w) {
  std::vector<double> out(h * w, 0.0);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (std::size_t k = 0; k < c; ++k) {
        const double v = data[(k * h + y) * w + x];
        acc += v * v;
      }
      out[y * w + x] = acc;
    }
  }
  return out;
}

}  // namespace s2r::test
