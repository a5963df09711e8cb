#include "pbcurves/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "pbcurves/errors.hpp"

namespace pbcurves {

std::vector<double> fd_weights(double x0, const std::vector<double>& grid, int order) {
  const int n = static_cast<int>(grid.size());
  if (order < 0 || n <= order) throw DomainError("fd_weights: need more nodes than the derivative order");
  // c[j][m]: weight of node j for derivative m.
  std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
  double c1 = 1.0;
  double c4 = grid[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = grid[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = grid[i] - grid[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = c[j][order];
  return w;
}

namespace {

// Weights on integer offsets first, first + 1, ..., first + width - 1.
const std::vector<double>& offset_weights(int first, int width, int order) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, std::vector<double>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(first, width, order);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<double> grid(width);
  for (int j = 0; j < width; ++j) grid[j] = first + j;
  return cache.emplace(key, fd_weights(0.0, grid, order)).first->second;
}

template <class T>
std::vector<T> apply(const std::vector<T>& f, double h, int order, int accuracy, bool periodic,
                     const T& zero) {
  const int n = static_cast<int>(f.size());
  const int central = 2 * ((order + 1) / 2) - 1 + accuracy;
  const int half = central / 2;
  const double scale = std::pow(h, -order);
  std::vector<T> out(n, zero);

  if (periodic) {
    const int m = n - 1;
    if (m < central) throw DomainError("differentiate: closed curve has too few nodes");
    const auto& w = offset_weights(-half, central, order);
    for (int i = 0; i < m; ++i) {
      T acc = zero;
      for (int j = 0; j < central; ++j) acc += w[j] * f[((i - half + j) % m + m) % m];
      out[i] = acc * scale;
    }
    out[m] = out[0];
    return out;
  }

  const int side = std::min(order + accuracy, n);
  if (n < std::min(central, side) || n <= order)
    throw DomainError("differentiate: too few nodes for the requested stencil");
  for (int i = 0; i < n; ++i) {
    int first, width;
    if (i - half >= 0 && i + half < n) {
      first = i - half;
      width = central;
    } else {
      width = side;
      first = std::clamp(i - width / 2, 0, n - width);
    }
    const auto& w = offset_weights(first - i, width, order);
    T acc = zero;
    for (int j = 0; j < width; ++j) acc += w[j] * f[first + j];
    out[i] = acc * scale;
  }
  return out;
}

}  // namespace

std::vector<Vec> differentiate(const std::vector<Vec>& f, double h, int order, int accuracy,
                               bool periodic) {
  if (f.empty()) return {};
  return apply(f, h, order, accuracy, periodic, Vec(Vec::Zero(f.front().size())));
}

std::vector<double> differentiate(const std::vector<double>& f, double h, int order, int accuracy,
                                  bool periodic) {
  return apply(f, h, order, accuracy, periodic, 0.0);
}

}  // namespace pbcurves
