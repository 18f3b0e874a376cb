#include "qanova/depth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qanova/error.hpp"
#include "qanova/parallel.hpp"
#include "qanova/quantiles.hpp"

namespace qanova {

Cloud::Cloud(std::size_t rows, std::size_t cols)
    : Cloud(rows, cols, std::vector<double>(rows * cols, 0.0)) {}

Cloud::Cloud(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (cols_ == 0) throw std::invalid_argument("cloud dimension must be at least 1");
  if (data_.size() != rows_ * cols_) throw std::invalid_argument("cloud data size mismatch");
}

Cloud Cloud::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("cloud needs at least one row");
  const std::size_t p = rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * p);
  for (const auto& r : rows) {
    if (r.size() != p) throw std::invalid_argument("cloud rows differ in dimension");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Cloud(rows.size(), p, std::move(data));
}

std::vector<double> marginal_medians(const Cloud& y) {
  std::vector<double> center(y.cols());
  std::vector<double> column(y.rows());
  for (std::size_t k = 0; k < y.cols(); ++k) {
    for (std::size_t i = 0; i < y.rows(); ++i) column[i] = y(i, k);
    std::sort(column.begin(), column.end());
    center[k] = sorted_median(column);
  }
  return center;
}

namespace {

double dot(const double* a, const double* b, std::size_t p) {
  double acc = 0.0;
  for (std::size_t k = 0; k < p; ++k) acc += a[k] * b[k];
  return acc;
}

struct WorkerState {
  std::vector<double> max_distance;
  std::size_t admissible = 0;
  std::size_t skipped = 0;
};

}  // namespace

DepthReport projection_distances(const Cloud& y, unsigned threads) {
  const std::size_t n = y.rows();
  const std::size_t p = y.cols();
  if (n < 3) {
    throw std::invalid_argument("projection distances need at least 3 rows, got " +
                                std::to_string(n));
  }

  DepthReport report;
  report.center = marginal_medians(y);

  std::vector<double> centered(n * p);
  std::vector<double> length2(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < p; ++k) centered[i * p + k] = y(i, k) - report.center[k];
    length2[i] = dot(&centered[i * p], &centered[i * p], p);
  }

  const std::size_t workers = chunk_workers(n, threads);
  std::vector<WorkerState> state(workers);
  parallel_for_chunks(n, threads, [&](std::size_t begin, std::size_t end, std::size_t w) {
    WorkerState& local = state[w];
    local.max_distance.assign(n, 0.0);
    std::vector<double> projected(n);
    std::vector<double> scratch(n);
    for (std::size_t i = begin; i < end; ++i) {
      if (length2[i] == 0.0) {
        ++local.skipped;
        continue;
      }
      // ||(W_ij / C_i) U_i|| = |W_ij| / sqrt(C_i)
      const double inv_len = 1.0 / std::sqrt(length2[i]);
      const double* ui = &centered[i * p];
      for (std::size_t j = 0; j < n; ++j) {
        projected[j] = std::fabs(dot(ui, &centered[j * p], p)) * inv_len;
      }
      scratch = projected;
      const Fourths f = ideal_fourths_inplace(scratch);
      const double scale = f.upper - f.lower;
      if (!(scale > 0.0)) {
        ++local.skipped;
        continue;
      }
      ++local.admissible;
      for (std::size_t j = 0; j < n; ++j) {
        local.max_distance[j] = std::max(local.max_distance[j], projected[j] / scale);
      }
    }
  });

  std::size_t admissible = 0;
  report.distances.assign(n, 0.0);
  for (const auto& local : state) {
    admissible += local.admissible;
    report.skipped_directions += local.skipped;
    for (std::size_t j = 0; j < n; ++j) {
      report.distances[j] = std::max(report.distances[j], local.max_distance[j]);
    }
  }
  if (admissible == 0) {
    throw DegenerateCloudError(
        "no admissible projection direction: every row coincides with the center or has "
        "zero interquartile scale");
  }
  return report;
}

Probability depth_pvalue(std::span<const double> cloud_distances, double null_distance) {
  if (cloud_distances.empty()) throw std::invalid_argument("depth p-value needs B >= 1");
  std::size_t deeper = 0;
  for (double k : cloud_distances) {
    if (null_distance >= k) ++deeper;
  }
  const double b = static_cast<double>(cloud_distances.size());
  return Probability(1.0 - static_cast<double>(deeper) / b);
}

}  // namespace qanova
