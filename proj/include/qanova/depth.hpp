#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qanova/probability.hpp"

namespace qanova {

// Row-major n x p matrix of points.
class Cloud {
 public:
  Cloud(std::size_t rows, std::size_t cols);
  Cloud(std::size_t rows, std::size_t cols, std::vector<double> data);
  static Cloud from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  double operator()(std::size_t i, std::size_t k) const { return data_[i * cols_ + k]; }
  double& operator()(std::size_t i, std::size_t k) { return data_[i * cols_ + k]; }

  std::span<const double> data() const { return data_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

struct DepthReport {
  std::vector<double> center;
  std::vector<double> distances;
  // Directions dropped because the row coincides with the center or the
  // projected distances have zero interquartile range.
  std::size_t skipped_directions = 0;
};

// Coordinate-wise sample medians of the rows.
std::vector<double> marginal_medians(const Cloud& y);

// Projection distance of every row relative to the cloud, scaled per direction
// by the ideal-fourths interquartile range. Needs at least 3 rows. Directions
// with zero length or zero scale are skipped; throws DegenerateCloudError when
// none remain. `threads` splits the direction loop; the result does not
// depend on it.
DepthReport projection_distances(const Cloud& y, unsigned threads = 1);

// 1 - (1/B) * #{b : null_distance >= cloud_distances[b]}.
Probability depth_pvalue(std::span<const double> cloud_distances, double null_distance);

}  // namespace qanova
