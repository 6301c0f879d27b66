#pragma once

#include <json.hpp>

#include <array>
#include <string>
#include <vector>

#include "osid/errors.hpp"
#include "osid/rational.hpp"

namespace osid {

// Discretization of a compact metric space: a uniform grid on a box in R^1
// or R^2 (bounds exact rationals), or an explicit finite metric space given
// by a distance matrix. Finite metric spaces carry their own per-point
// function values since points have no coordinates to evaluate at.
class SampledDomain {
 public:
  enum class Kind { Grid1d, Grid2d, FiniteMetric };

  // Placeholder value; build real domains through the factories below.
  SampledDomain() = default;

  static SampledDomain grid1d(const Rat& lo, const Rat& hi, int npoints);
  static SampledDomain grid2d(const Rat& lo, const Rat& hi, int nx, int ny);
  static SampledDomain finite_metric(std::vector<std::string> labels,
                                     std::vector<double> distances,  // n*n row-major
                                     std::vector<double> values);

  // "grid1d:<lo>:<hi>:<npoints>", "grid2d:<lo>:<hi>:<n>x<m>", "finite:<path.json>"
  static SampledDomain parse(const std::string& descriptor);
  static SampledDomain finite_from_json(const nlohmann::json& j);

  Kind kind() const { return kind_; }
  bool is_grid() const { return kind_ != Kind::FiniteMetric; }
  int dim() const { return kind_ == Kind::Grid2d ? 2 : 1; }
  size_t size() const;

  std::array<double, 2> point(size_t i) const;  // grids only
  int npoints(int axis) const { return npoints_[axis]; }
  const Rat& lo(int axis = 0) const { return lo_[axis]; }
  const Rat& hi(int axis = 0) const { return hi_[axis]; }
  double mesh(int axis = 0) const;
  double max_mesh() const;

  double distance(size_t i, size_t j) const;

  const std::vector<std::string>& labels() const { return labels_; }
  bool has_embedded_values() const { return !values_.empty(); }
  const std::vector<double>& embedded_values() const { return values_; }

  std::string descriptor() const;
  nlohmann::json descriptor_json() const;

 private:
  Kind kind_ = Kind::Grid1d;
  Rat lo_[2], hi_[2];
  int npoints_[2] = {0, 0};
  std::vector<std::string> labels_;
  std::vector<double> dist_;    // finite metric, row-major
  std::vector<double> values_;  // finite metric f values
};

}  // namespace osid
