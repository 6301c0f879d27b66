#include "osid/domain.hpp"

#include <cmath>
#include <fstream>

namespace osid {

namespace {
constexpr double kMetricTolerance = 1e-12;
}

SampledDomain SampledDomain::grid1d(const Rat& lo, const Rat& hi, int npoints) {
  if (npoints < 2) throw ConfigError("grid1d needs at least 2 points (mesh must be positive)");
  if (!(lo < hi)) throw ConfigError("grid1d needs lo < hi");
  SampledDomain d;
  d.kind_ = Kind::Grid1d;
  d.lo_[0] = lo;
  d.hi_[0] = hi;
  d.npoints_[0] = npoints;
  return d;
}

SampledDomain SampledDomain::grid2d(const Rat& lo, const Rat& hi, int nx, int ny) {
  if (nx < 2 || ny < 2) throw ConfigError("grid2d needs at least 2 points per axis");
  if (!(lo < hi)) throw ConfigError("grid2d needs lo < hi");
  SampledDomain d;
  d.kind_ = Kind::Grid2d;
  d.lo_[0] = d.lo_[1] = lo;
  d.hi_[0] = d.hi_[1] = hi;
  d.npoints_[0] = nx;
  d.npoints_[1] = ny;
  return d;
}

SampledDomain SampledDomain::finite_metric(std::vector<std::string> labels,
                                           std::vector<double> distances,
                                           std::vector<double> values) {
  const size_t n = labels.size();
  if (n == 0) throw ConfigError("finite metric space must be nonempty");
  if (distances.size() != n * n)
    throw ConfigError("distance matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  if (values.size() != n)
    throw ConfigError("finite metric space needs one function value per point");
  auto at = [&](size_t i, size_t j) { return distances[i * n + j]; };
  for (size_t i = 0; i < n; ++i) {
    if (std::fabs(at(i, i)) > kMetricTolerance)
      throw ConfigError("distance matrix has nonzero diagonal at " + labels[i]);
    for (size_t j = 0; j < n; ++j) {
      if (!std::isfinite(at(i, j)) || at(i, j) < -kMetricTolerance)
        throw ConfigError("distance matrix entry (" + labels[i] + ", " + labels[j] +
                          ") is negative or non-finite");
      if (std::fabs(at(i, j) - at(j, i)) > kMetricTolerance)
        throw ConfigError("distance matrix is not symmetric at (" + labels[i] + ", " + labels[j] +
                          ")");
    }
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k)
        if (at(i, k) > at(i, j) + at(j, k) + kMetricTolerance)
          throw ConfigError("triangle inequality violated at (" + labels[i] + ", " + labels[j] +
                            ", " + labels[k] + ")");
  SampledDomain d;
  d.kind_ = Kind::FiniteMetric;
  d.labels_ = std::move(labels);
  d.dist_ = std::move(distances);
  d.values_ = std::move(values);
  return d;
}

SampledDomain SampledDomain::parse(const std::string& descriptor) {
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (true) {
      size_t pos = s.find(sep, start);
      parts.push_back(s.substr(start, pos == std::string::npos ? pos : pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return parts;
  };
  if (descriptor.rfind("finite:", 0) == 0) {
    const std::string path = descriptor.substr(7);
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read finite metric space file " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("malformed JSON in " + path + ": " + e.what());
    }
    return finite_from_json(j);
  }
  std::vector<std::string> parts = split(descriptor, ':');
  if (parts.size() == 4 && parts[0] == "grid1d") {
    int n;
    try {
      n = std::stoi(parts[3]);
    } catch (...) {
      throw ConfigError("malformed point count in " + descriptor);
    }
    return grid1d(rat_parse(parts[1]), rat_parse(parts[2]), n);
  }
  if (parts.size() == 4 && parts[0] == "grid2d") {
    const size_t x = parts[3].find('x');
    if (x == std::string::npos) throw ConfigError("grid2d needs <n>x<m> point counts");
    int nx, ny;
    try {
      nx = std::stoi(parts[3].substr(0, x));
      ny = std::stoi(parts[3].substr(x + 1));
    } catch (...) {
      throw ConfigError("malformed point counts in " + descriptor);
    }
    return grid2d(rat_parse(parts[1]), rat_parse(parts[2]), nx, ny);
  }
  throw ConfigError("unknown domain descriptor '" + descriptor +
                    "' (expected grid1d:lo:hi:n, grid2d:lo:hi:nxm, or finite:path)");
}

SampledDomain SampledDomain::finite_from_json(const nlohmann::json& j) {
  std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
  std::vector<double> dist;
  for (const auto& row : j.at("distances"))
    for (const auto& entry : row) dist.push_back(entry.get<double>());
  std::vector<double> values = j.at("values").get<std::vector<double>>();
  return finite_metric(std::move(labels), std::move(dist), std::move(values));
}

size_t SampledDomain::size() const {
  switch (kind_) {
    case Kind::Grid1d:
      return static_cast<size_t>(npoints_[0]);
    case Kind::Grid2d:
      return static_cast<size_t>(npoints_[0]) * static_cast<size_t>(npoints_[1]);
    case Kind::FiniteMetric:
      return labels_.size();
  }
  return 0;
}

std::array<double, 2> SampledDomain::point(size_t i) const {
  switch (kind_) {
    case Kind::Grid1d:
      return {lo_[0].get_d() + static_cast<double>(i) * mesh(0), 0.0};
    case Kind::Grid2d: {
      const size_t ix = i % static_cast<size_t>(npoints_[0]);
      const size_t iy = i / static_cast<size_t>(npoints_[0]);
      return {lo_[0].get_d() + static_cast<double>(ix) * mesh(0),
              lo_[1].get_d() + static_cast<double>(iy) * mesh(1)};
    }
    case Kind::FiniteMetric:
      throw ConfigError("finite metric points have no coordinates");
  }
  return {0, 0};
}

double SampledDomain::mesh(int axis) const {
  if (kind_ == Kind::FiniteMetric) throw ConfigError("finite metric space has no mesh");
  return Rat((hi_[axis] - lo_[axis]) / (npoints_[axis] - 1)).get_d();
}

double SampledDomain::max_mesh() const {
  double h = mesh(0);
  if (kind_ == Kind::Grid2d) h = std::max(h, mesh(1));
  return h;
}

double SampledDomain::distance(size_t i, size_t j) const {
  if (kind_ == Kind::FiniteMetric) return dist_[i * labels_.size() + j];
  const std::array<double, 2> a = point(i);
  const std::array<double, 2> b = point(j);
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

std::string SampledDomain::descriptor() const {
  auto bound = [](const Rat& r) {
    return r.get_den() == 1 ? r.get_num().get_str() : rat_str(r);
  };
  switch (kind_) {
    case Kind::Grid1d:
      return "grid1d:" + bound(lo_[0]) + ":" + bound(hi_[0]) + ":" + std::to_string(npoints_[0]);
    case Kind::Grid2d:
      return "grid2d:" + bound(lo_[0]) + ":" + bound(hi_[0]) + ":" + std::to_string(npoints_[0]) +
             "x" + std::to_string(npoints_[1]);
    case Kind::FiniteMetric:
      return "finite:<" + std::to_string(labels_.size()) + " points>";
  }
  return "?";
}

nlohmann::json SampledDomain::descriptor_json() const {
  switch (kind_) {
    case Kind::Grid1d:
      return nlohmann::json{{"kind", "grid1d"},
                            {"lo", rat_str(lo_[0])},
                            {"hi", rat_str(hi_[0])},
                            {"npoints", npoints_[0]}};
    case Kind::Grid2d:
      return nlohmann::json{{"kind", "grid2d"},
                            {"lo", rat_str(lo_[0])},
                            {"hi", rat_str(hi_[0])},
                            {"npoints", nlohmann::json::array({npoints_[0], npoints_[1]})}};
    case Kind::FiniteMetric:
      return nlohmann::json{{"kind", "finite-metric"}, {"points", labels_.size()}};
  }
  return {};
}

}  // namespace osid
