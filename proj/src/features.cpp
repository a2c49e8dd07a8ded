#include "loglens/features.hpp"

#include <cmath>

#include "loglens/errors.hpp"
#include "loglens/io_util.hpp"

namespace loglens::feat {

const std::array<int, kNumBins>& bin_labels() {
  static const std::array<int, kNumBins> labels = [] {
    std::array<int, kNumBins> out{};
    out[0] = 0;
    for (std::size_t i = 1; i < kNumBins; ++i) out[i] = int(i) + 3;
    return out;
  }();
  return labels;
}

std::size_t bin_index_for_elapsed(std::int64_t elapsed_s) {
  if (elapsed_s < 4) return 0;
  if (elapsed_s >= 40) return kNumBins - 1;
  return std::size_t(elapsed_s) - 3;
}

std::map<int, std::vector<PointXY>> bin_points(const std::vector<tsne::ProjectedPoint>& points) {
  std::map<int, std::vector<PointXY>> bins;
  for (const auto& pt : points) {
    int label = bin_labels()[bin_index_for_elapsed(pt.ref.elapsed_s)];
    bins[label].push_back({pt.y1, pt.y2});
  }
  return bins;
}

double centroid_distance(const std::vector<PointXY>& points_in_bin, DistanceRule rule) {
  if (points_in_bin.empty()) throw ConfigError("centroid of an empty bin is undefined");
  double m1 = 0.0;
  double m2 = 0.0;
  for (const auto& p : points_in_bin) {
    m1 += p[0];
    m2 += p[1];
  }
  m1 /= double(points_in_bin.size());
  m2 /= double(points_in_bin.size());
  if (rule == DistanceRule::CompatSqrtSum) return std::sqrt(std::max(0.0, m1 + m2));
  return std::hypot(m1, m2);
}

FeatureVector featurize(const std::vector<tsne::ProjectedPoint>& points,
                        const truth::OutcomeLabel& outcome, DistanceRule rule) {
  if (points.empty()) throw ConfigError("cannot featurize an empty projection");
  FeatureVector fv;
  fv.label = outcome.label;
  fv.duration_s = outcome.duration_s;
  fv.source_path = points.front().ref.source_path;

  auto bins = bin_points(points);
  const auto& labels = bin_labels();
  for (std::size_t i = 0; i < kNumBins; ++i) {
    auto it = bins.find(labels[i]);
    if (it == bins.end()) continue;
    fv.distances[i] = centroid_distance(it->second, rule);
    fv.present[i] = true;
  }
  return fv;
}

FeatureVector truncate_to_window(const FeatureVector& fv, int horizon_s) {
  if (horizon_s < 0 || horizon_s > 40)
    throw ConfigError("window horizon must lie in [0, 40]");
  FeatureVector out = fv;
  const auto& labels = bin_labels();
  for (std::size_t i = 0; i < kNumBins; ++i) {
    if (labels[i] > horizon_s) {
      out.distances[i] = 0.0;
      out.present[i] = false;
    }
  }
  return out;
}

void write_features_csv(const std::vector<FeatureVector>& rows, const std::string& path) {
  std::string out = "source_path,label,duration_s";
  for (int label : bin_labels()) out += ",d" + std::to_string(label);
  for (int label : bin_labels()) out += ",m" + std::to_string(label);
  out.push_back('\n');

  for (const auto& fv : rows) {
    out += csv_escape(fv.source_path);
    out += ',';
    out += std::to_string(fv.label);
    out += ',';
    if (fv.duration_s) out += std::to_string(*fv.duration_s);
    for (double d : fv.distances) {
      out += ',';
      out += format_double(d);
    }
    for (bool m : fv.present) {
      out += ',';
      out += m ? '1' : '0';
    }
    out.push_back('\n');
  }
  write_text_file(path, out);
}

std::vector<FeatureVector> read_features_csv(const std::string& path) {
  const std::string text = read_text_file(path);
  const std::size_t width = 3 + 2 * kNumBins;
  std::vector<FeatureVector> rows;
  bool header_seen = false;
  for (std::string_view line : split_lines(text)) {
    if (line.empty()) continue;
    auto fields = parse_csv_line(line);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() != width || fields[0] != "source_path" || fields[3] != "d0" ||
          fields[4] != "d4" || fields[3 + kNumBins] != "m0")
        throw ConfigError("feature header mismatch in " + path);
      continue;
    }
    if (fields.size() != width) throw ConfigError("feature row has wrong width in " + path);
    FeatureVector fv;
    fv.source_path = fields[0];
    auto label = parse_int(fields[1]);
    if (!label || (*label != 0 && *label != 1))
      throw ConfigError("feature label must be 0 or 1 in " + path);
    fv.label = int(*label);
    if (!fields[2].empty()) {
      auto dur = parse_int(fields[2]);
      if (!dur) throw ConfigError("feature duration is malformed in " + path);
      fv.duration_s = *dur;
    }
    for (std::size_t i = 0; i < kNumBins; ++i) {
      auto d = parse_double(fields[3 + i]);
      if (!d || !std::isfinite(*d) || *d < 0.0)
        throw ConfigError("feature distance is malformed in " + path);
      fv.distances[i] = *d;
      const auto& m = fields[3 + kNumBins + i];
      if (m != "0" && m != "1") throw ConfigError("feature mask must be 0 or 1 in " + path);
      fv.present[i] = m == "1";
    }
    rows.push_back(std::move(fv));
  }
  if (!header_seen) throw ConfigError("feature file is empty: " + path);
  return rows;
}

}  // namespace loglens::feat
