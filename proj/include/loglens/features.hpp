#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loglens/ground_truth.hpp"
#include "loglens/tsne.hpp"

namespace loglens::feat {

// Bin labels T = {0, 4, 5, ..., 40}. Bin 0 covers [0,4) while the connection
// is still being built; bin t covers [t,t+1); bin 40 absorbs [40, inf).
inline constexpr std::size_t kNumBins = 38;

const std::array<int, kNumBins>& bin_labels();
std::size_t bin_index_for_elapsed(std::int64_t elapsed_s);

struct FeatureVector {
  std::array<double, kNumBins> distances{};
  std::array<bool, kNumBins> present{};
  int label = 0;
  std::optional<std::int64_t> duration_s;
  std::string source_path;
};

// A literal sqrt(mean_y1 + mean_y2) is undefined for negative centroid
// sums; the norm of the centroid is the default. The literal rule, clamped
// at zero, stays available for audit.
enum class DistanceRule { NormOfCentroid, CompatSqrtSum };

using PointXY = std::array<double, 2>;

std::map<int, std::vector<PointXY>> bin_points(const std::vector<tsne::ProjectedPoint>& points);

double centroid_distance(const std::vector<PointXY>& points_in_bin,
                         DistanceRule rule = DistanceRule::NormOfCentroid);

FeatureVector featurize(const std::vector<tsne::ProjectedPoint>& points,
                        const truth::OutcomeLabel& outcome,
                        DistanceRule rule = DistanceRule::NormOfCentroid);

// Zeroes (and unmasks) every bin whose label exceeds the horizon.
FeatureVector truncate_to_window(const FeatureVector& fv, int horizon_s);

// CSV contract with the classify stage:
// source_path,label,duration_s,d0,d4,...,d40,m0,m4,...,m40
void write_features_csv(const std::vector<FeatureVector>& rows, const std::string& path);
std::vector<FeatureVector> read_features_csv(const std::string& path);

}  // namespace loglens::feat
