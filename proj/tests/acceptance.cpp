// Release gate. Each numbered criterion prints exactly one PASS or FAIL line
// with the measured values; the process exits nonzero if any criterion fails.
// Everything is seeded, so a failure here reproduces byte for byte.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "loglens/classify.hpp"
#include "loglens/features.hpp"
#include "loglens/ground_truth.hpp"
#include "loglens/log_ingest.hpp"
#include "loglens/matrix.hpp"
#include "loglens/pipeline.hpp"
#include "loglens/rng.hpp"
#include "loglens/synth.hpp"
#include "loglens/tsne.hpp"

namespace fs = std::filesystem;
using namespace loglens;

namespace {

// Every tolerance and threshold the gate enforces, in one place.
constexpr double kCvAccuracyFloor = 0.90;     // criterion 1
constexpr double kRunAllBudgetS = 300.0;      // criterion 1
constexpr double kEarlyAccuracyCap = 0.65;    // criteria 2 and 3
constexpr double kWindowAccuracyFloor = 0.90; // criterion 2
constexpr double kPlateauSlack = 0.05;        // criterion 2
constexpr double kAffinitySumTol = 1e-9;      // criterion 4
constexpr double kPerplexityRelTol = 1e-3;    // criterion 4
constexpr double kGradientStep = 1e-5;        // criterion 5
constexpr double kGradientRelTol = 1e-4;      // criterion 5
constexpr double kPurityFloor = 0.95;         // criterion 6
constexpr double kAucTol = 1e-12;             // criterion 7
constexpr double kCentroidTol = 1e-12;        // criterion 8

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
  std::printf("%s: criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string fmt_exp(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

struct Paths {
  fs::path corpus;       // default synthetic corpus
  fs::path run;          // pipeline artifacts for that corpus
  fs::path ctrl_corpus;  // zero-width-window corpus without keyword lines
  fs::path ctrl_run;
};

const std::vector<classify::ModelKind> kKinds = {classify::ModelKind::LogReg,
                                                 classify::ModelKind::KNN,
                                                 classify::ModelKind::RandomForest};

pipeline::PipelineOptions base_options(const fs::path& input, const fs::path& out) {
  pipeline::PipelineOptions options;
  options.input = input.string();
  options.out_dir = out.string();
  options.seed = 7;
  return options;
}

// 1. On the default corpus every classifier reaches 0.90 five-fold CV
//    accuracy and the whole pipeline stays inside the five-minute budget.
void criterion_accuracy(const Paths& paths) {
  try {
    synth::CorpusSpec corpus;  // 200 files, half pass, window [10,17), seed 7
    synth::generate_corpus(corpus, paths.corpus.string());

    auto options = base_options(paths.corpus, paths.run);
    const auto t0 = std::chrono::steady_clock::now();
    pipeline::run_all(options);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool ok = elapsed < kRunAllBudgetS;
    std::string detail = "cv accuracy";
    for (auto kind : kKinds) {
      const std::string tag(classify::kind_name(kind));
      auto rep = classify::load_report((paths.run / ("report-" + tag + ".json")).string());
      ok = ok && rep.accuracy >= kCvAccuracyFloor;
      detail += " " + tag + "=" + fmt(rep.accuracy);
    }
    detail += ", run-all " + fmt(elapsed, 1) + "s of " + fmt(kRunAllBudgetS, 0) + "s";
    report(1, ok, detail);
  } catch (const std::exception& e) {
    report(1, false, std::string("exception: ") + e.what());
  }
}

// 2. Accuracy over truncated horizons: near chance at 9 s, at strength by
//    17 s, and no further gain worth more than the slack after that.
void criterion_horizon_shape(const Paths& paths) {
  try {
    auto options = base_options(paths.corpus, paths.run);
    options.horizons = {9, 17, 40};

    bool ok = true;
    std::string detail;
    for (auto kind : kKinds) {
      auto sweep = pipeline::sweep_stage(options, kind);
      const double a9 = sweep.at(9);
      const double a17 = sweep.at(17);
      const double a40 = sweep.at(40);
      ok = ok && a9 <= kEarlyAccuracyCap && a17 >= kWindowAccuracyFloor &&
           a40 - a17 <= kPlateauSlack;
      if (!detail.empty()) detail += " ";
      detail += std::string(classify::kind_name(kind)) + "=" + fmt(a9, 3) + "/" + fmt(a17, 3) +
                "/" + fmt(a40, 3);
    }
    report(2, ok, "acc(9)/acc(17)/acc(40) " + detail);
  } catch (const std::exception& e) {
    report(2, false, std::string("exception: ") + e.what());
  }
}

// 3. With no divergence window and no keyword lines in the logs, the planted
//    labels carry no embeddable signal and CV accuracy stays near chance.
void criterion_negative_control(const Paths& paths) {
  try {
    synth::CorpusSpec control;
    control.window_start_s = 17;
    control.window_end_s = 17;
    control.include_keyword_line = false;
    auto manifest = synth::generate_corpus(control, paths.ctrl_corpus.string());

    auto options = base_options(paths.ctrl_corpus, paths.ctrl_run);
    pipeline::parse_stage(options);
    pipeline::embed_stage(options);
    pipeline::reduce_stage(options);

    // Keyword labeling has nothing to match in these logs, so the generator's
    // planted outcomes stand in as the label artifact.
    for (auto& row : manifest)
      row.source_path = (paths.ctrl_corpus / row.source_path).string();
    truth::write_manifest(manifest, (paths.ctrl_run / "manifest.csv").string());
    pipeline::featurize_stage(options);

    bool ok = true;
    std::string detail = "cv accuracy";
    for (auto kind : kKinds) {
      auto rep = pipeline::evaluate_stage(options, kind);
      ok = ok && rep.accuracy <= kEarlyAccuracyCap;
      detail += " " + std::string(classify::kind_name(kind)) + "=" + fmt(rep.accuracy);
    }
    detail += ", cap " + fmt(kEarlyAccuracyCap, 2);
    report(3, ok, detail);
  } catch (const std::exception& e) {
    report(3, false, std::string("exception: ") + e.what());
  }
}

// 4. Joint affinities are symmetric, zero on the diagonal, non-negative and
//    normalized, and each row's bandwidth hits the requested perplexity.
void criterion_affinities() {
  try {
    Rng rng(derive_seed(7, "acceptance:affinities"));
    bool ok = true;
    double worst_sum = 0.0;
    double worst_rel = 0.0;

    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 3 + rng.below(58);
      Matrix x(n, 8);
      for (double& v : x.data) v = rng.gaussian();

      tsne::TsneConfig config;
      auto aff = tsne::compute_affinities(x, config);

      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j) {
            ok = ok && aff.p(i, j) == 0.0;
            continue;
          }
          ok = ok && aff.p(i, j) >= 0.0 && aff.p(i, j) == aff.p(j, i);
          sum += aff.p(i, j);
        }
      }
      worst_sum = std::max(worst_sum, std::abs(sum - 1.0));

      // Recompute each row's perplexity from the stored bandwidth alone.
      Matrix d2 = tsne::pairwise_sq_dists(x);
      for (std::size_t i = 0; i < n; ++i) {
        const double beta = 0.5 / (aff.sigmas[i] * aff.sigmas[i]);
        double d2_min = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) d2_min = std::min(d2_min, d2(i, j));
        double z = 0.0;
        std::vector<double> w(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          w[j] = std::exp(-beta * (d2(i, j) - d2_min));
          z += w[j];
        }
        double h_log2 = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i || w[j] == 0.0) continue;
          const double p = w[j] / z;
          h_log2 -= p * std::log2(p);
        }
        const double perp = std::exp2(h_log2);
        const double rel = std::abs(perp - aff.target_perplexity) / aff.target_perplexity;
        worst_rel = std::max(worst_rel, rel);
      }
    }
    ok = ok && worst_sum <= kAffinitySumTol && worst_rel <= kPerplexityRelTol;
    report(4, ok,
           "100 instances, max |sum(p)-1| " + fmt_exp(worst_sum) + ", max perplexity rel err " +
               fmt_exp(worst_rel));
  } catch (const std::exception& e) {
    report(4, false, std::string("exception: ") + e.what());
  }
}

// 5. The analytic KL gradient matches central differences, descent always
//    lowers the objective, and a seed pins the output bitwise.
void criterion_gradient_and_descent() {
  try {
    Rng rng(derive_seed(7, "acceptance:gradient"));
    Matrix x(10, 8);
    for (double& v : x.data) v = rng.gaussian();

    tsne::TsneConfig config;
    auto aff = tsne::compute_affinities(x, config);

    Matrix y(10, 2);
    for (double& v : y.data) v = 0.5 * rng.gaussian();

    auto grad = tsne::kl_gradient(aff.p, y);
    double max_rel = 0.0;
    for (std::size_t i = 0; i < y.rows; ++i) {
      for (std::size_t k = 0; k < 2; ++k) {
        Matrix yp = y;
        Matrix ym = y;
        yp(i, k) += kGradientStep;
        ym(i, k) -= kGradientStep;
        const double fd = (tsne::kl_divergence(aff.p, tsne::low_dim_affinities(yp)) -
                           tsne::kl_divergence(aff.p, tsne::low_dim_affinities(ym))) /
                          (2.0 * kGradientStep);
        const double denom = std::max({std::abs(grad(i, k)), std::abs(fd), 1e-6});
        max_rel = std::max(max_rel, std::abs(grad(i, k) - fd) / denom);
      }
    }
    bool ok = max_rel < kGradientRelTol;

    bool descended = true;
    bool reproducible = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      config.seed = seed;
      auto proj = tsne::fit(x, config);

      // The descent starts from 0.01 * gaussian draws under the fit's own
      // derived seed; replaying that stream recovers the initial layout.
      Rng init(derive_seed(seed, "tsne:init"));
      Matrix y0(x.rows, 2);
      for (std::size_t i = 0; i < x.rows; ++i) {
        y0(i, 0) = 0.01 * init.gaussian();
        y0(i, 1) = 0.01 * init.gaussian();
      }
      const double kl_start = tsne::kl_divergence(aff.p, tsne::low_dim_affinities(y0));
      const double kl_end = tsne::kl_divergence(aff.p, tsne::low_dim_affinities(proj.y));
      descended = descended && kl_end < kl_start;

      auto again = tsne::fit(x, config);
      reproducible = reproducible && again.y.data == proj.y.data;
    }
    config.seed = 1;
    auto base = tsne::fit(x, config);
    config.seed = 99;
    reproducible = reproducible && tsne::fit(x, config).y.data != base.y.data;

    ok = ok && descended && reproducible;
    report(5, ok,
           "max gradient rel err " + fmt_exp(max_rel) + ", final KL " +
               (descended ? "below initial on 5 seeds" : "NOT BELOW INITIAL") + ", seeding " +
               (reproducible ? "bitwise stable" : "UNSTABLE"));
  } catch (const std::exception& e) {
    report(5, false, std::string("exception: ") + e.what());
  }
}

// 6. Two well separated 512-d clusters stay pure after projection.
void criterion_cluster_fidelity() {
  try {
    Rng rng(derive_seed(7, "acceptance:clusters"));
    const std::size_t per_cluster = 20;
    const double sigma = 0.05;
    const double separation = 10.0 * sigma * std::sqrt(512.0);
    Matrix x(2 * per_cluster, 512);
    for (std::size_t i = 0; i < x.rows; ++i) {
      for (std::size_t k = 0; k < 512; ++k) x(i, k) = sigma * rng.gaussian();
      if (i >= per_cluster) x(i, 0) += separation;
    }

    tsne::TsneConfig config;
    config.seed = 11;
    auto proj = tsne::fit(x, config);

    double c0[2] = {0.0, 0.0};
    double c1[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < per_cluster; ++i) {
      c0[0] += proj.y(i, 0);
      c0[1] += proj.y(i, 1);
      c1[0] += proj.y(per_cluster + i, 0);
      c1[1] += proj.y(per_cluster + i, 1);
    }
    for (double* c : {c0, c1}) {
      c[0] /= double(per_cluster);
      c[1] /= double(per_cluster);
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < x.rows; ++i) {
      const double d0 = std::hypot(proj.y(i, 0) - c0[0], proj.y(i, 1) - c0[1]);
      const double d1 = std::hypot(proj.y(i, 0) - c1[0], proj.y(i, 1) - c1[1]);
      if ((d0 < d1) == (i < per_cluster)) ++correct;
    }
    const double purity = double(correct) / double(x.rows);
    report(6, purity >= kPurityFloor,
           "nearest-centroid purity " + fmt(purity, 3) + " on 20+20 planted clusters");
  } catch (const std::exception& e) {
    report(6, false, std::string("exception: ") + e.what());
  }
}

// 7. KNN equals a from-scratch enumeration and AUC equals the pair statistic.
void criterion_classifier_oracles() {
  try {
    Rng rng(derive_seed(7, "acceptance:knn"));
    bool knn_ok = true;
    const std::size_t kvals[4] = {1, 3, 5, 7};
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = 30;
      const std::size_t dims = 6;
      Matrix train(n, dims);
      Matrix probe(n, dims);
      for (double& v : train.data) v = rng.gaussian();
      for (double& v : probe.data) v = rng.gaussian();
      std::vector<int> y(n);
      y[0] = 0;
      y[1] = 1;
      for (std::size_t i = 2; i < n; ++i) y[i] = int(rng.below(2));

      classify::TrainConfig config;
      config.knn_k = kvals[trial % 4];
      auto model = classify::fit(classify::ModelKind::KNN, train, y, config);
      auto scores = classify::predict_scores(model, probe);
      auto labels = classify::predict_labels(model, probe);

      // Brute-force oracle: z-score by the train columns (population stddev,
      // constant columns untouched), then enumerate every squared distance.
      std::vector<double> mean(dims, 0.0);
      std::vector<double> stddev(dims, 1.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < dims; ++j) mean[j] += train(i, j);
      for (double& m : mean) m /= double(n);
      for (std::size_t j = 0; j < dims; ++j) {
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = train(i, j) - mean[j];
          var += d * d;
        }
        const double s = std::sqrt(var / double(n));
        if (s > 0.0) stddev[j] = s;
      }
      auto zscore = [&](const Matrix& src, std::size_t i, std::size_t j) {
        return (src(i, j) - mean[j]) / stddev[j];
      };
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, std::size_t>> dist(n);
        for (std::size_t t = 0; t < n; ++t) {
          double acc = 0.0;
          for (std::size_t j = 0; j < dims; ++j) {
            const double d = zscore(probe, i, j) - zscore(train, t, j);
            acc += d * d;
          }
          dist[t] = {acc, t};
        }
        std::sort(dist.begin(), dist.end());
        std::size_t hits = 0;
        for (std::size_t t = 0; t < config.knn_k; ++t) hits += std::size_t(y[dist[t].second]);
        const double want_score = double(hits) / double(config.knn_k);
        const int want_label = want_score >= config.threshold ? 1 : 0;
        knn_ok = knn_ok && scores[i] == want_score && labels[i] == want_label;
      }
    }

    Rng arng(derive_seed(7, "acceptance:auc"));
    bool auc_ok = true;
    double max_diff = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 60;
      std::vector<double> scores(n);
      std::vector<int> labels(n);
      labels[0] = 0;
      labels[1] = 1;
      for (std::size_t i = 2; i < n; ++i) labels[i] = int(arng.below(2));
      // Nine score levels force plenty of ties.
      for (double& s : scores) s = double(arng.below(9)) / 8.0;

      const double auc = classify::roc_auc(scores, labels).auc;
      long double pairs = 0.0L;
      long double wins = 0.0L;
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (labels[j] != 0) continue;
          pairs += 1.0L;
          if (scores[i] > scores[j])
            wins += 1.0L;
          else if (scores[i] == scores[j])
            wins += 0.5L;
        }
      }
      const double mann_whitney = double(wins / pairs);
      max_diff = std::max(max_diff, std::abs(auc - mann_whitney));
    }
    auc_ok = auc_ok && max_diff <= kAucTol;

    std::vector<double> separated = {0.9, 0.8, 0.7, 0.2, 0.1};
    std::vector<int> sep_labels = {1, 1, 1, 0, 0};
    const double perfect = classify::roc_auc(separated, sep_labels).auc;
    std::vector<double> flat(10, 0.5);
    std::vector<int> flat_labels = {0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
    const double uniform = classify::roc_auc(flat, flat_labels).auc;
    auc_ok = auc_ok && perfect == 1.0 && uniform == 0.5;

    report(7, knn_ok && auc_ok,
           std::string("knn ") + (knn_ok ? "matches" : "DIVERGES FROM") +
               " brute force on 300 probes, max |auc-mann-whitney| " + fmt_exp(max_diff) +
               ", separated auc " + fmt(perfect, 1) + ", flat auc " + fmt(uniform, 1));
  } catch (const std::exception& e) {
    report(7, false, std::string("exception: ") + e.what());
  }
}

// 8. Centroid distances match a mean-then-norm oracle and horizon truncation
//    obeys its identities.
void criterion_feature_math() {
  try {
    Rng rng(derive_seed(7, "acceptance:features"));
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t m = 1 + rng.below(40);
      std::vector<feat::PointXY> pts(m);
      for (auto& p : pts) {
        p[0] = 40.0 * rng.uniform01() - 20.0;
        p[1] = 40.0 * rng.uniform01() - 20.0;
      }
      const double got = feat::centroid_distance(pts);
      long double sx = 0.0L;
      long double sy = 0.0L;
      for (const auto& p : pts) {
        sx += p[0];
        sy += p[1];
      }
      const long double mx = sx / (long double)(m);
      const long double my = sy / (long double)(m);
      const double want = double(std::sqrt(mx * mx + my * my));
      worst = std::max(worst, std::abs(got - want));
    }
    ok = ok && worst <= kCentroidTol;

    const bool unit_point = feat::centroid_distance({{3.0, 4.0}}) == 5.0;
    ok = ok && unit_point;

    const auto& bins = feat::bin_labels();
    bool identities = true;
    for (int trial = 0; trial < 100; ++trial) {
      feat::FeatureVector fv;
      for (std::size_t j = 0; j < feat::kNumBins; ++j) {
        fv.distances[j] = 30.0 * rng.uniform01();
        fv.present[j] = rng.below(2) == 1;
      }
      fv.label = int(rng.below(2));
      if (rng.below(2) == 1) fv.duration_s = std::int64_t(rng.below(60));

      auto id = feat::truncate_to_window(fv, 40);
      identities = identities && id.distances == fv.distances && id.present == fv.present &&
                   id.label == fv.label && id.duration_s == fv.duration_s;

      const int a = bins[rng.below(bins.size())];
      const int b = bins[rng.below(bins.size())];
      auto nested = feat::truncate_to_window(feat::truncate_to_window(fv, a), b);
      auto direct = feat::truncate_to_window(fv, std::min(a, b));
      identities = identities && nested.distances == direct.distances &&
                   nested.present == direct.present;
    }
    ok = ok && identities;

    report(8, ok,
           "max centroid err " + fmt_exp(worst) + ", (3,4) -> " +
               fmt(feat::centroid_distance({{3.0, 4.0}}), 1) + ", truncation identities " +
               (identities ? "hold" : "BROKEN"));
  } catch (const std::exception& e) {
    report(8, false, std::string("exception: ") + e.what());
  }
}

// 9. The two documented log lines parse field for field, and normalization is
//    idempotent with a clean output alphabet under fuzzing.
void criterion_ingestion() {
  try {
    auto r1 = ingest::parse_line("17:52:25.246 [RLC ] Info DRB1 Tx SDU");
    const bool line1 = r1 && r1->timestamp_ms == 64'345'246 && r1->layer == "RLC" &&
                       r1->level == ingest::Level::Info && !r1->subframe && !r1->channel &&
                       r1->content == "DRB1 Tx SDU";

    auto r2 = ingest::parse_line("17:52:26.094 [PHY1] Info [05788] PDSCH: l_crb=1, harq=0, ...");
    const bool line2 = r2 && r2->timestamp_ms == 64'346'094 && r2->layer == "PHY1" &&
                       r2->level == ingest::Level::Info && r2->subframe && *r2->subframe == 5788 &&
                       r2->channel && *r2->channel == "PDSCH" &&
                       r2->content == "l_crb=1, harq=0, ...";

    // Alphanumeric tokens joined by single spaces, or nothing at all.
    auto clean = [](const std::string& s) {
      if (s.empty()) return true;
      if (s.front() == ' ' || s.back() == ' ') return false;
      for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        const bool alnum = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
                           (c >= 'A' && c <= 'Z');
        if (!alnum && c != ' ') return false;
        if (c == ' ' && s[i - 1] == ' ') return false;
      }
      return true;
    };

    Rng rng(derive_seed(7, "acceptance:normalize"));
    int bad = 0;
    for (int i = 0; i < 10'000; ++i) {
      std::string line(rng.below(121), '\0');
      for (char& c : line) c = char(rng.below(256));
      const std::string once = ingest::normalize_content(line);
      if (ingest::normalize_content(once) != once || !clean(once)) ++bad;
    }

    report(9, line1 && line2 && bad == 0,
           std::string("pinned lines ") + (line1 && line2 ? "parse exactly" : "MISPARSE") +
               ", fuzz violations " + std::to_string(bad) + "/10000");
  } catch (const std::exception& e) {
    report(9, false, std::string("exception: ") + e.what());
  }
}

// 10. Keyword labeling reproduces the generator manifest exactly, and the
//     three canonical cases (hit, no keyword, keyword after timeout) hold.
void criterion_labeling(const Paths& paths) {
  try {
    auto manifest = truth::read_manifest((paths.corpus / "labels.csv").string());
    int disagreements = 0;
    for (const auto& row : manifest) {
      auto doc = ingest::parse_file((paths.corpus / row.source_path).string());
      auto outcome = truth::label_outcome(doc, truth::kDefaultKeyword, truth::kDefaultTimeoutS);
      if (outcome.label != row.outcome.label ||
          (outcome.label == 1 && outcome.duration_s != row.outcome.duration_s))
        ++disagreements;
    }

    auto hit = truth::label_outcome(
        ingest::parse_text("00:00:00.000 [RRC ] Info connection attempt begins\n"
                           "00:00:12.400 [RRC ] Info Received rrcConnectionSetupComplete\n",
                           "hit.log"),
        truth::kDefaultKeyword);
    auto miss = truth::label_outcome(
        ingest::parse_text("00:00:00.000 [RRC ] Info connection attempt begins\n"
                           "00:00:30.000 [RRC ] Info still waiting\n",
                           "miss.log"),
        truth::kDefaultKeyword);
    auto late = truth::label_outcome(
        ingest::parse_text("00:00:00.000 [RRC ] Info connection attempt begins\n"
                           "00:11:40.000 [RRC ] Info Received rrcConnectionSetupComplete\n",
                           "late.log"),
        truth::kDefaultKeyword, 600);
    const bool cases = hit.label == 1 && hit.duration_s && *hit.duration_s == 12 &&
                       miss.label == 0 && !miss.duration_s && late.label == 0;

    report(10, disagreements == 0 && cases,
           std::to_string(manifest.size()) + " manifest rows, " +
               std::to_string(disagreements) + " disagreements; hit/miss/timeout cases " +
               (cases ? "hold" : "BROKEN"));
  } catch (const std::exception& e) {
    report(10, false, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main() {
  Paths paths;
  const fs::path root = fs::temp_directory_path() / "loglens_acceptance";
  std::error_code ec;
  fs::remove_all(root, ec);
  paths.corpus = root / "corpus";
  paths.run = root / "run";
  paths.ctrl_corpus = root / "control-corpus";
  paths.ctrl_run = root / "control-run";

  criterion_accuracy(paths);
  criterion_horizon_shape(paths);
  criterion_negative_control(paths);
  criterion_affinities();
  criterion_gradient_and_descent();
  criterion_cluster_fidelity();
  criterion_classifier_oracles();
  criterion_feature_math();
  criterion_ingestion();
  criterion_labeling(paths);

  if (g_failures > 0) std::printf("%d of 10 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
