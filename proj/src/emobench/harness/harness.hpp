/*
  Copyright 2026 The emobench Authors

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/

#ifndef EMOBENCH_HARNESS_HARNESS_HPP
#define EMOBENCH_HARNESS_HARNESS_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "emobench/core/model.hpp"
#include "emobench/features/features.hpp"

namespace emobench::harness {

enum class StrategyKind { Fine, Whole };
std::string_view to_string(StrategyKind k) noexcept;

struct LabelingStrategy {
  StrategyKind kind = StrategyKind::Fine;
  double window_s = 4.0;
  std::vector<double> fine_shifts_s{-1.0, 0.0, 1.0};
  double whole_step_s = 2.0;

  static LabelingStrategy fine() { return {}; }
  static LabelingStrategy whole() {
    LabelingStrategy s;
    s.kind = StrategyKind::Whole;
    return s;
  }
};

struct Dataset {
  std::vector<Epoch> windows;
  std::size_t skipped = 0;  // out-of-bounds shifts or trials too short
};

/// One window per (annotation, shift); shifts that leave the stimulus are skipped.
Dataset build_fine_dataset(std::span<const Trial> trials, const LabelingStrategy& strategy = LabelingStrategy::fine());

/// Sliding windows over each whole stimulus, all carrying the trial label.
Dataset build_whole_dataset(std::span<const Trial> trials,
                            const LabelingStrategy& strategy = LabelingStrategy::whole());

Dataset build_dataset(std::span<const Trial> trials, const LabelingStrategy& strategy);

/// Majority label of the trial's annotations; ties go to the smaller class index.
Emotion trial_label(const Trial& trial);

using Matrix = Eigen::MatrixXd;  // rows are samples

struct FeatureSelection {
  bool gsr = false;
  bool ecg = false;
  bool ppg = false;

  static FeatureSelection eeg_only() { return {}; }
  static FeatureSelection all() { return {true, true, true}; }
  std::string name() const;  // e.g. "EEG", "EEG+GSR+ECG+PPG"
  bool operator==(const FeatureSelection&) const = default;
};

/// EEG features, then the selected peripherals in the order GSR, ECG, PPG.
std::vector<double> fuse_features(const features::FeatureVector& fv, const FeatureSelection& selection);

/// Same ordering from loose parts; MissingFeature when a selected entry is absent.
std::vector<double> fuse_features(std::span<const double> eeg, const std::vector<std::pair<std::string, double>>& peripheral,
                                  const FeatureSelection& selection);

struct Standardizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;  // 1 where a feature is constant

  static Standardizer fit(const Matrix& x);
  Matrix apply(const Matrix& x) const;
};

struct KnnResult {
  std::vector<Emotion> predictions;
  std::size_t k_used = 0;
  bool clamped = false;
};

KnnResult knn_classify(const Matrix& train, std::span<const Emotion> labels, const Matrix& test, std::size_t k = 5);

struct MlpConfig {
  std::vector<int> hidden{128, 64, 32};
  double dropout = 0.3;
  double learning_rate = 1e-3;
  int epochs = 100;
  int batch_size = 32;
  std::uint64_t seed = 1;
  int max_restarts = 3;
};

class Mlp {
 public:
  struct Layer {
    Eigen::MatrixXf w;  // out x in
    Eigen::VectorXf b;
  };

  static Mlp train(const Matrix& x, std::span<const Emotion> labels, const MlpConfig& config);

  std::vector<Emotion> predict(const Matrix& x) const;
  Eigen::MatrixXf probabilities(const Matrix& x) const;  // samples x classes
  const std::vector<Layer>& layers() const noexcept { return layers_; }
  int restarts() const noexcept { return restarts_; }
  double final_loss() const noexcept { return final_loss_; }

 private:
  std::vector<Layer> layers_;
  int restarts_ = 0;
  double final_loss_ = 0.0;
};

/// Max relative error between analytic and central-difference gradients of the
/// cross-entropy loss for a randomly initialised network without dropout.
double mlp_gradient_check(std::size_t inputs, const std::vector<int>& hidden, std::size_t samples, std::uint64_t seed);

using Confusion = std::array<std::array<std::size_t, kEmotionCount>, kEmotionCount>;  // [true][pred]

struct Metrics {
  double accuracy = 0.0;  // percent
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Confusion confusion{};
};

/// Macro averages over classes that occur in the truth or the predictions.
Metrics compute_metrics(std::span<const Emotion> truth, std::span<const Emotion> predicted);
Metrics metrics_from_confusion(const Confusion& c);

struct FoldResult {
  std::string held_out;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  Metrics metrics;
  double train_mean_checksum = 0.0;  // sum of fold standardizer means; leakage audit
};

struct Summary {
  double mean = 0.0;
  double sd = 0.0;  // sample SD across folds
};

struct CellResult {
  StrategyKind strategy = StrategyKind::Fine;
  std::string classifier;
  FeatureSelection selection;
  std::vector<FoldResult> folds;
  Summary accuracy, precision, recall, f1;
  Confusion pooled{};
  std::array<double, kEmotionCount> per_emotion_accuracy{};
};

struct Improvement {
  std::string classifier;
  FeatureSelection selection;
  double accuracy = 0.0;  // fine minus whole, points
  double f1 = 0.0;
};

struct BenchmarkConfig {
  std::vector<LabelingStrategy> strategies{LabelingStrategy::fine(), LabelingStrategy::whole()};
  std::vector<std::string> classifiers{"knn", "mlp"};
  std::vector<FeatureSelection> selections{FeatureSelection::eeg_only(), FeatureSelection::all()};
  std::size_t knn_k = 5;
  MlpConfig mlp;
  std::uint64_t seed = 1;
};

struct DatasetInfo {
  StrategyKind strategy = StrategyKind::Fine;
  std::size_t windows = 0;
  std::size_t skipped = 0;
  std::array<std::size_t, kEmotionCount> per_class{};
};

struct BenchmarkReport {
  std::uint64_t seed = 0;
  std::vector<std::string> subjects;
  std::uint32_t source_crc32 = 0;
  std::vector<DatasetInfo> datasets;
  std::vector<CellResult> cells;
  std::vector<Improvement> improvements;

  const CellResult* find(StrategyKind s, const std::string& classifier, const FeatureSelection& sel) const;
};

/// Features of every window, in order.
std::vector<features::FeatureVector> extract_all(const Dataset& dataset);

/// CRC-32 over every sample of every recording, in trial order.
std::uint32_t source_checksum(std::span<const Trial> trials);

/// LOSO over the subjects present in `rows`; a failed fold aborts the run.
CellResult run_cell(const std::vector<features::FeatureVector>& rows, StrategyKind strategy,
                    const std::string& classifier, const FeatureSelection& selection, const BenchmarkConfig& config);

BenchmarkReport run_benchmark(std::span<const Trial> trials, const BenchmarkConfig& config);

}  // namespace emobench::harness

#endif
