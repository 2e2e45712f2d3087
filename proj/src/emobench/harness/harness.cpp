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

#include "emobench/harness/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <zlib.h>

#include "emobench/core/error.hpp"
#include "emobench/core/stats.hpp"

namespace emobench::harness {

std::string_view to_string(StrategyKind k) noexcept { return k == StrategyKind::Fine ? "fine" : "whole"; }

Dataset build_fine_dataset(std::span<const Trial> trials, const LabelingStrategy& strategy) {
  if (!(strategy.window_s > 0.0)) fail(Errc::InvalidArgument, "window length must be positive");
  Dataset d;
  for (const auto& t : trials)
    for (const auto& a : t.annotations)
      for (double shift : strategy.fine_shifts_s) {
        try {
          d.windows.push_back(extract_epoch(t, a, {strategy.window_s / 2.0, shift, {}}));
        } catch (const Error& e) {
          if (e.code() != Errc::WindowOutOfBounds) throw;
          ++d.skipped;
        }
      }
  return d;
}

Emotion trial_label(const Trial& trial) {
  if (trial.annotations.empty()) fail(Errc::UnlabeledTrial, trial.trial_id + " has no annotations");
  std::array<std::size_t, kEmotionCount> votes{};
  for (const auto& a : trial.annotations) ++votes[class_index(a.label)];
  const auto best = std::max_element(votes.begin(), votes.end());  // first maximum = smallest index
  return kAllEmotions[static_cast<std::size_t>(best - votes.begin())];
}

Dataset build_whole_dataset(std::span<const Trial> trials, const LabelingStrategy& strategy) {
  if (!(strategy.window_s > 0.0 && strategy.whole_step_s > 0.0))
    fail(Errc::InvalidArgument, "window and step must be positive");
  Dataset d;
  for (const auto& t : trials) {
    const Emotion label = trial_label(t);
    const double dur = t.stimulus_duration_s();
    if (dur + 1e-9 < strategy.window_s) {
      ++d.skipped;
      continue;
    }
    const auto count = static_cast<std::size_t>(std::floor((dur - strategy.window_s) / strategy.whole_step_s + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k) {
      const double start = static_cast<double>(k) * strategy.whole_step_s;
      EmotionAnnotation a{start + strategy.window_s / 2.0, label, Intensity::Medium, t.session_id, t.participant_id};
      d.windows.push_back(extract_window(t, a, {start, start + strategy.window_s}));
    }
  }
  return d;
}

Dataset build_dataset(std::span<const Trial> trials, const LabelingStrategy& s) {
  return s.kind == StrategyKind::Fine ? build_fine_dataset(trials, s) : build_whole_dataset(trials, s);
}

std::string FeatureSelection::name() const {
  std::string n = "EEG";
  if (gsr) n += "+GSR";
  if (ecg) n += "+ECG";
  if (ppg) n += "+PPG";
  return n;
}

std::vector<double> fuse_features(const features::FeatureVector& fv, const FeatureSelection& sel) {
  std::vector<double> v = fv.eeg_de;
  if (sel.gsr) v.push_back(fv.gsr_skewness);
  if (sel.ecg) v.push_back(fv.ecg_rmssd);
  if (sel.ppg) v.push_back(fv.ppg_delta_pwa);
  return v;
}

std::vector<double> fuse_features(std::span<const double> eeg, const std::vector<std::pair<std::string, double>>& peripheral,
                                  const FeatureSelection& sel) {
  std::vector<double> v(eeg.begin(), eeg.end());
  auto take = [&](const char* key) {
    const auto it = std::find_if(peripheral.begin(), peripheral.end(), [&](const auto& p) { return p.first == key; });
    if (it == peripheral.end()) fail(Errc::MissingFeature, std::string("selected feature '") + key + "' is absent");
    v.push_back(it->second);
  };
  if (sel.gsr) take("gsr_skewness");
  if (sel.ecg) take("ecg_rmssd");
  if (sel.ppg) take("ppg_delta_pwa");
  return v;
}

Standardizer Standardizer::fit(const Matrix& x) {
  if (x.rows() == 0) fail(Errc::InsufficientData, "cannot standardise an empty training set");
  Standardizer s;
  s.mean = x.colwise().mean();
  s.scale.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double var = x.rows() > 1 ? (x.col(j).array() - s.mean(j)).square().sum() / static_cast<double>(x.rows() - 1)
                                    : 0.0;
    s.scale(j) = var > 1e-24 ? std::sqrt(var) : 1.0;
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& x) const {
  if (x.cols() != mean.size()) fail(Errc::DimensionMismatch, "feature count differs from the fitted standardiser");
  return (x.rowwise() - mean).array().rowwise() / scale.array();
}

KnnResult knn_classify(const Matrix& train, std::span<const Emotion> labels, const Matrix& test, std::size_t k) {
  if (train.rows() == 0) fail(Errc::InsufficientData, "kNN needs training samples");
  if (static_cast<std::size_t>(train.rows()) != labels.size()) fail(Errc::DimensionMismatch, "labels do not match rows");
  if (train.cols() != test.cols())
    fail(Errc::DimensionMismatch, "train has " + std::to_string(train.cols()) + " features, test " +
                                      std::to_string(test.cols()));
  if (k == 0) fail(Errc::InvalidArgument, "k must be positive");
  KnnResult r;
  r.k_used = std::min<std::size_t>(k, static_cast<std::size_t>(train.rows()));
  r.clamped = r.k_used < k;
  std::vector<std::size_t> idx(static_cast<std::size_t>(train.rows()));
  std::vector<double> dist(idx.size());
  for (Eigen::Index i = 0; i < test.rows(); ++i) {
    const Eigen::RowVectorXd q = test.row(i);
    for (std::size_t j = 0; j < idx.size(); ++j)
      dist[j] = (train.row(static_cast<Eigen::Index>(j)) - q).squaredNorm();
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(r.k_used), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                        if (dist[a] != dist[b]) return dist[a] < dist[b];
                        if (labels[a] != labels[b]) return class_index(labels[a]) < class_index(labels[b]);
                        return a < b;
                      });
    std::array<std::size_t, kEmotionCount> votes{};
    for (std::size_t n = 0; n < r.k_used; ++n) ++votes[class_index(labels[idx[n]])];
    const auto best = std::max_element(votes.begin(), votes.end());
    r.predictions.push_back(kAllEmotions[static_cast<std::size_t>(best - votes.begin())]);
  }
  return r;
}

namespace {

template <class T>
struct Net {
  using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
  std::vector<Mat> w;
  std::vector<Vec> b;

  void init(std::size_t inputs, const std::vector<int>& hidden, std::mt19937_64& rng) {
    std::vector<int> sizes{static_cast<int>(inputs)};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(static_cast<int>(kEmotionCount));
    w.clear();
    b.clear();
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      const double lim = std::sqrt(6.0 / sizes[l]);
      std::uniform_real_distribution<double> u(-lim, lim);
      Mat m(sizes[l + 1], sizes[l]);
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<T>(u(rng));
      w.push_back(std::move(m));
      b.push_back(Vec::Zero(sizes[l + 1]));
    }
  }

  // x: features x batch. Returns mean cross-entropy; fills gradients when requested.
  // masks (one per hidden layer, same shape as the activation) apply inverted dropout.
  double loss(const Mat& x, const std::vector<int>& y, const std::vector<Mat>* masks, std::vector<Mat>* gw,
              std::vector<Vec>* gb) const {
    const std::size_t L = w.size();
    std::vector<Mat> acts{x};
    std::vector<Mat> pre;
    for (std::size_t l = 0; l < L; ++l) {
      Mat z = (w[l] * acts.back()).colwise() + b[l];
      if (l + 1 < L) {
        pre.push_back(z);
        Mat a = z.cwiseMax(T(0));
        if (masks) a = a.cwiseProduct((*masks)[l]);
        acts.push_back(std::move(a));
      } else {
        acts.push_back(std::move(z));
      }
    }
    Mat& logits = acts.back();
    const auto n = logits.cols();
    Mat p(logits.rows(), n);
    double total = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const T m = logits.col(j).maxCoeff();
      p.col(j) = (logits.col(j).array() - m).exp();
      const T s = p.col(j).sum();
      p.col(j) /= s;
      total += -(static_cast<double>(logits(y[j], j) - m) - std::log(static_cast<double>(s)));
    }
    const double mean_loss = total / static_cast<double>(n);
    if (!gw) return mean_loss;

    gw->resize(L);
    gb->resize(L);
    Mat d = p;
    for (Eigen::Index j = 0; j < n; ++j) d(y[j], j) -= T(1);
    d /= static_cast<T>(n);
    for (std::size_t l = L; l-- > 0;) {
      (*gw)[l] = d * acts[l].transpose();
      (*gb)[l] = d.rowwise().sum();
      if (l == 0) break;
      Mat da = w[l].transpose() * d;
      Mat relu = (pre[l - 1].array() > T(0)).template cast<T>();
      da = da.cwiseProduct(relu);
      if (masks) da = da.cwiseProduct((*masks)[l - 1]);
      d = std::move(da);
    }
    return mean_loss;
  }
};

std::vector<int> class_ids(std::span<const Emotion> labels) {
  std::vector<int> y;
  y.reserve(labels.size());
  for (auto e : labels) y.push_back(static_cast<int>(class_index(e)));
  return y;
}

}  // namespace

Mlp Mlp::train(const Matrix& xd, std::span<const Emotion> labels, const MlpConfig& cfg) {
  if (xd.rows() == 0) fail(Errc::InsufficientData, "MLP needs training samples");
  if (static_cast<std::size_t>(xd.rows()) != labels.size()) fail(Errc::DimensionMismatch, "labels do not match rows");
  if (cfg.epochs <= 0 || cfg.batch_size <= 0 || !(cfg.learning_rate > 0.0) || !(cfg.dropout >= 0.0 && cfg.dropout < 1.0))
    fail(Errc::InvalidArgument, "invalid MLP configuration");
  using Mat = Net<float>::Mat;
  const Mat x = xd.transpose().cast<float>();
  const auto y = class_ids(labels);
  const auto n = static_cast<std::size_t>(x.cols());

  double lr = cfg.learning_rate;
  for (int attempt = 0; attempt <= cfg.max_restarts; ++attempt) {
    std::mt19937_64 rng(cfg.seed);
    Net<float> net;
    net.init(static_cast<std::size_t>(x.rows()), cfg.hidden, rng);
    const std::size_t L = net.w.size();
    std::vector<Mat> mw(L), vw(L);
    std::vector<Net<float>::Vec> mb(L), vb(L);
    for (std::size_t l = 0; l < L; ++l) {
      mw[l] = Mat::Zero(net.w[l].rows(), net.w[l].cols());
      vw[l] = mw[l];
      mb[l] = Net<float>::Vec::Zero(net.b[l].size());
      vb[l] = mb[l];
    }
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    long step = 0;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::bernoulli_distribution keep(1.0 - cfg.dropout);
    const float inv_keep = static_cast<float>(1.0 / (1.0 - cfg.dropout));
    bool diverged = false;
    double epoch_loss = 0.0;
    std::vector<Mat> gw;
    std::vector<Net<float>::Vec> gb;
    for (int epoch = 0; epoch < cfg.epochs && !diverged; ++epoch) {
      std::shuffle(order.begin(), order.end(), rng);
      epoch_loss = 0.0;
      for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(cfg.batch_size)) {
        const std::size_t end = std::min(n, start + static_cast<std::size_t>(cfg.batch_size));
        const auto bs = static_cast<Eigen::Index>(end - start);
        Mat xb(x.rows(), bs);
        std::vector<int> yb(static_cast<std::size_t>(bs));
        for (Eigen::Index j = 0; j < bs; ++j) {
          xb.col(j) = x.col(static_cast<Eigen::Index>(order[start + static_cast<std::size_t>(j)]));
          yb[static_cast<std::size_t>(j)] = y[order[start + static_cast<std::size_t>(j)]];
        }
        std::vector<Mat> masks;
        for (std::size_t l = 0; l + 1 < L; ++l) {
          Mat m(net.w[l].rows(), bs);
          for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = keep(rng) ? inv_keep : 0.0f;
          masks.push_back(std::move(m));
        }
        const double loss = net.loss(xb, yb, cfg.dropout > 0.0 ? &masks : nullptr, &gw, &gb);
        if (!std::isfinite(loss)) {
          diverged = true;
          break;
        }
        epoch_loss += loss * static_cast<double>(bs);
        ++step;
        const float c1 = static_cast<float>(1.0 - std::pow(b1, step));
        const float c2 = static_cast<float>(1.0 - std::pow(b2, step));
        const float a = static_cast<float>(lr);
        for (std::size_t l = 0; l < L; ++l) {
          mw[l] = b1 * mw[l] + (1.0f - static_cast<float>(b1)) * gw[l];
          vw[l] = b2 * vw[l] + (1.0f - static_cast<float>(b2)) * gw[l].cwiseProduct(gw[l]);
          net.w[l].array() -= a * (mw[l].array() / c1) / ((vw[l].array() / c2).sqrt() + static_cast<float>(eps));
          mb[l] = b1 * mb[l] + (1.0f - static_cast<float>(b1)) * gb[l];
          vb[l] = b2 * vb[l] + (1.0f - static_cast<float>(b2)) * gb[l].cwiseProduct(gb[l]);
          net.b[l].array() -= a * (mb[l].array() / c1) / ((vb[l].array() / c2).sqrt() + static_cast<float>(eps));
        }
      }
      epoch_loss /= static_cast<double>(n);
      if (!std::isfinite(epoch_loss)) diverged = true;
    }
    if (diverged) {
      lr *= 0.5;
      continue;
    }
    Mlp m;
    for (std::size_t l = 0; l < L; ++l) m.layers_.push_back({std::move(net.w[l]), std::move(net.b[l])});
    m.restarts_ = attempt;
    m.final_loss_ = epoch_loss;
    return m;
  }
  fail(Errc::NonFiniteLoss, "training diverged after " + std::to_string(cfg.max_restarts) + " restarts");
}

Eigen::MatrixXf Mlp::probabilities(const Matrix& xd) const {
  if (layers_.empty()) fail(Errc::InvalidArgument, "untrained network");
  if (xd.cols() != layers_.front().w.cols()) fail(Errc::DimensionMismatch, "feature count differs from the network");
  Eigen::MatrixXf a = xd.transpose().cast<float>();
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::MatrixXf z = (layers_[l].w * a).colwise() + layers_[l].b;
    a = l + 1 < layers_.size() ? Eigen::MatrixXf(z.cwiseMax(0.0f)) : z;
  }
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    a.col(j) = (a.col(j).array() - a.col(j).maxCoeff()).exp();
    a.col(j) /= a.col(j).sum();
  }
  return a.transpose();
}

std::vector<Emotion> Mlp::predict(const Matrix& x) const {
  const auto p = probabilities(x);
  std::vector<Emotion> out;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    Eigen::Index best = 0;
    p.row(i).maxCoeff(&best);
    out.push_back(kAllEmotions[static_cast<std::size_t>(best)]);
  }
  return out;
}

double mlp_gradient_check(std::size_t inputs, const std::vector<int>& hidden, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Net<double> net;
  net.init(inputs, hidden, rng);
  for (auto& b : net.b)
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = std::uniform_real_distribution<double>(-0.1, 0.1)(rng);
  Net<double>::Mat x(static_cast<Eigen::Index>(inputs), static_cast<Eigen::Index>(samples));
  std::normal_distribution<double> nd;
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = nd(rng);
  std::vector<int> y(samples);
  for (std::size_t j = 0; j < samples; ++j) y[j] = static_cast<int>(j % kEmotionCount);

  std::vector<Net<double>::Mat> gw;
  std::vector<Net<double>::Vec> gb;
  net.loss(x, y, nullptr, &gw, &gb);
  const double h = 1e-6;
  double worst = 0.0;
  auto check = [&](double& param, double analytic) {
    const double keep = param;
    param = keep + h;
    const double up = net.loss(x, y, nullptr, nullptr, nullptr);
    param = keep - h;
    const double down = net.loss(x, y, nullptr, nullptr, nullptr);
    param = keep;
    const double numeric = (up - down) / (2.0 * h);
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-7});
    worst = std::max(worst, std::abs(analytic - numeric) / denom);
  };
  for (std::size_t l = 0; l < net.w.size(); ++l) {
    for (Eigen::Index i = 0; i < net.w[l].size(); ++i) check(net.w[l].data()[i], gw[l].data()[i]);
    for (Eigen::Index i = 0; i < net.b[l].size(); ++i) check(net.b[l].data()[i], gb[l].data()[i]);
  }
  return worst;
}

Metrics metrics_from_confusion(const Confusion& c) {
  Metrics m;
  m.confusion = c;
  std::size_t total = 0, correct = 0;
  double p_sum = 0.0, r_sum = 0.0, f_sum = 0.0;
  int classes = 0;
  for (std::size_t k = 0; k < kEmotionCount; ++k) {
    std::size_t row = 0, col = 0;
    for (std::size_t j = 0; j < kEmotionCount; ++j) {
      row += c[k][j];
      col += c[j][k];
    }
    total += row;
    correct += c[k][k];
    if (row == 0 && col == 0) continue;
    const double tp = static_cast<double>(c[k][k]);
    const double p = col ? tp / static_cast<double>(col) : 0.0;
    const double r = row ? tp / static_cast<double>(row) : 0.0;
    p_sum += p;
    r_sum += r;
    f_sum += (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    ++classes;
  }
  if (total == 0) fail(Errc::InsufficientData, "no test samples");
  m.accuracy = 100.0 * static_cast<double>(correct) / static_cast<double>(total);
  m.precision = 100.0 * p_sum / classes;
  m.recall = 100.0 * r_sum / classes;
  m.f1 = 100.0 * f_sum / classes;
  return m;
}

Metrics compute_metrics(std::span<const Emotion> truth, std::span<const Emotion> predicted) {
  if (truth.size() != predicted.size()) fail(Errc::DimensionMismatch, "truth and predictions differ in length");
  Confusion c{};
  for (std::size_t i = 0; i < truth.size(); ++i) ++c[class_index(truth[i])][class_index(predicted[i])];
  return metrics_from_confusion(c);
}

const CellResult* BenchmarkReport::find(StrategyKind s, const std::string& classifier, const FeatureSelection& sel) const {
  for (const auto& c : cells)
    if (c.strategy == s && c.classifier == classifier && c.selection == sel) return &c;
  return nullptr;
}

std::vector<features::FeatureVector> extract_all(const Dataset& dataset) {
  std::vector<features::FeatureVector> rows;
  rows.reserve(dataset.windows.size());
  for (const auto& w : dataset.windows) rows.push_back(features::extract_features(w));
  return rows;
}

std::uint32_t source_checksum(std::span<const Trial> trials) {
  uLong crc = crc32(0L, Z_NULL, 0);
  for (const auto& t : trials)
    for (const auto& r : t.recordings) {
      const auto& s = r.samples();
      crc = crc32(crc, reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(s.size() * sizeof(double)));
    }
  return static_cast<std::uint32_t>(crc);
}

namespace {

Summary summarise(const std::vector<FoldResult>& folds, double Metrics::*field) {
  std::vector<double> v;
  for (const auto& f : folds) v.push_back(f.metrics.*field);
  return {stats::mean(v), stats::sd_sample(v)};
}

std::uint64_t fold_seed(std::uint64_t seed, StrategyKind s, const FeatureSelection& sel, std::size_t fold) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(sel.gsr | sel.ecg << 1 | sel.ppg << 2),
                    static_cast<std::uint32_t>(fold)};
  std::mt19937_64 rng(seq);
  return rng();
}

}  // namespace

CellResult run_cell(const std::vector<features::FeatureVector>& rows, StrategyKind strategy,
                    const std::string& classifier, const FeatureSelection& selection, const BenchmarkConfig& config) {
  if (classifier != "knn" && classifier != "mlp") fail(Errc::InvalidArgument, "unknown classifier '" + classifier + "'");
  std::set<std::string> subject_set;
  for (const auto& r : rows) subject_set.insert(r.participant_id);
  if (subject_set.size() < 2) fail(Errc::TooFewSubjects, "LOSO needs >= 2 subjects");
  const std::vector<std::string> subjects(subject_set.begin(), subject_set.end());

  std::vector<std::vector<double>> fused;
  fused.reserve(rows.size());
  for (const auto& r : rows) fused.push_back(fuse_features(r, selection));
  const auto dim = static_cast<Eigen::Index>(fused.front().size());

  CellResult cell;
  cell.strategy = strategy;
  cell.classifier = classifier;
  cell.selection = selection;
  for (std::size_t f = 0; f < subjects.size(); ++f) {
    std::vector<std::size_t> tr, te;
    for (std::size_t i = 0; i < rows.size(); ++i) (rows[i].participant_id == subjects[f] ? te : tr).push_back(i);
    auto gather = [&](const std::vector<std::size_t>& idx, std::vector<Emotion>& labels) {
      Matrix m(static_cast<Eigen::Index>(idx.size()), dim);
      for (std::size_t i = 0; i < idx.size(); ++i) {
        if (static_cast<Eigen::Index>(fused[idx[i]].size()) != dim) fail(Errc::DimensionMismatch, "ragged features");
        m.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::RowVectorXd>(fused[idx[i]].data(), dim);
        labels.push_back(rows[idx[i]].label);
      }
      return m;
    };
    std::vector<Emotion> ytr, yte;
    const Matrix xtr_raw = gather(tr, ytr);
    const Matrix xte_raw = gather(te, yte);
    const auto scaler = Standardizer::fit(xtr_raw);
    const Matrix xtr = scaler.apply(xtr_raw), xte = scaler.apply(xte_raw);

    std::vector<Emotion> pred;
    if (classifier == "knn") {
      pred = knn_classify(xtr, ytr, xte, config.knn_k).predictions;
    } else {
      auto mc = config.mlp;
      mc.seed = fold_seed(config.seed, strategy, selection, f);
      pred = Mlp::train(xtr, ytr, mc).predict(xte);
    }
    FoldResult fr;
    fr.held_out = subjects[f];
    fr.n_train = tr.size();
    fr.n_test = te.size();
    fr.metrics = compute_metrics(yte, pred);
    fr.train_mean_checksum = scaler.mean.sum();
    for (std::size_t a = 0; a < kEmotionCount; ++a)
      for (std::size_t b = 0; b < kEmotionCount; ++b) cell.pooled[a][b] += fr.metrics.confusion[a][b];
    cell.folds.push_back(std::move(fr));
  }
  cell.accuracy = summarise(cell.folds, &Metrics::accuracy);
  cell.precision = summarise(cell.folds, &Metrics::precision);
  cell.recall = summarise(cell.folds, &Metrics::recall);
  cell.f1 = summarise(cell.folds, &Metrics::f1);
  for (std::size_t k = 0; k < kEmotionCount; ++k) {
    std::size_t row = 0;
    for (auto v : cell.pooled[k]) row += v;
    cell.per_emotion_accuracy[k] = row ? 100.0 * static_cast<double>(cell.pooled[k][k]) / static_cast<double>(row) : 0.0;
  }
  return cell;
}

BenchmarkReport run_benchmark(std::span<const Trial> trials, const BenchmarkConfig& config) {
  BenchmarkReport rep;
  rep.seed = config.seed;
  rep.source_crc32 = source_checksum(trials);
  std::set<std::string> subjects;
  for (const auto& t : trials) subjects.insert(t.participant_id);
  if (subjects.size() < 2) fail(Errc::TooFewSubjects, "benchmark needs >= 2 subjects");
  rep.subjects.assign(subjects.begin(), subjects.end());

  for (const auto& strategy : config.strategies) {
    const auto ds = build_dataset(trials, strategy);
    if (source_checksum(trials) != rep.source_crc32) fail(Errc::ChecksumMismatch, "source recordings changed");
    DatasetInfo info;
    info.strategy = strategy.kind;
    info.windows = ds.windows.size();
    info.skipped = ds.skipped;
    for (const auto& w : ds.windows) ++info.per_class[class_index(w.annotation.label)];
    rep.datasets.push_back(info);
    if (ds.windows.empty()) fail(Errc::InsufficientData, std::string(to_string(strategy.kind)) + " dataset is empty");
    const auto rows = extract_all(ds);
    for (const auto& clf : config.classifiers)
      for (const auto& sel : config.selections) rep.cells.push_back(run_cell(rows, strategy.kind, clf, sel, config));
  }
  for (const auto& clf : config.classifiers)
    for (const auto& sel : config.selections) {
      const auto* f = rep.find(StrategyKind::Fine, clf, sel);
      const auto* w = rep.find(StrategyKind::Whole, clf, sel);
      if (f && w) rep.improvements.push_back({clf, sel, f->accuracy.mean - w->accuracy.mean, f->f1.mean - w->f1.mean});
    }
  return rep;
}

}  // namespace emobench::harness
