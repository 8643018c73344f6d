// Copyright 2026 The iconforge Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Multi-modal summary of an infographic: text tags predicted from the mean
// word embedding of its OCR words, and for every predicted tag the icon
// proposal the icon classifier considers most likely to belong to it.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "iconforge/bbox.hpp"
#include "iconforge/errors.hpp"
#include "iconforge/imaging.hpp"
#include "iconforge/jsonl.hpp"
#include "iconforge/rng.hpp"

namespace iconforge::summarize {

inline constexpr std::size_t kDefaultTagCount = 391;
inline constexpr int kDefaultEmbeddingDim = 300;

class TagVocabulary {
 public:
  TagVocabulary() = default;
  explicit TagVocabulary(std::vector<std::string> tags) : tags_(std::move(tags)) {
    for (std::size_t i = 0; i < tags_.size(); ++i) {
      if (!index_.emplace(tags_[i], i).second) throw ValidationError("duplicate tag '" + tags_[i] + "'");
    }
  }

  std::size_t size() const noexcept { return tags_.size(); }
  const std::string& operator[](std::size_t i) const { return tags_.at(i); }
  const std::vector<std::string>& tags() const noexcept { return tags_; }

  std::size_t index_of(const std::string& tag) const {
    auto it = index_.find(tag);
    if (it == index_.end()) throw ValidationError("tag '" + tag + "' is not in the vocabulary");
    return it->second;
  }
  bool contains(const std::string& tag) const { return index_.count(tag) != 0; }

 private:
  std::vector<std::string> tags_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Lower-cases and removes ASCII punctuation.
inline std::string normalize_token(std::string_view word) {
  std::string out;
  for (unsigned char c : word) {
    if (std::ispunct(c) || std::isspace(c)) continue;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

/// Splits on whitespace and normalizes; empty tokens are dropped.
inline std::vector<std::string> tokenize(std::span<const std::string> words) {
  std::vector<std::string> out;
  for (const auto& w : words) {
    std::istringstream is(w);
    std::string piece;
    while (is >> piece) {
      auto t = normalize_token(piece);
      if (!t.empty()) out.push_back(std::move(t));
    }
  }
  return out;
}

class EmbeddingTable {
 public:
  explicit EmbeddingTable(int dimension = kDefaultEmbeddingDim) : dim_(dimension) {
    if (dimension < 1) throw ValidationError("embedding dimension must be >= 1");
  }

  int dimension() const noexcept { return dim_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// First entry wins when two words fold to the same key.
  void add(std::string_view word, std::vector<double> vec) {
    if (static_cast<int>(vec.size()) != dim_)
      throw ValidationError("embedding for '" + std::string(word) + "' has " + std::to_string(vec.size()) +
                            " components, expected " + std::to_string(dim_));
    entries_.emplace(normalize_token(word), std::move(vec));
  }

  const std::vector<double>* find(std::string_view word) const {
    auto it = entries_.find(normalize_token(word));
    return it == entries_.end() ? nullptr : &it->second;
  }

 private:
  int dim_;
  std::unordered_map<std::string, std::vector<double>> entries_;
};

/// Text format, one line per word: `word v1 ... vD`. D is taken from the
/// first line unless `dimension` is given.
inline EmbeddingTable load_embeddings(const std::filesystem::path& path, int dimension = 0) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::string line;
  std::size_t lineno = 0;
  std::unique_ptr<EmbeddingTable> table;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream is(line);
    std::string word;
    if (!(is >> word)) continue;
    std::vector<double> v;
    double x;
    while (is >> x) v.push_back(x);
    if (!is.eof()) throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": non-numeric component");
    if (!table) table = std::make_unique<EmbeddingTable>(dimension > 0 ? dimension : static_cast<int>(v.size()));
    try {
      table->add(word, std::move(v));
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!table) throw ValidationError(path.string() + ": no embeddings");
  return std::move(*table);
}

struct MeanEmbedding {
  std::vector<double> vector;
  std::size_t found = 0;
  std::size_t oov = 0;
};

/// Arithmetic mean of the vectors of all in-vocabulary tokens (duplicates
/// count every time they occur).
inline MeanEmbedding mean_embed(std::span<const std::string> words, const EmbeddingTable& table) {
  MeanEmbedding r{std::vector<double>(static_cast<std::size_t>(table.dimension()), 0.0), 0, 0};
  for (const auto& tok : tokenize(words)) {
    const auto* v = table.find(tok);
    if (!v) {
      ++r.oov;
      continue;
    }
    for (std::size_t i = 0; i < v->size(); ++i) r.vector[i] += (*v)[i];
    ++r.found;
  }
  if (r.found == 0)
    throw ValidationError("no in-vocabulary words (" + std::to_string(r.oov) + " out-of-vocabulary)");
  for (auto& x : r.vector) x /= static_cast<double>(r.found);
  return r;
}

// ---------------------------------------------------------------------------
// Tag predictor: x -> relu(W1^T x + b1) -> sigmoid(W2^T h + b2)

struct TagPredictor {
  int input_dim = 0;
  int hidden = 0;
  TagVocabulary vocabulary;
  std::vector<double> w1;  // input_dim x hidden, row-major
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // hidden x tags, row-major
  std::vector<double> b2;  // tags

  std::size_t tag_count() const noexcept { return vocabulary.size(); }

  static TagPredictor zeros(int input_dim, int hidden, TagVocabulary vocab) {
    if (input_dim < 1 || hidden < 1 || vocab.size() == 0) throw ValidationError("tag predictor dimensions must be >= 1");
    TagPredictor m;
    m.input_dim = input_dim;
    m.hidden = hidden;
    const std::size_t t = vocab.size();
    m.vocabulary = std::move(vocab);
    m.w1.assign(static_cast<std::size_t>(input_dim) * hidden, 0.0);
    m.b1.assign(static_cast<std::size_t>(hidden), 0.0);
    m.w2.assign(static_cast<std::size_t>(hidden) * t, 0.0);
    m.b2.assign(t, 0.0);
    return m;
  }

  void validate() const {
    const std::size_t t = tag_count();
    if (w1.size() != static_cast<std::size_t>(input_dim) * hidden || b1.size() != static_cast<std::size_t>(hidden) ||
        w2.size() != static_cast<std::size_t>(hidden) * t || b2.size() != t)
      throw ValidationError("tag predictor parameter shapes are inconsistent");
    for (const auto* v : {&w1, &b1, &w2, &b2})
      for (double x : *v)
        if (!std::isfinite(x)) throw ValidationError("tag predictor has non-finite weights");
  }
};

struct ForwardPass {
  std::vector<double> pre_hidden;
  std::vector<double> hidden;
  std::vector<double> logits;
};

inline ForwardPass forward(const TagPredictor& m, std::span<const double> x) {
  if (static_cast<int>(x.size()) != m.input_dim)
    throw ValidationError("feature has " + std::to_string(x.size()) + " components, model expects " +
                          std::to_string(m.input_dim));
  const std::size_t H = static_cast<std::size_t>(m.hidden), T = m.tag_count();
  ForwardPass f{m.b1, std::vector<double>(H), m.b2};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double* row = m.w1.data() + i * H;
    for (std::size_t j = 0; j < H; ++j) f.pre_hidden[j] += row[j] * xi;
  }
  for (std::size_t j = 0; j < H; ++j) {
    f.hidden[j] = std::max(0.0, f.pre_hidden[j]);
    if (f.hidden[j] == 0.0) continue;
    const double* row = m.w2.data() + j * T;
    for (std::size_t t = 0; t < T; ++t) f.logits[t] += row[t] * f.hidden[j];
  }
  return f;
}

inline double sigmoid(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

inline std::vector<double> tag_scores(const TagPredictor& m, std::span<const double> x) {
  auto f = forward(m, x);
  for (auto& z : f.logits) z = sigmoid(z);
  return f.logits;
}

struct TagScore {
  std::string tag;
  std::size_t index = 0;
  double score = 0.0;
};

/// Indices of the k largest values; ties go to the lower index.
inline std::vector<std::size_t> top_k_indices(std::span<const double> values, std::size_t k) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  order.resize(std::min(k, order.size()));
  return order;
}

inline std::vector<TagScore> predict_tags(std::span<const double> feature, const TagPredictor& m, std::size_t k) {
  for (double v : feature)
    if (!std::isfinite(v)) throw ValidationError("predict_tags: feature is not finite");
  const auto scores = tag_scores(m, feature);
  std::vector<TagScore> out;
  for (std::size_t i : top_k_indices(scores, k)) out.push_back({m.vocabulary[i], i, scores[i]});
  return out;
}

// ---------------------------------------------------------------------------
// Training: mean per-tag binary cross-entropy, mini-batch SGD.

struct TrainExample {
  std::vector<double> feature;
  std::vector<double> target;  // multi-hot
};

struct TrainParams {
  double lr = 0.1;
  int epochs = 50;
  int batch_size = 32;
  int hidden = 256;
  std::uint64_t seed = 0;
  long max_steps = 0;  // 0 = no cap
};

struct Gradients {
  std::vector<double> w1, b1, w2, b2;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// BCE with logits, numerically stable.
inline double bce_with_logit(double z, double y) { return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::fabs(z))); }

/// Mean BCE over the selected examples and all tags, with its gradient.
inline std::pair<double, Gradients> loss_and_gradient(const TagPredictor& m, std::span<const TrainExample> data,
                                                      std::span<const std::size_t> batch) {
  const std::size_t D = static_cast<std::size_t>(m.input_dim), H = static_cast<std::size_t>(m.hidden),
                    T = m.tag_count();
  Gradients g{std::vector<double>(m.w1.size(), 0.0), std::vector<double>(H, 0.0),
              std::vector<double>(m.w2.size(), 0.0), std::vector<double>(T, 0.0)};
  const double scale = 1.0 / (static_cast<double>(batch.size()) * static_cast<double>(T));
  double loss = 0.0;
  std::vector<double> dz(T), dh(H);
  for (std::size_t b : batch) {
    const auto& ex = data[b];
    const auto f = forward(m, ex.feature);
    for (std::size_t t = 0; t < T; ++t) {
      loss += bce_with_logit(f.logits[t], ex.target[t]);
      dz[t] = (sigmoid(f.logits[t]) - ex.target[t]) * scale;
      g.b2[t] += dz[t];
    }
    std::fill(dh.begin(), dh.end(), 0.0);
    for (std::size_t j = 0; j < H; ++j) {
      const double* w2row = m.w2.data() + j * T;
      double* g2row = g.w2.data() + j * T;
      double acc = 0.0;
      for (std::size_t t = 0; t < T; ++t) {
        g2row[t] += f.hidden[j] * dz[t];
        acc += w2row[t] * dz[t];
      }
      dh[j] = f.pre_hidden[j] > 0.0 ? acc : 0.0;
      g.b1[j] += dh[j];
    }
    for (std::size_t i = 0; i < D; ++i) {
      const double xi = ex.feature[i];
      if (xi == 0.0) continue;
      double* g1row = g.w1.data() + i * H;
      for (std::size_t j = 0; j < H; ++j) g1row[j] += xi * dh[j];
    }
  }
  return {loss * scale, std::move(g)};
}

inline double dataset_loss(const TagPredictor& m, std::span<const TrainExample> data) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return loss_and_gradient(m, data, all).first;
}

/// Glorot-uniform weights, zero biases, drawn from `seed`.
inline TagPredictor init_tag_predictor(int input_dim, int hidden, TagVocabulary vocab, std::uint64_t seed) {
  auto m = TagPredictor::zeros(input_dim, hidden, std::move(vocab));
  Rng rng(seed);
  const double l1 = std::sqrt(6.0 / (input_dim + hidden));
  const double l2 = std::sqrt(6.0 / (hidden + static_cast<double>(m.tag_count())));
  for (auto& w : m.w1) w = rng.uniform(-l1, l1);
  for (auto& w : m.w2) w = rng.uniform(-l2, l2);
  return m;
}

struct TrainResult {
  TagPredictor model;
  double final_loss = 0.0;
  long steps = 0;
};

inline TrainResult train_tag_predictor(std::span<const TrainExample> data, const TagVocabulary& vocab,
                                       const TrainParams& p) {
  if (data.empty()) throw ValidationError("train: dataset is empty");
  if (p.batch_size < 1 || p.epochs < 0 || p.hidden < 1 || !(p.lr >= 0.0))
    throw ValidationError("train: invalid hyperparameters");
  const std::size_t D = data.front().feature.size();
  for (const auto& ex : data) {
    if (ex.feature.size() != D) throw ValidationError("train: features have inconsistent dimensions");
    for (double x : ex.feature)
      if (!std::isfinite(x)) throw ValidationError("train: features must be finite");
    if (ex.target.size() != vocab.size()) throw ValidationError("train: target length does not match vocabulary");
    for (double y : ex.target)
      if (y != 0.0 && y != 1.0) throw ValidationError("train: targets must be 0 or 1");
  }
  TrainResult r{init_tag_predictor(static_cast<int>(D), p.hidden, vocab, p.seed), 0.0, 0};
  Rng rng(Rng::mix(p.seed ^ 0x5eedULL));
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t bs = static_cast<std::size_t>(p.batch_size);
  for (int epoch = 0; epoch < p.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += bs) {
      if (p.max_steps > 0 && r.steps >= p.max_steps) break;
      const std::span<const std::size_t> batch(order.data() + start, std::min(bs, order.size() - start));
      auto [loss, g] = loss_and_gradient(r.model, data, batch);
      if (!std::isfinite(loss))
        throw TrainingError("train: non-finite loss at epoch " + std::to_string(epoch) + ", step " +
                            std::to_string(r.steps));
      auto step = [&](std::vector<double>& w, const std::vector<double>& gw) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= p.lr * gw[i];
      };
      step(r.model.w1, g.w1);
      step(r.model.b1, g.b1);
      step(r.model.w2, g.w2);
      step(r.model.b2, g.b2);
      ++r.steps;
    }
  }
  r.final_loss = dataset_loss(r.model, data);
  if (!std::isfinite(r.final_loss)) throw TrainingError("train: final loss is not finite");
  return r;
}

inline json to_json(const TagPredictor& m) {
  return json{{"schema_version", kSchemaVersion},
              {"input_dim", m.input_dim},
              {"hidden", m.hidden},
              {"tags", m.vocabulary.tags()},
              {"w1", m.w1},
              {"b1", m.b1},
              {"w2", m.w2},
              {"b2", m.b2}};
}

inline TagPredictor tag_predictor_from_json(const json& j) {
  TagPredictor m;
  m.input_dim = require<int>(j, "input_dim");
  m.hidden = require<int>(j, "hidden");
  m.vocabulary = TagVocabulary(require<std::vector<std::string>>(j, "tags"));
  m.w1 = require<std::vector<double>>(j, "w1");
  m.b1 = require<std::vector<double>>(j, "b1");
  m.w2 = require<std::vector<double>>(j, "w2");
  m.b2 = require<std::vector<double>>(j, "b2");
  m.validate();
  return m;
}

// ---------------------------------------------------------------------------
// Icon classification backends

class IconClassifier {
 public:
  virtual ~IconClassifier() = default;
  /// Probability vector over the vocabulary for one proposal crop.
  virtual std::vector<double> classify(const RasterImage& crop, const std::string& proposal_id) const = 0;
};

inline void check_probabilities(std::span<const double> p, std::size_t expected) {
  if (p.size() != expected)
    throw ValidationError("probability vector has " + std::to_string(p.size()) + " entries, expected " +
                          std::to_string(expected));
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError("probabilities must be nonnegative");
    sum += v;
  }
  if (std::fabs(sum - 1.0) > 1e-6) throw ValidationError("probabilities sum to " + std::to_string(sum) + ", not 1");
}

/// Probabilities produced by an external classifier, keyed by proposal id.
class FileIconClassifier : public IconClassifier {
 public:
  FileIconClassifier(std::unordered_map<std::string, std::vector<double>> probs, std::size_t tag_count)
      : probs_(std::move(probs)) {
    for (const auto& [id, p] : probs_) check_probabilities(p, tag_count);
  }

  /// JSONL {proposal_id, probs:[...]}.
  static FileIconClassifier load(const std::filesystem::path& path, std::size_t tag_count) {
    std::unordered_map<std::string, std::vector<double>> probs;
    for_each_jsonl(path, [&](const json& rec, std::size_t) {
      auto p = require<std::vector<double>>(rec, "probs");
      check_probabilities(p, tag_count);
      probs[require<std::string>(rec, "proposal_id")] = std::move(p);
    });
    return FileIconClassifier(std::move(probs), tag_count);
  }

  std::vector<double> classify(const RasterImage&, const std::string& proposal_id) const override {
    auto it = probs_.find(proposal_id);
    if (it == probs_.end()) throw ValidationError("no classifier output for proposal '" + proposal_id + "'");
    return it->second;
  }

 private:
  std::unordered_map<std::string, std::vector<double>> probs_;
};

inline std::vector<double> color_histogram(const RasterImage& img) {
  std::vector<double> h(64, 0.0);
  double n = 0.0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (img.alpha(x, y) == 0) continue;
      const int r = img.at(x, y, 0) >> 6;
      const int g = img.at(x, y, img.channels() >= 3 ? 1 : 0) >> 6;
      const int b = img.at(x, y, img.channels() >= 3 ? 2 : 0) >> 6;
      h[static_cast<std::size_t>(r * 16 + g * 4 + b)] += 1.0;
      n += 1.0;
    }
  }
  if (n > 0)
    for (auto& v : h) v /= n;
  return h;
}

inline double l1_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::fabs(a[i] - b[i]);
  return d;
}

/// Nearest exemplar per tag by 4x4x4 RGB histogram L1 distance; softmax of
/// the negated per-tag distances. Tags without exemplars get probability 0.
class HistogramIconClassifier : public IconClassifier {
 public:
  struct Exemplar {
    std::string tag;
    RasterImage image;
  };

  HistogramIconClassifier(std::span<const Exemplar> pool, const TagVocabulary& vocab) : tag_count_(vocab.size()) {
    if (pool.empty()) throw ValidationError("baseline icon classifier: exemplar pool is empty");
    for (const auto& e : pool) exemplars_.push_back({vocab.index_of(e.tag), color_histogram(e.image)});
  }

  std::vector<double> classify(const RasterImage& crop, const std::string&) const override {
    if (crop.empty()) throw ValidationError("classify_icon: empty crop");
    const auto h = color_histogram(crop);
    std::vector<double> best(tag_count_, std::numeric_limits<double>::infinity());
    for (const auto& [tag, eh] : exemplars_) best[tag] = std::min(best[tag], l1_distance(h, eh));
    const double dmin = *std::min_element(best.begin(), best.end());
    std::vector<double> p(tag_count_, 0.0);
    double sum = 0.0;
    for (std::size_t t = 0; t < tag_count_; ++t) {
      if (std::isinf(best[t])) continue;
      p[t] = std::exp(-(best[t] - dmin));
      sum += p[t];
    }
    for (auto& v : p) v /= sum;
    return p;
  }

 private:
  std::size_t tag_count_;
  std::vector<std::pair<std::size_t, std::vector<double>>> exemplars_;
};

// ---------------------------------------------------------------------------
// Visual hashtags

struct ClassifiedProposal {
  std::string id;
  BBox box;
  double score = 0.0;
  std::vector<double> class_probs;
};

struct Hashtag {
  std::string tag;
  std::size_t tag_index = 0;
  std::size_t proposal = 0;  // index into the proposal list
  std::string proposal_id;
  BBox box;
  double class_prob = 0.0;
};

/// For each tag, the proposal with the highest class probability; ties go to
/// the higher detection score, then the earlier proposal.
inline std::vector<Hashtag> select_hashtags(std::span<const TagScore> tags,
                                            std::span<const ClassifiedProposal> proposals) {
  std::vector<Hashtag> out;
  if (proposals.empty()) return out;
  for (const auto& t : tags) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < proposals.size(); ++i) {
      const double pi = proposals[i].class_probs.at(t.index), pb = proposals[best].class_probs.at(t.index);
      if (pi > pb || (pi == pb && proposals[i].score > proposals[best].score)) best = i;
    }
    out.push_back({t.tag, t.index, best, proposals[best].id, proposals[best].box,
                   proposals[best].class_probs[t.index]});
  }
  return out;
}

struct Summary {
  std::string image_id;
  std::vector<TagScore> tags;
  std::vector<Hashtag> hashtags;
  std::vector<std::string> warnings;
};

struct ProposalInput {
  std::string id;
  BBox box;
  double score = 0.0;
};

struct SummaryModels {
  const EmbeddingTable* embeddings = nullptr;
  const TagPredictor* tag_model = nullptr;
  const IconClassifier* icon_classifier = nullptr;
  std::size_t top_k = 3;
};

/// Integer crop of `box` clipped to the image; nullopt when nothing remains.
inline std::optional<RasterImage> crop_box(const RasterImage& img, const BBox& box) {
  const int x0 = std::max(0, static_cast<int>(std::floor(box.x)));
  const int y0 = std::max(0, static_cast<int>(std::floor(box.y)));
  const int x1 = std::min(img.width(), static_cast<int>(std::ceil(box.right())));
  const int y1 = std::min(img.height(), static_cast<int>(std::ceil(box.bottom())));
  if (x1 <= x0 || y1 <= y0) return std::nullopt;
  return crop(img, x0, y0, x1 - x0, y1 - y0);
}

inline Summary summarize(const std::string& image_id, const RasterImage& image, std::span<const std::string> words,
                         std::span<const ProposalInput> proposals, const SummaryModels& models) {
  if (!models.embeddings || !models.tag_model || !models.icon_classifier)
    throw ValidationError("summarize: missing model");
  Summary s{image_id, {}, {}, {}};
  MeanEmbedding feature;
  try {
    feature = mean_embed(words, *models.embeddings);
  } catch (const ValidationError& e) {
    s.warnings.push_back(std::string("no tags predicted: ") + e.what());
    return s;
  }
  s.tags = predict_tags(feature.vector, *models.tag_model, models.top_k);
  if (proposals.empty()) {
    s.warnings.push_back("no icon proposals; no visual hashtags");
    return s;
  }
  const std::size_t T = models.tag_model->tag_count();
  std::vector<ClassifiedProposal> classified;
  for (const auto& p : proposals) {
    auto c = crop_box(image, p.box);
    if (!c) {
      s.warnings.push_back("proposal '" + p.id + "' lies outside the image; skipped");
      continue;
    }
    auto probs = models.icon_classifier->classify(*c, p.id);
    check_probabilities(probs, T);
    classified.push_back({p.id, p.box, p.score, std::move(probs)});
  }
  s.hashtags = select_hashtags(s.tags, classified);
  return s;
}

inline json to_json(const Summary& s) {
  json tags = json::array();
  for (const auto& t : s.tags) tags.push_back({{"tag", t.tag}, {"score", t.score}});
  json hashtags = json::array();
  for (const auto& h : s.hashtags)
    hashtags.push_back({{"tag", h.tag},
                        {"proposal_id", h.proposal_id},
                        {"x", h.box.x},
                        {"y", h.box.y},
                        {"w", h.box.w},
                        {"h", h.box.h},
                        {"class_prob", h.class_prob}});
  return json{{"schema_version", kSchemaVersion}, {"image_id", s.image_id}, {"tags", std::move(tags)},
              {"hashtags", std::move(hashtags)},    {"warnings", s.warnings}};
}

}  // namespace iconforge::summarize
