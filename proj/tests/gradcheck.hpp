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

// Central finite-difference check of the tag-predictor gradient.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "iconforge/rng.hpp"
#include "iconforge/summarize.hpp"

namespace gradcheck {

using namespace iconforge;
using namespace iconforge::summarize;

struct Fixture {
  TagPredictor model;
  std::vector<TrainExample> data;
};

/// 5 samples, D = 6, H = 8, T = 4, random weights and multi-hot targets.
inline Fixture make_fixture(std::uint64_t seed, int samples = 5, int dim = 6, int hidden = 8) {
  TagVocabulary vocab({"a", "b", "c", "d"});
  Fixture f{init_tag_predictor(dim, hidden, vocab, seed), {}};
  Rng rng(seed + 1);
  for (auto& b : f.model.b1) b = rng.uniform(-0.2, 0.2);
  for (auto& b : f.model.b2) b = rng.uniform(-0.2, 0.2);
  for (int s = 0; s < samples; ++s) {
    TrainExample ex;
    for (int i = 0; i < dim; ++i) ex.feature.push_back(rng.uniform(-1, 1));
    for (std::size_t t = 0; t < vocab.size(); ++t) ex.target.push_back(rng.uniform01() < 0.5 ? 1.0 : 0.0);
    f.data.push_back(std::move(ex));
  }
  return f;
}

struct Result {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::size_t kinks_skipped = 0;  // parameters whose +/- eps probe crosses a ReLU boundary
};

/// Relative error |a - n| / max(|a|, |n|, 1e-8) over every parameter.
inline Result check(const Fixture& f, double eps = 1e-4) {
  std::vector<std::size_t> all(f.data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const auto analytic = loss_and_gradient(f.model, f.data, all).second;
  Result r;
  auto pattern = [&](const TagPredictor& m) {
    std::vector<bool> on;
    for (const auto& ex : f.data)
      for (double z : forward(m, ex.feature).pre_hidden) on.push_back(z > 0);
    return on;
  };
  const auto base = pattern(f.model);
  auto probe = [&](std::vector<double> TagPredictor::*member, const std::vector<double>& grad) {
    for (std::size_t i = 0; i < grad.size(); ++i) {
      TagPredictor plus = f.model, minus = f.model;
      (plus.*member)[i] += eps;
      (minus.*member)[i] -= eps;
      if (pattern(plus) != base || pattern(minus) != base) {
        ++r.kinks_skipped;
        continue;
      }
      const double num = (dataset_loss(plus, f.data) - dataset_loss(minus, f.data)) / (2 * eps);
      const double a = grad[i];
      const double rel = std::fabs(a - num) / std::max({std::fabs(a), std::fabs(num), 1e-8});
      r.max_rel_error = std::max(r.max_rel_error, rel);
      ++r.checked;
    }
  };
  probe(&TagPredictor::w1, analytic.w1);
  probe(&TagPredictor::b1, analytic.b1);
  probe(&TagPredictor::w2, analytic.w2);
  probe(&TagPredictor::b2, analytic.b2);
  return r;
}

/// Trains on one example and returns the final loss and step count.
inline TrainResult memorize(std::uint64_t seed, long max_steps = 2000) {
  TagVocabulary vocab({"a", "b", "c", "d", "e"});
  TrainExample ex{{0.5, -0.3, 0.8, 0.1, -0.9, 0.4}, {1, 0, 0, 1, 0}};
  TrainParams p;
  p.lr = 0.5;
  p.epochs = static_cast<int>(max_steps);
  p.batch_size = 1;
  p.hidden = 8;
  p.seed = seed;
  p.max_steps = max_steps;
  return train_tag_predictor(std::vector<TrainExample>{ex}, vocab, p);
}

}  // namespace gradcheck
