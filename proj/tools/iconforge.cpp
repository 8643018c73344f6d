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

// iconforge: command-line front end.
//
// Exit codes: 0 success, 1 validation / usage error, 2 I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "iconforge/iconforge.hpp"

namespace fs = std::filesystem;
using namespace iconforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

void require_exists(const fs::path& p) {
  if (!fs::exists(p)) throw IoError(p.string(), "no such file or directory");
}

config::Settings load_settings(const std::string& path) {
  if (path.empty()) return {};
  require_exists(path);
  return config::load(path);
}

void warn(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string corpus, icons, params, out, baseline = "none";
  std::size_t n = 0;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

int run_gen(const GenArgs& a) {
  require_exists(a.corpus);
  require_exists(a.icons);
  auto settings = load_settings(a.params);
  if (a.seed) settings.synthgen.rng_seed = *a.seed;
  const auto mode = synthgen::parse_baseline_mode(a.baseline);
  settings.synthgen.validate();
  std::vector<synthgen::CorpusImage> corpus;
  if (mode != synthgen::BaselineMode::blank_background || a.n > 0) corpus = synthgen::load_corpus(a.corpus);
  const auto icons = synthgen::load_icon_manifest(a.icons);
  const auto pool = synthgen::pool_for_mode(icons, mode);
  const auto summary = synthgen::generate_dataset(corpus, pool, settings.synthgen, a.n, a.out, mode,
                                                  a.threads ? a.threads : default_thread_count());
  std::cout << "wrote " << summary.samples << " windows with " << summary.boxes << " icons to " << a.out << "\n";
  return kExitOk;
}

struct TileArgs {
  std::string image, out, params, id;
};

int run_tile(const TileArgs& a) {
  require_exists(a.image);
  const auto settings = load_settings(a.params);
  const auto img = read_image(a.image);
  const std::string id = a.id.empty() ? fs::path(a.image).stem().string() : a.id;
  const auto idx = tiler::write_tiles(img, id, fs::absolute(a.image).string(), a.out, settings.tiler);
  std::cout << "wrote " << idx.tiles.size() << " tiles to " << a.out << "\n";
  return kExitOk;
}

struct ProposeArgs {
  std::string tiles, out, params;
};

int run_propose(const ProposeArgs& a) {
  require_exists(a.tiles);
  const auto settings = load_settings(a.params);
  const auto idx = tiler::load_tile_index(a.tiles);
  const auto base = fs::path(a.tiles).parent_path();
  proposals::BaselineParams bp;
  bp.canny = settings.synthgen.entropy.canny;
  std::vector<json> records;
  for (const auto& t : idx.tiles) {
    auto it = idx.tile_paths.find(t.id);
    if (it == idx.tile_paths.end()) throw ValidationError("tile index has no image path for tile " + t.id);
    const auto img = read_image(base / it->second);
    for (const auto& d : proposals::baseline_propose(img, bp)) records.push_back(proposals::detection_record(d, t.id));
  }
  write_jsonl(a.out, records);
  std::cout << "wrote " << records.size() << " detections to " << a.out << "\n";
  return kExitOk;
}

struct AggregateArgs {
  std::string dets, tiles, out, params;
  std::optional<double> threshold;
  std::size_t class_count = 0;
};

int run_aggregate(const AggregateArgs& a) {
  require_exists(a.dets);
  require_exists(a.tiles);
  auto settings = load_settings(a.params);
  if (a.threshold) settings.aggregate.score_threshold = *a.threshold;
  const auto idx = tiler::load_tile_index(a.tiles);
  const auto dets = proposals::ingest_detections(a.dets, idx, a.class_count);
  const auto final_dets = aggregate::aggregate(dets, settings.aggregate);
  std::vector<json> records;
  for (std::size_t i = 0; i < final_dets.size(); ++i) {
    const auto& d = final_dets[i];
    json j{{"schema_version", kSchemaVersion},
           {"image_id", idx.image_id},
           {"proposal_id", idx.image_id + "#" + std::to_string(i)},
           {"x", d.box.x},
           {"y", d.box.y},
           {"w", d.box.w},
           {"h", d.box.h},
           {"score", d.score}};
    if (d.class_probs) j["class_probs"] = *d.class_probs;
    records.push_back(std::move(j));
  }
  write_jsonl(a.out, records);
  std::cout << "kept " << records.size() << " of " << dets.size() << " detections\n";
  return kExitOk;
}

struct EvalArgs {
  std::string pred, gt, mode = "proposals", report, params;
};

std::vector<BBox> boxes_field(const json& rec) {
  std::vector<BBox> out;
  for (const auto& b : require<json>(rec, "boxes")) out.push_back(box_from_json(b));
  return out;
}

int run_eval(const EvalArgs& a) {
  require_exists(a.pred);
  require_exists(a.gt);
  const auto settings = load_settings(a.params);
  json report;
  if (a.mode == "proposals") {
    eval::ImageDetections preds;
    for_each_jsonl(a.pred, [&](const json& rec, std::size_t) {
      preds[require<std::string>(rec, "image_id")].push_back({box_from_json(rec), rec.value("score", 1.0)});
    });
    eval::ImageBoxes gts;
    for_each_jsonl(a.gt, [&](const json& rec, std::size_t) {
      auto& v = gts[require<std::string>(rec, "image_id")];
      for (const auto& b : boxes_field(rec)) v.push_back(b);
    });
    const auto r = eval::evaluate_proposals(preds, gts, settings.eval);
    for (const auto& id : r.unknown_image_ids) warn("prediction for unknown image '" + id + "' ignored");
    for (const auto& id : r.images_without_predictions) warn("no predictions for image '" + id + "'");
    report = eval::to_json(r);
  } else if (a.mode == "hashtags") {
    std::vector<eval::HashtagPrediction> preds;
    for_each_jsonl(a.pred, [&](const json& rec, std::size_t) {
      const auto image = require<std::string>(rec, "image_id");
      if (rec.contains("hashtags")) {  // summarize output
        for (const auto& h : rec["hashtags"]) preds.push_back({image, require<std::string>(h, "tag"), box_from_json(h), {}});
        return;
      }
      eval::HashtagPrediction p{image, require<std::string>(rec, "tag"), box_from_json(rec), {}};
      if (rec.contains("ranked"))
        for (const auto& r : rec["ranked"]) p.ranked.push_back({box_from_json(r), r.value("score", 1.0)});
      preds.push_back(std::move(p));
    });
    eval::PairBoxes gts;
    for_each_jsonl(a.gt, [&](const json& rec, std::size_t) {
      auto& v = gts[{require<std::string>(rec, "image_id"), require<std::string>(rec, "tag")}];
      for (const auto& b : boxes_field(rec)) v.push_back(b);
    });
    const auto r = eval::evaluate_hashtags(preds, gts, settings.eval.iou_match);
    for (const auto& [img, tag] : r.excluded) warn("no ground truth for (" + img + ", " + tag + "); excluded");
    report = eval::to_json(r);
  } else if (a.mode == "consistency") {
    std::map<std::string, eval::AnnotatorSets> sets;
    for_each_jsonl(a.gt, [&](const json& rec, std::size_t) {
      const auto id = require<std::string>(rec, "image_id");
      auto& s = sets[id];
      s.image_id = id;
      for (const auto& b : boxes_field(rec)) s.reference.push_back(b);
    });
    std::map<std::string, std::map<std::string, std::vector<BBox>>> by_annotator;
    for_each_jsonl(a.pred, [&](const json& rec, std::size_t) {
      const auto id = require<std::string>(rec, "image_id");
      if (!sets.count(id)) throw ValidationError("annotations for unknown image '" + id + "'");
      auto& v = by_annotator[id][require<std::string>(rec, "annotator")];
      for (const auto& b : boxes_field(rec)) v.push_back(b);
    });
    std::vector<eval::AnnotatorSets> images;
    for (auto& [id, s] : sets) {
      for (auto& [ann, boxes] : by_annotator[id]) s.annotators.push_back(boxes);
      if (s.annotators.empty()) warn("image '" + id + "' has no additional annotators");
      images.push_back(std::move(s));
    }
    report = eval::to_json(eval::consistency(images, settings.eval));
  } else {
    throw ValidationError("unknown eval mode '" + a.mode + "'");
  }
  write_json(a.report, report);
  for (const char* k : {"precision", "recall", "f_beta", "map", "top1_precision"})
    if (report.contains(k)) std::printf("%s %.2f\n", k, report[k].get<double>());
  return kExitOk;
}

summarize::TagVocabulary load_tags(const fs::path& p) {
  require_exists(p);
  std::ifstream in(p);
  std::vector<std::string> tags;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) tags.push_back(line);
  }
  return summarize::TagVocabulary(std::move(tags));
}

struct TrainArgs {
  std::string data, embeddings, tags, out, params;
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs;
};

int run_train(const TrainArgs& a) {
  require_exists(a.data);
  require_exists(a.embeddings);
  auto settings = load_settings(a.params);
  if (a.seed) settings.train.seed = *a.seed;
  if (a.epochs) settings.train.epochs = *a.epochs;
  const auto vocab = load_tags(a.tags);
  const auto table = summarize::load_embeddings(a.embeddings);
  std::vector<summarize::TrainExample> data;
  for_each_jsonl(a.data, [&](const json& rec, std::size_t lineno) {
    const auto words = require<std::vector<std::string>>(rec, "words");
    summarize::TrainExample ex;
    try {
      ex.feature = summarize::mean_embed(words, table).vector;
    } catch (const ValidationError& e) {
      warn("line " + std::to_string(lineno) + " skipped: " + e.what());
      return;
    }
    ex.target.assign(vocab.size(), 0.0);
    for (const auto& t : require<std::vector<std::string>>(rec, "tags")) ex.target[vocab.index_of(t)] = 1.0;
    data.push_back(std::move(ex));
  });
  const auto r = summarize::train_tag_predictor(data, vocab, settings.train);
  write_json(a.out, summarize::to_json(r.model));
  std::printf("trained on %zu examples, %ld steps, final loss %.6f\n", data.size(), r.steps, r.final_loss);
  return kExitOk;
}

struct SummarizeArgs {
  std::string image, words, proposals, tag_model, backend = "baseline", overlay, embeddings, icon_probs, icons, out,
      params;
  std::optional<std::size_t> top_k;
};

int run_summarize(const SummarizeArgs& a) {
  for (const auto& p : {a.image, a.words, a.proposals, a.tag_model, a.embeddings}) require_exists(p);
  auto settings = load_settings(a.params);
  if (a.top_k) settings.top_k = *a.top_k;
  const auto image = read_image(a.image);
  const auto words_rec = read_json(a.words);
  const auto image_id = words_rec.value("image_id", fs::path(a.image).stem().string());
  const auto words = require<std::vector<std::string>>(words_rec, "words");
  const auto model = summarize::tag_predictor_from_json(read_json(a.tag_model));
  const auto table = summarize::load_embeddings(a.embeddings);
  if (table.dimension() != model.input_dim)
    throw ValidationError("embedding dimension " + std::to_string(table.dimension()) + " does not match tag model input " +
                          std::to_string(model.input_dim));

  std::vector<summarize::ProposalInput> props;
  for_each_jsonl(a.proposals, [&](const json& rec, std::size_t lineno) {
    if (rec.contains("image_id") && rec["image_id"].get<std::string>() != image_id) return;
    props.push_back({rec.value("proposal_id", image_id + "#" + std::to_string(lineno)), box_from_json(rec),
                     rec.value("score", 1.0)});
  });

  std::unique_ptr<summarize::IconClassifier> classifier;
  if (a.backend == "file") {
    if (a.icon_probs.empty()) throw ValidationError("--icon-backend file requires --icon-probs");
    require_exists(a.icon_probs);
    classifier = std::make_unique<summarize::FileIconClassifier>(
        summarize::FileIconClassifier::load(a.icon_probs, model.tag_count()));
  } else if (a.backend == "baseline") {
    if (a.icons.empty()) throw ValidationError("--icon-backend baseline requires --icons");
    require_exists(a.icons);
    std::vector<summarize::HistogramIconClassifier::Exemplar> pool;
    for (auto& i : synthgen::load_icon_manifest(a.icons)) pool.push_back({i.tag, std::move(i.image)});
    classifier = std::make_unique<summarize::HistogramIconClassifier>(pool, model.vocabulary);
  } else {
    throw ValidationError("unknown icon backend '" + a.backend + "'");
  }

  const summarize::SummaryModels models{&table, &model, classifier.get(), settings.top_k};
  const auto s = summarize::summarize(image_id, image, words, props, models);
  for (const auto& w : s.warnings) warn(w);
  const std::string line = summarize::to_json(s).dump() + "\n";
  if (a.out.empty()) std::cout << line;
  else write_text(a.out, line);

  if (!a.overlay.empty()) {
    std::vector<render::OverlayBox> boxes;
    for (const auto& p : props) boxes.push_back({p.box, "", render::kBlue, render::Stroke::dashed, 1});
    std::map<std::string, std::size_t> by_proposal;
    for (const auto& h : s.hashtags) {
      if (auto it = by_proposal.find(h.proposal_id); it != by_proposal.end()) {
        boxes[it->second].label += " #" + h.tag;
        continue;
      }
      by_proposal[h.proposal_id] = boxes.size();
      boxes.push_back({h.box, "#" + h.tag, render::kBlue, render::Stroke::solid, 3});
    }
    const auto ov = render::render_overlay(image, boxes);
    for (const auto& w : ov.warnings) warn(w);
    write_image(a.overlay, ov.image);
  }
  return kExitOk;
}

struct ReportArgs {
  std::vector<std::string> rows;
  std::string out;
};

int run_report(const ReportArgs& a) {
  std::vector<report::Row> rows;
  for (const auto& row : a.rows) {
    const auto eq = row.find('=');
    if (eq == std::string::npos) throw ValidationError("--row expects LABEL=REPORT.json, got '" + row + "'");
    std::string label = row.substr(0, eq), group;
    if (const auto bar = label.find('|'); bar != std::string::npos) {
      group = label.substr(0, bar);
      label = label.substr(bar + 1);
    }
    const fs::path path = row.substr(eq + 1);
    require_exists(path);
    rows.push_back({group, label, read_json(path)});
  }
  const auto ext = detail::lower_extension(a.out);
  const auto text = report::render(rows, ext == ".html" || ext == ".htm" ? report::Format::html : report::Format::markdown);
  if (a.out.empty()) std::cout << text;
  else write_text(a.out, text);
  return kExitOk;
}

struct ToyArgs {
  std::string out;
  std::size_t images = 20;
  std::uint64_t seed = 0;
  int dim = 300;
};

int run_toy(const ToyArgs& a) {
  toy::write_toy_dataset(a.out, a.images, a.seed, 3, a.dim);
  std::cout << "wrote toy dataset to " << a.out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"iconforge: synthetic icon data, multi-scale tiling, proposal aggregation, evaluation, summaries"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic training dataset");
  gen_cmd->add_option("--corpus", gen.corpus, "directory of infographic images")->required();
  gen_cmd->add_option("--icons", gen.icons, "icon manifest (JSONL)")->required();
  gen_cmd->add_option("--params", gen.params, "settings file (TOML)");
  gen_cmd->add_option("--n", gen.n, "number of windows")->required();
  gen_cmd->add_option("--out", gen.out, "output directory")->required();
  gen_cmd->add_option("--baseline", gen.baseline, "none|random_locations|nontransparent_icons|blank_background");
  gen_cmd->add_option("--seed", gen.seed, "random seed (overrides settings)");
  gen_cmd->add_option("--threads", gen.threads, "worker threads (default: all cores)");

  TileArgs tile;
  auto* tile_cmd = app.add_subcommand("tile", "cut an image into the 1+4+9 window pyramid");
  tile_cmd->add_option("--image", tile.image)->required();
  tile_cmd->add_option("--out", tile.out)->required();
  tile_cmd->add_option("--id", tile.id, "image id (default: file stem)");
  tile_cmd->add_option("--params", tile.params);

  ProposeArgs propose;
  auto* propose_cmd = app.add_subcommand("propose-baseline", "edge/component proposals for every tile");
  propose_cmd->add_option("--tiles", propose.tiles, "tile index (tiles.json)")->required();
  propose_cmd->add_option("--out", propose.out)->required();
  propose_cmd->add_option("--params", propose.params);

  AggregateArgs agg;
  auto* agg_cmd = app.add_subcommand("aggregate", "threshold + NMS + containment merge across scales");
  agg_cmd->add_option("--dets", agg.dets, "per-tile detections (JSONL)")->required();
  agg_cmd->add_option("--tiles", agg.tiles, "tile index (tiles.json)")->required();
  agg_cmd->add_option("--out", agg.out)->required();
  agg_cmd->add_option("--threshold", agg.threshold, "score threshold (overrides settings)");
  agg_cmd->add_option("--class-count", agg.class_count, "required class_probs length (0 = any)");
  agg_cmd->add_option("--params", agg.params);

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "score predictions against ground truth");
  eval_cmd->add_option("--pred", ev.pred)->required();
  eval_cmd->add_option("--gt", ev.gt)->required();
  eval_cmd->add_option("--mode", ev.mode, "proposals|hashtags|consistency");
  eval_cmd->add_option("--report", ev.report, "output report (JSON)")->required();
  eval_cmd->add_option("--params", ev.params);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train-tags", "train the text-tag predictor");
  train_cmd->add_option("--data", train.data, "JSONL {words, tags}")->required();
  train_cmd->add_option("--embeddings", train.embeddings)->required();
  train_cmd->add_option("--tags", train.tags, "tag vocabulary, one per line")->required();
  train_cmd->add_option("--out", train.out)->required();
  train_cmd->add_option("--seed", train.seed);
  train_cmd->add_option("--epochs", train.epochs);
  train_cmd->add_option("--params", train.params);

  SummarizeArgs sum;
  auto* sum_cmd = app.add_subcommand("summarize", "text tags + visual hashtags for one infographic");
  sum_cmd->add_option("--image", sum.image)->required();
  sum_cmd->add_option("--words", sum.words, "OCR words JSON {image_id, words}")->required();
  sum_cmd->add_option("--proposals", sum.proposals, "final proposals (JSONL)")->required();
  sum_cmd->add_option("--tag-model", sum.tag_model)->required();
  sum_cmd->add_option("--embeddings", sum.embeddings)->required();
  sum_cmd->add_option("--icon-backend", sum.backend, "file|baseline");
  sum_cmd->add_option("--icon-probs", sum.icon_probs, "classifier output JSONL (file backend)");
  sum_cmd->add_option("--icons", sum.icons, "icon manifest (baseline backend)");
  sum_cmd->add_option("--top-k", sum.top_k);
  sum_cmd->add_option("--overlay", sum.overlay, "write an overlay PNG");
  sum_cmd->add_option("--out", sum.out, "summary JSON (default: stdout)");
  sum_cmd->add_option("--params", sum.params);

  ReportArgs rep;
  auto* rep_cmd = app.add_subcommand("report", "tabulate eval reports (Markdown or HTML by extension)");
  rep_cmd->add_option("--row", rep.rows, "[GROUP|]LABEL=REPORT.json, repeatable")->required();
  rep_cmd->add_option("--out", rep.out);

  ToyArgs toy_args;
  auto* toy_cmd = app.add_subcommand("toy", "write a procedural toy corpus");
  toy_cmd->add_option("--out", toy_args.out)->required();
  toy_cmd->add_option("--images", toy_args.images);
  toy_cmd->add_option("--seed", toy_args.seed);
  toy_cmd->add_option("--dim", toy_args.dim, "embedding dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*tile_cmd) return run_tile(tile);
    if (*propose_cmd) return run_propose(propose);
    if (*agg_cmd) return run_aggregate(agg);
    if (*eval_cmd) return run_eval(ev);
    if (*train_cmd) return run_train(train);
    if (*sum_cmd) return run_summarize(sum);
    if (*rep_cmd) return run_report(rep);
    if (*toy_cmd) return run_toy(toy_args);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
