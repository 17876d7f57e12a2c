#include "fds/pipeline/pipeline.hpp"

#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "fds/core/bytes.hpp"
#include "fds/eval/metrics.hpp"
#include "fds/eval/report.hpp"
#include "fds/eval/split.hpp"
#include "fds/lf/lightfield.hpp"
#include "fds/nn/checkpoint.hpp"
#include "fds/synth/dataset.hpp"
#include "fds/synth/generic.hpp"

namespace fds::pipeline {

namespace fs = std::filesystem;
using spoofclf::Mode;

namespace {

// Independent sub-seeds for each stage of a run.
std::uint64_t mix(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

struct SplitData {
  std::vector<synth::ManifestRecord> records;
  std::vector<Image> images;
  std::vector<DepthMap> depths;
};

std::vector<synth::ManifestRecord> read_manifest(const Layout& out) {
  if (!fs::exists(out.manifest())) raise(Errc::DatasetMissing, "no manifest at " + out.manifest().string());
  return synth::parse_manifest(read_text(out.manifest()));
}

SplitData load_split(const PipelineConfig& cfg, const Layout& out, std::string_view tag) {
  SplitData d;
  for (auto& r : read_manifest(out)) {
    if (r.split != tag) continue;
    const auto lf_path = out.data() / r.lf_path;
    const auto depth_path = out.data() / r.depth_path;
    if (!fs::exists(lf_path) || !fs::exists(depth_path))
      raise(Errc::DatasetMissing, "missing sample files for " + r.lf_path);
    auto field = lf::decode_lightfield(read_file(lf_path));
    auto img = lf::center_view(field);
    if (img.h != cfg.ns || img.w != cfg.nt)
      raise(Errc::ConfigInvalid, "dataset images are " + std::to_string(img.h) + "x" + std::to_string(img.w) +
                                     ", config expects " + std::to_string(cfg.ns) + "x" + std::to_string(cfg.nt));
    d.images.push_back(std::move(img));
    d.depths.push_back(decode_depthmap(read_file(depth_path)));
    d.records.push_back(std::move(r));
  }
  if (d.records.empty()) raise(Errc::DatasetMissing, "manifest has no " + std::string(tag) + " samples");
  return d;
}

depthnet::DepthNet load_depthnet(const PipelineConfig& cfg, const Layout& out) {
  if (!fs::exists(out.depthnet())) raise(Errc::CheckpointMissing, "no depth network at " + out.depthnet().string());
  auto dn = depthnet::build_depthnet(depthnet_config(cfg));
  nn::load_checkpoint(dn.net, read_file(out.depthnet()));
  return dn;
}

spoofclf::Classifier load_classifier(const PipelineConfig& cfg, const Layout& out, Mode m) {
  const auto p = out.classifier(m);
  if (!fs::exists(p)) raise(Errc::CheckpointMissing, "no classifier at " + p.string());
  auto clf = spoofclf::build_classifier(classifier_config(cfg, m), 0);
  nn::load_checkpoint(clf.net, read_file(p));
  return clf;
}

std::vector<DepthMap> predict_all(const depthnet::DepthNet& dn, const std::vector<Image>& images) {
  std::vector<DepthMap> maps;
  maps.reserve(images.size());
  for (const auto& img : images) maps.push_back(depthnet::predict_depth(dn, img));
  return maps;
}

double map_mse(const DepthMap& a, const DepthMap& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    const double d = static_cast<double>(a.values()[i]) - b.values()[i];
    s += d * d;
  }
  return s / static_cast<double>(a.values().size());
}

}  // namespace

fs::path Layout::classifier(Mode m) const { return root / ("classifier_" + std::string(mode_name(m)) + ".nnck"); }
fs::path Layout::clf_loss(Mode m) const { return root / ("clf_loss_" + std::string(mode_name(m)) + ".csv"); }
fs::path Layout::metrics(Mode m) const { return root / ("metrics_" + std::string(mode_name(m)) + ".json"); }
fs::path Layout::cmc(Mode m) const { return root / ("cmc_" + std::string(mode_name(m)) + ".csv"); }
fs::path Layout::predictions(Mode m) const { return root / ("predictions_" + std::string(mode_name(m)) + ".csv"); }

std::vector<Mode> modes_of(const PipelineConfig& cfg) {
  if (cfg.clf_mode == "both") return {Mode::TwoClass, Mode::MultiClass};
  return {spoofclf::parse_mode(cfg.clf_mode)};
}

depthnet::DepthNetConfig depthnet_config(const PipelineConfig& cfg) {
  depthnet::DepthNetConfig c;
  c.height = cfg.ns;
  c.width = cfg.nt;
  c.width_scale = cfg.depth_width_scale;
  c.init_seed = mix(cfg.train_seed, 1);
  return c;
}

spoofclf::ClassifierConfig classifier_config(const PipelineConfig& cfg, Mode m) {
  spoofclf::ClassifierConfig c;
  c.mode = m;
  c.height = cfg.ns;
  c.width = cfg.nt;
  c.width_scale = cfg.clf_width_scale;
  c.dense_width = cfg.clf_dense_width;
  return c;
}

void cmd_gen(const PipelineConfig& cfg, std::ostream& log) {
  cfg.validate();
  const Layout out{cfg.out_dir};
  auto ds = synth::make_dataset(cfg.n_subjects, cfg.variants, {cfg.nu, cfg.nv, cfg.ns, cfg.nt}, cfg.master_seed,
                                cfg.noise_level);
  std::vector<int> labels;
  for (const auto& r : ds.manifest) labels.push_back(synth::class_index(r.label));
  const auto split = eval::split_dataset(labels, cfg.split_seed);
  for (auto i : split.train) ds.manifest[i].split = "train";
  for (auto i : split.test) ds.manifest[i].split = "test";

  for (std::size_t i = 0; i < ds.manifest.size(); ++i) {
    write_file(out.data() / ds.manifest[i].lf_path, lf::encode_lightfield(ds.fields[i]));
    write_file(out.data() / ds.manifest[i].depth_path, encode_depthmap(ds.samples[i].depth_gt));
  }
  write_text(out.manifest(), synth::format_manifest(ds.manifest));
  log << "gen: " << ds.manifest.size() << " captures (" << split.train.size() << " train, " << split.test.size()
      << " test) -> " << out.manifest().string() << "\n";
}

void cmd_train_depth(const PipelineConfig& cfg, std::ostream& log) {
  cfg.validate();
  const Layout out{cfg.out_dir};
  const auto train = load_split(cfg, out, "train");
  auto dn = depthnet::build_depthnet(depthnet_config(cfg));

  std::string csv = "stage,epoch,mean_mse\n";
  auto logger = [&](const char* stage) {
    return [&, stage](int epoch, double loss, const nn::Network&) {
      csv += std::string(stage) + "," + std::to_string(epoch + 1) + "," + fmt(loss) + "\n";
      log << "train-depth " << stage << " epoch " << epoch + 1 << " mse " << fmt(loss) << "\n" << std::flush;
    };
  };

  if (cfg.depth_pretrain_epochs > 0) {
    const auto scenes = synth::make_generic_scenes(cfg.depth_pretrain_scenes, cfg.ns, cfg.nt, mix(cfg.train_seed, 2));
    std::vector<depthnet::DepthPair> pairs;
    for (const auto& s : scenes) pairs.push_back({s.image, s.depth});
    depthnet::TrainRecipe r{depthnet::Stage::Pretrain, cfg.depth_pretrain_epochs, static_cast<float>(cfg.depth_lr),
                            cfg.depth_batch, mix(cfg.train_seed, 3), true, "generic"};
    depthnet::train_depthnet(dn, pairs, r, logger("pretrain"));
  }

  std::vector<depthnet::DepthPair> pairs;
  for (std::size_t i = 0; i < train.images.size(); ++i) pairs.push_back({train.images[i], train.depths[i]});
  depthnet::TrainRecipe r{depthnet::Stage::Finetune, cfg.depth_finetune_epochs, static_cast<float>(cfg.depth_lr),
                          cfg.depth_batch, mix(cfg.train_seed, 4), true, "finger"};
  depthnet::train_depthnet(dn, pairs, r, logger("finetune"));

  write_file(out.depthnet(), nn::encode_checkpoint(dn.net));
  write_text(out.depth_loss(), csv);
}

void cmd_train_clf(const PipelineConfig& cfg, std::ostream& log) {
  cfg.validate();
  const Layout out{cfg.out_dir};
  const auto dn = load_depthnet(cfg, out);
  const auto train = load_split(cfg, out, "train");
  const auto maps = predict_all(dn, train.images);

  auto bcfg = classifier_config(cfg, Mode::MultiClass);
  bcfg.classes_override = synth::kGenericShapeCount;
  auto backbone = spoofclf::build_classifier(bcfg, mix(cfg.train_seed, 5));
  std::string bcsv = "stage,epoch,mean_loss\n";
  if (cfg.clf_pretrain_epochs > 0) {
    const auto scenes = synth::make_generic_scenes(cfg.clf_pretrain_scenes, cfg.ns, cfg.nt, mix(cfg.train_seed, 6));
    std::vector<spoofclf::LabeledMap> samples;
    for (const auto& s : scenes) samples.push_back({s.depth, static_cast<int>(s.shape)});
    spoofclf::FitRecipe r{cfg.clf_pretrain_epochs, static_cast<float>(cfg.clf_pretrain_lr), cfg.clf_batch,
                          mix(cfg.train_seed, 7), true};
    const auto losses = spoofclf::pretrain_backbone(backbone, samples, r);
    for (std::size_t e = 0; e < losses.size(); ++e) bcsv += "pretrain," + std::to_string(e + 1) + "," + fmt(losses[e]) + "\n";
    log << "train-clf backbone: final loss " << fmt(losses.back()) << ", generic accuracy "
        << fmt(spoofclf::accuracy(backbone, samples)) << "\n";
  }
  write_file(out.backbone(), nn::encode_checkpoint(backbone.net));
  write_text(out.backbone_loss(), bcsv);

  for (const auto m : modes_of(cfg)) {
    const auto tag = static_cast<std::uint64_t>(m);
    auto clf = spoofclf::transfer_backbone(backbone, classifier_config(cfg, m), mix(cfg.train_seed, 8 + tag));
    std::vector<spoofclf::LabeledMap> samples;
    for (std::size_t i = 0; i < maps.size(); ++i)
      samples.push_back({maps[i], spoofclf::label_of(train.records[i].label, m)});
    const int epochs = m == Mode::TwoClass ? cfg.clf_epochs_two : cfg.clf_epochs_multi;
    spoofclf::FitRecipe r{epochs, static_cast<float>(cfg.clf_lr), cfg.clf_batch, mix(cfg.train_seed, 10 + tag), true};
    std::string csv = "stage,epoch,mean_loss\n";
    spoofclf::finetune(clf, samples, r, [&](int epoch, double loss, const nn::Network&) {
      csv += "finetune," + std::to_string(epoch + 1) + "," + fmt(loss) + "\n";
    });
    write_file(out.classifier(m), nn::encode_checkpoint(clf.net));
    write_text(out.clf_loss(m), csv);
    log << "train-clf " << mode_name(m) << ": train accuracy " << fmt(spoofclf::accuracy(clf, samples)) << "\n";
  }
}

void cmd_eval(const PipelineConfig& cfg, std::ostream& log) {
  cfg.validate();
  const Layout out{cfg.out_dir};
  const auto dn = load_depthnet(cfg, out);
  std::vector<spoofclf::Classifier> classifiers;
  for (const auto m : modes_of(cfg)) classifiers.push_back(load_classifier(cfg, out, m));
  const auto train = load_split(cfg, out, "train");
  const auto test = load_split(cfg, out, "test");
  const auto maps = predict_all(dn, test.images);

  // depth quality against the predict-the-train-mean baseline
  double mean = 0.0;
  std::size_t n = 0;
  for (const auto& d : train.depths)
    for (float v : d.values()) mean += v, ++n;
  mean /= static_cast<double>(n);
  double mse = 0.0, baseline = 0.0;
  std::vector<double> var_sum(synth::kClassCount, 0.0);
  std::vector<int> var_n(synth::kClassCount, 0);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    mse += map_mse(maps[i], test.depths[i]);
    double b = 0.0;
    for (float v : test.depths[i].values()) b += (v - mean) * (v - mean);
    baseline += b / static_cast<double>(test.depths[i].values().size());
    const int c = synth::class_index(test.records[i].label);
    var_sum[static_cast<std::size_t>(c)] += variance(maps[i].image());
    ++var_n[static_cast<std::size_t>(c)];
  }
  mse /= static_cast<double>(maps.size());
  baseline /= static_cast<double>(maps.size());
  nlohmann::ordered_json dj;
  dj["test_mse"] = mse;
  dj["baseline_mse"] = baseline;
  nlohmann::ordered_json var = nlohmann::ordered_json::object();
  for (const auto c : synth::kAllClasses) {
    const auto k = static_cast<std::size_t>(synth::class_index(c));
    var[std::string(synth::class_name(c))] = var_n[k] ? var_sum[k] / var_n[k] : 0.0;
  }
  dj["predicted_variance"] = var;
  write_text(out.depth_metrics(), dj.dump(2) + "\n");
  log << "eval depth: test mse " << fmt(mse) << ", mean baseline " << fmt(baseline) << "\n";

  const auto digest = eval::fnv1a_hex(cfg.canonical());
  std::vector<eval::MetricsReport> reports;
  for (const auto& clf : classifiers) {
    const Mode m = clf.config.mode;
    const int k = spoofclf::class_count(m);
    std::vector<std::string> names;
    for (int c = 0; c < k; ++c) names.emplace_back(spoofclf::label_name(c, m));
    eval::ConfusionMatrix cm(k);
    std::vector<std::vector<int>> rankings;
    std::vector<int> labels;
    std::string pred_csv = "sample,true_class";
    for (const auto& name : names) pred_csv += "," + name;
    pred_csv += "\n";
    for (std::size_t i = 0; i < maps.size(); ++i) {
      const auto p = spoofclf::predict(clf, maps[i]);
      const int truth = spoofclf::label_of(test.records[i].label, m);
      cm.add(truth, p.ranked_classes.front());
      rankings.push_back(p.ranked_classes);
      labels.push_back(truth);
      pred_csv += test.records[i].lf_path + "," + names[static_cast<std::size_t>(truth)];
      for (float s : p.scores) pred_csv += "," + fmt(s);
      pred_csv += "\n";
    }
    auto r = eval::make_report(std::string(mode_name(m)), names, cm, rankings, labels, cfg.master_seed, digest);
    write_text(out.metrics(m), eval::to_json(r));
    write_text(out.cmc(m), eval::cmc_csv(r));
    write_text(out.predictions(m), pred_csv);
    reports.push_back(std::move(r));
  }
  const auto table = eval::summary_table(reports);
  write_text(out.summary(), table);
  log << table;
}

void cmd_report(const PipelineConfig& cfg, std::ostream& log) {
  cfg.validate();
  const Layout out{cfg.out_dir};
  std::vector<eval::MetricsReport> reports;
  for (const auto m : modes_of(cfg))
    if (fs::exists(out.metrics(m))) reports.push_back(eval::report_from_json(read_text(out.metrics(m))));
  if (reports.empty()) raise(Errc::MetricsMissing, "no metrics under " + out.root.string() + "; run eval first");
  const auto table = eval::summary_table(reports);
  write_text(out.summary(), table);
  log << table;
}

int exit_code(Errc e) {
  switch (e) {
    case Errc::ConfigInvalid: return 2;
    case Errc::DatasetMissing:
    case Errc::CheckpointMissing:
    case Errc::MetricsMissing: return 3;
    case Errc::DivergedNaN: return 4;
    default: return 1;
  }
}

}  // namespace fds::pipeline
