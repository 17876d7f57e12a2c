#pragma once

#include <filesystem>
#include <ostream>
#include <vector>

#include "fds/core/error.hpp"
#include "fds/depthnet/depthnet.hpp"
#include "fds/pipeline/config.hpp"
#include "fds/spoofclf/classifier.hpp"

namespace fds::pipeline {

/// Output layout under out_dir.
struct Layout {
  std::filesystem::path root;

  std::filesystem::path data() const { return root / "data"; }
  std::filesystem::path manifest() const { return data() / "manifest.tsv"; }
  std::filesystem::path depthnet() const { return root / "depthnet.nnck"; }
  std::filesystem::path depth_loss() const { return root / "depth_loss.csv"; }
  std::filesystem::path depth_metrics() const { return root / "depth_metrics.json"; }
  std::filesystem::path backbone() const { return root / "backbone.nnck"; }
  std::filesystem::path backbone_loss() const { return root / "backbone_loss.csv"; }
  std::filesystem::path classifier(spoofclf::Mode m) const;
  std::filesystem::path clf_loss(spoofclf::Mode m) const;
  std::filesystem::path metrics(spoofclf::Mode m) const;
  std::filesystem::path cmc(spoofclf::Mode m) const;
  std::filesystem::path predictions(spoofclf::Mode m) const;
  std::filesystem::path summary() const { return root / "summary.txt"; }
};

std::vector<spoofclf::Mode> modes_of(const PipelineConfig& cfg);
depthnet::DepthNetConfig depthnet_config(const PipelineConfig& cfg);
spoofclf::ClassifierConfig classifier_config(const PipelineConfig& cfg, spoofclf::Mode m);

/// Renders the dataset, splits it 50/50 per class and writes LF5D/DPTH
/// files plus the manifest.
void cmd_gen(const PipelineConfig& cfg, std::ostream& log);
/// Pretrains on generic scenes, fine-tunes on the train split.
void cmd_train_depth(const PipelineConfig& cfg, std::ostream& log);
/// Pretrains the backbone on generic depth maps, then fine-tunes one
/// classifier per configured mode on predicted train-split depth maps.
void cmd_train_clf(const PipelineConfig& cfg, std::ostream& log);
/// Test-split metrics, CMC and prediction dumps per mode.
void cmd_eval(const PipelineConfig& cfg, std::ostream& log);
/// Summary table of whatever metrics files exist.
void cmd_report(const PipelineConfig& cfg, std::ostream& log);

/// 2 config, 3 missing artifact, 4 numeric divergence, 1 anything else.
int exit_code(Errc e);

}  // namespace fds::pipeline
