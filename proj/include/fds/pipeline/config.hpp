#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fds::pipeline {

/// Every knob of a pipeline run. Defaults are the desk configuration; a
/// config file only needs the keys it changes.
struct PipelineConfig {
  // capture geometry; images are ns rows by nt columns
  int nu = 9, nv = 9, ns = 64, nt = 64;
  int n_subjects = 8;
  int variants = 2;
  double noise_level = 0.01;

  std::uint64_t master_seed = 1;
  std::uint64_t split_seed = 2;
  std::uint64_t train_seed = 3;

  double depth_width_scale = 0.25;
  int depth_pretrain_scenes = 40;
  int depth_pretrain_epochs = 10;
  int depth_finetune_epochs = 60;
  double depth_lr = 0.01;
  int depth_batch = 4;

  double clf_width_scale = 0.125;
  int clf_dense_width = 64;
  std::string clf_mode = "both";  // two | multi | both
  int clf_pretrain_scenes = 60;
  int clf_pretrain_epochs = 20;
  double clf_pretrain_lr = 0.01;
  int clf_epochs_two = 100;
  int clf_epochs_multi = 200;
  double clf_lr = 0.01;  // plain SGD at 1e-4 barely moves in 200 epochs at this scale
  int clf_batch = 8;

  std::string out_dir = "out";

  using Slot = std::variant<int*, double*, std::uint64_t*, std::string*>;
  struct Field {
    const char* key;
    Slot slot;
  };
  std::vector<Field> fields();

  /// Throws ConfigInvalid.
  void validate() const;
  /// key=value lines in a fixed order; the digest input of every report.
  /// out_dir is left out so relocating a run does not change its digest.
  std::string canonical() const;
};

/// Flat key=value text with '#' comments. Unknown keys, duplicate keys and
/// malformed values raise ConfigInvalid.
PipelineConfig parse_config(std::string_view text);
/// Reads and parses a config file (missing file -> ConfigInvalid).
PipelineConfig load_config(const std::filesystem::path& p);

}  // namespace fds::pipeline
