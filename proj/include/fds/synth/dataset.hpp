#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fds/lf/lightfield.hpp"
#include "fds/synth/scene.hpp"

namespace fds::synth {

struct CaptureDims {
  int nu = 9, nv = 9;
  int ns = 64, nt = 64;
};

/// One manifest line: LF5D path, DPTH path, subject, class, split tag.
struct ManifestRecord {
  std::string lf_path;
  std::string depth_path;
  int subject_id = 0;
  AttackClass label = AttackClass::Real;
  std::string split;  // "train", "test", or empty before splitting

  bool operator==(const ManifestRecord&) const = default;
};

struct Dataset {
  std::vector<LabeledSample> samples;
  std::vector<lf::LightField> fields;
  std::vector<ManifestRecord> manifest;
};

/// Scene parameters for one capture, drawn from an RNG stream keyed on
/// (master_seed, subject, variant, class). Subject-level geometry depends on
/// (master_seed, subject) only, so the spoofs of a capture share its finger.
SceneSpec capture_scene(std::uint64_t master_seed, int subject, int variant, AttackClass attack,
                        double noise_level);

/// Per subject and variant: one Real capture plus one per attack class.
Dataset make_dataset(int n_subjects, int variants_per_subject, const CaptureDims& dims,
                     std::uint64_t master_seed, double noise_level);

std::string format_manifest(const std::vector<ManifestRecord>& records);
/// Throws InvalidArgument on malformed lines.
std::vector<ManifestRecord> parse_manifest(std::string_view text);

}  // namespace fds::synth
