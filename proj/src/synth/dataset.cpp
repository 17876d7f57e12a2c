#include "fds/synth/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <random>
#include <sstream>

#include "fds/core/error.hpp"
#include "fds/lf/lightfield.hpp"
#include "fds/synth/render.hpp"

namespace fds::synth {

namespace {

std::mt19937_64 stream(std::uint64_t master, std::initializer_list<std::uint32_t> key) {
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(master),
                                   static_cast<std::uint32_t>(master >> 32)};
  words.insert(words.end(), key.begin(), key.end());
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

std::string capture_stem(int subject, int variant, AttackClass c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "s%03d_v%02d_%s", subject, variant, std::string(class_name(c)).c_str());
  return buf;
}

}  // namespace

SceneSpec capture_scene(std::uint64_t master_seed, int subject, int variant, AttackClass attack,
                        double noise_level) {
  auto subj = stream(master_seed, {0x5b1ec7u, static_cast<std::uint32_t>(subject)});
  std::uniform_real_distribution<double> radius(0.6, 1.0);
  std::uniform_int_distribution<int> ridges(2, 4);
  std::uniform_real_distribution<double> amplitude(0.2, 0.4);
  SceneSpec spec;
  spec.subject_id = subject;
  spec.attack = attack;
  spec.base_radius = radius(subj);
  spec.ridge_count = ridges(subj);
  spec.ridge_amplitude = amplitude(subj);

  // capture-level jitter and texture are shared by the capture's spoofs
  auto cap = stream(master_seed, {0xca97u, static_cast<std::uint32_t>(subject),
                                  static_cast<std::uint32_t>(variant)});
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  spec.base_radius = std::clamp(spec.base_radius + jitter(cap), 0.55, 1.0);
  spec.ridge_amplitude = std::clamp(spec.ridge_amplitude + jitter(cap), 0.0, 0.5);
  spec.texture_seed = cap();
  spec.noise_level = noise_level;
  return spec;
}

Dataset make_dataset(int n_subjects, int variants_per_subject, const CaptureDims& dims,
                     std::uint64_t master_seed, double noise_level) {
  if (n_subjects < 2) raise(Errc::InvalidArgument, "need at least two subjects");
  if (variants_per_subject < 1) raise(Errc::InvalidArgument, "need at least one variant per subject");
  Dataset ds;
  for (int s = 0; s < n_subjects; ++s) {
    for (int v = 0; v < variants_per_subject; ++v) {
      for (auto c : kAllClasses) {
        const SceneSpec spec = capture_scene(master_seed, s, v, c, noise_level);
        auto [field, depth] = render_lightfield(spec, dims.nu, dims.nv, dims.ns, dims.nt);
        const std::string stem = capture_stem(s, v, c);
        ds.samples.push_back({lf::center_view(field), depth, c, s});
        ds.fields.push_back(std::move(field));
        ds.manifest.push_back({"lf/" + stem + ".lf5d", "depth/" + stem + ".dpth", s, c, ""});
      }
    }
  }
  return ds;
}

std::string format_manifest(const std::vector<ManifestRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += r.lf_path + '\t' + r.depth_path + '\t' + std::to_string(r.subject_id) + '\t' +
           std::string(class_name(r.label)) + '\t' + r.split + '\n';
  }
  return out;
}

std::vector<ManifestRecord> parse_manifest(std::string_view text) {
  std::vector<ManifestRecord> out;
  std::size_t lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string_view> cols;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 5) raise(Errc::InvalidArgument, "manifest line " + std::to_string(lineno) + ": expected 5 columns");
    ManifestRecord r;
    r.lf_path = cols[0];
    r.depth_path = cols[1];
    auto [p, ec] = std::from_chars(cols[2].data(), cols[2].data() + cols[2].size(), r.subject_id);
    if (ec != std::errc{} || p != cols[2].data() + cols[2].size()) {
      raise(Errc::InvalidArgument, "manifest line " + std::to_string(lineno) + ": bad subject id");
    }
    r.label = parse_class(cols[3]);
    r.split = cols[4];
    if (r.split != "train" && r.split != "test" && !r.split.empty()) {
      raise(Errc::InvalidArgument, "manifest line " + std::to_string(lineno) + ": bad split tag");
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace fds::synth
