#include "fds/pipeline/config.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "fds/core/bytes.hpp"
#include "fds/core/error.hpp"

namespace fds::pipeline {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    raise(Errc::ConfigInvalid, std::string(key) + ": not a number: '" + std::string(v) + "'");
  return out;
}

template <class T>
std::string format_number(T v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

}  // namespace

std::vector<PipelineConfig::Field> PipelineConfig::fields() {
  return {
      {"nu", &nu},
      {"nv", &nv},
      {"ns", &ns},
      {"nt", &nt},
      {"n_subjects", &n_subjects},
      {"variants", &variants},
      {"noise_level", &noise_level},
      {"master_seed", &master_seed},
      {"split_seed", &split_seed},
      {"train_seed", &train_seed},
      {"depth_width_scale", &depth_width_scale},
      {"depth_pretrain_scenes", &depth_pretrain_scenes},
      {"depth_pretrain_epochs", &depth_pretrain_epochs},
      {"depth_finetune_epochs", &depth_finetune_epochs},
      {"depth_lr", &depth_lr},
      {"depth_batch", &depth_batch},
      {"clf_width_scale", &clf_width_scale},
      {"clf_dense_width", &clf_dense_width},
      {"clf_mode", &clf_mode},
      {"clf_pretrain_scenes", &clf_pretrain_scenes},
      {"clf_pretrain_epochs", &clf_pretrain_epochs},
      {"clf_pretrain_lr", &clf_pretrain_lr},
      {"clf_epochs_two", &clf_epochs_two},
      {"clf_epochs_multi", &clf_epochs_multi},
      {"clf_lr", &clf_lr},
      {"clf_batch", &clf_batch},
      {"out_dir", &out_dir},
  };
}

void PipelineConfig::validate() const {
  auto fail = [](const std::string& m) { raise(Errc::ConfigInvalid, m); };
  if (nu < 1 || nv < 1 || nu % 2 == 0 || nv % 2 == 0) fail("nu and nv must be odd and positive");
  // five 2x2 pools in the classifier need multiples of 32 (the depth net alone needs 8)
  if (ns < 32 || nt < 32 || ns % 32 != 0 || nt % 32 != 0) fail("ns and nt must be positive multiples of 32");
  if (n_subjects < 2) fail("n_subjects must be at least 2");
  if (variants < 1) fail("variants must be at least 1");
  if (!(noise_level >= 0.0 && noise_level <= 0.5)) fail("noise_level must be in [0, 0.5]");
  if (!(depth_width_scale > 0.0)) fail("depth_width_scale must be positive");
  if (!(clf_width_scale > 0.0)) fail("clf_width_scale must be positive");
  if (depth_pretrain_scenes < 0 || depth_pretrain_epochs < 0 || depth_finetune_epochs < 1)
    fail("depth scene and epoch counts out of range");
  if (depth_pretrain_epochs > 0 && depth_pretrain_scenes < 1) fail("depth pretraining needs scenes");
  if (clf_pretrain_scenes < 0 || clf_pretrain_epochs < 0 || clf_epochs_two < 1 || clf_epochs_multi < 1)
    fail("classifier scene and epoch counts out of range");
  if (clf_pretrain_epochs > 0 && clf_pretrain_scenes < 1) fail("classifier pretraining needs scenes");
  if (!(depth_lr > 0.0) || !(clf_lr > 0.0) || !(clf_pretrain_lr > 0.0)) fail("learning rates must be positive");
  if (depth_batch < 1 || clf_batch < 1) fail("batch sizes must be positive");
  if (clf_dense_width < 1) fail("clf_dense_width must be positive");
  if (clf_mode != "two" && clf_mode != "multi" && clf_mode != "both") fail("clf_mode must be two, multi or both");
  if (out_dir.empty()) fail("out_dir is empty");
}

std::string PipelineConfig::canonical() const {
  std::ostringstream os;
  for (const auto& f : const_cast<PipelineConfig*>(this)->fields()) {
    if (std::string_view(f.key) == "out_dir") continue;
    os << f.key << '=';
    std::visit(
        [&](auto* p) {
          using T = std::remove_pointer_t<decltype(p)>;
          if constexpr (std::is_same_v<T, std::string>) os << *p;
          else os << format_number(*p);
        },
        f.slot);
    os << '\n';
  }
  return os.str();
}

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig cfg;
  auto fields = cfg.fields();
  std::set<std::string, std::less<>> seen;
  int lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      raise(Errc::ConfigInvalid, "line " + std::to_string(lineno) + ": expected key=value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    auto it = std::find_if(fields.begin(), fields.end(), [&](const auto& f) { return key == f.key; });
    if (it == fields.end()) raise(Errc::ConfigInvalid, "unknown key '" + std::string(key) + "'");
    if (!seen.emplace(key).second) raise(Errc::ConfigInvalid, "duplicate key '" + std::string(key) + "'");
    std::visit(
        [&](auto* p) {
          using T = std::remove_pointer_t<decltype(p)>;
          if constexpr (std::is_same_v<T, std::string>) *p = std::string(value);
          else *p = parse_number<T>(key, value);
        },
        it->slot);
  }
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& p) {
  std::string text;
  try {
    text = read_text(p);
  } catch (const Error&) {
    raise(Errc::ConfigInvalid, "cannot read config " + p.string());
  }
  return parse_config(text);
}

}  // namespace fds::pipeline
