#pragma once

#include <bit>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace fds {

static_assert(std::endian::native == std::endian::little,
              "binary containers assume a little-endian host");

/// Append-only little-endian byte sink for the binary containers.
class ByteWriter {
 public:
  void magic(std::string_view m);
  void u8(std::uint8_t v);
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void f32s(std::span<const float> v);
  std::vector<unsigned char> take() { return std::move(buf_); }

 private:
  std::vector<unsigned char> buf_;
};

/// Bounds-checked reader over a byte buffer. Running off the end raises
/// SizeMismatch; a wrong magic raises BadMagic.
class ByteReader {
 public:
  explicit ByteReader(std::span<const unsigned char> bytes) : bytes_(bytes) {}
  void expect_magic(std::string_view m);
  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::vector<float> f32s(std::size_t n);
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const;
  std::span<const unsigned char> bytes_;
  std::size_t pos_ = 0;
};

std::vector<unsigned char> read_file(const std::filesystem::path& p);
/// Writes via a temporary sibling and rename so readers never see a partial file.
void write_file(const std::filesystem::path& p, std::span<const unsigned char> bytes);
void write_text(const std::filesystem::path& p, std::string_view text);
std::string read_text(const std::filesystem::path& p);

}  // namespace fds
