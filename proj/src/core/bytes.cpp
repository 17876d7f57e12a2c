#include "fds/core/bytes.hpp"

#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "fds/core/error.hpp"

namespace fds {

void ByteWriter::magic(std::string_view m) { buf_.insert(buf_.end(), m.begin(), m.end()); }

void ByteWriter::u8(std::uint8_t v) { buf_.push_back(v); }

void ByteWriter::u16(std::uint16_t v) {
  buf_.push_back(static_cast<unsigned char>(v & 0xff));
  buf_.push_back(static_cast<unsigned char>(v >> 8));
}

void ByteWriter::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

void ByteWriter::f32s(std::span<const float> v) {
  const std::size_t off = buf_.size();
  buf_.resize(off + v.size() * sizeof(float));
  if (!v.empty()) std::memcpy(buf_.data() + off, v.data(), v.size() * sizeof(float));
}

void ByteReader::need(std::size_t n) const {
  if (bytes_.size() - pos_ < n) raise(Errc::SizeMismatch, "buffer truncated");
}

void ByteReader::expect_magic(std::string_view m) {
  if (bytes_.size() - pos_ < m.size() ||
      std::memcmp(bytes_.data() + pos_, m.data(), m.size()) != 0) {
    raise(Errc::BadMagic, "expected magic '" + std::string(m) + "'");
  }
  pos_ += m.size();
}

std::uint8_t ByteReader::u8() {
  need(1);
  return bytes_[pos_++];
}

std::uint16_t ByteReader::u16() {
  need(2);
  const auto v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
  pos_ += 2;
  return v;
}

std::uint32_t ByteReader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
  pos_ += 4;
  return v;
}

std::vector<float> ByteReader::f32s(std::size_t n) {
  need(n * sizeof(float));
  std::vector<float> out(n);
  if (n) std::memcpy(out.data(), bytes_.data() + pos_, n * sizeof(float));
  pos_ += n * sizeof(float);
  return out;
}

std::vector<unsigned char> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) raise(Errc::IoError, "cannot open " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& p, std::span<const unsigned char> bytes) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  auto tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::IoError, "cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) raise(Errc::IoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, p, ec);
  if (ec) raise(Errc::IoError, "rename to " + p.string() + ": " + ec.message());
}

void write_text(const std::filesystem::path& p, std::string_view text) {
  write_file(p, {reinterpret_cast<const unsigned char*>(text.data()), text.size()});
}

std::string read_text(const std::filesystem::path& p) {
  auto bytes = read_file(p);
  return {bytes.begin(), bytes.end()};
}

}  // namespace fds
