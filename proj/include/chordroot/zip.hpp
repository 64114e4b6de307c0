#pragma once

// Read-only access to members of a zip archive held in memory (stored or
// deflate members only), as used by compressed MusicXML (.mxl).

#include <zlib.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chordroot/error.hpp"

namespace chordroot::zip {

struct Entry {
  std::string name;
  std::uint16_t method = 0;
  std::uint32_t compressed_size = 0;
  std::uint32_t size = 0;
  std::uint32_t local_header_offset = 0;
};

namespace detail {

inline std::uint16_t u16(std::string_view b, std::size_t at) {
  if (at + 2 > b.size()) throw ParseError("truncated zip archive");
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) | (static_cast<unsigned char>(b[at + 1]) << 8));
}

inline std::uint32_t u32(std::string_view b, std::size_t at) {
  return static_cast<std::uint32_t>(u16(b, at)) | (static_cast<std::uint32_t>(u16(b, at + 2)) << 16);
}

}  // namespace detail

inline std::vector<Entry> list(std::string_view archive) {
  constexpr std::uint32_t kEndSig = 0x06054b50;
  constexpr std::uint32_t kCentralSig = 0x02014b50;
  if (archive.size() < 22) throw ParseError("not a zip archive");
  std::size_t eocd = std::string_view::npos;
  std::size_t lowest = archive.size() > 22 + 0xFFFF ? archive.size() - 22 - 0xFFFF : 0;
  for (std::size_t at = archive.size() - 22 + 1; at-- > lowest;) {
    if (detail::u32(archive, at) == kEndSig) {
      eocd = at;
      break;
    }
  }
  if (eocd == std::string_view::npos) throw ParseError("zip end-of-central-directory record not found");

  std::uint16_t count = detail::u16(archive, eocd + 10);
  std::size_t at = detail::u32(archive, eocd + 16);
  std::vector<Entry> entries;
  for (std::uint16_t i = 0; i < count; ++i) {
    if (detail::u32(archive, at) != kCentralSig) throw ParseError("corrupt zip central directory");
    Entry e;
    e.method = detail::u16(archive, at + 10);
    e.compressed_size = detail::u32(archive, at + 20);
    e.size = detail::u32(archive, at + 24);
    std::uint16_t name_len = detail::u16(archive, at + 28);
    std::uint16_t extra_len = detail::u16(archive, at + 30);
    std::uint16_t comment_len = detail::u16(archive, at + 32);
    e.local_header_offset = detail::u32(archive, at + 42);
    if (at + 46 + name_len > archive.size()) throw ParseError("truncated zip archive");
    e.name = std::string(archive.substr(at + 46, name_len));
    entries.push_back(std::move(e));
    at += 46u + name_len + extra_len + comment_len;
  }
  return entries;
}

inline std::string extract(std::string_view archive, const Entry& entry) {
  constexpr std::uint32_t kLocalSig = 0x04034b50;
  std::size_t at = entry.local_header_offset;
  if (detail::u32(archive, at) != kLocalSig) throw ParseError("corrupt zip local header for " + entry.name);
  std::size_t data = at + 30 + detail::u16(archive, at + 26) + detail::u16(archive, at + 28);
  if (data + entry.compressed_size > archive.size()) throw ParseError("truncated zip member " + entry.name);
  std::string_view packed = archive.substr(data, entry.compressed_size);

  if (entry.method == 0) return std::string(packed);
  if (entry.method != 8) throw ParseError("unsupported zip compression method for " + entry.name);

  std::string out(entry.size, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw Error("zlib initialisation failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(packed.data()));
  zs.avail_in = static_cast<uInt>(packed.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&zs, Z_FINISH);
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || zs.total_out != entry.size) throw ParseError("corrupt deflate data in " + entry.name);
  return out;
}

inline std::optional<std::string> read(std::string_view archive, std::string_view name) {
  for (const Entry& e : list(archive))
    if (e.name == name) return extract(archive, e);
  return std::nullopt;
}

}  // namespace chordroot::zip
