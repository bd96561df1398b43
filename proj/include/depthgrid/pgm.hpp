#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "depthgrid/error.hpp"
#include "depthgrid/image.hpp"

namespace depthgrid {

enum class PgmFormat { Plain /* P2 */, Binary /* P5 */ };

namespace detail {

class PgmReader {
 public:
  explicit PgmReader(std::string_view bytes) : buf_(bytes) {}

  DepthImage read() {
    if (buf_.size() < 2 || buf_[0] != 'P' || (buf_[1] != '2' && buf_[1] != '5'))
      throw ParseError(ParseError::Kind::MalformedHeader, 0, "expected magic 'P2' or 'P5'");
    const bool binary = buf_[1] == '5';
    pos_ = 2;

    const auto width = header_int("width");
    const auto height = header_int("height");
    if (width == 0 || height == 0)
      throw ParseError(ParseError::Kind::MalformedHeader, pos_, "zero image dimension");
    const std::size_t maxval_at = skip_space_and_comments();
    const auto maxval = header_int("maxval");
    if (maxval == 0 || maxval > 65535)
      throw ParseError(ParseError::Kind::BadMaxval, maxval_at,
                       "maxval must be in [1, 65535], got " + std::to_string(maxval));

    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<std::uint16_t> samples(count);
    if (binary) {
      // exactly one whitespace byte separates maxval from the raster
      if (pos_ >= buf_.size() || !std::isspace(static_cast<unsigned char>(buf_[pos_])))
        throw ParseError(ParseError::Kind::MalformedHeader, pos_, "missing whitespace before raster");
      ++pos_;
      const std::size_t bps = maxval < 256 ? 1 : 2;
      const std::size_t need = count * bps;
      if (buf_.size() - pos_ < need)
        throw ParseError(ParseError::Kind::TruncatedPayload, buf_.size(),
                         "expected " + std::to_string(need) + " raster bytes, found " +
                             std::to_string(buf_.size() - pos_));
      for (std::size_t i = 0; i < count; ++i) {
        const std::size_t at = pos_ + i * bps;
        std::uint32_t v = static_cast<unsigned char>(buf_[at]);
        if (bps == 2) v = (v << 8) | static_cast<unsigned char>(buf_[at + 1]);
        if (v > maxval)
          throw ParseError(ParseError::Kind::SampleOutOfRange, at,
                           "sample " + std::to_string(v) + " exceeds maxval");
        samples[i] = static_cast<std::uint16_t>(v);
      }
    } else {
      for (std::size_t i = 0; i < count; ++i) {
        const std::size_t at = skip_space_and_comments();
        if (at >= buf_.size())
          throw ParseError(ParseError::Kind::TruncatedPayload, at,
                           "expected " + std::to_string(count) + " samples, found " + std::to_string(i));
        const auto v = read_uint(ParseError::Kind::BadRecord, "sample");
        if (v > maxval)
          throw ParseError(ParseError::Kind::SampleOutOfRange, at,
                           "sample " + std::to_string(v) + " exceeds maxval");
        samples[i] = static_cast<std::uint16_t>(v);
      }
    }
    return DepthImage(width, height, static_cast<std::uint16_t>(maxval), std::move(samples));
  }

 private:
  std::size_t skip_space_and_comments() {
    while (pos_ < buf_.size()) {
      const char c = buf_[pos_];
      if (c == '#') {
        while (pos_ < buf_.size() && buf_[pos_] != '\n' && buf_[pos_] != '\r') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
    return pos_;
  }

  std::uint64_t header_int(const char* field) {
    skip_space_and_comments();
    if (pos_ >= buf_.size())
      throw ParseError(ParseError::Kind::MalformedHeader, pos_, std::string("missing ") + field);
    return read_uint(ParseError::Kind::MalformedHeader, field);
  }

  std::uint64_t read_uint(ParseError::Kind kind, const char* field) {
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    while (pos_ < buf_.size() && std::isdigit(static_cast<unsigned char>(buf_[pos_]))) {
      v = v * 10 + static_cast<std::uint64_t>(buf_[pos_] - '0');
      if (v > 0xFFFFFFFFull) throw ParseError(kind, start, std::string(field) + " too large");
      ++pos_;
    }
    if (pos_ == start) throw ParseError(kind, start, std::string("expected integer ") + field);
    if (pos_ < buf_.size() && !std::isspace(static_cast<unsigned char>(buf_[pos_])) && buf_[pos_] != '#')
      throw ParseError(kind, pos_, std::string("unexpected character after ") + field);
    return v;
  }

  std::string_view buf_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Decodes an in-memory P2 or P5 file.
inline DepthImage parse_pgm(std::string_view bytes) { return detail::PgmReader(bytes).read(); }

/// Encodes as P2 or P5. Binary samples use 2 bytes, big-endian, when maxval > 255.
inline std::string encode_pgm(const DepthImage& img, PgmFormat format) {
  std::ostringstream os;
  os << (format == PgmFormat::Binary ? "P5" : "P2") << '\n'
     << img.width() << ' ' << img.height() << '\n'
     << img.max_value() << '\n';
  std::string out = os.str();
  if (format == PgmFormat::Binary) {
    const bool wide = img.max_value() > 255;
    out.reserve(out.size() + img.size() * (wide ? 2 : 1));
    for (auto s : img.samples()) {
      if (wide) out.push_back(static_cast<char>(s >> 8));
      out.push_back(static_cast<char>(s & 0xFF));
    }
  } else {
    for (std::size_t r = 0; r < img.height(); ++r) {
      for (std::size_t c = 0; c < img.width(); ++c) {
        if (c) out.push_back(' ');
        out += std::to_string(img(r, c));
      }
      out.push_back('\n');
    }
  }
  return out;
}

inline DepthImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_pgm(bytes);
  } catch (const ParseError& e) {
    throw ParseError(e.kind(), e.offset(), e.detail(), path.string() + ": ");
  }
}

inline void save_pgm(const DepthImage& img, const std::filesystem::path& path,
                     PgmFormat format = PgmFormat::Binary) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  const std::string bytes = encode_pgm(img, format);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(path.string(), "write failed");
}

}  // namespace depthgrid
