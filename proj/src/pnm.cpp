#include "glassseg/pnm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

namespace glassseg {
namespace {

[[noreturn]] void format_error(std::size_t offset, const std::string& msg) {
  fail(ErrorKind::format, "pnm: " + msg + " at byte offset " + std::to_string(offset));
}

bool is_space(std::uint8_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }

  // Skips whitespace and '#' comments, then reads an unsigned decimal token.
  std::uint32_t next_uint(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    std::uint64_t value = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > std::numeric_limits<std::uint32_t>::max()) {
        format_error(start, std::string(what) + " out of range");
      }
      ++pos_;
    }
    if (pos_ == start) {
      if (pos_ >= bytes_.size()) format_error(start, std::string("truncated data reading ") + what);
      format_error(start, std::string("expected integer for ") + what);
    }
    if (pos_ < bytes_.size() && !is_space(bytes_[pos_]) && bytes_[pos_] != '#') {
      format_error(pos_, std::string("malformed integer for ") + what);
    }
    return static_cast<std::uint32_t>(value);
  }

  // The single whitespace byte separating maxval from a binary payload.
  void expect_single_space() {
    if (pos_ >= bytes_.size()) format_error(pos_, "truncated header");
    if (!is_space(bytes_[pos_])) format_error(pos_, "expected whitespace after maxval");
    ++pos_;
  }

  std::uint8_t next_byte() {
    if (pos_ >= bytes_.size()) format_error(pos_, "truncated pixel data");
    return bytes_[pos_++];
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

struct RawPnm {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::uint32_t maxval = 0;
  std::vector<std::uint32_t> samples;
};

RawPnm parse_raw(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') format_error(0, "unknown magic");
  const char kind = static_cast<char>(bytes[1]);
  if (kind != '2' && kind != '3' && kind != '5' && kind != '6') format_error(0, "unknown magic");
  const bool binary = kind == '5' || kind == '6';

  RawPnm raw;
  raw.channels = (kind == '3' || kind == '6') ? 3 : 1;

  Reader in(bytes.subspan(2));
  auto abs_offset = [&] { return in.offset() + 2; };

  std::size_t at = abs_offset();
  const std::uint32_t w = in.next_uint("width");
  if (w < 1 || w > (1u << 24)) format_error(at, "invalid width");
  at = abs_offset();
  const std::uint32_t h = in.next_uint("height");
  if (h < 1 || h > (1u << 24)) format_error(at, "invalid height");
  at = abs_offset();
  raw.maxval = in.next_uint("maxval");
  if (raw.maxval < 1 || raw.maxval > 65535) {
    format_error(at, "maxval " + std::to_string(raw.maxval) + " outside 1..65535");
  }
  if (binary && raw.maxval > 255) format_error(at, "16-bit binary payloads are not supported");

  raw.width = static_cast<int>(w);
  raw.height = static_cast<int>(h);
  const std::size_t count = static_cast<std::size_t>(w) * h * raw.channels;

  if (binary) {
    in.expect_single_space();
    const std::size_t payload = abs_offset();
    if (bytes.size() - payload < count) {
      format_error(bytes.size(), "truncated pixel data: expected " + std::to_string(count) +
                                     " payload bytes, found " +
                                     std::to_string(bytes.size() - payload));
    }
    raw.samples.assign(bytes.begin() + static_cast<std::ptrdiff_t>(payload),
                       bytes.begin() + static_cast<std::ptrdiff_t>(payload + count));
    for (std::size_t i = 0; i < count; ++i) {
      if (raw.samples[i] > raw.maxval) format_error(payload + i, "sample exceeds maxval");
    }
  } else {
    raw.samples.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      at = abs_offset();
      raw.samples.push_back(in.next_uint("sample"));
      if (raw.samples.back() > raw.maxval) format_error(at, "sample exceeds maxval");
    }
  }
  return raw;
}

std::uint32_t quantize(double v, int maxval) {
  const double q = std::floor(v * maxval + 0.5);
  if (!(q > 0.0)) return 0;  // also maps NaN to 0
  return q >= maxval ? static_cast<std::uint32_t>(maxval) : static_cast<std::uint32_t>(q);
}

void append(Bytes& out, const std::string& s) { out.insert(out.end(), s.begin(), s.end()); }

std::string header(char kind, int w, int h, int maxval) {
  return std::string("P") + kind + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n" +
         std::to_string(maxval) + "\n";
}

void check_maxval(bool binary, int maxval) {
  if (maxval < 1 || maxval > (binary ? 255 : 65535)) {
    fail(ErrorKind::invalid_argument,
         "pnm: maxval " + std::to_string(maxval) + " invalid for " +
             (binary ? "binary" : "text") + " output");
  }
}

// Writes samples row by row; text rows are space separated, one line per row.
template <typename Sample>
void append_samples(Bytes& out, bool binary, int samples_per_row, const std::vector<Sample>& s) {
  if (binary) {
    for (auto v : s) out.push_back(static_cast<std::uint8_t>(v));
    return;
  }
  std::string line;
  for (std::size_t i = 0; i < s.size(); ++i) {
    line += std::to_string(s[i]);
    line += ((i + 1) % samples_per_row == 0) ? '\n' : ' ';
  }
  append(out, line);
}

}  // namespace

AnyImage decode_pnm(std::span<const std::uint8_t> bytes) {
  RawPnm raw = parse_raw(bytes);
  const double scale = 1.0 / raw.maxval;
  if (raw.channels == 1) {
    GrayImage img(raw.width, raw.height);
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = raw.samples[i] * scale;
    return img;
  }
  RgbImage img(raw.width, raw.height);
  for (std::size_t i = 0; i < img.size(); ++i) {
    img[i] = {raw.samples[3 * i] * scale, raw.samples[3 * i + 1] * scale,
              raw.samples[3 * i + 2] * scale};
  }
  return img;
}

GrayImage decode_gray(std::span<const std::uint8_t> bytes, const LumaWeights& weights) {
  AnyImage img = decode_pnm(bytes);
  if (auto* gray = std::get_if<GrayImage>(&img)) return std::move(*gray);
  return to_grayscale(std::get<RgbImage>(img), weights);
}

Bytes encode_pgm(const GrayImage& img, bool binary, int maxval) {
  check_maxval(binary, maxval);
  std::vector<std::uint32_t> q(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) q[i] = quantize(img[i], maxval);
  Bytes out;
  append(out, header(binary ? '5' : '2', img.width(), img.height(), maxval));
  append_samples(out, binary, img.width(), q);
  return out;
}

Bytes encode_ppm(const RgbImage& img, bool binary, int maxval) {
  check_maxval(binary, maxval);
  std::vector<std::uint32_t> q;
  q.reserve(img.size() * 3);
  for (const Rgb& p : img.pixels()) {
    q.push_back(quantize(p.r, maxval));
    q.push_back(quantize(p.g, maxval));
    q.push_back(quantize(p.b, maxval));
  }
  Bytes out;
  append(out, header(binary ? '6' : '3', img.width(), img.height(), maxval));
  append_samples(out, binary, img.width() * 3, q);
  return out;
}

Bytes encode_label_pgm(const LabelMap& labels) {
  const std::uint32_t top = *std::max_element(labels.pixels().begin(), labels.pixels().end());
  if (top > 65535) fail(ErrorKind::invalid_argument, "pnm: label " + std::to_string(top) + " exceeds 65535");
  std::vector<std::uint32_t> s(labels.pixels().begin(), labels.pixels().end());
  Bytes out;
  append(out, header('2', labels.width(), labels.height(), std::max<int>(1, static_cast<int>(top))));
  append_samples(out, false, labels.width(), s);
  return out;
}

LabelMap decode_label_pgm(std::span<const std::uint8_t> bytes) {
  RawPnm raw = parse_raw(bytes);
  if (raw.channels != 1) format_error(0, "label map must be a graymap");
  return LabelMap(raw.width, raw.height, std::move(raw.samples));
}

Bytes encode_mask_pgm(const Mask& mask) {
  std::vector<std::uint8_t> s(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) s[i] = mask[i] ? 255 : 0;
  Bytes out;
  append(out, header('5', mask.width(), mask.height(), 255));
  append_samples(out, true, mask.width(), s);
  return out;
}

Mask decode_mask(std::span<const std::uint8_t> bytes) {
  RawPnm raw = parse_raw(bytes);
  Mask mask(raw.width, raw.height);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (raw.channels == 1) {
      mask[i] = raw.samples[i] != 0;
    } else {
      mask[i] = (raw.samples[3 * i] | raw.samples[3 * i + 1] | raw.samples[3 * i + 2]) != 0;
    }
  }
  return mask;
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorKind::io, "error reading " + path.string());
  return data;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::io, "error writing " + path.string());
}

}  // namespace glassseg
