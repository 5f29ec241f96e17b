#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "glassseg/image.hpp"

namespace glassseg {

using Bytes = std::vector<std::uint8_t>;

/// Decoded PNM payload. P2/P5 give a GrayImage, P3/P6 an RgbImage; samples are
/// divided by the header maxval.
using AnyImage = std::variant<GrayImage, RgbImage>;

/// Throws ErrorKind::format with the byte offset of the problem.
AnyImage decode_pnm(std::span<const std::uint8_t> bytes);

/// Decodes and converts color input with the given luma weights.
GrayImage decode_gray(std::span<const std::uint8_t> bytes, const LumaWeights& weights = {});

/// Quantizes by round-half-up of v * maxval, clamped to [0, maxval].
/// Binary (P5) output requires maxval <= 255; text (P2) allows up to 65535.
Bytes encode_pgm(const GrayImage& img, bool binary = true, int maxval = 255);
Bytes encode_ppm(const RgbImage& img, bool binary = true, int maxval = 255);

/// Label maps are stored as raw integer samples in a P2 stream whose maxval is
/// the largest label (at least 1), so they survive a round trip unscaled.
Bytes encode_label_pgm(const LabelMap& labels);
LabelMap decode_label_pgm(std::span<const std::uint8_t> bytes);

/// Masks are written as 0/255 P5; on read any nonzero sample is set.
Bytes encode_mask_pgm(const Mask& mask);
Mask decode_mask(std::span<const std::uint8_t> bytes);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace glassseg
