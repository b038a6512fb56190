#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "handdigit/image.hpp"

namespace handdigit {

/// Decodes binary PPM (P6) or PGM (P5), maxval 255. P5 is promoted to
/// gray RGB. Throws DecodeError naming the offending header field or a
/// payload truncation.
ImageRGB decode_image(const std::vector<std::uint8_t>& bytes);

/// Decodes a P5 PGM as a single-channel image.
GrayImage decode_gray(const std::vector<std::uint8_t>& bytes);

/// Decodes a P5 PGM as a mask (nonzero = true).
BinaryMask decode_mask(const std::vector<std::uint8_t>& bytes);

/// Canonical encoders: "P6\n<w> <h>\n255\n" + payload.
std::vector<std::uint8_t> encode_ppm(const ImageRGB& img);
std::vector<std::uint8_t> encode_pgm(const GrayImage& img);
std::vector<std::uint8_t> encode_pgm(const BinaryMask& mask);  // true -> 255

ImageRGB load_image(const std::string& path);
GrayImage load_gray(const std::string& path);
BinaryMask load_mask(const std::string& path);
void save_ppm(const std::string& path, const ImageRGB& img);
void save_pgm(const std::string& path, const GrayImage& img);
void save_pgm(const std::string& path, const BinaryMask& mask);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes);

}  // namespace handdigit
