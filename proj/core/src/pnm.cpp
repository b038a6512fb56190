#include "handdigit/pnm.hpp"

#include <cstdio>
#include <cstring>

#include "handdigit/error.hpp"

namespace handdigit {

namespace {

struct Header {
    char magic;  // '5' or '6'
    int width;
    int height;
    std::size_t payload_offset;
};

bool is_space(std::uint8_t c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

// Skips whitespace and '#' comments between header tokens.
void skip_separators(const std::vector<std::uint8_t>& b, std::size_t& i) {
    while (i < b.size()) {
        if (is_space(b[i])) {
            ++i;
        } else if (b[i] == '#') {
            while (i < b.size() && b[i] != '\n') ++i;
        } else {
            break;
        }
    }
}

int parse_int(const std::vector<std::uint8_t>& b, std::size_t& i, const char* field) {
    skip_separators(b, i);
    if (i >= b.size() || b[i] < '0' || b[i] > '9')
        throw DecodeError(std::string("PNM header: missing or non-numeric ") + field);
    long v = 0;
    while (i < b.size() && b[i] >= '0' && b[i] <= '9') {
        v = v * 10 + (b[i] - '0');
        if (v > 1000000000L) throw DecodeError(std::string("PNM header: ") + field + " out of range");
        ++i;
    }
    return static_cast<int>(v);
}

Header parse_header(const std::vector<std::uint8_t>& b) {
    if (b.size() < 2 || b[0] != 'P' || (b[1] != '5' && b[1] != '6'))
        throw DecodeError("PNM header: bad magic (expected P5 or P6)");
    Header h;
    h.magic = static_cast<char>(b[1]);
    std::size_t i = 2;
    h.width = parse_int(b, i, "width");
    h.height = parse_int(b, i, "height");
    int maxval = parse_int(b, i, "maxval");
    if (h.width < 1) throw DecodeError("PNM header: width must be >= 1");
    if (h.height < 1) throw DecodeError("PNM header: height must be >= 1");
    if (maxval != 255) throw DecodeError("PNM header: maxval must be 255");
    if (i >= b.size() || !is_space(b[i]))
        throw DecodeError("PNM header: missing whitespace before payload");
    h.payload_offset = i + 1;
    return h;
}

void check_payload(const std::vector<std::uint8_t>& b, const Header& h, std::size_t bytes_per_pixel) {
    std::size_t need = static_cast<std::size_t>(h.width) * h.height * bytes_per_pixel;
    std::size_t have = b.size() - h.payload_offset;
    if (have < need)
        throw DecodeError("PNM payload truncated: expected " + std::to_string(need) +
                          " bytes, got " + std::to_string(have));
}

std::vector<std::uint8_t> header_bytes(char magic, int w, int h) {
    char buf[64];
    int n = std::snprintf(buf, sizeof buf, "P%c\n%d %d\n255\n", magic, w, h);
    return std::vector<std::uint8_t>(buf, buf + n);
}

}  // namespace

ImageRGB decode_image(const std::vector<std::uint8_t>& bytes) {
    Header h = parse_header(bytes);
    ImageRGB img(h.width, h.height);
    if (h.magic == '6') {
        check_payload(bytes, h, 3);
        std::memcpy(img.data.data(), bytes.data() + h.payload_offset, img.data.size());
    } else {
        check_payload(bytes, h, 1);
        const std::uint8_t* p = bytes.data() + h.payload_offset;
        for (std::size_t i = 0, n = static_cast<std::size_t>(h.width) * h.height; i < n; ++i) {
            img.data[i * 3] = img.data[i * 3 + 1] = img.data[i * 3 + 2] = p[i];
        }
    }
    return img;
}

GrayImage decode_gray(const std::vector<std::uint8_t>& bytes) {
    Header h = parse_header(bytes);
    if (h.magic != '5') throw DecodeError("PNM header: expected P5 for gray image");
    check_payload(bytes, h, 1);
    GrayImage img(h.width, h.height);
    std::memcpy(img.data.data(), bytes.data() + h.payload_offset, img.data.size());
    return img;
}

BinaryMask decode_mask(const std::vector<std::uint8_t>& bytes) {
    GrayImage g = decode_gray(bytes);
    BinaryMask m(g.width, g.height);
    for (std::size_t i = 0; i < g.data.size(); ++i) m.bits[i] = g.data[i] != 0;
    return m;
}

std::vector<std::uint8_t> encode_ppm(const ImageRGB& img) {
    auto out = header_bytes('6', img.width, img.height);
    out.insert(out.end(), img.data.begin(), img.data.end());
    return out;
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
    auto out = header_bytes('5', img.width, img.height);
    out.insert(out.end(), img.data.begin(), img.data.end());
    return out;
}

std::vector<std::uint8_t> encode_pgm(const BinaryMask& mask) {
    auto out = header_bytes('5', mask.width, mask.height);
    out.reserve(out.size() + mask.bits.size());
    for (auto b : mask.bits) out.push_back(b ? 255 : 0);
    return out;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw DecodeError("cannot open file: " + path);
    std::fseek(f, 0, SEEK_END);
    long size = std::ftell(f);
    std::fseek(f, 0, SEEK_SET);
    std::vector<std::uint8_t> bytes(size > 0 ? static_cast<std::size_t>(size) : 0);
    if (!bytes.empty() && std::fread(bytes.data(), 1, bytes.size(), f) != bytes.size()) {
        std::fclose(f);
        throw DecodeError("short read: " + path);
    }
    std::fclose(f);
    return bytes;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw Error("cannot open file for writing: " + path);
    if (!bytes.empty() && std::fwrite(bytes.data(), 1, bytes.size(), f) != bytes.size()) {
        std::fclose(f);
        throw Error("short write: " + path);
    }
    std::fclose(f);
}

ImageRGB load_image(const std::string& path) { return decode_image(read_file(path)); }
GrayImage load_gray(const std::string& path) { return decode_gray(read_file(path)); }
BinaryMask load_mask(const std::string& path) { return decode_mask(read_file(path)); }
void save_ppm(const std::string& path, const ImageRGB& img) { write_file(path, encode_ppm(img)); }
void save_pgm(const std::string& path, const GrayImage& img) { write_file(path, encode_pgm(img)); }
void save_pgm(const std::string& path, const BinaryMask& mask) { write_file(path, encode_pgm(mask)); }

}  // namespace handdigit
