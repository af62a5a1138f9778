#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "modcrack/errors.hpp"
#include "modcrack/mod_image.hpp"

namespace modcrack {

namespace detail {

// Reads one whitespace-delimited PGM header token, skipping '#' comments.
inline std::string pnm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) continue;
    tok.push_back(char(c));
    while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#')
      tok.push_back(char(in.get()));
    return tok;
  }
  throw format_error("unexpected end of PGM header");
}

inline std::uint64_t pnm_number(std::istream& in) {
  const std::string tok = pnm_token(in);
  try {
    return std::stoull(tok);
  } catch (const std::exception&) {
    throw format_error("non-numeric PGM header field: " + tok);
  }
}

}  // namespace detail

// Binary PGM (P5). maxval 255 maps to modulus 256, maxval 65535 to 65536;
// 16-bit samples are big-endian per the netpbm convention.
inline ModImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("cannot open image: " + path);
  if (detail::pnm_token(in) != "P5") throw format_error("not a P5 PGM file");
  const std::uint64_t w = detail::pnm_number(in);
  const std::uint64_t h = detail::pnm_number(in);
  const std::uint64_t maxval = detail::pnm_number(in);
  in.get();  // single whitespace before the raster
  if (maxval != 255 && maxval != 65535)
    throw format_error("PGM maxval must be 255 or 65535");
  if (h == 0 || w == 0 || h > 0xffffffffull || w > 0xffffffffull)
    throw format_error("bad PGM dimensions");

  const std::uint32_t g = maxval == 255 ? 256 : 65536;
  const std::size_t n = std::size_t(h) * std::size_t(w);
  std::vector<std::uint32_t> px(n);
  if (maxval == 255) {
    std::vector<std::uint8_t> raw(n);
    in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(n));
    if (std::size_t(in.gcount()) != n) throw format_error("truncated PGM raster");
    for (std::size_t i = 0; i < n; ++i) px[i] = raw[i];
  } else {
    std::vector<std::uint8_t> raw(2 * n);
    in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(2 * n));
    if (std::size_t(in.gcount()) != 2 * n) throw format_error("truncated PGM raster");
    for (std::size_t i = 0; i < n; ++i)
      px[i] = std::uint32_t(raw[2 * i]) << 8 | raw[2 * i + 1];
  }
  return ModImage(std::move(px), std::uint32_t(h), std::uint32_t(w), g);
}

inline void write_pgm(const ModImage& m, const std::string& path) {
  if (m.modulus != 256 && m.modulus != 65536)
    throw format_error("PGM carries modulus 256 or 65536 only");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw format_error("cannot write image: " + path);
  const std::uint32_t maxval = m.modulus - 1;
  out << "P5\n" << m.width << " " << m.height << "\n" << maxval << "\n";
  if (m.modulus == 256) {
    std::vector<std::uint8_t> raw(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) raw[i] = std::uint8_t(m.pixels[i]);
    out.write(reinterpret_cast<const char*>(raw.data()), std::streamsize(raw.size()));
  } else {
    std::vector<std::uint8_t> raw(2 * m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      raw[2 * i] = std::uint8_t(m.pixels[i] >> 8);
      raw[2 * i + 1] = std::uint8_t(m.pixels[i]);
    }
    out.write(reinterpret_cast<const char*>(raw.data()), std::streamsize(raw.size()));
  }
  if (!out) throw format_error("short write: " + path);
}

// Headerless raster: little-endian samples, one byte for depth 8, two bytes
// for depth 16. Dimensions come from the caller.
inline ModImage read_raw(const std::string& path, std::uint32_t h, std::uint32_t w,
                         std::uint32_t depth_bits) {
  if (depth_bits != 8 && depth_bits != 16) throw format_error("depth must be 8 or 16");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("cannot open image: " + path);
  const std::size_t n = std::size_t(h) * w;
  const std::size_t bytes = depth_bits == 8 ? n : 2 * n;
  std::vector<std::uint8_t> raw(bytes);
  in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(bytes));
  if (std::size_t(in.gcount()) != bytes)
    throw format_error("raw file shorter than height*width samples");
  std::vector<std::uint32_t> px(n);
  for (std::size_t i = 0; i < n; ++i)
    px[i] = depth_bits == 8 ? raw[i]
                            : std::uint32_t(raw[2 * i]) | std::uint32_t(raw[2 * i + 1]) << 8;
  return ModImage(std::move(px), h, w, depth_bits == 8 ? 256 : 65536);
}

inline void write_raw(const ModImage& m, const std::string& path) {
  if (m.modulus != 256 && m.modulus != 65536)
    throw format_error("raw format carries modulus 256 or 65536 only");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw format_error("cannot write image: " + path);
  if (m.modulus == 256) {
    std::vector<std::uint8_t> raw(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) raw[i] = std::uint8_t(m.pixels[i]);
    out.write(reinterpret_cast<const char*>(raw.data()), std::streamsize(raw.size()));
  } else {
    std::vector<std::uint8_t> raw(2 * m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      raw[2 * i] = std::uint8_t(m.pixels[i]);
      raw[2 * i + 1] = std::uint8_t(m.pixels[i] >> 8);
    }
    out.write(reinterpret_cast<const char*>(raw.data()), std::streamsize(raw.size()));
  }
  if (!out) throw format_error("short write: " + path);
}

// Decimal residues, row-major, one image row per line, comma separated.
inline ModImage read_csv(const std::string& path, std::uint32_t modulus) {
  std::ifstream in(path);
  if (!in) throw format_error("cannot open image: " + path);
  std::vector<std::uint32_t> px;
  std::string line;
  std::uint32_t rows = 0;
  std::uint64_t cols = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
    std::uint64_t row_cols = 0;
    std::istringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      if (field.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::uint64_t v = 0;
      try {
        v = std::stoull(field);
      } catch (const std::exception&) {
        throw format_error("non-numeric CSV field: " + field);
      }
      if (v >= modulus) throw format_error("CSV value out of range for modulus");
      px.push_back(std::uint32_t(v));
      ++row_cols;
    }
    if (cols == 0)
      cols = row_cols;
    else if (row_cols != cols)
      throw format_error("CSV rows have inconsistent lengths");
    ++rows;
  }
  if (rows == 0 || cols == 0) throw format_error("CSV file holds no samples");
  return ModImage(std::move(px), rows, std::uint32_t(cols), modulus);
}

inline void write_csv(const ModImage& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw format_error("cannot write image: " + path);
  for (std::uint32_t r = 0; r < m.height; ++r) {
    for (std::uint32_t c = 0; c < m.width; ++c) {
      if (c) out << ",";
      out << m.pixels[std::size_t(r) * m.width + c];
    }
    out << "\n";
  }
  if (!out) throw format_error("short write: " + path);
}

}  // namespace modcrack
