#pragma once

#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include "focuseval/errors.hpp"
#include "focuseval/text.hpp"

// Shared reader pieces for the text grid formats (SMAP, FMAP):
//   <MAGIC> 1 <W> <H>
//   H lines of W whitespace-separated values

namespace focuseval {

namespace detail {

/// Reads the `<MAGIC> 1 <W> <H>` header line shared by SMAP and FMAP.
inline std::pair<std::size_t, std::size_t> read_grid_header(std::istream& in, std::string_view magic) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("missing header");
  std::istringstream hs(line);
  std::string tag;
  long long version = 0, w = 0, h = 0;
  std::string extra;
  if (!(hs >> tag >> version >> w >> h) || (hs >> extra) || tag != magic || version != 1 || w <= 0 || h <= 0)
    throw FormatError("bad header '" + line + "', expected '" + std::string(magic) + " 1 <W> <H>'");
  return {static_cast<std::size_t>(w), static_cast<std::size_t>(h)};
}

/// Reads H rows of W tokens each, handing every token to `put(row, col, token)`.
template <typename Put>
void read_grid_rows(std::istream& in, std::size_t w, std::size_t h, Put&& put) {
  std::string line;
  for (std::size_t r = 0; r < h; ++r) {
    if (!std::getline(in, line)) throw FormatError("expected " + std::to_string(h) + " rows, got " + std::to_string(r));
    const auto tokens = split_words(line);
    if (tokens.size() != w)
      throw FormatError("row " + std::to_string(r) + " has " + std::to_string(tokens.size()) + " values, expected " +
                        std::to_string(w));
    for (std::size_t c = 0; c < w; ++c) put(r, c, tokens[c]);
  }
  while (std::getline(in, line))
    if (!split_words(line).empty()) throw FormatError("trailing data after " + std::to_string(h) + " rows");
}

}  // namespace detail

}  // namespace focuseval
