#pragma once

#include <string_view>
#include <vector>

namespace focuseval::detail {

/// Splits on spaces, tabs and carriage returns; empty fields are dropped.
inline std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> out;
  auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_sep(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace focuseval::detail
