#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdacache/errors.hpp"

namespace pdacache {

// User-to-cache association profile, kept in non-increasing order.
class Profile {
 public:
  // Loads by sorted position.
  const std::vector<std::uint32_t>& loads() const { return loads_; }
  // Loads as given, indexed by physical cache id.
  const std::vector<std::uint32_t>& raw() const { return raw_; }
  // relabeling()[p] is the physical cache occupying sorted position p.
  const std::vector<std::size_t>& relabeling() const { return relabeling_; }
  // True when the raw input was already non-increasing.
  bool was_sorted() const { return was_sorted_; }

  std::size_t size() const { return loads_.size(); }
  std::uint32_t operator[](std::size_t pos) const { return loads_[pos]; }
  std::uint64_t total_users() const {
    return std::accumulate(loads_.begin(), loads_.end(), std::uint64_t{0});
  }

  friend Profile normalize_profile(std::span<const std::int64_t> raw);

 private:
  std::vector<std::uint32_t> raw_;
  std::vector<std::uint32_t> loads_;
  std::vector<std::size_t> relabeling_;
  bool was_sorted_ = true;
};

// Stable sort into non-increasing order, recording the relabeling.
inline Profile normalize_profile(std::span<const std::int64_t> raw) {
  if (raw.empty()) throw std::invalid_argument("profile is empty");
  Profile p;
  for (std::int64_t v : raw) {
    if (v < 0) throw std::invalid_argument("profile loads must be non-negative");
    if (v > static_cast<std::int64_t>(UINT32_MAX)) throw std::invalid_argument("profile load too large");
    p.raw_.push_back(static_cast<std::uint32_t>(v));
  }
  if (std::all_of(p.raw_.begin(), p.raw_.end(), [](std::uint32_t v) { return v == 0; }))
    throw std::invalid_argument("profile has no users");

  p.relabeling_.resize(p.raw_.size());
  std::iota(p.relabeling_.begin(), p.relabeling_.end(), std::size_t{0});
  std::stable_sort(p.relabeling_.begin(), p.relabeling_.end(),
                   [&p](std::size_t a, std::size_t b) { return p.raw_[a] > p.raw_[b]; });
  for (std::size_t i : p.relabeling_) p.loads_.push_back(p.raw_[i]);
  p.was_sorted_ = std::is_sorted(p.raw_.rbegin(), p.raw_.rend());
  return p;
}

inline Profile normalize_profile(std::initializer_list<std::int64_t> raw) {
  return normalize_profile(std::span<const std::int64_t>(raw.begin(), raw.size()));
}

inline Profile normalize_profile(const std::vector<std::uint32_t>& raw) {
  std::vector<std::int64_t> wide(raw.begin(), raw.end());
  return normalize_profile(std::span<const std::int64_t>(wide));
}

// "5,4,3,2,2,1" -> Profile. Whitespace around tokens is ignored.
inline Profile parse_profile(std::string_view text) {
  std::vector<std::int64_t> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    std::string tok(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      throw FormatError("malformed profile token '" + tok + "'");
    try {
      values.push_back(std::stoll(tok));
    } catch (const std::out_of_range&) {
      throw FormatError("profile token out of range '" + tok + "'");
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return normalize_profile(std::span<const std::int64_t>(values));
}

}  // namespace pdacache
