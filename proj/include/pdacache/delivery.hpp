#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pdacache/errors.hpp"
#include "pdacache/pda.hpp"
#include "pdacache/rate.hpp"

namespace pdacache {

inline constexpr std::uint64_t kDefaultLibraryByteBudget = std::uint64_t{1} << 30;

// N files, each split into F subfiles of B bytes, stored file-major.
struct Library {
  std::size_t num_files = 0;
  std::size_t subfiles_per_file = 0;
  std::size_t subfile_bytes = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> content;

  std::span<const std::uint8_t> subfile(std::size_t file, std::size_t row) const {
    return {content.data() + (file * subfiles_per_file + row) * subfile_bytes, subfile_bytes};
  }
  std::span<const std::uint8_t> file(std::size_t n) const {
    return {content.data() + n * subfiles_per_file * subfile_bytes, subfiles_per_file * subfile_bytes};
  }
};

inline Library generate_library(std::size_t num_files, std::size_t subfiles, std::size_t subfile_bytes,
                                std::uint64_t seed, std::uint64_t byte_budget = kDefaultLibraryByteBudget) {
  if (num_files < 1 || subfiles < 1 || subfile_bytes < 1)
    throw std::invalid_argument("library dimensions must be positive");
  const std::uint64_t bytes = detail::mul_sat(detail::mul_sat(num_files, subfiles), subfile_bytes);
  if (bytes > byte_budget) throw BudgetExceeded("library of " + std::to_string(bytes) + " bytes exceeds budget");

  Library lib{num_files, subfiles, subfile_bytes, seed, std::vector<std::uint8_t>(bytes)};
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < bytes; i += 8) {
    std::uint64_t word = rng();
    for (std::size_t b = 0; b < 8 && i + b < bytes; ++b, word >>= 8) lib.content[i + b] = static_cast<std::uint8_t>(word);
  }
  return lib;
}

// star_rows[cache]: subfile indices stored in that cache, for every file.
struct Placement {
  std::vector<std::vector<std::size_t>> star_rows;

  double fraction(std::size_t cache, std::size_t rows) const {
    return static_cast<double>(star_rows[cache].size()) / static_cast<double>(rows);
  }
};

inline Placement place(const Pda& pda) {
  Placement p;
  for (std::size_t c = 0; c < pda.columns(); ++c) p.star_rows.push_back(pda.star_rows(c));
  return p;
}

// Per cache of the GPDA; caches without users keep an empty row set.
inline Placement place(const GeneralizedPda& g) {
  Placement p;
  p.star_rows.resize(g.cache_count());
  std::vector<bool> done(g.cache_count(), false);
  for (std::size_t k = 0; k < g.columns(); ++k) {
    const std::size_t cache = g.user_to_cache()[k];
    if (done[cache]) continue;
    done[cache] = true;
    for (std::size_t r = 0; r < g.rows(); ++r)
      if (g.at(r, k).is_star()) p.star_rows[cache].push_back(r);
  }
  return p;
}

// Bytes physically held by one cache: every file's subfiles at its star rows.
class CacheContents {
 public:
  CacheContents(const Placement& placement, const Library& lib, std::size_t cache)
      : rows_(placement.star_rows.at(cache)), num_files_(lib.num_files), bytes_(lib.subfile_bytes) {
    data_.reserve(rows_.size() * num_files_ * bytes_);
    for (std::size_t row : rows_) {
      for (std::size_t n = 0; n < num_files_; ++n) {
        auto sub = lib.subfile(n, row);
        data_.insert(data_.end(), sub.begin(), sub.end());
      }
    }
  }

  std::optional<std::span<const std::uint8_t>> subfile(std::size_t file, std::size_t row) const {
    auto it = std::lower_bound(rows_.begin(), rows_.end(), row);
    if (it == rows_.end() || *it != row || file >= num_files_) return std::nullopt;
    const std::size_t slot = static_cast<std::size_t>(it - rows_.begin());
    return std::span<const std::uint8_t>(data_.data() + (slot * num_files_ + file) * bytes_, bytes_);
  }

  std::size_t subfile_bytes() const { return bytes_; }

 private:
  std::vector<std::size_t> rows_;
  std::size_t num_files_;
  std::size_t bytes_;
  std::vector<std::uint8_t> data_;
};

struct Tag {
  SymbolId symbol;
  std::uint32_t replica;
  friend auto operator<=>(const Tag&, const Tag&) = default;
};

struct Term {
  std::size_t user;
  std::size_t row;
  std::size_t file;
};

// One multicast message: XOR of W^{d_user}_row over its terms.
struct Transmission {
  Tag tag;
  std::vector<Term> terms;
  std::vector<std::uint8_t> payload;
};

enum class DecodeStatus { Pending, Success, Mismatch, Failed };

struct DeliveryRun {
  std::vector<Transmission> transmissions;  // ascending by tag
  std::vector<std::size_t> demand;
  LoadValue measured_load;
  std::vector<DecodeStatus> status;

  const Transmission* find(Tag tag) const {
    auto it = std::lower_bound(transmissions.begin(), transmissions.end(), tag,
                               [](const Transmission& t, Tag x) { return t.tag < x; });
    return it != transmissions.end() && it->tag == tag ? &*it : nullptr;
  }

  bool all_decoded() const {
    return std::all_of(status.begin(), status.end(), [](DecodeStatus s) { return s == DecodeStatus::Success; });
  }
};

inline void xor_into(std::span<std::uint8_t> acc, std::span<const std::uint8_t> x) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] ^= x[i];
}

// Worst-case delivery: one message per distinct (s, i), whatever the demand.
inline DeliveryRun deliver(const GeneralizedPda& g, const Library& lib, std::span<const std::size_t> demand) {
  if (demand.size() != g.columns())
    throw DimensionMismatch("demand has " + std::to_string(demand.size()) + " entries, expected " +
                            std::to_string(g.columns()));
  if (lib.subfiles_per_file != g.rows()) throw DimensionMismatch("library subpacketization differs from F");
  for (std::size_t k = 0; k < demand.size(); ++k) {
    if (demand[k] >= lib.num_files)
      throw std::out_of_range("user " + std::to_string(k + 1) + " demands file " + std::to_string(demand[k] + 1) +
                              " of " + std::to_string(lib.num_files));
  }

  std::map<Tag, std::vector<Term>> groups;
  for (std::size_t r = 0; r < g.rows(); ++r) {
    for (std::size_t k = 0; k < g.columns(); ++k) {
      const GCell cell = g.at(r, k);
      if (!cell.is_star()) groups[Tag{cell.symbol(), cell.replica()}].push_back({k, r, demand[k]});
    }
  }

  DeliveryRun run;
  run.demand.assign(demand.begin(), demand.end());
  for (auto& [tag, terms] : groups) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.user < b.user; });
    Transmission t{tag, std::move(terms), std::vector<std::uint8_t>(lib.subfile_bytes, 0)};
    for (const Term& term : t.terms) xor_into(t.payload, lib.subfile(term.file, term.row));
    run.transmissions.push_back(std::move(t));
  }
  run.measured_load = LoadValue{run.transmissions.size(), g.rows()};
  run.status.assign(g.columns(), DecodeStatus::Pending);
  return run;
}

// Rebuilds user k's file from its cache, the payloads and the GPDA layout.
// Every other term of a message must sit at one of the user's star rows.
inline std::vector<std::uint8_t> decode(const DeliveryRun& run, const GeneralizedPda& g, const CacheContents& cache,
                                        std::size_t user) {
  const std::size_t bytes = cache.subfile_bytes();
  const std::size_t want = run.demand.at(user);
  std::vector<std::uint8_t> out(g.rows() * bytes);
  for (std::size_t r = 0; r < g.rows(); ++r) {
    std::span<std::uint8_t> dst(out.data() + r * bytes, bytes);
    const GCell cell = g.at(r, user);
    if (cell.is_star()) {
      auto held = cache.subfile(want, r);
      if (!held) throw DecodeError("user " + std::to_string(user + 1) + " lacks cached row " + std::to_string(r + 1));
      std::copy(held->begin(), held->end(), dst.begin());
      continue;
    }
    const Transmission* t = run.find(Tag{cell.symbol(), cell.replica()});
    if (t == nullptr) throw DecodeError("no message for a required tag");
    std::copy(t->payload.begin(), t->payload.end(), dst.begin());
    for (const Term& term : t->terms) {
      if (term.user == user && term.row == r) continue;
      auto side = cache.subfile(term.file, term.row);
      if (!side) {
        throw DecodeError("user " + std::to_string(user + 1) + " cannot cancel row " + std::to_string(term.row + 1) +
                          " of file " + std::to_string(term.file + 1));
      }
      xor_into(dst, *side);
    }
  }
  return out;
}

// XOR of a payload with all but one term gives back that term.
inline bool payload_identity_holds(const Transmission& t, const Library& lib) {
  for (std::size_t skip = 0; skip < t.terms.size(); ++skip) {
    std::vector<std::uint8_t> acc = t.payload;
    for (std::size_t i = 0; i < t.terms.size(); ++i)
      if (i != skip) xor_into(acc, lib.subfile(t.terms[i].file, t.terms[i].row));
    auto expect = lib.subfile(t.terms[skip].file, t.terms[skip].row);
    if (!std::equal(acc.begin(), acc.end(), expect.begin())) return false;
  }
  return true;
}

struct SimulationOptions {
  bool payload_self_test = false;
};

// deliver + decode for every user, comparing against the library.
inline DeliveryRun simulate(const GeneralizedPda& g, const Library& lib, std::span<const std::size_t> demand,
                            SimulationOptions opts = {}) {
  DeliveryRun run = deliver(g, lib, demand);
  if (opts.payload_self_test) {
    for (const auto& t : run.transmissions)
      if (!payload_identity_holds(t, lib)) throw std::logic_error("payload XOR identity failed");
  }
  const Placement placement = place(g);
  std::vector<std::optional<CacheContents>> caches(g.cache_count());
  for (std::size_t k = 0; k < g.columns(); ++k) {
    const std::size_t c = g.user_to_cache()[k];
    if (!caches[c]) caches[c].emplace(placement, lib, c);
    try {
      const auto got = decode(run, g, *caches[c], k);
      const auto expect = lib.file(run.demand[k]);
      run.status[k] = std::equal(got.begin(), got.end(), expect.begin(), expect.end()) ? DecodeStatus::Success
                                                                                         : DecodeStatus::Mismatch;
    } catch (const DecodeError&) {
      run.status[k] = DecodeStatus::Failed;
    }
  }
  return run;
}

inline std::vector<std::size_t> identity_demand(std::size_t users, std::size_t num_files) {
  std::vector<std::size_t> d(users);
  for (std::size_t k = 0; k < users; ++k) d[k] = k % num_files;
  return d;
}

inline std::vector<std::size_t> random_demand(std::size_t users, std::size_t num_files, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, num_files - 1);
  std::vector<std::size_t> d(users);
  for (auto& x : d) x = pick(rng);
  return d;
}

}  // namespace pdacache
