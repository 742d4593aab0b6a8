#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "freemetric/word.hpp"

namespace fm {

/// Deduplicating store of letter sequences. Entries live back to back in one
/// arena and are addressed by insertion index, so a breadth-first search can
/// keep each layer as a contiguous index range.
class WordTable {
 public:
  explicit WordTable(std::size_t expected = 1024);

  struct InsertResult {
    std::uint32_t index;
    bool inserted;
  };

  InsertResult insert(std::span<const Letter> word);
  std::optional<std::uint32_t> find(std::span<const Letter> word) const;
  std::span<const Letter> at(std::uint32_t index) const {
    return {arena_.data() + offsets_[index], arena_.data() + offsets_[index + 1]};
  }
  std::size_t size() const { return hashes_.size(); }
  void clear();

 private:
  std::optional<std::uint32_t> probe(std::span<const Letter> word, std::uint64_t hash,
                                     std::size_t& slot) const;
  void rehash(std::size_t capacity);

  std::vector<Letter> arena_;
  std::vector<std::uint64_t> offsets_;
  std::vector<std::uint64_t> hashes_;
  std::vector<std::uint32_t> slots_;  // entry index + 1; 0 marks an empty slot
  std::size_t mask_ = 0;
};

}  // namespace fm
