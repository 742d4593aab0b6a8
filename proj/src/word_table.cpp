#include "freemetric/word_table.hpp"

#include <algorithm>
#include <bit>

#include "freemetric/errors.hpp"

namespace fm {

WordTable::WordTable(std::size_t expected) {
  offsets_.push_back(0);
  rehash(std::bit_ceil(std::max<std::size_t>(16, expected * 2)));
}

void WordTable::clear() {
  arena_.clear();
  offsets_.assign(1, 0);
  hashes_.clear();
  std::fill(slots_.begin(), slots_.end(), 0u);
}

std::optional<std::uint32_t> WordTable::probe(std::span<const Letter> word, std::uint64_t hash,
                                              std::size_t& slot) const {
  slot = static_cast<std::size_t>(hash) & mask_;
  while (slots_[slot] != 0) {
    const std::uint32_t index = slots_[slot] - 1;
    if (hashes_[index] == hash) {
      const auto stored = at(index);
      if (std::equal(stored.begin(), stored.end(), word.begin(), word.end())) return index;
    }
    slot = (slot + 1) & mask_;
  }
  return std::nullopt;
}

std::optional<std::uint32_t> WordTable::find(std::span<const Letter> word) const {
  std::size_t slot = 0;
  return probe(word, hash_letters(word), slot);
}

WordTable::InsertResult WordTable::insert(std::span<const Letter> word) {
  const std::uint64_t hash = hash_letters(word);
  std::size_t slot = 0;
  if (auto found = probe(word, hash, slot)) return {*found, false};
  if (hashes_.size() >= 0xfffffff0u) throw ResourceError("word table full");
  const auto index = static_cast<std::uint32_t>(hashes_.size());
  arena_.insert(arena_.end(), word.begin(), word.end());
  offsets_.push_back(arena_.size());
  hashes_.push_back(hash);
  slots_[slot] = index + 1;
  if (2 * hashes_.size() > slots_.size()) rehash(slots_.size() * 2);
  return {index, true};
}

void WordTable::rehash(std::size_t capacity) {
  slots_.assign(capacity, 0u);
  mask_ = capacity - 1;
  for (std::uint32_t i = 0; i < hashes_.size(); ++i) {
    std::size_t slot = static_cast<std::size_t>(hashes_[i]) & mask_;
    while (slots_[slot] != 0) slot = (slot + 1) & mask_;
    slots_[slot] = i + 1;
  }
}

}  // namespace fm
