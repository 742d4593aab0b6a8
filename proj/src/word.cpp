#include "freemetric/word.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

#include "freemetric/errors.hpp"

namespace fm {

namespace {

bool valid_name(std::string_view name) {
  if (name.empty() || !(name[0] >= 'a' && name[0] <= 'z')) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

void check_range(const Basis& basis, std::span<const Letter> letters) {
  for (Letter l : letters) {
    if (l.gen() >= basis.rank()) {
      throw DomainError("generator index " + std::to_string(l.gen()) +
                        " outside basis of rank " + std::to_string(basis.rank()));
    }
  }
}

void require_same_basis(const Word& u, const Word& v) {
  if (!same_basis(u.basis(), v.basis())) throw DomainError("basis mismatch");
}

}  // namespace

BasisPtr Basis::make(std::vector<std::string> names) {
  if (names.empty()) throw DomainError("empty basis");
  if (names.size() > kMaxRank) throw DomainError("basis too large");
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!valid_name(names[i])) throw DomainError("invalid generator name '" + names[i] + "'");
    for (std::size_t j = 0; j < i; ++j) {
      if (names[i] == names[j]) throw DomainError("duplicate generator name '" + names[i] + "'");
    }
  }
  return BasisPtr(new Basis(std::move(names)));
}

BasisPtr Basis::parse(std::string_view list) {
  std::vector<std::string> names;
  std::string current;
  for (char c : list) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) names.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) names.push_back(std::move(current));
  return make(std::move(names));
}

std::optional<std::size_t> Basis::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

bool same_basis(const BasisPtr& lhs, const BasisPtr& rhs) {
  return lhs == rhs || (lhs && rhs && *lhs == *rhs);
}

void append_reduced(std::vector<Letter>& acc, std::span<const Letter> tail) {
  for (Letter l : tail) {
    if (!acc.empty() && acc.back().cancels(l)) {
      acc.pop_back();
    } else {
      acc.push_back(l);
    }
  }
}

void append_inverse_reduced(std::vector<Letter>& acc, std::span<const Letter> tail) {
  for (auto it = tail.rbegin(); it != tail.rend(); ++it) {
    Letter l = it->inverse();
    if (!acc.empty() && acc.back().cancels(l)) {
      acc.pop_back();
    } else {
      acc.push_back(l);
    }
  }
}

std::size_t common_prefix_length(std::span<const Letter> u, std::span<const Letter> v) {
  const std::size_t n = std::min(u.size(), v.size());
  std::size_t i = 0;
  while (i < n && u[i] == v[i]) ++i;
  return i;
}

Word::Word(BasisPtr basis) : basis_(std::move(basis)) {
  if (!basis_) throw DomainError("null basis");
}

Word::Word(BasisPtr basis, std::span<const Letter> raw) : Word(std::move(basis)) {
  check_range(*basis_, raw);
  letters_.reserve(raw.size());
  append_reduced(letters_, raw);
}

Word Word::generator(BasisPtr basis, std::size_t gen, int sign) {
  Letter l = Letter::make(gen, sign);
  return Word(std::move(basis), std::span<const Letter>(&l, 1));
}

Word Word::from_reduced(BasisPtr basis, std::vector<Letter> letters) {
  Word w(std::move(basis));
  w.letters_ = std::move(letters);
  return w;
}

bool operator==(const Word& lhs, const Word& rhs) {
  return lhs.letters_ == rhs.letters_ && same_basis(lhs.basis_, rhs.basis_);
}

std::strong_ordering operator<=>(const Word& lhs, const Word& rhs) {
  if (auto c = lhs.size() <=> rhs.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(lhs.letters_.begin(), lhs.letters_.end(),
                                                rhs.letters_.begin(), rhs.letters_.end());
}

std::uint64_t hash_letters(std::span<const Letter> letters) {
  std::uint64_t h = 0xcbf29ce484222325ull ^ letters.size();
  for (Letter l : letters) {
    h ^= l.code;
    h *= 0x100000001b3ull;
    h ^= h >> 29;
  }
  return h;
}

std::size_t WordHash::operator()(const Word& w) const {
  return static_cast<std::size_t>(hash_letters(w.letters()));
}

Word reduce(const BasisPtr& basis, std::span<const Letter> raw) { return Word(basis, raw); }

Word multiply(const Word& u, const Word& v) {
  require_same_basis(u, v);
  std::vector<Letter> acc;
  acc.reserve(u.size() + v.size());
  acc.assign(u.letters().begin(), u.letters().end());
  append_reduced(acc, v.letters());
  return Word::from_reduced(u.basis(), std::move(acc));
}

Word operator*(const Word& u, const Word& v) { return multiply(u, v); }

Word invert(const Word& u) {
  std::vector<Letter> acc;
  acc.reserve(u.size());
  for (auto it = u.letters().rbegin(); it != u.letters().rend(); ++it) {
    acc.push_back(it->inverse());
  }
  return Word::from_reduced(u.basis(), std::move(acc));
}

Word power(const Word& u, long long exponent) {
  const Word base = exponent < 0 ? invert(u) : u;
  const unsigned long long n = exponent < 0 ? 0ull - static_cast<unsigned long long>(exponent)
                                            : static_cast<unsigned long long>(exponent);
  std::vector<Letter> acc;
  for (unsigned long long i = 0; i < n; ++i) append_reduced(acc, base.letters());
  return Word::from_reduced(u.basis(), std::move(acc));
}

Word reversal(const Word& u) {
  std::vector<Letter> acc(u.letters().rbegin(), u.letters().rend());
  return Word::from_reduced(u.basis(), std::move(acc));
}

Word conjugate(const Word& u, const Word& x) { return invert(x) * u * x; }

CyclicReduction cyclic_reduce(const Word& u) {
  auto letters = u.letters();
  std::size_t i = 0;
  std::size_t j = letters.size();
  while (j - i >= 2 && letters[i].cancels(letters[j - 1])) {
    ++i;
    --j;
  }
  std::vector<Letter> core(letters.begin() + static_cast<std::ptrdiff_t>(i),
                           letters.begin() + static_cast<std::ptrdiff_t>(j));
  std::vector<Letter> conj(letters.begin() + static_cast<std::ptrdiff_t>(j), letters.end());
  return {Word::from_reduced(u.basis(), std::move(core)),
          Word::from_reduced(u.basis(), std::move(conj))};
}

std::size_t cyclic_length(const Word& u) {
  auto letters = u.letters();
  std::size_t i = 0;
  std::size_t j = letters.size();
  while (j - i >= 2 && letters[i].cancels(letters[j - 1])) {
    ++i;
    --j;
  }
  return j - i;
}

Word common_prefix(const Word& u, const Word& v) {
  const std::size_t k = common_prefix_length(u.letters(), v.letters());
  return Word::from_reduced(u.basis(), std::vector<Letter>(u.letters().begin(),
                                                           u.letters().begin() + static_cast<std::ptrdiff_t>(k)));
}

std::size_t least_rotation(std::span<const Letter> s) {
  const std::size_t n = s.size();
  std::size_t i = 0;
  std::size_t j = 1;
  std::size_t k = 0;
  while (i < n && j < n && k < n) {
    const Letter a = s[(i + k) % n];
    const Letter b = s[(j + k) % n];
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b) {
      i += k + 1;
    } else {
      j += k + 1;
    }
    if (i == j) ++j;
    k = 0;
  }
  return n == 0 ? 0 : std::min(i, j);
}

bool is_conjugate(const Word& u, const Word& v) {
  if (!same_basis(u.basis(), v.basis())) throw DomainError("basis mismatch");
  const Word cu = cyclic_reduce(u).core;
  const Word cv = cyclic_reduce(v).core;
  if (cu.size() != cv.size()) return false;
  const std::size_t n = cu.size();
  if (n == 0) return true;
  const std::size_t ru = least_rotation(cu.letters());
  const std::size_t rv = least_rotation(cv.letters());
  for (std::size_t i = 0; i < n; ++i) {
    if (cu[(ru + i) % n] != cv[(rv + i) % n]) return false;
  }
  return true;
}

std::vector<Word> ball(const BasisPtr& basis, unsigned radius) {
  std::vector<Word> out;
  out.emplace_back(basis);
  std::size_t layer_begin = 0;
  const std::size_t alphabet = 2 * basis->rank();
  for (unsigned r = 0; r < radius; ++r) {
    const std::size_t layer_end = out.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (std::size_t c = 0; c < alphabet; ++c) {
        const Letter l{static_cast<std::uint16_t>(c)};
        const auto letters = out[i].letters();
        if (!letters.empty() && letters.back().cancels(l)) continue;
        std::vector<Letter> next(letters.begin(), letters.end());
        next.push_back(l);
        out.push_back(Word::from_reduced(basis, std::move(next)));
      }
    }
    layer_begin = layer_end;
  }
  return out;
}

std::uint64_t ball_size(std::size_t rank, unsigned radius) {
  std::uint64_t total = 1;
  std::uint64_t layer = 1;
  for (unsigned r = 1; r <= radius; ++r) {
    layer = (r == 1) ? 2 * rank : layer * (2 * rank - 1);
    total += layer;
  }
  return total;
}

Word parse_word(const BasisPtr& basis, std::string_view text) {
  std::vector<Letter> raw;
  std::size_t pos = 0;
  auto is_sep = [](char c) { return c == '*' || std::isspace(static_cast<unsigned char>(c)); };
  while (pos < text.size()) {
    while (pos < text.size() && is_sep(text[pos])) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && !is_sep(text[end])) ++end;
    std::string_view token = text.substr(pos, end - pos);
    pos = end;

    if (token == "1") continue;
    std::string_view name = token;
    long long exponent = 1;
    if (auto caret = token.find('^'); caret != std::string_view::npos) {
      name = token.substr(0, caret);
      std::string_view digits = token.substr(caret + 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), exponent);
      if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
        throw ParseError("bad exponent in token '" + std::string(token) + "'");
      }
    }
    if (!valid_name(name)) throw ParseError("bad token '" + std::string(token) + "'");
    auto gen = basis->find(name);
    if (!gen) throw DomainError("unknown generator '" + std::string(name) + "'");
    const Letter l = Letter::make(*gen, exponent < 0 ? -1 : 1);
    const unsigned long long count =
        exponent < 0 ? 0ull - static_cast<unsigned long long>(exponent) : static_cast<unsigned long long>(exponent);
    if (count > (1ull << 31)) throw ParseError("exponent too large in '" + std::string(token) + "'");
    raw.insert(raw.end(), count, l);
  }
  return Word(basis, raw);
}

std::string format_letter(const Basis& basis, Letter l) {
  return l.sign() > 0 ? basis.name(l.gen()) : basis.name(l.gen()) + "^-1";
}

std::string format_word(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  const auto letters = w.letters();
  std::size_t i = 0;
  while (i < letters.size()) {
    std::size_t j = i;
    while (j < letters.size() && letters[j] == letters[i]) ++j;
    const long long run = static_cast<long long>(j - i) * letters[i].sign();
    if (!out.empty()) out.push_back(' ');
    out += w.basis()->name(letters[i].gen());
    if (run != 1) {
      out.push_back('^');
      out += std::to_string(run);
    }
    i = j;
  }
  return out;
}

}  // namespace fm
