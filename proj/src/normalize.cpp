#include "linklab/normalize.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

#include "linklab/corpus.hpp"
#include "linklab/parallel.hpp"

namespace linklab {
namespace {

// U+00A0 .. U+017F
constexpr std::array<const char*, 0xE0> kFold = {
    // A0
    " ", "", "", "", "", "", "", "", "", "", "", "", "", "", "", "",
    // B0
    "", "", "", "", "", "", "", "", "", "", "", "", "", "", "", "",
    // C0
    "A", "A", "A", "A", "A", "A", "AE", "C", "E", "E", "E", "E", "I", "I", "I", "I",
    // D0
    "D", "N", "O", "O", "O", "O", "O", "", "O", "U", "U", "U", "U", "Y", "TH", "ss",
    // E0
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
    // F0
    "d", "n", "o", "o", "o", "o", "o", "", "o", "u", "u", "u", "u", "y", "th", "y",
    // 100
    "A", "a", "A", "a", "A", "a", "C", "c", "C", "c", "C", "c", "C", "c", "D", "d",
    // 110
    "D", "d", "E", "e", "E", "e", "E", "e", "E", "e", "E", "e", "G", "g", "G", "g",
    // 120
    "G", "g", "G", "g", "H", "h", "H", "h", "I", "i", "I", "i", "I", "i", "I", "i",
    // 130
    "I", "i", "IJ", "ij", "J", "j", "K", "k", "k", "L", "l", "L", "l", "L", "l", "L",
    // 140
    "l", "L", "l", "N", "n", "N", "n", "N", "n", "n", "N", "n", "O", "o", "O", "o",
    // 150
    "O", "o", "OE", "oe", "R", "r", "R", "r", "R", "r", "S", "s", "S", "s", "S", "s",
    // 160
    "S", "s", "T", "t", "T", "t", "T", "t", "U", "u", "U", "u", "U", "u", "U", "u",
    // 170
    "U", "u", "U", "u", "W", "w", "Y", "y", "Y", "Z", "z", "Z", "z", "Z", "z", "s",
};

const char* fold_code_point(std::uint32_t cp) {
  if (cp >= 0xA0 && cp < 0x180) return kFold[cp - 0xA0];
  switch (cp) {
    case 0x218: return "S";
    case 0x219: return "s";
    case 0x21A: return "T";
    case 0x21B: return "t";
    case 0x2010: case 0x2011: case 0x2012: case 0x2013: case 0x2014: case 0x2015:
      return "-";
    case 0x202F:
      return " ";
    default:
      break;
  }
  if (cp >= 0x2000 && cp <= 0x200A) return " ";
  return "";
}

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::size_t count_words(std::string_view s) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : s) {
    bool space = is_ascii_space(c);
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

// Splits on whitespace, '.' and ',' and keeps lowercase letters of each token.
std::vector<std::string> name_tokens(std::string_view folded) {
  std::vector<std::string> out;
  std::string current;
  for (char c : folded) {
    if (is_ascii_space(c) || c == '.' || c == ',') {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else if (is_ascii_alpha(c)) {
      current.push_back(ascii_lower(c));
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::string join(const std::vector<std::string>& tokens, char sep) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(sep);
    out += t;
  }
  return out;
}

}  // namespace

std::string fold_ascii(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
      out.push_back(static_cast<char>(b0));
      ++i;
      continue;
    }
    std::size_t len = (b0 >> 5) == 0x6 ? 2 : (b0 >> 4) == 0xE ? 3 : (b0 >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) {
      ++i;
      continue;
    }
    std::uint32_t cp = len == 2 ? (b0 & 0x1F) : len == 3 ? (b0 & 0x0F) : (b0 & 0x07);
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      auto b = static_cast<unsigned char>(s[i + k]);
      if ((b >> 6) != 0x2) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      ++i;
      continue;
    }
    out += fold_code_point(cp);
    i += len;
  }
  return out;
}

std::string canonical_title_text(std::string_view raw, HyphenPolicy hyphens) {
  std::string folded = fold_ascii(raw);
  std::string out;
  out.reserve(folded.size());
  bool pending_space = false;
  for (char c : folded) {
    if (is_ascii_alpha(c)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(ascii_lower(c));
    } else if (is_ascii_space(c) || (c == '-' && hyphens == HyphenPolicy::split)) {
      pending_space = true;
    }
  }
  return out;
}

std::optional<NormTitle> normalize_title(std::string_view raw, const TitleOptions& options) {
  std::size_t words = count_words(raw);
  if (words < options.min_words) return std::nullopt;
  NormTitle title{canonical_title_text(raw, options.hyphens), words};
  if (title.text.empty()) return std::nullopt;
  return title;
}

std::string PersonName::all_initials() const {
  std::string out;
  out.reserve(forenames.size());
  for (const auto& f : forenames) out.push_back(f.front());
  return out;
}

std::optional<PersonName> parse_name(std::string_view raw) {
  std::string folded = fold_ascii(raw);
  PersonName name;
  name.raw = std::string(raw);
  auto comma = folded.find(',');
  if (comma != std::string::npos) {
    name.surname = join(name_tokens(std::string_view(folded).substr(0, comma)), ' ');
    name.forenames = name_tokens(std::string_view(folded).substr(comma + 1));
  } else {
    auto tokens = name_tokens(folded);
    if (tokens.empty()) return std::nullopt;
    name.surname = std::move(tokens.back());
    tokens.pop_back();
    name.forenames = std::move(tokens);
  }
  if (name.surname.empty()) return std::nullopt;
  return name;
}

std::string BlockKey::to_string() const {
  std::string out = surname;
  out.push_back(',');
  if (first_initial != '\0') out.push_back(first_initial);
  return out;
}

std::string NameKey::to_string() const { return surname + "," + initials; }

BlockKey fini_key(const PersonName& name) {
  return BlockKey{name.surname, name.first_initial().value_or('\0')};
}

NameKey aini_key(const PersonName& name) { return NameKey{name.surname, name.all_initials()}; }

bool fini_match(const BlockKey& a, const BlockKey& b) { return a.keyed() && a == b; }

std::vector<NamedInstance> name_instances(const Corpus& corpus) {
  auto papers = corpus.papers();
  std::vector<std::size_t> offsets(papers.size() + 1, 0);
  for (std::size_t i = 0; i < papers.size(); ++i) {
    offsets[i + 1] = offsets[i] + papers[i].authors.size();
  }
  std::vector<NamedInstance> out(offsets.back());
  parallel_chunks(
      papers.size(),
      [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          const auto& p = papers[i];
          for (std::size_t a = 0; a < p.authors.size(); ++a) {
            out[offsets[i] + a] = NamedInstance{
                InstanceId{p.pmid, static_cast<std::uint32_t>(a + 1)}, parse_name(p.authors[a])};
          }
        }
      },
      256);
  return out;
}

const PersonName* find_name(std::span<const NamedInstance> names, InstanceId id) {
  auto it = std::lower_bound(names.begin(), names.end(), id,
                             [](const NamedInstance& n, InstanceId v) { return n.id < v; });
  if (it == names.end() || it->id != id || !it->name) return nullptr;
  return &*it->name;
}

}  // namespace linklab
