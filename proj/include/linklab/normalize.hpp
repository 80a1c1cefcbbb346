#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "linklab/instance_id.hpp"

namespace linklab {

class Corpus;

// Transliterates UTF-8 to ASCII with a fixed table covering Latin-1 and
// Latin Extended-A. Code points outside the table, and malformed bytes, are
// dropped.
std::string fold_ascii(std::string_view utf8);

// What happens to '-' inside a token: deleted in place ("cancer-risk" ->
// "cancerrisk") or treated as a word break ("cancer risk").
enum class HyphenPolicy { remove, split };

struct TitleOptions {
  HyphenPolicy hyphens = HyphenPolicy::remove;
  std::size_t min_words = 5;
};

struct NormTitle {
  std::string text;             // [a-z]+ words joined by single spaces
  std::size_t word_count_raw = 0;

  friend bool operator==(const NormTitle&, const NormTitle&) = default;
};

// ASCII fold, drop non-letters, lowercase, collapse whitespace. No filter.
std::string canonical_title_text(std::string_view raw, HyphenPolicy hyphens = HyphenPolicy::remove);

// Titles with fewer than `min_words` raw whitespace tokens, or nothing left
// after stripping, are rejected with nullopt.
std::optional<NormTitle> normalize_title(std::string_view raw, const TitleOptions& options = {});

struct PersonName {
  std::string raw;
  std::string surname;                 // lowercase ASCII, tokens joined by ' '
  std::vector<std::string> forenames;  // lowercase ASCII tokens

  std::optional<char> first_initial() const {
    if (forenames.empty()) return std::nullopt;
    return forenames.front().front();
  }
  std::string all_initials() const;

  friend bool operator==(const PersonName&, const PersonName&) = default;
};

// "Surname, Forenames" when a comma is present; otherwise the last token is
// the surname. Tokens split on whitespace and '.', and keep letters only.
// Returns nullopt when no surname survives normalization.
std::optional<PersonName> parse_name(std::string_view raw);

// Full surname + first forename initial. A name without forenames gets the
// sentinel initial '\0' and is "unkeyed": it never matches during linkage.
struct BlockKey {
  std::string surname;
  char first_initial = '\0';

  bool keyed() const { return first_initial != '\0'; }
  std::string to_string() const;  // "surname,i"

  friend auto operator<=>(const BlockKey&, const BlockKey&) = default;
};

// Full surname + all forename initials.
struct NameKey {
  std::string surname;
  std::string initials;

  std::string to_string() const;  // "surname,ijk"

  friend auto operator<=>(const NameKey&, const NameKey&) = default;
};

BlockKey fini_key(const PersonName& name);
NameKey aini_key(const PersonName& name);

// True when both keys carry an initial and are equal.
bool fini_match(const BlockKey& a, const BlockKey& b);

struct NamedInstance {
  InstanceId id;
  std::optional<PersonName> name;  // nullopt when unparseable

  friend bool operator==(const NamedInstance&, const NamedInstance&) = default;
};

// Every byline instance of the corpus with its parsed name, sorted by id.
std::vector<NamedInstance> name_instances(const Corpus& corpus);

// Binary search in a sorted NamedInstance list.
const PersonName* find_name(std::span<const NamedInstance> names, InstanceId id);

}  // namespace linklab
