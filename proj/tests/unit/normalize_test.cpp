#include "linklab/normalize.hpp"

#include <random>

#include "doctest.h"
#include "linklab/corpus.hpp"

using namespace linklab;

TEST_CASE("titles under five raw words are rejected") {
  CHECK_FALSE(normalize_title("A four word title").has_value());
  CHECK_FALSE(normalize_title("").has_value());
  CHECK_FALSE(normalize_title("   ").has_value());
  CHECK(normalize_title("one two three four five").has_value());
}

TEST_CASE("title normalization folds, strips and lowercases") {
  auto t = normalize_title("The Rôle of  P53 in Cancer-Risk!");
  REQUIRE(t);
  CHECK(t->text == "the role of p in cancerrisk");
  CHECK(t->word_count_raw == 6);

  auto fixed = normalize_title("alpha beta gamma delta epsilon");
  REQUIRE(fixed);
  CHECK(fixed->text == "alpha beta gamma delta epsilon");
}

TEST_CASE("word filter counts raw tokens before stripping") {
  // Five raw tokens, two of them vanish entirely.
  auto t = normalize_title("Effects of 2010 -- trials");
  REQUIRE(t);
  CHECK(t->text == "effects of trials");
  CHECK_FALSE(normalize_title("123 456 789 000 111").has_value());
}

TEST_CASE("hyphen split policy breaks words") {
  TitleOptions split{HyphenPolicy::split, 5};
  auto t = normalize_title("The Rôle of P53 in Cancer-Risk", split);
  REQUIRE(t);
  CHECK(t->text == "the role of p in cancer risk");
  CHECK(canonical_title_text("a\u2013b", HyphenPolicy::split) == "a b");
  CHECK(canonical_title_text("a\u2013b") == "ab");
}

TEST_CASE("ASCII folding uses the fixed table and drops the rest") {
  CHECK(fold_ascii("López") == "Lopez");
  CHECK(fold_ascii("Müller Øster Łukasz Ærø ß") == "Muller Oster Lukasz AEro ss");
  CHECK(fold_ascii("Ştefan Țepeș") == "Stefan Tepes");
  CHECK(fold_ascii("\xE6\x9D\x8E") == "");          // CJK, not in table
  CHECK(fold_ascii("ab\xFF" "cd") == "abcd");          // malformed byte
  CHECK(fold_ascii("a\xC2\xA0" "b") == "a b");         // no-break space
}

TEST_CASE("canonical title text is idempotent") {
  std::mt19937 rng(3);
  const std::string alphabet = "abcXYZ  -!9éøß\t";
  for (int i = 0; i < 2000; ++i) {
    std::string raw;
    std::size_t len = rng() % 40;
    for (std::size_t k = 0; k < len; ++k) {
      std::size_t pick = rng() % alphabet.size();
      raw += alphabet[pick];
      // keep multi-byte sequences whole
      if (static_cast<unsigned char>(alphabet[pick]) >= 0xC0) raw += alphabet[pick + 1];
    }
    auto once = canonical_title_text(raw);
    CHECK(canonical_title_text(once) == once);
    if (auto t = normalize_title(raw)) {
      if (auto again = normalize_title(t->text)) CHECK(again->text == t->text);
    }
  }
}

TEST_CASE("normalized titles contain only lowercase letters and single spaces") {
  std::mt19937 rng(5);
  for (int i = 0; i < 500; ++i) {
    std::string raw;
    for (int k = 0; k < 60; ++k) raw += static_cast<char>(32 + rng() % 95);
    auto text = canonical_title_text(raw);
    for (std::size_t k = 0; k < text.size(); ++k) {
      char c = text[k];
      CHECK(((c >= 'a' && c <= 'z') || c == ' '));
      if (c == ' ') CHECK((k > 0 && k + 1 < text.size() && text[k + 1] != ' '));
    }
  }
}

TEST_CASE("comma form names") {
  auto n = parse_name("Hertzog, P J");
  REQUIRE(n);
  CHECK(n->surname == "hertzog");
  CHECK(n->forenames == std::vector<std::string>{"p", "j"});
  CHECK(n->first_initial() == 'p');
  CHECK(n->all_initials() == "pj");

  auto prado = parse_name("do Prado, Wagner Luiz");
  REQUIRE(prado);
  CHECK(prado->surname == "do prado");
  CHECK(prado->first_initial() == 'w');
}

TEST_CASE("without a comma the last token is the surname") {
  auto n = parse_name("Wang Wei");
  REQUIRE(n);
  CHECK(n->surname == "wei");
  CHECK(n->forenames == std::vector<std::string>{"wang"});
}

TEST_CASE("empty names are unparseable, mononyms keep a surname") {
  CHECK_FALSE(parse_name("").has_value());
  CHECK_FALSE(parse_name("   ").has_value());
  CHECK_FALSE(parse_name(", J").has_value());
  CHECK_FALSE(parse_name("123").has_value());
  auto mono = parse_name("Madonna");
  REQUIRE(mono);
  CHECK(mono->forenames.empty());
  CHECK_FALSE(mono->first_initial().has_value());
  CHECK_FALSE(fini_key(*mono).keyed());
  CHECK_FALSE(fini_match(fini_key(*mono), fini_key(*mono)));
}

TEST_CASE("name keys") {
  auto ng1 = *parse_name("Ng, Patricia M. L.");
  CHECK(fini_key(ng1) == BlockKey{"ng", 'p'});
  CHECK(aini_key(ng1) == NameKey{"ng", "pml"});
  CHECK(fini_key(ng1).to_string() == "ng,p");
  CHECK(aini_key(ng1).to_string() == "ng,pml");

  auto ng2 = *parse_name("Ng, Miang Lon Patricia");
  CHECK(fini_key(ng2) == BlockKey{"ng", 'm'});

  auto b1 = *parse_name("Brown, C");
  auto b2 = *parse_name("Brown, C. C.");
  CHECK(fini_key(b1) == fini_key(b2));
  CHECK(aini_key(b1) != aini_key(b2));
  CHECK(fini_match(fini_key(b1), fini_key(b2)));
}

TEST_CASE("accents and case do not split keys") {
  CHECK(fini_key(*parse_name("López, José")) == fini_key(*parse_name("LOPEZ, J.")));
}

TEST_CASE("key equality: aini refines fini over random names") {
  std::mt19937 rng(17);
  const char* surnames[] = {"kim", "lee", "park", "wang", "li"};
  const char* letters = "abc";
  for (int i = 0; i < 5000; ++i) {
    auto make = [&] {
      std::string s = surnames[rng() % 5];
      s += ",";
      std::size_t k = 1 + rng() % 3;
      for (std::size_t j = 0; j < k; ++j) {
        s += ' ';
        s += letters[rng() % 3];
        if (rng() % 2) s += "ane";
      }
      return *parse_name(s);
    };
    auto a = make();
    auto b = make();
    CHECK(fini_key(a) == fini_key(PersonName(a)));
    if (aini_key(a) == aini_key(b)) CHECK(fini_key(a) == fini_key(b));
  }
}

TEST_CASE("named instances follow corpus order and resolve by id") {
  Corpus corpus({{2, 2000, "t", {"Kim, J", "!!!"}}, {1, 1999, "t", {"Lee, S"}}});
  auto names = name_instances(corpus);
  REQUIRE(names.size() == 3);
  CHECK(names[0].id == InstanceId{1, 1});
  CHECK(names[2].id == InstanceId{2, 2});
  CHECK_FALSE(names[2].name.has_value());
  REQUIRE(find_name(names, {2, 1}) != nullptr);
  CHECK(find_name(names, {2, 1})->surname == "kim");
  CHECK(find_name(names, {2, 2}) == nullptr);
  CHECK(find_name(names, {3, 1}) == nullptr);
}
