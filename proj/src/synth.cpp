#include "linklab/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <unordered_set>

#include "linklab/error.hpp"
#include "linklab/rng.hpp"
#include "linklab/tsv.hpp"

namespace linklab {

namespace {

constexpr std::string_view kConsonants = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";
constexpr std::string_view kParticles[] = {"do", "da", "de", "van", "von", "dos"};

void check_rate(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ConfigError(std::string(name) + " must lie in [0, 1]");
  }
}

template <class Map>
void check_shares(const Map& shares, const char* name) {
  if (shares.empty()) throw ConfigError(std::string(name) + " is empty");
  double total = 0.0;
  for (const auto& [key, share] : shares) {
    if (!(share >= 0.0)) throw ConfigError(std::string(name) + " has a negative share");
    total += share;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError(std::string(name) + " shares must sum to 1");
}

// Largest-remainder apportionment of n items over weights; ties go to the
// lower index.
std::vector<std::size_t> quotas(std::span<const double> weights, std::size_t n) {
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::size_t> out(weights.size());
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t given = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double exact = weights[i] / total * static_cast<double>(n);
    out[i] = static_cast<std::size_t>(std::floor(exact));
    given += out[i];
    rem.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(rem.begin(), rem.end(), [](auto& a, auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; given < n && k < rem.size(); ++k, ++given) ++out[rem[k].second];
  return out;
}

template <class Key>
std::vector<Key> apportion(const std::map<Key, double>& shares, std::size_t n, Rng& rng) {
  std::vector<double> weights;
  for (const auto& [key, w] : shares) weights.push_back(w);
  auto counts = quotas(weights, n);
  std::vector<Key> out;
  out.reserve(n);
  std::size_t i = 0;
  for (const auto& [key, w] : shares) out.insert(out.end(), counts[i++], key);
  rng.shuffle(std::span<Key>(out));
  return out;
}

// k distinct indices of [0, n), in draw order.
std::vector<std::size_t> pick(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  idx.resize(k);
  return idx;
}

std::string syllables(Rng& rng, std::size_t count) {
  std::string s;
  for (std::size_t i = 0; i < count; ++i) {
    s += kConsonants[rng.below(kConsonants.size())];
    s += kVowels[rng.below(kVowels.size())];
  }
  return s;
}

std::string syllables_starting(Rng& rng, std::size_t count, char first) {
  std::string s = syllables(rng, count);
  s[0] = first;
  return s;
}

std::string capitalized(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string render_title(Rng& rng, std::size_t words) {
  std::string t;
  for (std::size_t w = 0; w < words; ++w) {
    if (w) t += ' ';
    t += syllables(rng, 1 + rng.below(4));
  }
  t[0] = static_cast<char>(t[0] - 'a' + 'A');
  return t;
}

std::string title_variant(const std::string& title, Rng& rng) {
  std::string out = title;
  switch (rng.below(3)) {
    case 0:
      for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      break;
    case 1:
      out += ".";
      break;
    default: {
      auto space = out.find(' ');
      out.insert(space, ":");
      break;
    }
  }
  return out;
}

struct AuthorDraft {
  std::string surname;  // lowercase
  std::string given;
  std::string middle;  // may be empty
  char variant_initial = 'x';
  std::size_t leads = 0;
  bool homonym = false;
  std::optional<SynonymType> type;
  std::string particle;
};

std::string primary_form(const AuthorDraft& a) {
  std::string s = capitalized(a.surname) + ", " + capitalized(a.given);
  if (!a.middle.empty()) s += " " + capitalized(a.middle);
  return s;
}

std::string variant_form(const AuthorDraft& a) {
  return primary_form(a) + " " + static_cast<char>(a.variant_initial - 'a' + 'A') + ".";
}

std::string alternate_form(const AuthorDraft& a) {
  switch (*a.type) {
    case SynonymType::surname_variant: {
      std::string s = a.particle + " " + capitalized(a.surname) + ", " + capitalized(a.given);
      if (!a.middle.empty()) s += " " + capitalized(a.middle);
      return s;
    }
    case SynonymType::initial_variant:
      return capitalized(a.surname) + ", " + capitalized(a.middle) + " " + capitalized(a.given);
    case SynonymType::flipped_order:
      return capitalized(a.given) + ", " + capitalized(a.surname);
  }
  return {};
}

std::string key_of(const std::string& surname, char initial) {
  return surname + "," + initial;
}

struct PaperDraft {
  int year = 0;
  std::size_t lead = 0;
  std::vector<std::size_t> byline;  // author indices
  std::size_t order = 0;
};

std::string format_id(const char* pattern, std::size_t value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, value);
  return buf;
}

std::string orcid_like(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0000-0001-%04zu-%04zu", (k / 10000) % 10000, k % 10000);
  return buf;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_authors < 2) throw ConfigError("n_authors must be at least 2");
  for (const auto& m : {papers_per_author, authors_per_paper}) {
    check_shares(m, "count distribution");
    for (const auto& [k, w] : m) {
      if (k < 1) throw ConfigError("count distribution keys must be >= 1");
    }
  }
  check_rate(middle_name_rate, "middle_name_rate");
  check_rate(homonym_rate, "homonym_rate");
  for (const auto& [tag, rate] : homonym_rate_by_ethnicity) {
    check_rate(rate, "homonym_rate_by_ethnicity");
    if (!ethnicity_shares.contains(tag)) {
      throw ConfigError("homonym_rate_by_ethnicity names unknown tag " + tag);
    }
  }
  check_rate(synonym_rate, "synonym_rate");
  check_shares(std::map<int, double>{{0, surname_variant_share},
                                     {1, initial_variant_share},
                                     {2, flipped_order_share}},
               "synonym type");
  check_rate(aini_variant_pair_rate, "aini_variant_pair_rate");
  if (aini_variant_pair_rate > 0.5) throw ConfigError("aini_variant_pair_rate must be <= 0.5");
  check_rate(authority_coverage, "authority_coverage");
  check_rate(registry_year_skew, "registry_year_skew");
  check_rate(grant_coverage, "grant_coverage");
  check_rate(grant_paper_share, "grant_paper_share");
  check_rate(duplicate_title_rate, "duplicate_title_rate");
  if (duplicate_title_rate > 0.5) throw ConfigError("duplicate_title_rate must be <= 0.5");
  check_rate(selfcitation_rate, "selfcitation_rate");
  if (!(citations_per_paper >= 0.0)) throw ConfigError("citations_per_paper must be >= 0");
  if (year_min > year_max) throw ConfigError("year_min exceeds year_max");
  check_shares(ethnicity_shares, "ethnicity_shares");
  check_shares(gender_shares, "gender_shares");
}

nlohmann::ordered_json SynthConfig::to_json() const {
  auto int_map = [](const std::map<int, double>& m) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m) j[std::to_string(k)] = v;
    return j;
  };
  auto str_map = [](const std::map<std::string, double>& m) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m) j[k] = v;
    return j;
  };
  nlohmann::ordered_json j;
  j["n_authors"] = n_authors;
  j["papers_per_author"] = int_map(papers_per_author);
  j["authors_per_paper"] = int_map(authors_per_paper);
  j["middle_name_rate"] = middle_name_rate;
  j["homonym_rate"] = homonym_rate;
  j["homonym_rate_by_ethnicity"] = str_map(homonym_rate_by_ethnicity);
  j["synonym_rate"] = synonym_rate;
  j["surname_variant_share"] = surname_variant_share;
  j["initial_variant_share"] = initial_variant_share;
  j["flipped_order_share"] = flipped_order_share;
  j["aini_variant_pair_rate"] = aini_variant_pair_rate;
  j["authority_coverage"] = authority_coverage;
  j["registry_year_skew"] = registry_year_skew;
  j["grant_coverage"] = grant_coverage;
  j["grant_paper_share"] = grant_paper_share;
  j["duplicate_title_rate"] = duplicate_title_rate;
  j["selfcitation_rate"] = selfcitation_rate;
  j["citations_per_paper"] = citations_per_paper;
  j["year_min"] = year_min;
  j["year_max"] = year_max;
  j["ethnicity_shares"] = str_map(ethnicity_shares);
  j["gender_shares"] = str_map(gender_shares);
  j["seed"] = seed;
  return j;
}

SynthConfig SynthConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("synth config must be a JSON object");
  SynthConfig c;
  auto int_map = [](const nlohmann::json& v) {
    std::map<int, double> m;
    for (const auto& [k, w] : v.items()) {
      try {
        m[std::stoi(k)] = w.get<double>();
      } catch (const std::invalid_argument&) {
        throw ConfigError("count distribution key '" + k + "' is not an integer");
      }
    }
    return m;
  };
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "n_authors") c.n_authors = v.get<std::size_t>();
      else if (key == "papers_per_author") c.papers_per_author = int_map(v);
      else if (key == "authors_per_paper") c.authors_per_paper = int_map(v);
      else if (key == "middle_name_rate") c.middle_name_rate = v.get<double>();
      else if (key == "homonym_rate") c.homonym_rate = v.get<double>();
      else if (key == "homonym_rate_by_ethnicity") c.homonym_rate_by_ethnicity = v.get<std::map<std::string, double>>();
      else if (key == "synonym_rate") c.synonym_rate = v.get<double>();
      else if (key == "surname_variant_share") c.surname_variant_share = v.get<double>();
      else if (key == "initial_variant_share") c.initial_variant_share = v.get<double>();
      else if (key == "flipped_order_share") c.flipped_order_share = v.get<double>();
      else if (key == "aini_variant_pair_rate") c.aini_variant_pair_rate = v.get<double>();
      else if (key == "authority_coverage") c.authority_coverage = v.get<double>();
      else if (key == "registry_year_skew") c.registry_year_skew = v.get<double>();
      else if (key == "grant_coverage") c.grant_coverage = v.get<double>();
      else if (key == "grant_paper_share") c.grant_paper_share = v.get<double>();
      else if (key == "duplicate_title_rate") c.duplicate_title_rate = v.get<double>();
      else if (key == "selfcitation_rate") c.selfcitation_rate = v.get<double>();
      else if (key == "citations_per_paper") c.citations_per_paper = v.get<double>();
      else if (key == "year_min") c.year_min = v.get<int>();
      else if (key == "year_max") c.year_max = v.get<int>();
      else if (key == "ethnicity_shares") c.ethnicity_shares = v.get<std::map<std::string, double>>();
      else if (key == "gender_shares") c.gender_shares = v.get<std::map<std::string, double>>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else throw ConfigError("unknown synth config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad synth config: ") + e.what());
  }
  return c;
}

SynthBundle generate(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const std::size_t n = config.n_authors;

  auto ethnicity = apportion(config.ethnicity_shares, n, rng);
  auto gender = apportion(config.gender_shares, n, rng);
  auto leads = apportion(config.papers_per_author, n, rng);

  // Names. Surnames are unique, so primary keys start out unique.
  std::vector<AuthorDraft> authors(n);
  std::unordered_set<std::string> surnames;
  for (std::size_t a = 0; a < n; ++a) {
    auto& d = authors[a];
    do {
      d.surname = syllables(rng, 3 + rng.below(2));
    } while (!surnames.insert(d.surname).second);
    d.given = syllables(rng, 2);
    if (rng.bernoulli(config.middle_name_rate)) d.middle = syllables(rng, 2);
    d.variant_initial = static_cast<char>('a' + rng.below(26));
    d.leads = static_cast<std::size_t>(leads[a]);
  }

  // Homonym groups within each ethnicity tag.
  SynthGroundTruth gt;
  std::vector<std::vector<std::size_t>> homonym_groups;
  for (const auto& [tag, share] : config.ethnicity_shares) {
    auto it = config.homonym_rate_by_ethnicity.find(tag);
    double rate = it == config.homonym_rate_by_ethnicity.end() ? config.homonym_rate : it->second;
    std::vector<std::size_t> members;
    for (std::size_t a = 0; a < n; ++a) {
      if (ethnicity[a] == tag) members.push_back(a);
    }
    auto h = static_cast<std::size_t>(std::llround(rate * static_cast<double>(members.size())));
    if (h < 2) continue;
    auto chosen = pick(members.size(), h, rng);
    std::vector<std::size_t> group_members;
    for (std::size_t i : chosen) group_members.push_back(members[i]);
    std::sort(group_members.begin(), group_members.end());
    for (std::size_t g = 0; g + 1 < group_members.size(); g += 2) {
      std::vector<std::size_t> group{group_members[g], group_members[g + 1]};
      if (g + 3 == group_members.size()) group.push_back(group_members[g + 2]);
      homonym_groups.push_back(group);
      if (group.size() == 3) break;
    }
  }
  for (const auto& group : homonym_groups) {
    const auto& lead = authors[group.front()];
    std::set<std::string> givens{lead.given};
    for (std::size_t a : group) authors[a].homonym = true;
    for (std::size_t k = 1; k < group.size(); ++k) {
      auto& d = authors[group[k]];
      d.surname = lead.surname;
      do {
        d.given = syllables_starting(rng, 2, lead.given[0]);
      } while (!givens.insert(d.given).second);
    }
  }

  // Papers: each author leads its quota, co-authors drawn uniformly.
  std::vector<double> byline_weights;
  std::vector<int> byline_sizes;
  for (const auto& [k, w] : config.authors_per_paper) {
    byline_sizes.push_back(k);
    byline_weights.push_back(w);
  }
  std::vector<PaperDraft> drafts;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t l = 0; l < authors[a].leads; ++l) {
      PaperDraft p;
      p.year = config.year_min + static_cast<int>(rng.below(
                                     static_cast<std::uint64_t>(config.year_max - config.year_min + 1)));
      p.lead = a;
      auto k = std::min<std::size_t>(static_cast<std::size_t>(byline_sizes[rng.weighted(byline_weights)]), n);
      std::vector<std::size_t> byline{a};
      while (byline.size() < k) {
        std::size_t c = rng.below(n);
        if (std::find(byline.begin(), byline.end(), c) == byline.end()) byline.push_back(c);
      }
      std::swap(byline[0], byline[rng.below(k)]);
      p.byline = std::move(byline);
      p.order = drafts.size();
      drafts.push_back(std::move(p));
    }
  }
  std::stable_sort(drafts.begin(), drafts.end(),
                   [](const PaperDraft& x, const PaperDraft& y) { return x.year < y.year; });
  const std::uint32_t first_pmid = 1000001;

  std::vector<std::vector<InstanceId>> instances(n);
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    for (std::size_t pos = 0; pos < drafts[i].byline.size(); ++pos) {
      instances[drafts[i].byline[pos]].push_back(
          {first_pmid + static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(pos + 1)});
    }
  }

  // Multiform authors, drawn from non-homonyms with at least two instances.
  std::unordered_set<std::string> used_keys;
  for (const auto& d : authors) used_keys.insert(key_of(d.surname, d.given[0]));
  std::vector<std::size_t> eligible;
  for (std::size_t a = 0; a < n; ++a) {
    if (!authors[a].homonym && instances[a].size() >= 2) eligible.push_back(a);
  }
  auto m = static_cast<std::size_t>(std::llround(config.synonym_rate * static_cast<double>(n)));
  if (m > eligible.size()) {
    throw ConfigError("synonym_rate needs " + std::to_string(m) + " multi-instance authors without homonyms, only " +
                      std::to_string(eligible.size()) + " available");
  }
  {
    std::vector<double> type_weights{config.surname_variant_share, config.initial_variant_share,
                                     config.flipped_order_share};
    auto type_counts = quotas(type_weights, m);
    auto chosen = pick(eligible.size(), m, rng);
    std::size_t next = 0;
    const SynonymType types[] = {SynonymType::surname_variant, SynonymType::initial_variant,
                                 SynonymType::flipped_order};
    for (std::size_t t = 0; t < 3; ++t) {
      for (std::size_t c = 0; c < type_counts[t]; ++c) {
        auto& d = authors[eligible[chosen[next++]]];
        d.type = types[t];
        switch (types[t]) {
          case SynonymType::surname_variant:
            d.particle = std::string(kParticles[rng.below(std::size(kParticles))]);
            used_keys.insert(key_of(d.particle + " " + d.surname, d.given[0]));
            break;
          case SynonymType::initial_variant:
            while (d.middle.empty() || d.middle[0] == d.given[0]) d.middle = syllables(rng, 2);
            used_keys.insert(key_of(d.surname, d.middle[0]));
            break;
          case SynonymType::flipped_order:
            d.middle.clear();
            while (used_keys.contains(key_of(d.given, d.surname[0]))) {
              d.given = syllables_starting(rng, 2, d.given[0]);
            }
            used_keys.insert(key_of(d.given, d.surname[0]));
            break;
        }
      }
    }
  }

  // Bylines.
  const double r = config.aini_variant_pair_rate;
  const double q = (1.0 - std::sqrt(1.0 - 2.0 * r)) / 2.0;
  std::vector<std::vector<std::string>> bylines(drafts.size());
  for (std::size_t i = 0; i < drafts.size(); ++i) bylines[i].resize(drafts[i].byline.size());
  std::vector<std::vector<bool>> primary_flag(n);  // per author instance
  for (std::size_t a = 0; a < n; ++a) {
    const auto& d = authors[a];
    primary_flag[a].resize(instances[a].size());
    for (std::size_t j = 0; j < instances[a].size(); ++j) {
      InstanceId id = instances[a][j];
      std::string form;
      bool primary = !(d.type && j % 2 == 1);
      if (!primary) {
        form = alternate_form(d);
      } else if (r > 0.0 && rng.bernoulli(q)) {
        form = variant_form(d);
        ++gt.aini_variant_instances;
      } else {
        form = primary_form(d);
      }
      primary_flag[a][j] = primary;
      bylines[id.pmid - first_pmid][id.position - 1] = std::move(form);
    }
  }

  // Titles, unique after normalization, then planted duplicates.
  std::vector<std::string> titles(drafts.size());
  {
    std::unordered_set<std::string> seen;
    for (auto& t : titles) {
      do {
        t = render_title(rng, 6 + rng.below(7));
      } while (!seen.insert(canonical_title_text(t)).second);
    }
  }
  std::vector<bool> duplicated(drafts.size(), false);
  {
    auto d = static_cast<std::size_t>(
        std::llround(config.duplicate_title_rate * static_cast<double>(drafts.size())));
    auto copies = pick(drafts.size(), d, rng);
    std::vector<bool> is_copy(drafts.size(), false);
    for (std::size_t c : copies) is_copy[c] = true;
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t c : copies) {
      std::size_t src;
      do {
        src = rng.below(drafts.size());
      } while (is_copy[src]);
      titles[c] = title_variant(titles[src], rng);
      groups[src].push_back(c);
    }
    for (auto& [src, cs] : groups) {
      std::vector<std::uint32_t> pmids{first_pmid + static_cast<std::uint32_t>(src)};
      duplicated[src] = true;
      for (std::size_t c : cs) {
        pmids.push_back(first_pmid + static_cast<std::uint32_t>(c));
        duplicated[c] = true;
      }
      std::sort(pmids.begin(), pmids.end());
      gt.duplicate_title_groups.push_back(std::move(pmids));
    }
  }

  SynthBundle bundle;
  bundle.config = config;
  {
    std::vector<PaperRecord> papers;
    papers.reserve(drafts.size());
    for (std::size_t i = 0; i < drafts.size(); ++i) {
      papers.push_back({first_pmid + static_cast<std::uint32_t>(i), drafts[i].year, titles[i],
                        std::move(bylines[i])});
    }
    bundle.corpus = Corpus(std::move(papers));
  }

  // Which authors (by index) sit on each paper, for homonym checks.
  auto has_homonym_partner = [&](std::size_t a, std::uint32_t pmid) {
    if (!authors[a].homonym) return false;
    for (std::size_t b : drafts[pmid - first_pmid].byline) {
      if (b != a && authors[b].surname == authors[a].surname &&
          authors[b].given[0] == authors[a].given[0]) {
        return true;
      }
    }
    return false;
  };

  // Registry and grants.
  std::size_t profile_counter = 0, pi_counter = 0;
  const double year_span = std::max(1, config.year_max - config.year_min);
  gt.authors.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto& d = authors[a];
    auto& sa = gt.authors[a];
    sa.id = format_id("A%06zu", a + 1);
    sa.primary_name = primary_form(d);
    if (d.type) {
      sa.alternate_name = alternate_form(d);
      sa.synonym_type = d.type;
    }
    sa.ethnicity = ethnicity[a];
    sa.gender = gender[a];
    sa.instances = instances[a];

    if (rng.bernoulli(config.authority_coverage)) {
      AuthorityProfile profile;
      profile.authority_id = orcid_like(++profile_counter);
      profile.person_name = sa.primary_name;
      std::vector<std::uint32_t> listed;
      for (InstanceId id : instances[a]) {
        double age = config.year_max - drafts[id.pmid - first_pmid].year;
        if (rng.bernoulli(1.0 - config.registry_year_skew * age / year_span)) {
          listed.push_back(id.pmid);
          profile.work_titles.push_back(titles[id.pmid - first_pmid]);
        }
      }
      if (!profile.work_titles.empty()) {
        std::sort(profile.work_titles.begin(), profile.work_titles.end());
        profile.work_titles.erase(std::unique(profile.work_titles.begin(), profile.work_titles.end()),
                                  profile.work_titles.end());
        sa.authority_id = profile.authority_id;
        for (std::size_t j = 0; j < instances[a].size(); ++j) {
          InstanceId id = instances[a][j];
          if (!std::binary_search(listed.begin(), listed.end(), id.pmid)) continue;
          if (!primary_flag[a][j] || duplicated[id.pmid - first_pmid] || has_homonym_partner(a, id.pmid)) continue;
          gt.authority_labels.push_back({id, {}, profile.authority_id, LabelSource::authority});
        }
        bundle.authority.push_back(std::move(profile));
      }
    }

    if (rng.bernoulli(config.grant_coverage)) {
      GrantRecord grant;
      grant.pi_id = format_id("PI%06zu", ++pi_counter);
      grant.pi_name = sa.primary_name;
      for (InstanceId id : instances[a]) {
        if (rng.bernoulli(config.grant_paper_share)) grant.funded_pmids.push_back(id.pmid);
      }
      if (!grant.funded_pmids.empty()) {
        sa.pi_id = grant.pi_id;
        for (std::size_t j = 0; j < instances[a].size(); ++j) {
          InstanceId id = instances[a][j];
          if (!std::binary_search(grant.funded_pmids.begin(), grant.funded_pmids.end(), id.pmid)) continue;
          if (!primary_flag[a][j] || has_homonym_partner(a, id.pmid)) continue;
          gt.grant_labels.push_back({id, {}, grant.pi_id, LabelSource::grant});
        }
        bundle.grants.push_back(std::move(grant));
      }
    }
  }
  auto by_instance = [](const LabeledInstance& x, const LabeledInstance& y) { return x.instance < y.instance; };
  for (auto* labels : {&gt.authority_labels, &gt.grant_labels}) {
    std::sort(labels->begin(), labels->end(), by_instance);
    for (auto& l : *labels) {
      auto raw = bundle.corpus.name_of(l.instance);
      if (auto parsed = parse_name(*raw)) l.name = std::move(*parsed);
    }
  }

  // Citations: optional self-citation by the lead author plus random ones.
  {
    std::set<CitationEdge> edges;
    const double whole = std::floor(config.citations_per_paper);
    const double frac = config.citations_per_paper - whole;
    for (std::size_t i = 0; i < drafts.size(); ++i) {
      const std::uint32_t pmid = first_pmid + static_cast<std::uint32_t>(i);
      const auto& own = instances[drafts[i].lead];
      auto earlier = std::lower_bound(own.begin(), own.end(), InstanceId{pmid, 0}) - own.begin();
      if (earlier > 0 && rng.bernoulli(config.selfcitation_rate)) {
        edges.insert({pmid, own[rng.below(static_cast<std::uint64_t>(earlier))].pmid});
      }
      if (i == 0) continue;
      auto k = static_cast<std::size_t>(whole) + (rng.bernoulli(frac) ? 1 : 0);
      for (std::size_t c = 0; c < k; ++c) {
        edges.insert({pmid, first_pmid + static_cast<std::uint32_t>(rng.below(i))});
      }
    }
    bundle.citations.assign(edges.begin(), edges.end());
  }

  {
    std::vector<Annotation> rows;
    ClusteringBuilder truth;
    for (const auto& sa : gt.authors) {
      for (InstanceId id : sa.instances) {
        rows.push_back({id, sa.ethnicity, sa.gender});
        truth.add(sa.id, id);
      }
    }
    bundle.annotations = Annotations(std::move(rows));
    bundle.truth = std::move(truth).build();
  }

  for (const auto& group : homonym_groups) {
    std::vector<std::string> ids;
    for (std::size_t a : group) ids.push_back(gt.authors[a].id);
    gt.homonym_groups.push_back(std::move(ids));
  }
  bundle.ground_truth = std::move(gt);
  return bundle;
}

nlohmann::ordered_json SynthBundle::manifest() const {
  const auto& gt = ground_truth;
  std::size_t multiform = 0, alternate_instances = 0, homonym_authors = 0;
  std::map<std::string, std::size_t> types{
      {"flipped_order", 0}, {"initial_variant", 0}, {"surname_variant", 0}};
  for (const auto& a : gt.authors) {
    if (!a.synonym_type) continue;
    ++multiform;
    alternate_instances += a.instances.size() / 2;
    ++types[std::string(to_string(*a.synonym_type))];
  }
  for (const auto& g : gt.homonym_groups) homonym_authors += g.size();
  std::size_t duplicate_pmids = 0;
  for (const auto& g : gt.duplicate_title_groups) duplicate_pmids += g.size();
  std::size_t registry_works = 0;
  for (const auto& p : authority) registry_works += p.work_titles.size();
  std::size_t funded = 0;
  for (const auto& g : grants) funded += g.funded_pmids.size();

  auto share = [](std::size_t k, std::size_t total) {
    return total == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(total);
  };
  const std::size_t authors_n = gt.authors.size();
  const std::size_t inst = corpus.instance_count();

  nlohmann::ordered_json realized;
  realized["authors"] = authors_n;
  realized["papers"] = corpus.size();
  realized["instances"] = inst;
  realized["homonym_authors"] = homonym_authors;
  realized["homonym_rate"] = share(homonym_authors, authors_n);
  realized["multiform_authors"] = multiform;
  realized["synonym_rate"] = share(multiform, authors_n);
  realized["synonym_types"] = types;
  realized["alternate_form_instances"] = alternate_instances;
  realized["alternate_form_instance_share"] = share(alternate_instances, inst);
  realized["aini_variant_instances"] = gt.aini_variant_instances;
  realized["registry_profiles"] = authority.size();
  realized["registry_works"] = registry_works;
  realized["authority_coverage"] = share(authority.size(), authors_n);
  realized["grant_pis"] = grants.size();
  realized["funded_papers"] = funded;
  realized["duplicate_title_pmids"] = duplicate_pmids;
  realized["citations"] = citations.size();
  realized["authority_labels"] = gt.authority_labels.size();
  realized["grant_labels"] = gt.grant_labels.size();

  nlohmann::ordered_json j;
  j["config"] = config.to_json();
  j["realized"] = std::move(realized);
  return j;
}

std::vector<std::string> write_bundle(const SynthBundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw WriteError("cannot create directory " + dir.string() + ": " + ec.message());

  std::vector<std::string> names;
  auto emit = [&](const std::string& name, auto&& body) {
    auto out = open_output(dir / name);
    body(out);
    out.flush();
    if (!out) throw WriteError("write failed: " + (dir / name).string());
    names.push_back(name);
  };
  const auto& gt = bundle.ground_truth;
  emit("papers.tsv", [&](std::ostream& o) { write_corpus(o, bundle.corpus); });
  emit("authority.tsv", [&](std::ostream& o) { write_authority(o, bundle.authority); });
  emit("grants.tsv", [&](std::ostream& o) { write_grants(o, bundle.grants); });
  emit("citations.tsv", [&](std::ostream& o) { write_citations(o, bundle.citations); });
  emit("annotations.tsv", [&](std::ostream& o) { write_annotations(o, bundle.annotations); });
  emit("truth.tsv", [&](std::ostream& o) { write_clustering(o, bundle.truth); });
  emit("planted_labels.tsv", [&](std::ostream& o) {
    std::vector<LabeledInstance> all = gt.authority_labels;
    all.insert(all.end(), gt.grant_labels.begin(), gt.grant_labels.end());
    std::stable_sort(all.begin(), all.end(),
                     [](const auto& x, const auto& y) { return x.instance < y.instance; });
    write_labels(o, all);
  });
  emit("multiform_authors.tsv", [&](std::ostream& o) {
    TsvWriter w(o, {"author_id", "type", "primary_name", "alternate_name"});
    for (const auto& a : gt.authors) {
      if (a.synonym_type) w.row({a.id, to_string(*a.synonym_type), a.primary_name, a.alternate_name});
    }
  });
  emit("homonym_groups.tsv", [&](std::ostream& o) {
    TsvWriter w(o, {"group", "author_id"});
    for (std::size_t g = 0; g < gt.homonym_groups.size(); ++g) {
      for (const auto& id : gt.homonym_groups[g]) w.row({std::to_string(g + 1), id});
    }
  });
  emit("manifest.json", [&](std::ostream& o) { o << bundle.manifest().dump(2) << '\n'; });
  return names;
}

std::vector<NamedInstance> generate_block_population(std::span<const std::size_t> block_sizes,
                                                     std::uint64_t seed) {
  std::size_t total = std::accumulate(block_sizes.begin(), block_sizes.end(), std::size_t{0});
  std::vector<InstanceId> ids(total);
  for (std::size_t i = 0; i < total; ++i) ids[i] = {static_cast<std::uint32_t>(i + 1), 1};
  Rng rng(seed);
  rng.shuffle(std::span<InstanceId>(ids));

  std::vector<NamedInstance> out;
  out.reserve(total);
  std::size_t next = 0;
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    std::string surname = "q";
    for (std::size_t v = b;; v /= 26) {
      surname += static_cast<char>('a' + v % 26);
      if (v < 26) break;
    }
    for (std::size_t k = 0; k < block_sizes[b]; ++k) {
      PersonName name;
      name.raw = capitalized(surname) + ", A";
      name.surname = surname;
      name.forenames = {"a"};
      out.push_back({ids[next++], std::move(name)});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const NamedInstance& x, const NamedInstance& y) { return x.id < y.id; });
  return out;
}

}  // namespace linklab
