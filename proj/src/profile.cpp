#include "linklab/profile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "linklab/error.hpp"
#include "linklab/rng.hpp"
#include "linklab/tsv.hpp"

namespace linklab {

namespace {

Distribution from_counts(const std::map<std::string, std::size_t>& counts, std::size_t total) {
  if (total == 0) throw EvalError("distribution of an empty set");
  Distribution out;
  for (const auto& [value, count] : counts) {
    out[value] = 100.0 * static_cast<double>(count) / static_cast<double>(total);
  }
  return out;
}

std::string instance_value(InstanceId id, const Corpus& corpus, const Annotations& annotations,
                            Attribute attribute) {
  if (attribute == Attribute::year) {
    auto year = corpus.year_of(id.pmid);
    return year ? std::to_string(*year) : std::string("UNKNOWN");
  }
  const Annotation* a = annotations.find(id);
  if (!a) return "UNKNOWN";
  const std::string& v = attribute == Attribute::ethnicity ? a->ethnicity : a->gender;
  return v.empty() ? std::string("UNKNOWN") : v;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

Distribution distribution(std::span<const std::string> values) {
  std::map<std::string, std::size_t> counts;
  for (const auto& v : values) ++counts[v];
  return from_counts(counts, values.size());
}

Distribution distribution(const EvalDataset& dataset, Attribute attribute) {
  std::map<std::string, std::size_t> counts;
  for (const auto& row : dataset.rows()) ++counts[row.value(attribute)];
  return from_counts(counts, dataset.size());
}

Distribution instance_distribution(const Corpus& corpus, const Annotations& annotations,
                                   Attribute attribute) {
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;
  for (const auto& paper : corpus.papers()) {
    for (std::size_t i = 0; i < paper.authors.size(); ++i) {
      InstanceId id{paper.pmid, static_cast<std::uint32_t>(i + 1)};
      ++counts[instance_value(id, corpus, annotations, attribute)];
      ++total;
    }
  }
  return from_counts(counts, total);
}

Distribution pair_distribution(const PairSet& pairs, const Corpus& corpus,
                               const Annotations& annotations, Attribute attribute) {
  std::map<std::string, std::size_t> counts;
  for (const auto& [a, b] : pairs.pairs()) {
    ++counts[instance_value(a, corpus, annotations, attribute)];
    ++counts[instance_value(b, corpus, annotations, attribute)];
  }
  return from_counts(counts, 2 * pairs.size());
}

void write_distribution_table(std::ostream& out,
                              std::span<const std::pair<std::string, Distribution>> columns) {
  std::vector<std::string> header{"value"};
  std::set<std::string> values;
  for (const auto& [name, dist] : columns) {
    header.push_back(name);
    for (const auto& [v, pct] : dist) values.insert(v);
  }
  TsvWriter w(out, header);
  std::vector<std::string> fields;
  for (const auto& v : values) {
    fields.assign({v});
    for (const auto& [name, dist] : columns) {
      auto it = dist.find(v);
      fields.push_back(format_double(it == dist.end() ? 0.0 : it->second));
    }
    w.row(fields);
  }
}

std::vector<CcdfPoint> block_size_ccdf(std::span<const std::size_t> block_sizes) {
  std::vector<CcdfPoint> out;
  if (block_sizes.empty()) return out;
  std::map<std::size_t, std::size_t> histogram;
  for (std::size_t s : block_sizes) {
    if (s == 0) throw EvalError("block of size 0");
    ++histogram[s];
  }
  const double total = static_cast<double>(block_sizes.size());
  std::size_t at_least = block_sizes.size();
  if (histogram.begin()->first != 1) out.push_back({1, 1.0});
  for (const auto& [size, count] : histogram) {
    out.push_back({size, static_cast<double>(at_least) / total});
    at_least -= count;
  }
  return out;
}

std::vector<CcdfPoint> block_size_ccdf(const Blocks& blocks) {
  auto sizes = blocks.sizes();
  return block_size_ccdf(sizes);
}

namespace {

// Fraction of blocks with size >= s on a CCDF step curve.
double ccdf_at(std::span<const CcdfPoint> curve, std::size_t s) {
  auto it = std::lower_bound(curve.begin(), curve.end(), s,
                             [](const CcdfPoint& p, std::size_t v) { return p.size < v; });
  return it == curve.end() ? 0.0 : it->fraction_at_least;
}

}  // namespace

double ks_distance(std::span<const CcdfPoint> a, std::span<const CcdfPoint> b) {
  double worst = 0.0;
  for (const auto& p : a) worst = std::max(worst, std::abs(p.fraction_at_least - ccdf_at(b, p.size)));
  for (const auto& p : b) worst = std::max(worst, std::abs(p.fraction_at_least - ccdf_at(a, p.size)));
  // Just past the largest size on either side one curve has already hit 0.
  if (!a.empty()) worst = std::max(worst, ccdf_at(b, a.back().size + 1));
  if (!b.empty()) worst = std::max(worst, ccdf_at(a, b.back().size + 1));
  return worst;
}

void write_ccdf_table(std::ostream& out,
                      std::span<const std::pair<std::string, std::vector<CcdfPoint>>> curves) {
  TsvWriter w(out, {"series", "size", "fraction_at_least"});
  for (const auto& [name, curve] : curves) {
    for (const auto& p : curve) {
      w.row({name, std::to_string(p.size), format_double(p.fraction_at_least)});
    }
  }
}

std::vector<InstanceId> reference_sample(std::span<const InstanceId> population, std::size_t n,
                                         std::uint64_t seed) {
  if (n > population.size()) {
    throw ConfigError("sample size " + std::to_string(n) + " exceeds population of " +
                      std::to_string(population.size()));
  }
  std::vector<InstanceId> pool(population.begin(), population.end());
  std::sort(pool.begin(), pool.end());
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::string_view to_string(SynonymType type) {
  switch (type) {
    case SynonymType::flipped_order: return "flipped_order";
    case SynonymType::surname_variant: return "surname_variant";
    case SynonymType::initial_variant: return "initial_variant";
  }
  return "?";
}

TypologyResult classify_synonym_types(const Clustering& truth,
                                      std::span<const NamedInstance> names) {
  TypologyResult result;
  for (std::size_t c = 0; c < truth.cluster_count(); ++c) {
    std::set<BlockKey> keys;
    std::vector<const PersonName*> forms;
    for (InstanceId id : truth.members(c)) {
      const PersonName* name = find_name(names, id);
      if (!name) continue;
      keys.insert(fini_key(*name));
      bool seen = std::any_of(forms.begin(), forms.end(), [&](const PersonName* f) {
        return f->surname == name->surname && f->forenames == name->forenames;
      });
      if (!seen) forms.push_back(name);
    }
    if (keys.size() < 2) continue;

    bool flipped = false, surnames = false, initials = false;
    for (std::size_t i = 0; i < forms.size(); ++i) {
      for (std::size_t j = i + 1; j < forms.size(); ++j) {
        const PersonName& a = *forms[i];
        const PersonName& b = *forms[j];
        if (!a.forenames.empty() && !b.forenames.empty() && a.surname == b.forenames.front() &&
            b.surname == a.forenames.front()) {
          flipped = true;
        }
        if (a.surname != b.surname) {
          surnames = true;
        } else if (a.first_initial() != b.first_initial()) {
          initials = true;
        }
      }
    }
    result.rule_hits.flipped_pair += flipped;
    result.rule_hits.surnames_differ += surnames;
    result.rule_hits.initials_differ += initials;

    SynonymType type = flipped    ? SynonymType::flipped_order
                       : surnames ? SynonymType::surname_variant
                                  : SynonymType::initial_variant;
    switch (type) {
      case SynonymType::flipped_order: ++result.counts.flipped_order; break;
      case SynonymType::surname_variant: ++result.counts.surname_variant; break;
      case SynonymType::initial_variant: ++result.counts.initial_variant; break;
    }
    ++result.counts.total_multiform_authors;
    result.multiform_instances += truth.members(c).size();
    result.assignments.emplace_back(truth.cluster_id(c), type);
  }
  return result;
}

void write_typology(std::ostream& out, const TypologyResult& result) {
  TsvWriter w(out, {"type", "authors", "share"});
  const auto& c = result.counts;
  auto share = [&](std::size_t k) {
    return c.total_multiform_authors == 0
               ? std::string("0")
               : format_double(static_cast<double>(k) / static_cast<double>(c.total_multiform_authors));
  };
  w.row({"surname_variant", std::to_string(c.surname_variant), share(c.surname_variant)});
  w.row({"initial_variant", std::to_string(c.initial_variant), share(c.initial_variant)});
  w.row({"flipped_order", std::to_string(c.flipped_order), share(c.flipped_order)});
  w.row({"total", std::to_string(c.total_multiform_authors), share(c.total_multiform_authors)});
}

void write_typology_assignments(std::ostream& out, const TypologyResult& result) {
  TsvWriter w(out, {"cluster_id", "type"});
  for (const auto& [id, type] : result.assignments) w.row({id, to_string(type)});
}

EvalDataset perturb_tags(const EvalDataset& dataset, double fraction, std::uint64_t seed,
                         PerturbStats* stats) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw ConfigError("perturbation fraction must lie in [0, 1]");
  }
  std::map<std::string, std::vector<std::size_t>> groups;
  auto rows = dataset.rows();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].ethnicity) groups[*rows[i].ethnicity].push_back(i);
  }
  if (groups.size() < 2) throw ConfigError("perturbation needs at least two ethnicity tags");

  std::vector<std::string> tags;
  for (const auto& [tag, members] : groups) tags.push_back(tag);

  std::vector<EvalRow> out(rows.begin(), rows.end());
  Rng rng(seed);
  PerturbStats local;
  for (const auto& [tag, members] : groups) {
    std::vector<std::string> others;
    for (const auto& t : tags) {
      if (t != tag) others.push_back(t);
    }
    auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(members.size()) + 1e-9));
    k = std::min(k, members.size());
    std::vector<std::size_t> pick = members;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + rng.below(pick.size() - i);
      std::swap(pick[i], pick[j]);
      out[pick[i]].ethnicity = others[rng.below(others.size())];
    }
    local.group_size[tag] = members.size();
    local.changed[tag] = k;
  }
  if (stats) *stats = std::move(local);
  return EvalDataset(std::move(out));
}

}  // namespace linklab
