#include "linklab/linkage.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "linklab/error.hpp"
#include "linklab/parallel.hpp"
#include "linklab/tsv.hpp"

namespace linklab {
namespace {

// A (paper, label) association established by title or pmid match, waiting
// for the byline name check.
struct Claim {
  std::uint32_t pmid;
  std::uint32_t owner;

  friend auto operator<=>(const Claim&, const Claim&) = default;
};

struct Owner {
  std::string label_id;
  BlockKey key;
};

struct Candidate {
  InstanceId instance;
  std::uint32_t owner;
  PersonName name;
};

struct ChunkOutput {
  std::vector<Candidate> candidates;
  std::vector<DropRecord> drops;
  std::size_t no_name_match = 0;
};

LinkResult resolve_claims(const Corpus& corpus, std::vector<Claim> claims,
                          const std::vector<Owner>& owners, LabelSource source,
                          LinkResult result) {
  std::sort(claims.begin(), claims.end());
  claims.erase(std::unique(claims.begin(), claims.end()), claims.end());
  result.stats.paper_matches = claims.size();

  constexpr std::size_t kMinChunk = 256;
  std::vector<ChunkOutput> chunks(chunk_count(claims.size(), kMinChunk));
  parallel_chunks(
      claims.size(),
      [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        ChunkOutput out;
        std::uint32_t cached_pmid = 0;
        std::vector<std::optional<PersonName>> byline;
        for (std::size_t i = begin; i < end; ++i) {
          const Claim& claim = claims[i];
          if (claim.pmid != cached_pmid) {
            const PaperRecord* paper = corpus.find(claim.pmid);
            byline.clear();
            for (const auto& raw : paper->authors) byline.push_back(parse_name(raw));
            cached_pmid = claim.pmid;
          }
          const Owner& owner = owners[claim.owner];
          std::vector<std::uint32_t> hits;
          for (std::uint32_t pos = 0; pos < byline.size(); ++pos) {
            if (byline[pos] && fini_match(fini_key(*byline[pos]), owner.key)) hits.push_back(pos);
          }
          if (hits.empty()) {
            ++out.no_name_match;
          } else if (hits.size() == 1) {
            out.candidates.push_back(
                {InstanceId{claim.pmid, hits[0] + 1}, claim.owner, *byline[hits[0]]});
          } else {
            DropRecord drop{DropReason::multi_byline, claim.pmid, {}, {owner.label_id}};
            for (auto pos : hits) drop.instances.push_back(InstanceId{claim.pmid, pos + 1});
            out.drops.push_back(std::move(drop));
          }
        }
        chunks[chunk] = std::move(out);
      },
      kMinChunk);

  std::vector<Candidate> candidates;
  for (auto& chunk : chunks) {
    result.stats.no_name_match += chunk.no_name_match;
    for (auto& d : chunk.drops) result.drops.push_back(std::move(d));
    for (auto& c : chunk.candidates) candidates.push_back(std::move(c));
  }
  result.stats.conflicts = 0;
  for (const auto& d : result.drops) {
    if (d.reason == DropReason::multi_byline) ++result.stats.conflicts;
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.instance, a.owner) < std::tie(b.instance, b.owner);
  });
  for (std::size_t i = 0; i < candidates.size();) {
    std::size_t j = i + 1;
    while (j < candidates.size() && candidates[j].instance == candidates[i].instance) ++j;
    if (j - i == 1) {
      result.labels.push_back(LabeledInstance{candidates[i].instance, std::move(candidates[i].name),
                                              owners[candidates[i].owner].label_id, source});
    } else {
      DropRecord drop{DropReason::multi_label, candidates[i].instance.pmid,
                      {candidates[i].instance}, {}};
      for (std::size_t k = i; k < j; ++k) drop.label_ids.push_back(owners[candidates[k].owner].label_id);
      result.drops.push_back(std::move(drop));
      ++result.stats.conflicts;
    }
    i = j;
  }
  return result;
}

template <class T>
std::string join_ids(const std::vector<T>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out.push_back(',');
    if constexpr (std::is_same_v<T, InstanceId>) {
      out += to_string(item);
    } else {
      out += item;
    }
  }
  return out;
}

std::optional<std::string> optional_field(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return std::string(s);
}

}  // namespace

std::string_view to_string(LabelSource source) {
  return source == LabelSource::authority ? "authority" : "grant";
}

LabelSource parse_label_source(std::string_view text) {
  if (text == "authority") return LabelSource::authority;
  if (text == "grant") return LabelSource::grant;
  throw ParseError("source", "expected authority|grant, got '" + std::string(text) + "'");
}

DuplicateTitlePolicy parse_dup_title_policy(std::string_view text) {
  if (text == "drop-all") return DuplicateTitlePolicy::drop_all;
  if (text == "keep-first") return DuplicateTitlePolicy::keep_first;
  throw ParseError("dup-title-policy",
                   "expected drop-all|keep-first, got '" + std::string(text) + "'");
}

std::string_view to_string(DropReason reason) {
  switch (reason) {
    case DropReason::duplicate_title: return "duplicate_title";
    case DropReason::multi_byline: return "multi_byline";
    case DropReason::multi_label: return "multi_label";
    case DropReason::unparseable_name: return "unparseable_name";
  }
  return "unknown";
}

LinkResult link_authority(const Corpus& corpus, const Registry& registry,
                          const LinkOptions& options) {
  LinkResult result;
  TitleOptions title_options;
  title_options.hyphens = options.hyphens;

  auto papers = corpus.papers();
  std::vector<std::optional<NormTitle>> titles(papers.size());
  parallel_chunks(papers.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) titles[i] = normalize_title(papers[i].title, title_options);
  });

  // normalized title -> (first paper index, number of papers)
  std::unordered_map<std::string_view, std::pair<std::size_t, std::size_t>> by_title;
  by_title.reserve(papers.size());
  for (std::size_t i = 0; i < papers.size(); ++i) {
    if (!titles[i]) {
      ++result.stats.titles_rejected;
      continue;
    }
    auto [it, fresh] = by_title.try_emplace(titles[i]->text, i, 0);
    ++it->second.second;
  }
  for (std::size_t i = 0; i < papers.size(); ++i) {
    if (!titles[i]) continue;
    const auto& [first, count] = by_title.at(titles[i]->text);
    if (count < 2) continue;
    bool survivor = options.duplicate_titles == DuplicateTitlePolicy::keep_first && first == i;
    if (survivor) continue;
    ++result.stats.titles_duplicate;
    result.drops.push_back(DropRecord{DropReason::duplicate_title, papers[i].pmid, {}, {}});
  }

  std::vector<Owner> owners;
  std::vector<Claim> claims;
  for (const auto& profile : registry) {
    auto name = parse_name(profile.person_name);
    if (!name) {
      result.drops.push_back(DropRecord{DropReason::unparseable_name, 0, {}, {profile.authority_id}});
      continue;
    }
    auto owner = static_cast<std::uint32_t>(owners.size());
    owners.push_back(Owner{profile.authority_id, fini_key(*name)});
    for (const auto& work : profile.work_titles) {
      auto norm = normalize_title(work, title_options);
      if (!norm) continue;
      auto it = by_title.find(norm->text);
      if (it == by_title.end()) continue;
      auto [first, count] = it->second;
      if (count > 1 && options.duplicate_titles == DuplicateTitlePolicy::drop_all) continue;
      claims.push_back(Claim{papers[first].pmid, owner});
    }
  }
  return resolve_claims(corpus, std::move(claims), owners, LabelSource::authority,
                        std::move(result));
}

LinkResult link_grants(const Corpus& corpus, const GrantTable& grants) {
  LinkResult result;
  std::vector<Owner> owners;
  std::vector<Claim> claims;
  for (const auto& grant : grants) {
    auto name = parse_name(grant.pi_name);
    if (!name) {
      result.drops.push_back(DropRecord{DropReason::unparseable_name, 0, {}, {grant.pi_id}});
      continue;
    }
    auto owner = static_cast<std::uint32_t>(owners.size());
    owners.push_back(Owner{grant.pi_id, fini_key(*name)});
    for (auto pmid : grant.funded_pmids) {
      if (corpus.find(pmid) == nullptr) {
        ++result.stats.missing_pmids;
        continue;
      }
      claims.push_back(Claim{pmid, owner});
    }
  }
  return resolve_claims(corpus, std::move(claims), owners, LabelSource::grant, std::move(result));
}

PairSet::PairSet(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
  for (auto& [a, b] : pairs_) {
    if (a == b) throw std::invalid_argument("pair of identical instances " + to_string(a));
    if (a.pmid == b.pmid) {
      throw std::invalid_argument("pair within one paper: " + to_string(a) + ", " + to_string(b));
    }
    if (b < a) std::swap(a, b);
  }
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

PairSet extract_selfcitation_pairs(const Corpus& corpus, const Citations& citations,
                                   PairStats* stats) {
  auto papers = corpus.papers();
  std::vector<std::size_t> offsets(papers.size() + 1, 0);
  for (std::size_t i = 0; i < papers.size(); ++i) offsets[i + 1] = offsets[i] + papers[i].authors.size();
  std::vector<BlockKey> keys(offsets.back());
  parallel_chunks(
      papers.size(),
      [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          for (std::size_t a = 0; a < papers[i].authors.size(); ++a) {
            auto name = parse_name(papers[i].authors[a]);
            if (name) keys[offsets[i] + a] = fini_key(*name);
          }
        }
      },
      256);

  std::size_t chunks = chunk_count(citations.size());
  std::vector<std::vector<PairSet::Pair>> found(chunks);
  std::vector<std::size_t> missing(chunks, 0), combos(chunks, 0);
  parallel_chunks(citations.size(), [&](std::size_t slot, std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) {
      const auto& edge = citations[e];
      const PaperRecord* citing = corpus.find(edge.citing_pmid);
      const PaperRecord* cited = corpus.find(edge.cited_pmid);
      if (citing == nullptr || cited == nullptr || citing == cited) {
        ++missing[slot];
        continue;
      }
      std::size_t ci = static_cast<std::size_t>(citing - papers.data());
      std::size_t di = static_cast<std::size_t>(cited - papers.data());
      for (std::uint32_t a = 0; a < citing->authors.size(); ++a) {
        const BlockKey& ka = keys[offsets[ci] + a];
        for (std::uint32_t b = 0; b < cited->authors.size(); ++b) {
          ++combos[slot];
          if (fini_match(ka, keys[offsets[di] + b])) {
            found[slot].emplace_back(InstanceId{citing->pmid, a + 1}, InstanceId{cited->pmid, b + 1});
          }
        }
      }
    }
  });

  std::vector<PairSet::Pair> all;
  for (auto& f : found) all.insert(all.end(), f.begin(), f.end());
  if (stats != nullptr) {
    stats->edges = citations.size();
    stats->edges_missing_paper = 0;
    stats->combinations = 0;
    for (std::size_t w = 0; w < chunks; ++w) {
      stats->edges_missing_paper += missing[w];
      stats->combinations += combos[w];
    }
  }
  return PairSet(std::move(all));
}

Attribute parse_attribute(std::string_view text) {
  if (text == "ethnicity") return Attribute::ethnicity;
  if (text == "gender") return Attribute::gender;
  if (text == "year") return Attribute::year;
  throw ParseError("attribute", "expected ethnicity|gender|year, got '" + std::string(text) + "'");
}

std::string_view to_string(Attribute attribute) {
  switch (attribute) {
    case Attribute::ethnicity: return "ethnicity";
    case Attribute::gender: return "gender";
    case Attribute::year: return "year";
  }
  return "unknown";
}

std::string EvalRow::value(Attribute attribute) const {
  switch (attribute) {
    case Attribute::ethnicity: return ethnicity.value_or("UNKNOWN");
    case Attribute::gender: return gender.value_or("UNKNOWN");
    case Attribute::year: return year ? std::to_string(*year) : "UNKNOWN";
  }
  return "UNKNOWN";
}

EvalDataset::EvalDataset(std::vector<EvalRow> rows) : rows_(std::move(rows)) {
  std::sort(rows_.begin(), rows_.end(),
            [](const EvalRow& a, const EvalRow& b) { return a.instance < b.instance; });
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (i > 0 && rows_[i].instance == rows_[i - 1].instance) {
      throw std::invalid_argument("instance " + to_string(rows_[i].instance) + " appears twice");
    }
    if (rows_[i].truth_label.empty() || rows_[i].predicted_cluster.empty()) {
      throw std::invalid_argument("row " + to_string(rows_[i].instance) +
                                  " lacks a truth label or predicted cluster");
    }
  }
}

Clustering EvalDataset::truth() const {
  ClusteringBuilder builder;
  for (const auto& r : rows_) builder.add(r.truth_label, r.instance);
  return std::move(builder).build();
}

Clustering EvalDataset::predicted() const {
  ClusteringBuilder builder;
  for (const auto& r : rows_) builder.add(r.predicted_cluster, r.instance);
  return std::move(builder).build();
}

EvalDataset join_labels(std::span<const LabeledInstance> labels, const Clustering& predicted,
                        const Corpus& corpus, const Annotations& annotations, JoinStats* stats) {
  JoinStats local;
  local.labels = labels.size();
  std::vector<EvalRow> rows;
  std::unordered_set<InstanceId> seen;
  for (const auto& label : labels) {
    if (!seen.insert(label.instance).second) {
      throw std::invalid_argument("instance " + to_string(label.instance) +
                                  " carries more than one label; filter by source first");
    }
    auto cluster = predicted.cluster_of(label.instance);
    if (!cluster) {
      ++local.unclustered;
      continue;
    }
    EvalRow row;
    row.instance = label.instance;
    row.truth_label = label.label_id;
    row.predicted_cluster = predicted.cluster_id(*cluster);
    row.year = corpus.year_of(label.instance.pmid);
    if (const Annotation* a = annotations.find(label.instance)) {
      row.ethnicity = optional_field(a->ethnicity);
      row.gender = optional_field(a->gender);
      ++local.annotated;
    }
    rows.push_back(std::move(row));
  }
  local.joined = rows.size();
  if (stats != nullptr) *stats = local;
  return EvalDataset(std::move(rows));
}

std::vector<LabeledInstance> filter_source(std::span<const LabeledInstance> labels,
                                           LabelSource source) {
  std::vector<LabeledInstance> out;
  for (const auto& l : labels) {
    if (l.source == source) out.push_back(l);
  }
  return out;
}

AgreementReport label_agreement(std::span<const LabelAssignment> a,
                                std::span<const LabelAssignment> b) {
  auto sorted = [](std::span<const LabelAssignment> in) {
    std::vector<const LabelAssignment*> v;
    v.reserve(in.size());
    for (const auto& x : in) v.push_back(&x);
    std::sort(v.begin(), v.end(), [](auto* x, auto* y) { return x->first < y->first; });
    return v;
  };
  auto sa = sorted(a);
  auto sb = sorted(b);

  struct Shared {
    InstanceId instance;
    std::string_view la, lb;
  };
  std::vector<Shared> overlap;
  for (std::size_t i = 0, j = 0; i < sa.size() && j < sb.size();) {
    if (sa[i]->first < sb[j]->first) {
      ++i;
    } else if (sb[j]->first < sa[i]->first) {
      ++j;
    } else {
      overlap.push_back({sa[i]->first, sa[i]->second, sb[j]->second});
      ++i;
      ++j;
    }
  }

  std::map<std::pair<std::string_view, std::string_view>, std::size_t> cells;
  for (const auto& s : overlap) ++cells[{s.la, s.lb}];
  std::vector<std::pair<std::pair<std::string_view, std::string_view>, std::size_t>> order(
      cells.begin(), cells.end());
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  std::set<std::string_view> used_a, used_b;
  std::set<std::pair<std::string_view, std::string_view>> aligned;
  for (const auto& [cell, count] : order) {
    if (used_a.contains(cell.first) || used_b.contains(cell.second)) continue;
    used_a.insert(cell.first);
    used_b.insert(cell.second);
    aligned.insert(cell);
  }

  AgreementReport report;
  report.overlap_count = overlap.size();
  for (const auto& s : overlap) {
    if (aligned.contains({s.la, s.lb})) {
      ++report.agree_count;
    } else {
      report.disagreements.push_back({s.instance, std::string(s.la), std::string(s.lb)});
    }
  }
  return report;
}

std::vector<LabelAssignment> truth_assignments(const EvalDataset& dataset) {
  std::vector<LabelAssignment> out;
  out.reserve(dataset.size());
  for (const auto& r : dataset.rows()) out.emplace_back(r.instance, r.truth_label);
  return out;
}

std::vector<LabelAssignment> label_assignments(std::span<const LabeledInstance> labels) {
  std::vector<LabelAssignment> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.emplace_back(l.instance, l.label_id);
  return out;
}

AgreementReport label_agreement(const EvalDataset& a, const EvalDataset& b) {
  auto la = truth_assignments(a);
  auto lb = truth_assignments(b);
  return label_agreement(la, lb);
}

void write_labels(std::ostream& out, std::span<const LabeledInstance> labels) {
  TsvWriter writer(out, {"instance_id", "label_id", "source"});
  for (const auto& l : labels) writer.row({to_string(l.instance), l.label_id, to_string(l.source)});
}

std::vector<LabeledInstance> ingest_labels(std::istream& in, const std::string& source,
                                           const Corpus* corpus) {
  TsvReader reader(in, source, {"instance_id", "label_id", "source"});
  std::vector<LabeledInstance> out;
  std::set<std::pair<InstanceId, LabelSource>> seen;
  while (reader.next()) {
    LabeledInstance label;
    try {
      label.instance = parse_instance_id(reader[0]);
      label.source = parse_label_source(reader[2]);
    } catch (const ParseError& e) {
      reader.fail(e.what());
    }
    if (reader[1].empty()) reader.fail("empty label_id");
    label.label_id = reader[1];
    if (!seen.insert({label.instance, label.source}).second) {
      reader.fail("second " + std::string(to_string(label.source)) + " label for " +
                  to_string(label.instance));
    }
    if (corpus != nullptr) {
      if (auto raw = corpus->name_of(label.instance)) {
        if (auto name = parse_name(*raw)) label.name = std::move(*name);
      }
    }
    out.push_back(std::move(label));
  }
  std::sort(out.begin(), out.end(), [](const LabeledInstance& a, const LabeledInstance& b) {
    return std::tie(a.instance, a.source) < std::tie(b.instance, b.source);
  });
  return out;
}

std::vector<LabeledInstance> load_labels(const std::string& path, const Corpus* corpus) {
  InputFile f(path);
  return ingest_labels(f.stream(), path, corpus);
}

void write_pairs(std::ostream& out, const PairSet& pairs) {
  TsvWriter writer(out, {"instance_a", "instance_b"});
  for (const auto& [a, b] : pairs.pairs()) writer.row({to_string(a), to_string(b)});
}

PairSet ingest_pairs(std::istream& in, const std::string& source) {
  TsvReader reader(in, source, {"instance_a", "instance_b"});
  std::vector<PairSet::Pair> pairs;
  while (reader.next()) {
    PairSet::Pair p;
    try {
      p = {parse_instance_id(reader[0]), parse_instance_id(reader[1])};
    } catch (const ParseError& e) {
      reader.fail(e.what());
    }
    if (p.first.pmid == p.second.pmid) reader.fail("pair within one paper");
    pairs.push_back(p);
  }
  return PairSet(std::move(pairs));
}

PairSet load_pairs(const std::string& path) {
  InputFile f(path);
  return ingest_pairs(f.stream(), path);
}

void write_eval_dataset(std::ostream& out, const EvalDataset& dataset) {
  TsvWriter writer(out, {"instance_id", "truth_label", "predicted_cluster", "year", "ethnicity",
                         "gender"});
  for (const auto& r : dataset.rows()) {
    writer.row({to_string(r.instance), r.truth_label, r.predicted_cluster,
                r.year ? std::to_string(*r.year) : std::string(), r.ethnicity.value_or(""),
                r.gender.value_or("")});
  }
}

EvalDataset ingest_eval_dataset(std::istream& in, const std::string& source) {
  TsvReader reader(in, source,
                   {"instance_id", "truth_label", "predicted_cluster", "year", "ethnicity", "gender"});
  std::vector<EvalRow> rows;
  std::unordered_set<InstanceId> seen;
  while (reader.next()) {
    EvalRow row;
    try {
      row.instance = parse_instance_id(reader[0]);
    } catch (const ParseError& e) {
      reader.fail(e.what());
    }
    if (!seen.insert(row.instance).second) reader.fail("instance appears twice");
    if (reader[1].empty() || reader[2].empty()) reader.fail("missing truth label or predicted cluster");
    row.truth_label = reader[1];
    row.predicted_cluster = reader[2];
    if (!reader[3].empty()) {
      int year = 0;
      auto f = reader[3];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), year);
      if (ec != std::errc() || ptr != f.data() + f.size()) reader.fail("bad year");
      row.year = year;
    }
    row.ethnicity = optional_field(reader[4]);
    row.gender = optional_field(reader[5]);
    rows.push_back(std::move(row));
  }
  return EvalDataset(std::move(rows));
}

EvalDataset load_eval_dataset(const std::string& path) {
  InputFile f(path);
  return ingest_eval_dataset(f.stream(), path);
}

void write_drops(std::ostream& out, std::span<const DropRecord> drops) {
  TsvWriter writer(out, {"reason", "pmid", "instances", "labels"});
  for (const auto& d : drops) {
    writer.row({to_string(d.reason), d.pmid == 0 ? std::string() : std::to_string(d.pmid),
                join_ids(d.instances), join_ids(d.label_ids)});
  }
}

}  // namespace linklab
