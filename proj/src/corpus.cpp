#include "linklab/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "linklab/error.hpp"
#include "linklab/tsv.hpp"

namespace linklab {
namespace {

std::uint32_t parse_pmid(const TsvReader& reader, std::string_view text, const char* field) {
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || value == 0) {
    reader.fail(std::string(field) + " must be a positive integer, got '" +
                std::string(text) + "'");
  }
  return value;
}

int parse_year(const TsvReader& reader, std::string_view text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    reader.fail("year must be an integer, got '" + std::string(text) + "'");
  }
  return value;
}

InstanceId parse_instance(const TsvReader& reader, std::string_view text) {
  try {
    return parse_instance_id(text);
  } catch (const ParseError& e) {
    reader.fail(e.what());
  }
}

template <class T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

Corpus::Corpus(std::vector<PaperRecord> papers) : papers_(std::move(papers)) {
  std::sort(papers_.begin(), papers_.end(),
            [](const PaperRecord& a, const PaperRecord& b) { return a.pmid < b.pmid; });
  for (std::size_t i = 0; i < papers_.size(); ++i) {
    if (papers_[i].pmid == 0) throw std::invalid_argument("pmid must be >= 1");
    if (i > 0 && papers_[i].pmid == papers_[i - 1].pmid) {
      throw std::invalid_argument("duplicate pmid " + std::to_string(papers_[i].pmid));
    }
    if (papers_[i].authors.empty()) {
      throw std::invalid_argument("empty byline for pmid " + std::to_string(papers_[i].pmid));
    }
    instance_count_ += papers_[i].authors.size();
  }
}

const PaperRecord* Corpus::find(std::uint32_t pmid) const {
  auto it = std::lower_bound(papers_.begin(), papers_.end(), pmid,
                             [](const PaperRecord& p, std::uint32_t v) { return p.pmid < v; });
  if (it == papers_.end() || it->pmid != pmid) return nullptr;
  return &*it;
}

bool Corpus::contains(InstanceId id) const { return name_of(id).has_value(); }

std::optional<std::string_view> Corpus::name_of(InstanceId id) const {
  const PaperRecord* paper = find(id.pmid);
  if (paper == nullptr || id.position == 0 || id.position > paper->authors.size()) {
    return std::nullopt;
  }
  return std::string_view(paper->authors[id.position - 1]);
}

std::optional<int> Corpus::year_of(std::uint32_t pmid) const {
  const PaperRecord* paper = find(pmid);
  if (paper == nullptr) return std::nullopt;
  return paper->year;
}

std::vector<InstanceId> Corpus::instances() const {
  std::vector<InstanceId> out;
  out.reserve(instance_count_);
  for (const auto& p : papers_) {
    for (std::uint32_t pos = 1; pos <= p.authors.size(); ++pos) out.push_back({p.pmid, pos});
  }
  return out;
}

Annotations::Annotations(std::vector<Annotation> rows) : rows_(std::move(rows)) {
  std::sort(rows_.begin(), rows_.end(),
            [](const Annotation& a, const Annotation& b) { return a.instance < b.instance; });
  for (std::size_t i = 1; i < rows_.size(); ++i) {
    if (rows_[i].instance == rows_[i - 1].instance) {
      throw std::invalid_argument("duplicate annotation for " + to_string(rows_[i].instance));
    }
  }
}

const Annotation* Annotations::find(InstanceId id) const {
  auto it = std::lower_bound(rows_.begin(), rows_.end(), id,
                             [](const Annotation& a, InstanceId v) { return a.instance < v; });
  if (it == rows_.end() || it->instance != id) return nullptr;
  return &*it;
}

Corpus ingest_corpus(std::istream& in, const std::string& source) {
  TsvReader reader(in, source, {"pmid", "year", "title", "authors"});
  std::vector<PaperRecord> papers;
  std::unordered_set<std::uint32_t> seen;
  while (reader.next()) {
    PaperRecord paper;
    paper.pmid = parse_pmid(reader, reader[0], "pmid");
    if (!seen.insert(paper.pmid).second) {
      reader.fail("duplicate pmid " + std::to_string(paper.pmid));
    }
    if (reader[1].empty()) reader.fail("missing year");
    paper.year = parse_year(reader, reader[1]);
    if (reader[2].empty()) reader.fail("missing title");
    paper.title = reader[2];
    std::string_view authors = reader[3];
    if (authors.empty()) reader.fail("empty author list");
    for (;;) {
      auto bar = authors.find('|');
      auto name = authors.substr(0, bar);
      if (name.empty()) reader.fail("empty author name in byline");
      paper.authors.emplace_back(name);
      if (bar == std::string_view::npos) break;
      authors.remove_prefix(bar + 1);
    }
    papers.push_back(std::move(paper));
  }
  return Corpus(std::move(papers));
}

Registry ingest_authority(std::istream& in, const std::string& source) {
  TsvReader reader(in, source, {"authority_id", "name", "title"});
  std::map<std::string, AuthorityProfile, std::less<>> profiles;
  while (reader.next()) {
    if (reader[0].empty()) reader.fail("empty authority_id");
    if (reader[1].empty()) reader.fail("empty name");
    if (reader[2].empty()) reader.fail("empty title");
    auto it = profiles.find(reader[0]);
    if (it == profiles.end()) {
      it = profiles.emplace(std::string(reader[0]),
                            AuthorityProfile{std::string(reader[0]), std::string(reader[1]), {}})
               .first;
    } else if (it->second.person_name != reader[1]) {
      reader.fail("authority_id " + it->first + " listed with two names: '" +
                  it->second.person_name + "' and '" + std::string(reader[1]) + "'");
    }
    it->second.work_titles.emplace_back(reader[2]);
  }
  Registry out;
  out.reserve(profiles.size());
  for (auto& [id, profile] : profiles) {
    sort_unique(profile.work_titles);
    out.push_back(std::move(profile));
  }
  return out;
}

GrantTable ingest_grants(std::istream& in, const std::string& source) {
  TsvReader reader(in, source, {"pi_id", "pi_name", "pmid"});
  std::map<std::string, GrantRecord, std::less<>> grants;
  while (reader.next()) {
    if (reader[0].empty()) reader.fail("empty pi_id");
    if (reader[1].empty()) reader.fail("empty pi_name");
    auto pmid = parse_pmid(reader, reader[2], "pmid");
    auto it = grants.find(reader[0]);
    if (it == grants.end()) {
      it = grants.emplace(std::string(reader[0]),
                          GrantRecord{std::string(reader[0]), std::string(reader[1]), {}})
               .first;
    } else if (it->second.pi_name != reader[1]) {
      reader.fail("pi_id " + it->first + " listed with two names: '" + it->second.pi_name +
                  "' and '" + std::string(reader[1]) + "'");
    }
    it->second.funded_pmids.push_back(pmid);
  }
  GrantTable out;
  out.reserve(grants.size());
  for (auto& [id, grant] : grants) {
    sort_unique(grant.funded_pmids);
    out.push_back(std::move(grant));
  }
  return out;
}

Citations ingest_citations(std::istream& in, const std::string& source) {
  TsvReader reader(in, source, {"citing_pmid", "cited_pmid"});
  Citations out;
  while (reader.next()) {
    CitationEdge edge{parse_pmid(reader, reader[0], "citing_pmid"),
                      parse_pmid(reader, reader[1], "cited_pmid")};
    if (edge.citing_pmid == edge.cited_pmid) {
      reader.fail("self-citation loop on pmid " + std::to_string(edge.citing_pmid));
    }
    out.push_back(edge);
  }
  sort_unique(out);
  return out;
}

Annotations ingest_annotations(std::istream& in, const std::string& source) {
  TsvReader reader(in, source, {"instance_id", "ethnicity", "gender"});
  std::vector<Annotation> rows;
  std::unordered_set<InstanceId> seen;
  while (reader.next()) {
    Annotation a{parse_instance(reader, reader[0]), std::string(reader[1]), std::string(reader[2])};
    if (!seen.insert(a.instance).second) {
      reader.fail("second annotation for " + to_string(a.instance));
    }
    rows.push_back(std::move(a));
  }
  return Annotations(std::move(rows));
}

Corpus load_corpus(const std::string& path) {
  InputFile f(path);
  return ingest_corpus(f.stream(), path);
}
Registry load_authority(const std::string& path) {
  InputFile f(path);
  return ingest_authority(f.stream(), path);
}
GrantTable load_grants(const std::string& path) {
  InputFile f(path);
  return ingest_grants(f.stream(), path);
}
Citations load_citations(const std::string& path) {
  InputFile f(path);
  return ingest_citations(f.stream(), path);
}
Annotations load_annotations(const std::string& path) {
  InputFile f(path);
  return ingest_annotations(f.stream(), path);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  TsvWriter writer(out, {"pmid", "year", "title", "authors"});
  std::string byline;
  for (const auto& p : corpus.papers()) {
    byline.clear();
    for (const auto& a : p.authors) {
      if (a.find('|') != std::string::npos) throw Error("author name contains '|': " + a);
      if (!byline.empty()) byline += '|';
      byline += a;
    }
    writer.row({std::to_string(p.pmid), std::to_string(p.year), p.title, byline});
  }
}

void write_authority(std::ostream& out, const Registry& registry) {
  TsvWriter writer(out, {"authority_id", "name", "title"});
  for (const auto& profile : registry) {
    for (const auto& title : profile.work_titles) {
      writer.row({profile.authority_id, profile.person_name, title});
    }
  }
}

void write_grants(std::ostream& out, const GrantTable& grants) {
  TsvWriter writer(out, {"pi_id", "pi_name", "pmid"});
  for (const auto& g : grants) {
    for (auto pmid : g.funded_pmids) writer.row({g.pi_id, g.pi_name, std::to_string(pmid)});
  }
}

void write_citations(std::ostream& out, const Citations& citations) {
  TsvWriter writer(out, {"citing_pmid", "cited_pmid"});
  for (const auto& e : citations) {
    writer.row({std::to_string(e.citing_pmid), std::to_string(e.cited_pmid)});
  }
}

void write_annotations(std::ostream& out, const Annotations& annotations) {
  TsvWriter writer(out, {"instance_id", "ethnicity", "gender"});
  for (const auto& a : annotations.rows()) {
    writer.row({to_string(a.instance), a.ethnicity, a.gender});
  }
}

Resolved resolve_references(const Corpus& corpus, const Clustering& clustering,
                            ReferenceMode mode) {
  Resolved out;
  out.clustering = clustering.filtered([&](InstanceId id) {
    if (corpus.contains(id)) return true;
    if (mode == ReferenceMode::strict) {
      throw ParseError("instance_id", "clustering references instance " + to_string(id) + " absent from corpus");
    }
    ++out.dropped;
    return false;
  });
  return out;
}

ResolvedAnnotations resolve_references(const Corpus& corpus, const Annotations& annotations,
                                       ReferenceMode mode) {
  ResolvedAnnotations out;
  std::vector<Annotation> kept;
  for (const auto& a : annotations.rows()) {
    if (corpus.contains(a.instance)) {
      kept.push_back(a);
    } else if (mode == ReferenceMode::strict) {
      throw ParseError("instance_id", "annotation references instance " + to_string(a.instance) +
                  " absent from corpus");
    } else {
      ++out.dropped;
    }
  }
  out.annotations = Annotations(std::move(kept));
  return out;
}

}  // namespace linklab
