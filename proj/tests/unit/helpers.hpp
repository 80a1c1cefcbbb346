#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "linklab/clustering.hpp"
#include "linklab/corpus.hpp"
#include "linklab/instance_id.hpp"

namespace testutil {

inline linklab::InstanceId id(const char* text) { return linklab::parse_instance_id(text); }

inline linklab::Clustering clustering(
    const std::vector<std::pair<std::string, std::vector<const char*>>>& clusters) {
  linklab::ClusteringBuilder b;
  for (const auto& [name, members] : clusters) {
    for (const char* m : members) b.add(name, id(m));
  }
  return std::move(b).build();
}

// Papers given as {pmid, year, title, {authors...}}.
inline linklab::Corpus corpus(std::vector<linklab::PaperRecord> papers) {
  return linklab::Corpus(std::move(papers));
}

inline std::string tsv(std::initializer_list<std::string> lines) {
  std::string s;
  for (const auto& l : lines) s += l + "\n";
  return s;
}

}  // namespace testutil
