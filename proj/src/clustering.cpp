#include "linklab/clustering.hpp"

#include <algorithm>
#include <numeric>

#include "linklab/error.hpp"
#include "linklab/tsv.hpp"

namespace linklab {

std::optional<std::size_t> Clustering::cluster_of(InstanceId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Clustering Clustering::filtered(const std::function<bool(InstanceId)>& keep) const {
  Clustering out;
  for (std::size_t c = 0; c < ids_.size(); ++c) {
    std::vector<InstanceId> kept;
    for (auto id : members_[c]) {
      if (keep(id)) kept.push_back(id);
    }
    if (kept.empty()) continue;
    auto slot = static_cast<std::uint32_t>(out.ids_.size());
    for (auto id : kept) out.index_.emplace(id, slot);
    out.ids_.push_back(ids_[c]);
    out.members_.push_back(std::move(kept));
  }
  return out;
}

bool ClusteringBuilder::add(std::string_view cluster_id, InstanceId id) {
  auto [cit, fresh] =
      cluster_index_.try_emplace(std::string(cluster_id), static_cast<std::uint32_t>(ids_.size()));
  if (fresh) {
    ids_.emplace_back(cluster_id);
    members_.emplace_back();
  }
  auto [oit, inserted] = owner_.try_emplace(id, cit->second);
  if (!inserted) return oit->second == cit->second;
  members_[cit->second].push_back(id);
  return true;
}

const std::string* ClusteringBuilder::assigned(InstanceId id) const {
  auto it = owner_.find(id);
  return it == owner_.end() ? nullptr : &ids_[it->second];
}

Clustering ClusteringBuilder::build() && {
  std::vector<std::uint32_t> order(ids_.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return ids_[a] < ids_[b]; });

  Clustering out;
  out.ids_.reserve(ids_.size());
  out.members_.reserve(ids_.size());
  out.index_.reserve(owner_.size());
  for (auto c : order) {
    if (members_[c].empty()) continue;
    auto slot = static_cast<std::uint32_t>(out.ids_.size());
    auto& m = members_[c];
    std::sort(m.begin(), m.end());
    for (auto id : m) out.index_.emplace(id, slot);
    out.ids_.push_back(std::move(ids_[c]));
    out.members_.push_back(std::move(m));
  }
  *this = ClusteringBuilder{};
  return out;
}

Clustering ingest_clustering(std::istream& in, const std::string& source) {
  TsvReader reader(in, source, {"cluster_id", "instance_id"});
  ClusteringBuilder builder;
  while (reader.next()) {
    if (reader[0].empty()) reader.fail("empty cluster_id");
    InstanceId id;
    try {
      id = parse_instance_id(reader[1]);
    } catch (const ParseError& e) {
      reader.fail(e.what());
    }
    if (!builder.add(reader[0], id)) {
      reader.fail("instance " + to_string(id) + " assigned to both '" +
                  *builder.assigned(id) + "' and '" + std::string(reader[0]) + "'");
    }
  }
  return std::move(builder).build();
}

Clustering load_clustering(const std::string& path) {
  InputFile file(path);
  return ingest_clustering(file.stream(), path);
}

void write_clustering(std::ostream& out, const Clustering& clustering) {
  TsvWriter writer(out, {"cluster_id", "instance_id"});
  for (std::size_t c = 0; c < clustering.cluster_count(); ++c) {
    for (auto id : clustering.members(c)) {
      writer.row({clustering.cluster_id(c), to_string(id)});
    }
  }
}

}  // namespace linklab
