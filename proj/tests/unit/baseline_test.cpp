#include "linklab/baseline.hpp"

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "linklab/corpus.hpp"
#include "linklab/synth.hpp"

using namespace linklab;

namespace {

std::vector<NamedInstance> named(std::initializer_list<const char*> raw) {
  std::vector<NamedInstance> out;
  std::uint32_t pmid = 1;
  for (const char* r : raw) out.push_back({InstanceId{pmid++, 1}, parse_name(r)});
  return out;
}

// Partition as a set of member sets, ignoring cluster ids.
std::set<std::vector<InstanceId>> shape(const Clustering& c) {
  std::set<std::vector<InstanceId>> out;
  for (std::size_t k = 0; k < c.cluster_count(); ++k) {
    out.emplace(c.members(k).begin(), c.members(k).end());
  }
  return out;
}

std::vector<NamedInstance> random_names(unsigned seed, std::size_t n) {
  std::mt19937 rng(seed);
  const char* surnames[] = {"Kim", "Lee", "Wang", "Smith", "Ng"};
  const char* forenames[] = {"J", "J. K.", "Jin", "Ji Won", "K", "K. J.", "", "A B C"};
  std::vector<NamedInstance> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string raw = surnames[rng() % 5];
    std::string f = forenames[rng() % 8];
    if (!f.empty()) raw += ", " + f;
    if (rng() % 20 == 0) raw = "--";
    out.push_back({InstanceId{static_cast<std::uint32_t>(i + 1), 1}, parse_name(raw)});
  }
  return out;
}

}  // namespace

TEST_CASE("FINI groups by surname and first initial") {
  auto wang = cluster_fini(named({"Wang, Wei", "Wang, W"}));
  CHECK(wang.clustering.cluster_count() == 1);
  CHECK(wang.clustering.cluster_id(0) == "wang,w");

  auto ng = cluster_fini(named({"Ng, Patricia M. L.", "Ng, Miang Lon Patricia"}));
  CHECK(ng.clustering.cluster_count() == 2);
}

TEST_CASE("AINI groups by surname and all initials") {
  CHECK(cluster_aini(named({"Brown, C", "Brown, C. C."})).clustering.cluster_count() == 2);
  auto same = cluster_aini(named({"Brown, C. C.", "Brown, Charles Conrad"}));
  CHECK(same.clustering.cluster_count() == 1);
  CHECK(same.clustering.cluster_id(0) == "brown,cc");
}

TEST_CASE("unparseable names become singletons with sentinel ids") {
  auto r = cluster_fini(named({"", "Kim, J", "???"}));
  CHECK(r.unparseable == 2);
  CHECK(r.clustering.cluster_count() == 3);
  CHECK(r.clustering.cluster_id(*r.clustering.cluster_of({1, 1})) == "!1_1");
  CHECK(r.clustering.cluster_id(*r.clustering.cluster_of({3, 1})) == "!3_1");
}

TEST_CASE("FINI equals a brute-force grouping by key") {
  for (unsigned seed = 1; seed <= 20; ++seed) {
    auto names = random_names(seed, 300);
    std::map<std::string, std::vector<InstanceId>> groups;
    for (const auto& n : names) {
      std::string key;
      if (!n.name) {
        key = "!" + to_string(n.id);
      } else {
        key = n.name->surname + ",";
        if (!n.name->forenames.empty()) key += n.name->forenames[0][0];
      }
      groups[key].push_back(n.id);
    }
    auto fini = cluster_fini(names).clustering;
    REQUIRE(fini.cluster_count() == groups.size());
    std::size_t k = 0;
    for (const auto& [key, members] : groups) {
      CHECK(fini.cluster_id(k) == key);
      CHECK(std::vector<InstanceId>(fini.members(k).begin(), fini.members(k).end()) == members);
      ++k;
    }
  }
}

TEST_CASE("AINI refines FINI") {
  for (unsigned seed = 1; seed <= 20; ++seed) {
    auto names = random_names(seed, 300);
    auto fini = cluster_fini(names).clustering;
    auto aini = cluster_aini(names).clustering;
    for (std::size_t c = 0; c < aini.cluster_count(); ++c) {
      auto members = aini.members(c);
      auto home = fini.cluster_of(members[0]);
      for (auto m : members) CHECK(fini.cluster_of(m) == home);
    }
    // pairwise: every AINI-matched pair is FINI-matched
    for (std::size_t i = 0; i < 60; ++i) {
      for (std::size_t j = i + 1; j < 60; ++j) {
        if (aini.cluster_of(names[i].id) == aini.cluster_of(names[j].id)) {
          CHECK(fini.cluster_of(names[i].id) == fini.cluster_of(names[j].id));
        }
      }
    }
  }
}

TEST_CASE("blocks partition exactly like FINI") {
  CHECK(build_blocks({}).block_count() == 0);
  for (unsigned seed = 1; seed <= 10; ++seed) {
    auto names = random_names(seed, 400);
    auto blocks = build_blocks(names);
    CHECK(blocks.instance_count() == names.size());
    std::size_t total = 0;
    for (auto s : blocks.sizes()) total += s;
    CHECK(total == names.size());
    CHECK(blocks.to_clustering() == cluster_fini(names).clustering);
  }
}

TEST_CASE("block size histogram matches the planted population") {
  std::vector<std::size_t> planted;
  std::map<std::size_t, std::size_t> expect;
  std::mt19937 rng(8);
  for (int i = 0; i < 2000; ++i) {
    std::size_t s = 1 + static_cast<std::size_t>(std::pow(1.0 / (1.0 - (rng() % 1000) / 1000.0), 0.8));
    planted.push_back(s);
    ++expect[s];
  }
  auto population = generate_block_population(planted, 3);
  auto blocks = build_blocks(population);
  CHECK(blocks.size_histogram() == expect);
  CHECK(blocks.block_count() == planted.size());
}

TEST_CASE("block sizes file lists one row per block") {
  auto blocks = build_blocks(named({"Kim, J", "Kim, Jin", "Lee, S", ""}));
  std::ostringstream out;
  write_block_sizes(out, blocks);
  CHECK(out.str() == "block_key\tsize\nkim,j\t2\nlee,s\t1\n!4_1\t1\n");
}
