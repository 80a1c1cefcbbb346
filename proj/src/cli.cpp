#include "linklab/cli.hpp"

#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "linklab/baseline.hpp"
#include "linklab/corpus.hpp"
#include "linklab/error.hpp"
#include "linklab/linkage.hpp"
#include "linklab/metrics.hpp"
#include "linklab/profile.hpp"
#include "linklab/synth.hpp"
#include "linklab/tsv.hpp"

namespace linklab::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string file_crc32(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  uLong crc = crc32(0L, Z_NULL, 0);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    auto got = in.gcount();
    if (got > 0) crc = crc32(crc, reinterpret_cast<const Bytef*>(buf.data()), static_cast<uInt>(got));
  }
  char hex[9];
  std::snprintf(hex, sizeof hex, "%08lx", static_cast<unsigned long>(crc));
  return hex;
}

namespace {

// Collects inputs and outputs of one run and writes run_manifest.json.
class Run {
 public:
  Run(std::string command, CLI::App* sub) : command_(std::move(command)), sub_(sub) {}

  const std::string& input(const std::string& path) {
    if (!fs::exists(path)) throw InputError("no such file: " + path);
    inputs_.push_back(path);
    return path;
  }

  void set_out(const std::string& dir) {
    out_dir_ = dir;
    std::error_code ec;
    fs::create_directories(out_dir_, ec);
    if (ec) throw WriteError("cannot create directory " + dir + ": " + ec.message());
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    auto out = open_output(out_dir_ / name);
    body(out);
    out.flush();
    if (!out) throw WriteError("write failed: " + (out_dir_ / name).string());
    outputs_.push_back(name);
  }

  void record_output(const std::string& name) { outputs_.push_back(name); }

  void finish(std::optional<std::uint64_t> seed) {
    json flags = json::object();
    for (const CLI::Option* opt : sub_->get_options()) {
      if (opt->count() == 0 || opt->get_lnames().empty()) continue;
      const auto& name = opt->get_lnames().front();
      if (name == "help") continue;
      auto results = opt->results();
      if (opt->get_expected_max() == 0) {
        flags[name] = true;
      } else if (results.size() == 1 && opt->get_expected_max() == 1) {
        flags[name] = results.front();
      } else {
        flags[name] = results;
      }
    }
    json inputs = json::array();
    for (const auto& p : inputs_) {
      inputs.push_back({{"path", p}, {"bytes", fs::file_size(p)}, {"crc32", file_crc32(p)}});
    }
    json outputs = json::array();
    for (const auto& name : outputs_) {
      auto p = out_dir_ / name;
      outputs.push_back({{"name", name}, {"bytes", fs::file_size(p)}, {"crc32", file_crc32(p)}});
    }
    json manifest;
    manifest["tool"] = "linklab";
    manifest["version"] = kVersion;
    manifest["command"] = command_;
    manifest["flags"] = std::move(flags);
    manifest["seed"] = seed ? json(*seed) : json(nullptr);
    manifest["inputs"] = std::move(inputs);
    manifest["outputs"] = std::move(outputs);
    auto out = open_output(out_dir_ / "run_manifest.json");
    out << manifest.dump(2) << '\n';
    out.flush();
    if (!out) throw WriteError("write failed: run_manifest.json");
  }

 private:
  std::string command_;
  CLI::App* sub_;
  fs::path out_dir_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
};

std::string fmt(double v) { return format_double(v); }

std::vector<std::string> header_of(const std::string& path) {
  InputFile file(path);
  return read_header(file.stream());
}

bool is_labels_header(const std::vector<std::string>& h) {
  return h == std::vector<std::string>{"instance_id", "label_id", "source"};
}
bool is_clustering_header(const std::vector<std::string>& h) {
  return h == std::vector<std::string>{"cluster_id", "instance_id"};
}
bool is_dataset_header(const std::vector<std::string>& h) {
  return !h.empty() && h.front() == "instance_id" && h.size() == 6 && h[1] == "truth_label";
}

std::vector<LabeledInstance> single_source(std::vector<LabeledInstance> labels,
                                           const std::string& source, const std::string& path) {
  if (!source.empty()) return filter_source(labels, parse_label_source(source));
  std::set<LabelSource> sources;
  for (const auto& l : labels) sources.insert(l.source);
  if (sources.size() > 1) {
    throw ConfigError(path + " mixes authority and grant labels; pick one with --source");
  }
  return labels;
}

// Split "name=path" into its parts; a bare path is named by its stem.
std::pair<std::string, std::string> named_path(const std::string& arg) {
  auto eq = arg.find('=');
  if (eq == std::string::npos) return {fs::path(arg).stem().string(), arg};
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

struct Options {
  std::string out;
  std::string papers, authority, grants, citations, annotations;
  std::string truth, pred, pairs, dataset, config;
  std::string a, b;
  std::string dup_title_policy = "drop-all";
  std::string hyphen_policy = "remove";
  std::string method = "fini";
  std::string stratum;
  std::string source;
  std::vector<std::string> datasets;
  std::vector<std::string> attrs;
  std::vector<std::string> pair_sets;
  std::optional<std::uint64_t> seed;
  std::optional<double> fraction;
  std::optional<std::size_t> sample;
  std::optional<std::size_t> n_authors;
  std::optional<double> synonym_rate, homonym_rate, duplicate_title_rate, aini_variant_rate,
      authority_coverage;
  bool strict = false;
};

Annotations maybe_annotations(Run& run, const std::string& path, const Corpus* corpus, bool strict) {
  if (path.empty()) return {};
  auto loaded = load_annotations(run.input(path));
  if (!corpus) return loaded;
  return resolve_references(*corpus, loaded, strict ? ReferenceMode::strict : ReferenceMode::lenient)
      .annotations;
}

int cmd_synth(const Options& o, Run& run, std::ostream& out) {
  if (!o.seed) throw ConfigError("synth requires --seed");
  SynthConfig config;
  if (!o.config.empty()) {
    std::ifstream in(run.input(o.config));
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("config", e.what());
    }
    config = SynthConfig::from_json(j);
  }
  config.seed = *o.seed;
  if (o.n_authors) config.n_authors = *o.n_authors;
  if (o.synonym_rate) config.synonym_rate = *o.synonym_rate;
  if (o.homonym_rate) config.homonym_rate = *o.homonym_rate;
  if (o.duplicate_title_rate) config.duplicate_title_rate = *o.duplicate_title_rate;
  if (o.aini_variant_rate) config.aini_variant_pair_rate = *o.aini_variant_rate;
  if (o.authority_coverage) config.authority_coverage = *o.authority_coverage;

  auto bundle = generate(config);
  run.set_out(o.out);
  for (const auto& name : write_bundle(bundle, o.out)) run.record_output(name);
  run.finish(o.seed);
  out << "synth: authors=" << bundle.ground_truth.authors.size() << " papers=" << bundle.corpus.size()
      << " instances=" << bundle.corpus.instance_count() << " profiles=" << bundle.authority.size()
      << " pis=" << bundle.grants.size() << " citations=" << bundle.citations.size() << '\n';
  return ok;
}

void write_link_outputs(Run& run, const LinkResult& result) {
  run.write("labels.tsv", [&](std::ostream& s) { write_labels(s, result.labels); });
  run.write("conflicts.log", [&](std::ostream& s) { write_drops(s, result.drops); });
  run.write("link_stats.json", [&](std::ostream& s) {
    std::map<std::string, std::size_t> by_reason;
    for (const auto& d : result.drops) ++by_reason[std::string(to_string(d.reason))];
    json j;
    j["labels"] = result.labels.size();
    j["titles_rejected"] = result.stats.titles_rejected;
    j["titles_duplicate"] = result.stats.titles_duplicate;
    j["paper_matches"] = result.stats.paper_matches;
    j["missing_pmids"] = result.stats.missing_pmids;
    j["no_name_match"] = result.stats.no_name_match;
    j["conflicts"] = result.stats.conflicts;
    j["drops"] = by_reason;
    s << j.dump(2) << '\n';
  });
}

void print_link_summary(std::ostream& out, const char* name, const LinkResult& r) {
  out << name << ": labels=" << r.labels.size() << " drops=" << r.drops.size()
      << " conflicts=" << r.stats.conflicts << " no_name_match=" << r.stats.no_name_match << '\n';
}

int cmd_link_authority(const Options& o, Run& run, std::ostream& out) {
  LinkOptions opts;
  opts.duplicate_titles = parse_dup_title_policy(o.dup_title_policy);
  if (o.hyphen_policy == "remove") opts.hyphens = HyphenPolicy::remove;
  else if (o.hyphen_policy == "split") opts.hyphens = HyphenPolicy::split;
  else throw ConfigError("--hyphen-policy must be remove or split");
  auto corpus = load_corpus(run.input(o.papers));
  auto registry = load_authority(run.input(o.authority));
  auto result = link_authority(corpus, registry, opts);
  run.set_out(o.out);
  write_link_outputs(run, result);
  run.finish(std::nullopt);
  print_link_summary(out, "link-authority", result);
  return ok;
}

int cmd_link_grants(const Options& o, Run& run, std::ostream& out) {
  auto corpus = load_corpus(run.input(o.papers));
  auto grants = load_grants(run.input(o.grants));
  auto result = link_grants(corpus, grants);
  run.set_out(o.out);
  write_link_outputs(run, result);
  run.finish(std::nullopt);
  print_link_summary(out, "link-grants", result);
  return ok;
}

int cmd_pairs(const Options& o, Run& run, std::ostream& out) {
  auto corpus = load_corpus(run.input(o.papers));
  auto citations = load_citations(run.input(o.citations));
  PairStats stats;
  auto pairs = extract_selfcitation_pairs(corpus, citations, &stats);
  run.set_out(o.out);
  run.write("pairs.tsv", [&](std::ostream& s) { write_pairs(s, pairs); });
  run.finish(std::nullopt);
  out << "pairs: pairs=" << pairs.size() << " edges=" << stats.edges
      << " edges_missing_paper=" << stats.edges_missing_paper << '\n';
  return ok;
}

int cmd_baseline(const Options& o, Run& run, std::ostream& out) {
  if (o.method != "fini" && o.method != "aini" && o.method != "blocks") {
    throw ConfigError("--method must be fini, aini or blocks");
  }
  auto corpus = load_corpus(run.input(o.papers));
  auto names = name_instances(corpus);
  run.set_out(o.out);
  if (o.method == "blocks") {
    auto blocks = build_blocks(names);
    auto clustering = blocks.to_clustering();
    run.write("clustering.tsv", [&](std::ostream& s) { write_clustering(s, clustering); });
    run.write("blocks.tsv", [&](std::ostream& s) { write_block_sizes(s, blocks); });
    run.finish(std::nullopt);
    out << "baseline: method=blocks blocks=" << blocks.block_count()
        << " instances=" << blocks.instance_count() << " unparseable=" << blocks.unparseable.size() << '\n';
    return ok;
  }
  auto result = o.method == "fini" ? cluster_fini(names) : cluster_aini(names);
  run.write("clustering.tsv", [&](std::ostream& s) { write_clustering(s, result.clustering); });
  run.finish(std::nullopt);
  out << "baseline: method=" << o.method << " clusters=" << result.clustering.cluster_count()
      << " instances=" << result.clustering.instance_count() << " unparseable=" << result.unparseable
      << '\n';
  return ok;
}

// Evaluation rows for a clustering-shaped truth.
EvalDataset dataset_from_clusterings(const Clustering& truth, const Clustering& predicted,
                                     const Corpus& corpus, const Annotations& annotations,
                                     bool strict, std::size_t& dropped) {
  std::vector<EvalRow> rows;
  dropped = 0;
  for (std::size_t c = 0; c < truth.cluster_count(); ++c) {
    for (InstanceId id : truth.members(c)) {
      auto p = predicted.cluster_of(id);
      if (!p) {
        if (strict) throw EvalError("instance " + to_string(id) + " has no predicted cluster");
        ++dropped;
        continue;
      }
      EvalRow row;
      row.instance = id;
      row.truth_label = truth.cluster_id(c);
      row.predicted_cluster = predicted.cluster_id(*p);
      row.year = corpus.year_of(id.pmid);
      if (const Annotation* a = annotations.find(id)) {
        if (!a->ethnicity.empty()) row.ethnicity = a->ethnicity;
        if (!a->gender.empty()) row.gender = a->gender;
      }
      rows.push_back(std::move(row));
    }
  }
  return EvalDataset(std::move(rows));
}

int cmd_evaluate(const Options& o, Run& run, std::ostream& out) {
  std::optional<Attribute> stratum;
  if (!o.stratum.empty()) stratum = parse_attribute(o.stratum);
  Corpus corpus;
  if (!o.papers.empty()) corpus = load_corpus(run.input(o.papers));
  auto annotations = maybe_annotations(run, o.annotations, o.papers.empty() ? nullptr : &corpus, false);

  if (!o.pairs.empty()) {
    if (o.pred.empty()) throw ConfigError("--pairs needs --pred");
    auto pairs = load_pairs(run.input(o.pairs));
    auto predicted = load_clustering(run.input(o.pred));
    auto acc = pair_accuracy(pairs, predicted);
    std::map<std::string, PairAccuracy> strata;
    if (stratum) strata = stratified_pair_accuracy(pairs, predicted, corpus, annotations, *stratum);
    run.set_out(o.out);
    run.write("metrics.json", [&](std::ostream& s) {
      s << pair_metrics_json(acc, stratum ? &strata : nullptr).dump(2) << '\n';
    });
    run.finish(std::nullopt);
    out << "evaluate: pairs=" << acc.evaluated << " matched=" << acc.matched
        << " accuracy=" << fmt(acc.accuracy) << " dropped=" << acc.dropped << '\n';
    return ok;
  }

  EvalDataset dataset;
  std::size_t dropped = 0;
  if (!o.dataset.empty()) {
    dataset = load_eval_dataset(run.input(o.dataset));
  } else {
    if (o.truth.empty() || o.pred.empty()) {
      throw ConfigError("evaluate needs --truth and --pred, --dataset, or --pairs and --pred");
    }
    auto header = header_of(run.input(o.truth));
    auto predicted = load_clustering(run.input(o.pred));
    if (is_labels_header(header)) {
      auto labels = single_source(load_labels(o.truth), o.source, o.truth);
      JoinStats stats;
      dataset = join_labels(labels, predicted, corpus, annotations, &stats);
      if (o.strict && stats.unclustered > 0) {
        throw EvalError(std::to_string(stats.unclustered) + " labeled instances have no predicted cluster");
      }
      dropped = stats.unclustered;
    } else if (is_clustering_header(header)) {
      auto truth = load_clustering(o.truth);
      dataset = dataset_from_clusterings(truth, predicted, corpus, annotations, o.strict, dropped);
    } else {
      throw IngestError(o.truth, 1, "truth must be a labels or clustering table");
    }
  }
  if (dataset.empty()) throw EvalError("nothing to evaluate: no labeled instance is clustered");

  B3Options opts;
  auto scores = b3_scores(dataset.truth(), dataset.predicted(), opts);
  scores.dropped = dropped;
  std::map<std::string, B3Scores> strata;
  if (stratum) strata = stratified_eval(dataset, *stratum, opts);

  run.set_out(o.out);
  run.write("metrics.json", [&](std::ostream& s) {
    s << metrics_json(scores, stratum ? &strata : nullptr).dump(2) << '\n';
  });
  run.write("eval_dataset.tsv", [&](std::ostream& s) { write_eval_dataset(s, dataset); });
  run.finish(std::nullopt);
  out << "evaluate: n=" << scores.n << " recall=" << fmt(scores.recall)
      << " precision=" << fmt(scores.precision) << " f1=" << fmt(scores.f1)
      << " dropped=" << scores.dropped << '\n';
  return ok;
}

int cmd_profile(const Options& o, Run& run, std::ostream& out) {
  std::vector<Attribute> attrs;
  if (o.attrs.empty()) {
    attrs = {Attribute::ethnicity, Attribute::gender, Attribute::year};
  } else {
    for (const auto& a : o.attrs) attrs.push_back(parse_attribute(a));
  }
  if (o.sample && !o.seed) throw ConfigError("--sample requires --seed");
  if ((o.sample || !o.truth.empty() || !o.pair_sets.empty()) && o.papers.empty()) {
    throw ConfigError("--sample, --truth and --pairs need --papers");
  }

  std::optional<Corpus> corpus;
  if (!o.papers.empty()) corpus = load_corpus(run.input(o.papers));
  auto annotations = maybe_annotations(run, o.annotations, corpus ? &*corpus : nullptr, false);

  std::vector<std::pair<std::string, EvalDataset>> datasets;
  for (const auto& arg : o.datasets) {
    auto [name, path] = named_path(arg);
    datasets.emplace_back(name, load_eval_dataset(run.input(path)));
  }
  std::vector<std::pair<std::string, PairSet>> pair_sets;
  for (const auto& arg : o.pair_sets) {
    auto [name, path] = named_path(arg);
    pair_sets.emplace_back(name, load_pairs(run.input(path)));
  }

  std::optional<Clustering> truth;
  if (!o.truth.empty()) truth = load_clustering(run.input(o.truth));

  run.set_out(o.out);
  std::size_t columns = 0;
  for (Attribute attr : attrs) {
    std::vector<std::pair<std::string, Distribution>> cols;
    if (corpus) cols.emplace_back("population", instance_distribution(*corpus, annotations, attr));
    for (const auto& [name, ds] : datasets) cols.emplace_back(name, distribution(ds, attr));
    for (const auto& [name, ps] : pair_sets) {
      cols.emplace_back(name, pair_distribution(ps, *corpus, annotations, attr));
    }
    columns = cols.size();
    if (cols.empty()) continue;
    run.write("dist_" + std::string(to_string(attr)) + ".tsv",
              [&](std::ostream& s) { write_distribution_table(s, cols); });
  }

  std::vector<InstanceId> sample;
  std::optional<TypologyResult> typology;
  double ks = -1.0;
  if (corpus) {
    auto names = name_instances(*corpus);
    std::vector<std::pair<std::string, std::vector<CcdfPoint>>> curves;
    curves.emplace_back("corpus", block_size_ccdf(build_blocks(names)));
    if (o.sample) {
      auto population = corpus->instances();
      sample = reference_sample(population, *o.sample, *o.seed);
      std::vector<NamedInstance> sampled;
      sampled.reserve(sample.size());
      for (InstanceId id : sample) {
        auto it = std::lower_bound(names.begin(), names.end(), id,
                                   [](const NamedInstance& n, InstanceId v) { return n.id < v; });
        sampled.push_back(*it);
      }
      curves.emplace_back("sample", block_size_ccdf(build_blocks(sampled)));
      ks = ks_distance(curves[0].second, curves[1].second);
      run.write("sample.tsv", [&](std::ostream& s) {
        TsvWriter w(s, {"instance_id"});
        for (InstanceId id : sample) w.row({to_string(id)});
      });
    }
    run.write("ccdf.tsv", [&](std::ostream& s) { write_ccdf_table(s, curves); });
    if (truth) {
      typology = classify_synonym_types(*truth, names);
      run.write("typology.tsv", [&](std::ostream& s) { write_typology(s, *typology); });
      run.write("typology_authors.tsv", [&](std::ostream& s) { write_typology_assignments(s, *typology); });
    }
  }
  if (columns == 0 && !corpus) throw ConfigError("profile needs --papers or --dataset");
  run.finish(o.seed);

  out << "profile: columns=" << columns;
  if (o.sample) out << " sample=" << sample.size() << " ks=" << fmt(ks);
  if (typology) out << " multiform_authors=" << typology->counts.total_multiform_authors;
  out << '\n';
  return ok;
}

int cmd_perturb(const Options& o, Run& run, std::ostream& out) {
  if (!o.seed) throw ConfigError("perturb requires --seed");
  if (!o.fraction) throw ConfigError("perturb requires --fraction");
  auto dataset = load_eval_dataset(run.input(o.dataset));
  PerturbStats stats;
  auto perturbed = perturb_tags(dataset, *o.fraction, *o.seed, &stats);
  run.set_out(o.out);
  run.write("eval_dataset.tsv", [&](std::ostream& s) { write_eval_dataset(s, perturbed); });
  run.write("perturb_stats.tsv", [&](std::ostream& s) {
    TsvWriter w(s, {"ethnicity", "group_size", "changed"});
    for (const auto& [tag, size] : stats.group_size) {
      w.row({tag, std::to_string(size), std::to_string(stats.changed.at(tag))});
    }
  });
  run.finish(o.seed);
  std::size_t changed = 0;
  for (const auto& [tag, k] : stats.changed) changed += k;
  out << "perturb: rows=" << perturbed.size() << " groups=" << stats.group_size.size()
      << " changed=" << changed << '\n';
  return ok;
}

std::vector<LabelAssignment> assignments_from(Run& run, const std::string& path,
                                              const std::string& source) {
  auto header = header_of(run.input(path));
  if (is_dataset_header(header)) return truth_assignments(load_eval_dataset(path));
  if (is_labels_header(header)) return label_assignments(single_source(load_labels(path), source, path));
  if (is_clustering_header(header)) {
    auto c = load_clustering(path);
    std::vector<LabelAssignment> out;
    for (std::size_t k = 0; k < c.cluster_count(); ++k) {
      for (InstanceId id : c.members(k)) out.emplace_back(id, c.cluster_id(k));
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  throw IngestError(path, 1, "expected an eval dataset, labels or clustering table");
}

int cmd_agree(const Options& o, Run& run, std::ostream& out) {
  auto a = assignments_from(run, o.a, o.source);
  auto b = assignments_from(run, o.b, o.source);
  auto report = label_agreement(a, b);
  run.set_out(o.out);
  run.write("disagreements.tsv", [&](std::ostream& s) {
    TsvWriter w(s, {"instance_id", "label_a", "label_b"});
    for (const auto& d : report.disagreements) w.row({to_string(d.instance), d.label_a, d.label_b});
  });
  run.finish(std::nullopt);
  out << "agree: overlap=" << report.overlap_count << " agree=" << report.agree_count
      << " disagreements=" << report.disagreements.size() << '\n';
  return ok;
}

int exit_for(const std::exception& e, std::ostream& err) {
  err << "linklab: error: " << e.what() << '\n';
  if (dynamic_cast<const InputError*>(&e)) return missing_input;
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const IngestError*>(&e) ||
      dynamic_cast<const std::invalid_argument*>(&e)) {
    return format_error;
  }
  if (dynamic_cast<const EvalError*>(&e)) return evaluation_error;
  if (dynamic_cast<const WriteError*>(&e)) return write_error;
  if (dynamic_cast<const ConfigError*>(&e)) return usage_error;
  return internal_error;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Author name disambiguation evaluation toolkit", "linklab"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Options o;

  auto out_opt = [&](CLI::App* sub) { sub->add_option("--out", o.out, "Output directory")->required(); };

  auto* synth = app.add_subcommand("synth", "Generate a synthetic bundle with known ground truth");
  synth->add_option("--seed", o.seed, "Random seed")->required();
  out_opt(synth);
  synth->add_option("--config", o.config, "SynthConfig JSON file");
  synth->add_option("--authors", o.n_authors, "Number of authors");
  synth->add_option("--synonym-rate", o.synonym_rate, "Share of multiform authors");
  synth->add_option("--homonym-rate", o.homonym_rate, "Share of authors sharing a name key");
  synth->add_option("--duplicate-title-rate", o.duplicate_title_rate, "Share of papers with a copied title");
  synth->add_option("--aini-variant-rate", o.aini_variant_rate,
                    "Chance two instances of one author differ in all initials");
  synth->add_option("--authority-coverage", o.authority_coverage, "Chance an author has a profile");

  auto* la = app.add_subcommand("link-authority", "Label instances from an authority registry");
  la->add_option("--papers", o.papers)->required();
  la->add_option("--authority", o.authority)->required();
  la->add_option("--dup-title-policy", o.dup_title_policy, "drop-all or keep-first");
  la->add_option("--hyphen-policy", o.hyphen_policy, "remove or split");
  out_opt(la);

  auto* lg = app.add_subcommand("link-grants", "Label instances from grant records");
  lg->add_option("--papers", o.papers)->required();
  lg->add_option("--grants", o.grants)->required();
  out_opt(lg);

  auto* pairs = app.add_subcommand("pairs", "Extract self-citation pairs");
  pairs->add_option("--papers", o.papers)->required();
  pairs->add_option("--citations", o.citations)->required();
  out_opt(pairs);

  auto* baseline = app.add_subcommand("baseline", "Name-string clustering baselines");
  baseline->add_option("--papers", o.papers)->required();
  baseline->add_option("--method", o.method, "fini, aini or blocks");
  out_opt(baseline);

  auto* evaluate = app.add_subcommand("evaluate", "B-cubed or pair-accuracy scoring");
  evaluate->add_option("--truth", o.truth, "labels.tsv or clustering.tsv");
  evaluate->add_option("--pred", o.pred, "Predicted clustering.tsv");
  evaluate->add_option("--pairs", o.pairs, "pairs.tsv (pair accuracy mode)");
  evaluate->add_option("--dataset", o.dataset, "eval_dataset.tsv");
  evaluate->add_option("--papers", o.papers);
  evaluate->add_option("--annotations", o.annotations);
  evaluate->add_option("--stratum", o.stratum, "ethnicity, gender or year");
  evaluate->add_option("--source", o.source, "authority or grant");
  evaluate->add_flag("--strict", o.strict, "Unclustered truth instances are an error");
  out_opt(evaluate);

  auto* profile = app.add_subcommand("profile", "Distributions, block-size CCDF, synonym typology");
  profile->add_option("--dataset", o.datasets, "[name=]eval_dataset.tsv, repeatable");
  profile->add_option("--pairs", o.pair_sets, "[name=]pairs.tsv, repeatable");
  profile->add_option("--papers", o.papers);
  profile->add_option("--annotations", o.annotations);
  profile->add_option("--truth", o.truth, "Truth clustering for the synonym typology");
  profile->add_option("--attr", o.attrs, "ethnicity, gender, year; repeatable");
  profile->add_option("--sample", o.sample, "Reference sample size");
  profile->add_option("--seed", o.seed, "Seed for --sample");
  out_opt(profile);

  auto* perturb = app.add_subcommand("perturb", "Reassign a share of ethnicity tags");
  perturb->add_option("--dataset", o.dataset)->required();
  perturb->add_option("--fraction", o.fraction)->required();
  perturb->add_option("--seed", o.seed)->required();
  out_opt(perturb);

  auto* agree = app.add_subcommand("agree", "Compare two labelings on shared instances");
  agree->add_option("--a", o.a)->required();
  agree->add_option("--b", o.b)->required();
  agree->add_option("--source", o.source, "authority or grant");
  out_opt(agree);

  std::vector<std::string> argv_store{"linklab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? ok : usage_error;
  }

  CLI::App* sub = app.get_subcommands().front();
  Run run_ctx(sub->get_name(), sub);
  try {
    const std::string& name = sub->get_name();
    if (name == "synth") return cmd_synth(o, run_ctx, out);
    if (name == "link-authority") return cmd_link_authority(o, run_ctx, out);
    if (name == "link-grants") return cmd_link_grants(o, run_ctx, out);
    if (name == "pairs") return cmd_pairs(o, run_ctx, out);
    if (name == "baseline") return cmd_baseline(o, run_ctx, out);
    if (name == "evaluate") return cmd_evaluate(o, run_ctx, out);
    if (name == "profile") return cmd_profile(o, run_ctx, out);
    if (name == "perturb") return cmd_perturb(o, run_ctx, out);
    if (name == "agree") return cmd_agree(o, run_ctx, out);
    err << "linklab: unknown subcommand " << name << '\n';
    return usage_error;
  } catch (const std::exception& e) {
    return exit_for(e, err);
  }
}

}  // namespace linklab::cli
