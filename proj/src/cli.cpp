#include "spanlab/cli.hpp"

#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "spanlab/bounds.hpp"
#include "spanlab/critical.hpp"
#include "spanlab/extremal.hpp"
#include "spanlab/fuzz.hpp"
#include "spanlab/report.hpp"
#include "spanlab/store.hpp"

namespace spanlab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kGroupGrammar =
    "Group spec: one or more factors Z<n> joined by 'x', case-insensitive, n >= 2; "
    "e.g. Z15, Z2xZ4, z3xz3. Elements are indices in mixed radix, last factor fastest.";

struct Globals {
  std::string store = "spanlab-store";
  int threads = 1;
  std::uint64_t seed = 1;
  bool no_store = false;
};

struct Budget {
  std::uint64_t max_nodes = 0;
  double max_seconds = 0;
  SearchBudget get() const { return {max_nodes, max_seconds}; }
};

void add_budget(CLI::App* sub, Budget& b) {
  sub->add_option("--max-nodes", b.max_nodes, "Stop after this many search nodes (0 = unlimited)");
  sub->add_option("--max-seconds", b.max_seconds, "Stop after this many seconds (0 = unlimited)");
}

GroupPtr parse_group(const std::string& spec) { return Group::parse(spec); }

void require_writable(const std::string& path) {
  if (path.empty()) return;
  const fs::path p(path);
  const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  if (!fs::is_directory(dir) || ::access(dir.c_str(), W_OK) != 0) {
    throw Error("output path not writable: " + path);
  }
}

std::vector<std::string> normalized_argv(const CLI::App* sub) {
  std::vector<std::string> out = {sub->get_name()};
  for (const CLI::Option* o : sub->get_options()) {
    if (o->count() == 0 || o->get_name() == "--help") continue;
    std::string s = o->get_name();
    const auto& res = o->results();
    if (!res.empty() && !(res.size() == 1 && res[0] == "true" && o->get_type_size() == 0)) {
      s += "=";
      for (std::size_t i = 0; i < res.size(); ++i) s += (i ? "," : "") + res[i];
    }
    out.push_back(s);
  }
  return out;
}

/// One campaign: collects artifacts and appends its record on finish.
class Session {
 public:
  Session(const Globals& g, std::string command, std::string group, json config, std::vector<std::string> argv,
          std::ostream& out)
      : out_(out), start_(std::chrono::steady_clock::now()) {
    rec_.command = std::move(command);
    rec_.group = std::move(group);
    rec_.config = std::move(config);
    rec_.config["threads"] = g.threads;
    rec_.config["seed"] = g.seed;
    rec_.config["store"] = g.no_store ? json(nullptr) : json(g.store);
    rec_.argv = std::move(argv);
    rec_.started = utc_timestamp();
    if (!g.no_store) {
      store_.emplace(g.store);
      rec_.campaign_id = store_->new_campaign_id(rec_.command, rec_.group);
    }
  }

  void artifact(const std::string& name, const std::string& bytes, const std::string& copy_to = "") {
    if (!copy_to.empty()) atomic_write(copy_to, bytes);
    if (store_) rec_.artifacts.push_back(store_->put_artifact(rec_.campaign_id, name, bytes));
  }

  /// Appends the record; violation forces exit 1 whatever the status.
  int finish(CampaignStatus st, bool violation = false) {
    rec_.status = st;
    rec_.finished = utc_timestamp();
    rec_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (store_) {
      store_->append(rec_);
      out_ << "campaign " << rec_.campaign_id << " " << to_string(st) << "\n";
    }
    if (violation || st == CampaignStatus::failed) return 1;
    return st == CampaignStatus::partial ? 2 : 0;
  }

  bool finished() const { return !rec_.finished.empty(); }

 private:
  std::ostream& out_;
  std::chrono::steady_clock::time_point start_;
  std::optional<CampaignStore> store_;
  CampaignRecord rec_;
};

std::string jsonl_line(const ExtremalRecord& r) { return to_json(r).dump() + "\n"; }

// ---------------------------------------------------------------------------

struct CrArgs {
  std::string group, out;
  bool formula_only = false, both = false, extended = false, no_orbit = false, no_prune = false;
  Budget budget;
};

int cmd_cr(const CrArgs& a, Session& s, std::ostream& out) {
  GroupPtr g = parse_group(a.group);
  const CrFormula f = cr_formula(*g);
  out << "group " << g->name() << "\n";
  out << "formula " << f.value << "\n";
  out << "case " << to_string(f.which) << "\n";
  if (a.formula_only) {
    json j = {{"group", g->name()}, {"order", g->order()}, {"formula", f.value}, {"case", to_string(f.which)}};
    s.artifact("result.json", j.dump(2) + "\n", a.out);
    return s.finish(CampaignStatus::complete);
  }
  CrSearchOptions o;
  o.orbit_reduction = !a.no_orbit;
  o.spanning_prune = !a.no_prune;
  o.extended = a.extended;
  o.budget = a.budget.get();
  const CrResult r = cr_search(g, o);
  if (r.searched_value) {
    out << "searched " << *r.searched_value << "\n";
    out << "witness " << json(r.witness_max_nonspanning->elements()).dump() << "\n";
  } else if (g->order() > o.exact_max_order && !o.extended) {
    out << "searched - (order above " << o.exact_max_order << "; pass --extended)\n";
  } else {
    out << "searched - (budget exceeded)\n";
  }
  s.artifact("result.json", to_json(r).dump(2) + "\n", a.out);
  const bool mismatch = r.searched_value && *r.searched_value != r.formula_value;
  if (mismatch) out << "MISMATCH: search disagrees with the formula\n";
  return s.finish(r.status == SearchStatus::complete ? CampaignStatus::complete : CampaignStatus::partial, mismatch);
}

struct TheoremAArgs {
  int max_order = 24;
  std::string out;
  Budget budget;
};

int cmd_theorem_a(const TheoremAArgs& a, const Globals& g, Session& s, std::ostream& out) {
  CrSearchOptions o;
  o.budget = a.budget.get();
  o.threads = g.threads;
  const TheoremAReport r = verify_theorem_a(a.max_order, o);
  std::vector<std::vector<std::string>> rows;
  bool partial = false;
  for (const auto& row : r.rows) {
    partial = partial || row.result.status != SearchStatus::complete;
    rows.push_back({row.result.group->name(), std::to_string(row.order), std::to_string(row.smallest_prime),
                    to_string(row.result.formula_case), std::to_string(row.result.formula_value),
                    row.result.searched_value ? std::to_string(*row.result.searched_value) : "-",
                    row.match ? "ok" : "MISMATCH"});
  }
  out << render_table({"group", "|G|", "p", "case", "formula", "searched", "match"}, rows, TableFormat::text);
  out << "all match: " << (r.all_match ? "yes" : "no") << " (" << r.rows.size() << " groups, " << r.seconds << " s)\n";
  s.artifact("table.json", to_json(r).dump(2) + "\n", a.out);
  const bool mismatch = std::any_of(r.rows.begin(), r.rows.end(),
                                    [](const TheoremARow& x) { return x.result.searched_value && !x.match; });
  return s.finish(partial ? CampaignStatus::partial : CampaignStatus::complete, mismatch);
}

struct EnumArgs {
  std::string group, out, resume, checkpoint;
  bool orbit_dedup = false, extended = false;
  std::uint64_t checkpoint_every = 1 << 20;
  Budget budget;
};

json checkpoint_file(const EnumerationCheckpoint& c, const std::string& status, const std::string& out) {
  return {{"status", status}, {"out", out}, {"checkpoint", to_json(c)}};
}

// Re-reads a finished record stream: tag counts, tag re-verification and the
// complete-subset observation, over every record.
json summarize_records(const std::string& jsonl, const ExtremalContext& ctx, bool& violation) {
  std::map<std::string, int> tags;
  std::uint64_t n = 0, bad_tags = 0, obs_bad = 0, orbit_total = 0;
  std::istringstream in(jsonl);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const ExtremalRecord r = record_from_json(json::parse(line), ctx.group());
    ++n;
    for (Tag t : r.tags) ++tags[to_string(t)];
    if (!verify_tags(r).empty()) ++bad_tags;
    if (!check_observation_31(r.set, ctx).holds) ++obs_bad;
    orbit_total += r.orbit_size.value_or(1);
  }
  violation = bad_tags > 0 || obs_bad > 0;
  return {{"records", n},
          {"sets_covered", orbit_total},
          {"tag_counts", tags},
          {"tag_verification_failures", bad_tags},
          {"observation_complete_subsets", {{"checked", n}, {"violations", obs_bad}}}};
}

// True only for a readable checkpoint marked COMPLETE; anything else is
// left to the resume path, which reports it.
bool resume_is_complete(const std::string& path) {
  if (path.empty()) return false;
  try {
    const json ck = json::parse(read_file(path));
    return ck.at("status").get<std::string>() == "COMPLETE";
  } catch (const std::exception&) {
    return false;
  }
}

int cmd_enumerate(const EnumArgs& a, const Globals& g, Session& s, std::ostream& out) {
  GroupPtr grp = parse_group(a.group);
  require_writable(a.out);
  const std::string partial_path = a.out + ".partial";
  const std::string ck_path = a.checkpoint.empty() ? a.out + ".ckpt.json" : a.checkpoint;
  require_writable(ck_path);

  EnumerateOptions o;
  o.orbit_dedup = a.orbit_dedup;
  o.extended = a.extended;
  o.budget = a.budget.get();
  o.threads = g.threads;
  o.checkpoint_every_nodes = a.checkpoint_every;

  std::optional<EnumerationCheckpoint> resume;
  if (!a.resume.empty()) {
    json ck;
    try {
      ck = json::parse(read_file(a.resume));
    } catch (const json::exception& e) {
      throw Error("corrupt checkpoint " + a.resume + ": " + e.what());
    }
    try {
      resume = checkpoint_from_json(ck.at("checkpoint"));
    } catch (const json::exception& e) {
      throw Error("corrupt checkpoint " + a.resume + ": " + e.what());
    } catch (const Error& e) {
      throw Error("corrupt checkpoint " + a.resume + ": " + e.what());
    }
    if (resume->engine_version != kEngineVersion) {
      throw Error("checkpoint engine version '" + resume->engine_version + "' does not match '" + kEngineVersion +
                  "'; refusing to resume");
    }
    o.orbit_dedup = resume->orbit_dedup;
    if (!fs::exists(partial_path) || fs::file_size(partial_path) < resume->output_bytes) {
      throw Error("partial output " + partial_path + " is missing or shorter than the checkpoint");
    }
    fs::resize_file(partial_path, resume->output_bytes);
  }

  const ExtremalContext ctx(grp);
  std::uint64_t bytes = resume ? resume->output_bytes : 0;
  std::ofstream stream(partial_path, resume ? std::ios::binary | std::ios::app : std::ios::binary | std::ios::trunc);
  if (!stream) throw Error("output path not writable: " + partial_path);

  auto emit = [&](const ExtremalRecord& r) {
    const std::string line = jsonl_line(r);
    stream << line;
    bytes += line.size();
  };
  auto on_checkpoint = [&](EnumerationCheckpoint& c) {
    stream.flush();
    c.output_bytes = bytes;
    atomic_write(ck_path, checkpoint_file(c, "PARTIAL", a.out).dump(2) + "\n");
  };
  const EnumerateResult r = enumerate_extremal(ctx, o, emit, on_checkpoint, resume);
  stream.close();
  if (!stream) throw Error("writing " + partial_path + " failed");

  json summary = {{"group", grp->name()},
                  {"set_size", ctx.extremal_size()},
                  {"orbit_dedup", o.orbit_dedup},
                  {"enumeration", to_json(r)}};
  if (r.status == RunStatus::partial) {
    summary["status"] = "PARTIAL";
    out << "budget exhausted after " << r.records << " records; resume with --resume " << ck_path << "\n";
    s.artifact("checkpoint.json", checkpoint_file(*r.checkpoint, "PARTIAL", a.out).dump(2) + "\n");
    s.artifact("summary.json", summary.dump(2) + "\n");
    return s.finish(CampaignStatus::partial);
  }
  if (std::rename(partial_path.c_str(), a.out.c_str()) != 0) throw Error("cannot move records into " + a.out);
  EnumerationCheckpoint done = r.checkpoint.value_or(EnumerationCheckpoint{});
  done.group = grp->name();
  done.set_size = ctx.extremal_size();
  done.orbit_dedup = o.orbit_dedup;
  done.unit = r.units;
  done.records_emitted = r.records;
  done.output_bytes = bytes;
  done.nodes = r.nodes;
  atomic_write(ck_path, checkpoint_file(done, "COMPLETE", a.out).dump(2) + "\n");

  const std::string records = read_file(a.out);
  bool violation = false;
  summary["status"] = "COMPLETE";
  summary.update(summarize_records(records, ctx, violation));
  out << grp->name() << ": " << r.records << " extremal " << (o.orbit_dedup ? "orbit representatives" : "sets")
      << " of size " << ctx.extremal_size() << "\n";
  for (const auto& [k, v] : summary["tag_counts"].items()) out << "  " << k << " " << v << "\n";
  if (violation) out << "VIOLATION: tag re-verification or the complete-subset observation failed\n";
  s.artifact("records.jsonl", records);
  s.artifact("summary.json", summary.dump(2) + "\n");
  return s.finish(CampaignStatus::complete, violation);
}

struct ClassifyArgs {
  std::string group, set, out;
};

std::vector<int> parse_set(const std::string& text) {
  std::vector<int> v;
  std::string tok;
  std::istringstream in(text);
  while (std::getline(in, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(" {}[]"));
    tok.erase(tok.find_last_not_of(" {}[]") + 1);
    if (tok.empty()) continue;
    try {
      std::size_t used = 0;
      v.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw Error("");
    } catch (...) {
      throw Error("malformed set element '" + tok + "'");
    }
  }
  return v;
}

int cmd_classify(const ClassifyArgs& a, Session& s, std::ostream& out) {
  GroupPtr g = parse_group(a.group);
  require_writable(a.out);
  const ExtremalContext ctx(g);
  std::vector<int> elems = parse_set(a.set);
  for (int x : elems)
    if (x < 0 || x >= g->order()) throw Error("element " + std::to_string(x) + " is not an index of " + g->name());
  const ElementSet set(g, elems);
  const ExtremalRecord r = classify(set, ctx);
  const ObservationReport obs = check_observation_31(set, ctx);
  const auto bad = verify_tags(r);
  json j = {{"record", to_json(r)}, {"observation", to_json(obs)}, {"tag_verification", bad}};
  out << j.dump(2) << "\n";
  s.artifact("record.json", j.dump(2) + "\n", a.out);
  return s.finish(CampaignStatus::complete, !obs.holds || !bad.empty());
}

struct ConjectureArgs {
  int which = 0, p = 0, q = 0;
  std::string out;
  bool orbit_dedup = false;
  Budget budget;
};

int cmd_conjecture(const ConjectureArgs& a, const Globals& g, Session& s, std::ostream& out) {
  require_writable(a.out);
  EnumerateOptions o;
  o.orbit_dedup = a.orbit_dedup;
  o.budget = a.budget.get();
  o.threads = g.threads;
  const ConjectureReport r = check_conjecture(a.which, a.p, a.q, o);
  out << "conjecture " << a.which << " at (p,q) = (" << a.p << "," << a.q << ") over " << r.group << ": "
      << to_string(r.verdict) << "\n";
  out << "extremal sets " << r.records.size() << ", counterexamples " << r.counterexamples.size() << ", unit orbits "
      << r.orbits.orbits << "\n";
  s.artifact("certificate.json", to_json(r).dump(2) + "\n", a.out);
  return s.finish(r.verdict == Verdict::partial ? CampaignStatus::partial : CampaignStatus::complete);
}

struct MainArgs {
  std::string group, out;
  double budget_hours = 2;
  bool no_orbit = false;
  std::uint64_t max_nodes = 0;
};

int cmd_verify_main(const MainArgs& a, const Globals& g, Session& s, std::ostream& out) {
  GroupPtr grp = parse_group(a.group);
  require_writable(a.out);
  EnumerateOptions o;
  o.extended = true;
  o.orbit_dedup = !a.no_orbit && grp->is_cyclic();
  o.budget = {a.max_nodes, a.budget_hours * 3600.0};
  o.threads = g.threads;
  std::string records;
  const TheoremReport r = verify_theorem_main(grp, o, [&](const ExtremalRecord& x) { records += jsonl_line(x); });
  out << grp->name() << ": " << to_string(r.verdict) << ", " << r.records << " extremal "
      << (r.orbit_dedup ? "orbit representatives" : "sets") << "\n";
  for (const auto& [k, v] : r.tag_counts) out << "  " << k << " " << v << "\n";
  json j = to_json(r);
  s.artifact("report.json", j.dump(2) + "\n", a.out);
  s.artifact("records.jsonl", records);
  if (r.run.checkpoint) s.artifact("checkpoint.json", to_json(*r.run.checkpoint).dump(2) + "\n");
  return s.finish(r.run.status == RunStatus::partial ? CampaignStatus::partial : CampaignStatus::complete,
                  r.verdict == Verdict::refuted);
}

struct FuzzArgs {
  std::vector<std::string> lemmas;
  long trials = 10'000;
  int max_p = 31;
  std::string out;
};

int cmd_fuzz(const FuzzArgs& a, const Globals& g, Session& s, std::ostream& out) {
  require_writable(a.out);
  std::vector<std::string> lemmas;
  for (const auto& l : a.lemmas) {
    if (l == "all") lemmas.insert(lemmas.end(), fuzz_lemmas().begin(), fuzz_lemmas().end());
    else lemmas.push_back(l);
  }
  if (lemmas.empty()) lemmas = fuzz_lemmas();
  json reports = json::array();
  std::vector<std::vector<std::string>> rows;
  bool violation = false;
  for (const auto& l : lemmas) {
    const FuzzReport r = run_fuzz({l, a.trials, g.seed, a.max_p});
    violation = violation || !r.ok();
    reports.push_back(r.to_json());
    std::string subs;
    for (const auto& sub : r.subsuites) {
      subs += (subs.empty() ? "" : "; ") + sub.name + ": " + std::to_string(sub.violations) + "/" +
              std::to_string(sub.cases) + (sub.counted ? "" : " (info)");
    }
    rows.push_back({l, std::to_string(r.trials), std::to_string(r.applicable), std::to_string(r.violation_count),
                    subs.empty() ? "-" : subs});
  }
  out << render_table({"lemma", "trials", "applicable", "violations", "subsuites"}, rows, TableFormat::text);
  s.artifact("fuzz.json", json{{"seed", g.seed}, {"reports", reports}}.dump(2) + "\n", a.out);
  return s.finish(CampaignStatus::complete, violation);
}

struct ReportArgs {
  std::string campaign, format = "text";
  bool list = false;
};

int cmd_report(const ReportArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  if (!fs::exists(fs::path(g.store) / "campaigns.jsonl")) throw Error("no campaign store at " + g.store);
  const CampaignStore store(g.store);
  const TableFormat f = table_format_from_string(a.format);
  if (a.list || a.campaign.empty()) {
    out << render_index(store.list(), f);
    return 0;
  }
  const auto rec = store.find(a.campaign);
  if (!rec) throw Error("unknown campaign '" + a.campaign + "'");
  const auto bad = store.verify(*rec);
  if (!bad.empty()) {
    for (const auto& b : bad) err << "integrity: " << b << "\n";
    return 1;
  }
  out << render_campaign(*rec, store.artifact_dir(rec->campaign_id), f);
  return 0;
}

}  // namespace

int run_command(int argc, const char* const argv[], std::ostream& out, std::ostream& err) {
  CLI::App app{"spanlab: critical numbers, extremal non-spanning sets and bound campaigns over finite abelian groups.\n" +
               std::string(kGroupGrammar)};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--store", g.store, "Campaign store directory")->envname("SPANLAB_STORE")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")->envname("SPANLAB_THREADS")->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed")->envname("SPANLAB_SEED")->capture_default_str();
  app.add_flag("--no-store", g.no_store, "Do not record the campaign");

  CrArgs cr;
  auto* cr_cmd = app.add_subcommand("cr", "Critical number by formula and exhaustive search");
  cr_cmd->add_option("--group", cr.group, "Group spec, e.g. Z15 or Z2xZ4")->required();
  cr_cmd->add_flag("--both", cr.both, "Formula and search (default)");
  cr_cmd->add_flag("--formula-only", cr.formula_only, "Skip the search");
  cr_cmd->add_flag("--extended", cr.extended, "Search above order 24");
  cr_cmd->add_flag("--no-orbit", cr.no_orbit, "Search every target instead of one per unit orbit");
  cr_cmd->add_flag("--no-prune", cr.no_prune, "Disable the spanning prune");
  cr_cmd->add_option("--out", cr.out, "Also write the result JSON here");
  add_budget(cr_cmd, cr.budget);

  TheoremAArgs ta;
  auto* ta_cmd = app.add_subcommand("verify-theorem-a", "Compare formula and search over every abelian group");
  ta_cmd->add_option("--max-order", ta.max_order, "Largest group order")->check(CLI::Range(3, 64))->capture_default_str();
  ta_cmd->add_option("--out", ta.out, "Also write the table JSON here");
  add_budget(ta_cmd, ta.budget);

  EnumArgs en;
  auto* en_cmd = app.add_subcommand("enumerate-extremal", "Stream every extremal non-spanning set as JSONL");
  en_cmd->add_option("--group", en.group, "Group spec")->required();
  en_cmd->add_option("--out", en.out, "Record stream (JSONL)")->required();
  en_cmd->add_option("--resume", en.resume, "Resume from this checkpoint file");
  en_cmd->add_option("--checkpoint", en.checkpoint, "Checkpoint file (default <out>.ckpt.json)");
  en_cmd->add_option("--checkpoint-every", en.checkpoint_every, "Search nodes between checkpoints")
      ->capture_default_str();
  en_cmd->add_flag("--orbit-dedup", en.orbit_dedup, "One record per unit orbit (single-factor specs)");
  en_cmd->add_flag("--extended", en.extended, "Allow more than 10^7 candidate sets");
  add_budget(en_cmd, en.budget);

  ClassifyArgs cl;
  auto* cl_cmd = app.add_subcommand("classify", "Classify one extremal set");
  cl_cmd->add_option("--group", cl.group, "Group spec")->required();
  cl_cmd->add_option("--set", cl.set, "Element indices, comma separated")->required();
  cl_cmd->add_option("--out", cl.out, "Also write the record JSON here");

  ConjectureArgs cj;
  auto* cj_cmd = app.add_subcommand("conjecture", "Certificate for a conjectured extremal structure over Z_pq");
  cj_cmd->add_option("--which", cj.which, "1: complete subset; 2: symmetric progression")->required()->check(CLI::Range(1, 2));
  cj_cmd->add_option("--p", cj.p, "Smaller odd prime")->required();
  cj_cmd->add_option("--q", cj.q, "Larger odd prime")->required();
  cj_cmd->add_option("--out", cj.out, "Also write the certificate JSON here");
  cj_cmd->add_flag("--orbit-dedup", cj.orbit_dedup, "List one set per unit orbit");
  add_budget(cj_cmd, cj.budget);

  MainArgs mn;
  auto* mn_cmd = app.add_subcommand("verify-main", "Check the extremal structure theorem on one group");
  mn_cmd->add_option("--group", mn.group, "Group spec")->required();
  mn_cmd->add_option("--budget-hours", mn.budget_hours, "Wall-clock budget")->capture_default_str();
  mn_cmd->add_option("--max-nodes", mn.max_nodes, "Node budget (0 = unlimited)");
  mn_cmd->add_flag("--no-orbit", mn.no_orbit, "Enumerate every set instead of unit-orbit representatives");
  mn_cmd->add_option("--out", mn.out, "Also write the report JSON here");

  FuzzArgs fz;
  auto* fz_cmd = app.add_subcommand("fuzz-bounds", "Seeded randomized and exhaustive bound campaigns");
  fz_cmd->add_option("--lemma", fz.lemmas, "2.1 ... 2.9 or all (repeatable)")
      ->check(CLI::IsMember({"all", "2.1", "2.2", "2.3", "2.4", "2.5", "2.6", "2.7", "2.8", "2.9"}));
  fz_cmd->add_option("--trials", fz.trials, "Random trials per lemma")->check(CLI::NonNegativeNumber)->capture_default_str();
  fz_cmd->add_option("--max-p", fz.max_p, "Largest prime or group order")->check(CLI::Range(5, 200))->capture_default_str();
  fz_cmd->add_option("--out", fz.out, "Also write the report JSON here");

  ReportArgs rp;
  auto* rp_cmd = app.add_subcommand("report", "Render a stored campaign");
  rp_cmd->add_option("--campaign", rp.campaign, "Campaign id");
  rp_cmd->add_flag("--list", rp.list, "List campaigns");
  rp_cmd->add_option("--format", rp.format, "text or markdown")
      ->check(CLI::IsMember({"text", "markdown", "md"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (name == "report") {
    try {
      return cmd_report(rp, g, out, err);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
  }

  std::string group;
  json config = json::object();
  for (const CLI::Option* o : sub->get_options()) {
    if (o->get_name() == "--help") continue;
    const auto& res = o->results();
    config[o->get_name().substr(2)] = res.empty() ? json(nullptr) : json(res.size() == 1 ? json(res[0]) : json(res));
  }
  try {
    if (name == "cr") group = parse_group(cr.group)->name();
    if (name == "enumerate-extremal") group = parse_group(en.group)->name();
    if (name == "classify") group = parse_group(cl.group)->name();
    if (name == "verify-main") group = parse_group(mn.group)->name();
    if (name == "conjecture") group = "Z" + std::to_string(cj.p * cj.q);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  if (name == "enumerate-extremal" && resume_is_complete(en.resume)) {
    out << "checkpoint " << en.resume << " belongs to a complete run; nothing to do\n";
    return 0;
  }

  std::optional<Session> s;
  try {
    s.emplace(g, name, group, config, normalized_argv(sub), out);
    int rc = 1;
    if (name == "cr") rc = cmd_cr(cr, *s, out);
    else if (name == "verify-theorem-a") rc = cmd_theorem_a(ta, g, *s, out);
    else if (name == "enumerate-extremal") rc = cmd_enumerate(en, g, *s, out);
    else if (name == "classify") rc = cmd_classify(cl, *s, out);
    else if (name == "conjecture") rc = cmd_conjecture(cj, g, *s, out);
    else if (name == "verify-main") rc = cmd_verify_main(mn, g, *s, out);
    else if (name == "fuzz-bounds") rc = cmd_fuzz(fz, g, *s, out);
    return rc;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    if (s && !s->finished()) {
      try {
        s->finish(CampaignStatus::failed);
      } catch (const std::exception& e2) {
        err << "error: could not record the failed campaign: " << e2.what() << "\n";
      }
    }
    return 1;
  }
}

}  // namespace spanlab
