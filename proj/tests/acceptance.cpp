// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "oracle.hpp"
#include "spanlab/cli.hpp"
#include "spanlab/critical.hpp"
#include "spanlab/extremal.hpp"
#include "spanlab/fuzz.hpp"
#include "spanlab/store.hpp"
#include "spanlab/sumset.hpp"

using namespace spanlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

Outcome theorem_a_table() {
  const auto t0 = std::chrono::steady_clock::now();
  const TheoremAReport rep = verify_theorem_a(24);
  const double secs = seconds_since(t0);
  std::vector<std::string> mismatches;
  for (const auto& row : rep.rows) {
    if (!row.match) {
      mismatches.push_back(row.result.group->name() + " search " +
                           (row.result.searched_value ? std::to_string(*row.result.searched_value) : "-") +
                           " formula " + std::to_string(row.result.formula_value));
    }
  }
  const std::vector<std::vector<int>> special = {{2, 2}, {3, 3}, {4}, {6}, {2, 4}, {8}};
  int special_ok = 0;
  for (const auto& inv : special) {
    for (const auto& row : rep.rows) {
      if (row.invariant_factors == inv && row.match && row.result.formula_case == CrCase::special_case2) ++special_ok;
    }
  }
  auto searched = [](int n) {
    const CrResult r = cr_search(Group::make({n}));
    return r.searched_value.value_or(-1);
  };
  const int z15 = searched(15), z21 = searched(21);

  std::ostringstream d;
  d << rep.rows.size() << " groups in " << fmt_seconds(secs) << ", special groups " << special_ok << "/6, cr(Z15)="
    << z15 << ", cr(Z21)=" << z21;
  if (!mismatches.empty()) {
    d << "; mismatches:";
    for (const auto& m : mismatches) d << " [" << m << "]";
  }
  return {mismatches.empty() && special_ok == 6 && z15 == 7 && z21 == 8 && secs <= 300, d.str()};
}

Outcome fuzz_suites() {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream d;
  bool ok = true;
  for (const auto& lemma : fuzz_lemmas()) {
    const FuzzReport r = run_fuzz({lemma, 10'000, 1, 31});
    long exhaustive = 0;
    for (const auto& s : r.subsuites)
      if (s.counted) exhaustive += s.cases;
    d << lemma << ":" << r.violation_count << (exhaustive ? "(exh " + std::to_string(exhaustive) + ")" : "") << " ";
    ok = ok && r.ok();
  }
  const double secs = seconds_since(t0);
  d << "violations, " << fmt_seconds(secs);
  return {ok && secs <= 600, d.str()};
}

std::vector<int> sorted_vec(const std::set<int>& s) { return {s.begin(), s.end()}; }

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::vector<int>> groups;
  for (int n = 2; n <= 36; ++n)
    for (const auto& inv : abelian_groups_of_order(n)) groups.push_back(inv);
  std::mt19937_64 rng(20240601);
  int bad_sums = 0, bad_restricted = 0, bad_complete = 0, positives = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto& orders = groups[rng() % groups.size()];
    const oracle::Cyclic o{orders};
    const GroupPtr g = Group::make(orders);
    const int n = o.order();

    std::vector<int> seq(rng() % 15);
    for (int& x : seq) x = static_cast<int>(rng() % n);
    if (subset_sums(Sequence{g, seq}).elements() != sorted_vec(oracle::subset_sums(o, seq))) ++bad_sums;

    std::vector<int> rs(rng() % 15);
    for (int& x : rs) x = static_cast<int>(rng() % n);
    const int h = static_cast<int>(rng() % (rs.size() + 1));
    if (restricted_sums(Sequence{g, rs}, h).elements() != sorted_vec(oracle::restricted_sums(o, rs, h))) ++bad_restricted;

    const int size = 1 + static_cast<int>(rng() % std::min(14, n - 1));
    const auto a = oracle::random_subset(rng, n, size, false);
    const bool expect = oracle::has_complete_subset(o, a);
    positives += expect;
    if (contains_complete_subset(ElementSet(g, std::span<const int>(a))).has_value() != expect) ++bad_complete;
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "mismatches subset_sums " << bad_sums << "/1000, restricted_sums " << bad_restricted
    << "/1000, contains_complete_subset " << bad_complete << "/1000 (" << positives << " positive), "
    << fmt_seconds(secs);
  return {bad_sums == 0 && bad_restricted == 0 && bad_complete == 0 && secs <= 120, d.str()};
}

bool all_classified(const ConjectureReport& r) {
  return std::all_of(r.records.begin(), r.records.end(),
                     [](const ExtremalRecord& x) { return !x.tags.empty() && verify_tags(x).empty(); });
}

Outcome conjecture_certificate(int which, int p, int q, double limit) {
  const auto t0 = std::chrono::steady_clock::now();
  const ConjectureReport r = check_conjecture(which, p, q);
  const double secs = seconds_since(t0);
  const std::uint64_t candidates = binomial(p * q - 1, p + q - (which == 1 ? 3 : 2));
  const bool definitive = r.verdict != Verdict::partial;
  std::ostringstream d;
  d << to_string(r.verdict) << " over Z" << p * q << ": " << candidates << " candidates, " << r.records.size()
    << " extremal sets, " << r.counterexamples.size() << " counterexamples, " << r.orbits.orbits << " unit orbits, "
    << fmt_seconds(secs);
  return {definitive && all_classified(r) && secs < limit, d.str()};
}

Outcome observation() {
  std::ostringstream d;
  bool ok = true;
  for (int n : {15, 16, 21}) {
    const ExtremalContext ctx(Group::make({n}));
    std::uint64_t total = 0, held = 0;
    const auto res = enumerate_extremal(ctx, {}, [&](const ExtremalRecord& r) {
      ++total;
      held += check_observation_31(r.set, ctx).holds;
    });
    ok = ok && res.status == RunStatus::complete && total > 0 && held == total;
    d << "Z" << n << " " << held << "/" << total << " ";
  }
  d << "records hold";
  return {ok, d.str()};
}

Outcome example_constructors() {
  std::ostringstream d;
  bool ok = true;
  for (auto [p, q] : {std::pair{3, 5}, std::pair{5, 7}}) {
    const ElementSet a = make_example_2(p, q, 1);
    const int cr = cr_formula(a.group()).value;
    const bool spans_g = oracle::spans(oracle::Cyclic{{p * q}}, a.elements());
    const bool right = a.size() == p + q - 2 && a.size() == cr - 1 && !a.contains(0) && !spans_g;
    ok = ok && right;
    d << "(" << p << "," << q << "): |A|=" << a.size() << " cr-1=" << cr - 1 << (spans_g ? " spans" : " non-spanning")
      << " ";
  }
  return {ok, d.str()};
}

Outcome main_theorem() {
  std::ostringstream d;
  bool ok = true;
  for (int n : {33, 36}) {
    const auto t0 = std::chrono::steady_clock::now();
    EnumerateOptions o;
    o.orbit_dedup = true;
    o.extended = true;
    o.budget.max_seconds = 2 * 3600;
    const TheoremReport r = verify_theorem_main(Group::make({n}), o);
    ok = ok && r.verdict == Verdict::verified;
    d << r.group << " " << to_string(r.verdict) << " (" << r.records << " orbit reps";
    for (const auto& [tag, count] : r.tag_counts) d << ", " << tag << " " << count;
    d << ", " << fmt_seconds(seconds_since(t0)) << ") ";
  }
  return {ok, d.str()};
}

std::string sorted_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "spanlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return run_command(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome determinism_and_resume() {
  const fs::path dir = fs::temp_directory_path() / ("spanlab-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string full = (dir / "full.jsonl").string();
  const std::string part = (dir / "resumed.jsonl").string();

  const int rc_full = cli({"--no-store", "enumerate-extremal", "--group", "Z21", "--out", full});
  int interruptions = 0;
  int rc = cli({"--no-store", "enumerate-extremal", "--group", "Z21", "--out", part, "--max-nodes", "3000"});
  while (rc == 2 && interruptions < 10'000) {
    ++interruptions;
    rc = cli({"--no-store", "enumerate-extremal", "--group", "Z21", "--out", part, "--resume", part + ".ckpt.json",
              "--max-nodes", "3000"});
  }
  Outcome o;
  if (rc_full != 0 || rc != 0) {
    o.detail = "runs did not complete (exit " + std::to_string(rc_full) + ", " + std::to_string(rc) + ")";
  } else {
    const std::string a = sha256_hex(sorted_lines(read_file(full)));
    const std::string b = sha256_hex(sorted_lines(read_file(part)));
    o.pass = a == b && interruptions > 0;
    o.detail = std::to_string(interruptions) + " interruptions; sorted sha256 " + a.substr(0, 16) +
               (a == b ? " == " : " != ") + b.substr(0, 16);
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"critical-number table over 3 <= |G| <= 24", theorem_a_table},
      {"bound fuzz suites, zero violations", fuzz_suites},
      {"sumset and complete-subset oracle equivalence", oracle_equivalence},
      {"symmetric-progression certificate at (3,5)", [] { return conjecture_certificate(2, 3, 5, 1.0); }},
      {"complete-subset certificate at (3,7)", [] { return conjecture_certificate(1, 3, 7, 60.0); }},
      {"complete subsets of extremal sets are whole subgroups", observation},
      {"symmetric-progression constructors", example_constructors},
      {"extremal structure on Z33 and Z36", main_theorem},
      {"Z21 enumeration determinism across resume", determinism_and_resume},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << "CRITERION " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << ": " << criteria[i].first << " -- "
              << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
