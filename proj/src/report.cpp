#include "spanlab/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace spanlab {

namespace fs = std::filesystem;
using nlohmann::json;

json to_json(const CrResult& r) {
  json j = {{"group", r.group->name()},
            {"order", r.group->order()},
            {"formula", r.formula_value},
            {"case", to_string(r.formula_case)},
            {"status", to_string(r.status)},
            {"nodes", r.nodes},
            {"targets_searched", r.targets_searched}};
  j["searched"] = r.searched_value ? json(*r.searched_value) : json(nullptr);
  j["witness_max_nonspanning"] = r.witness_max_nonspanning ? json(r.witness_max_nonspanning->elements()) : json(nullptr);
  j["match"] = r.searched_value ? json(*r.searched_value == r.formula_value) : json(nullptr);
  return j;
}

json to_json(const TheoremAReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j = to_json(row.result);
    j["invariant_factors"] = row.invariant_factors;
    j["smallest_prime"] = row.smallest_prime;
    j["match"] = row.match;
    rows.push_back(std::move(j));
  }
  return {{"max_order", r.max_order}, {"all_match", r.all_match}, {"groups", r.rows.size()}, {"rows", rows}};
}

TableFormat table_format_from_string(const std::string& s) {
  if (s == "text") return TableFormat::text;
  if (s == "markdown" || s == "md") return TableFormat::markdown;
  throw Error("unknown format '" + s + "' (text or markdown)");
}

std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
                         TableFormat f) {
  std::ostringstream out;
  if (f == TableFormat::markdown) {
    auto line = [&](const std::vector<std::string>& cells) {
      out << "|";
      for (const auto& c : cells) {
        std::string e;
        for (char ch : c) {
          if (ch == '|') e += '\\';
          e += ch;
        }
        out << " " << e << " |";
      }
      out << "\n";
    };
    line(header);
    out << "|";
    for (std::size_t i = 0; i < header.size(); ++i) out << "---|";
    out << "\n";
    for (const auto& r : rows) line(r);
    return out.str();
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << cells[i];
      if (i + 1 < cells.size()) out << std::string(width[i] - cells[i].size() + 2, ' ');
    }
    out << "\n";
  };
  line(header);
  std::vector<std::string> rule;
  for (auto w : width) rule.push_back(std::string(w, '-'));
  line(rule);
  for (const auto& r : rows) line(r);
  return out.str();
}

namespace {

std::string str(const json& j) {
  if (j.is_null()) return "-";
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>() ? "yes" : "no";
  if (j.is_array()) {
    std::string s = "{";
    for (std::size_t i = 0; i < j.size(); ++i) s += (i ? "," : "") + str(j[i]);
    return s + "}";
  }
  return j.dump();
}

json load_json(const fs::path& p) {
  try {
    return json::parse(read_file(p));
  } catch (const json::exception& e) {
    throw Error(p.string() + ": " + e.what());
  }
}

std::vector<json> load_jsonl(const fs::path& p) {
  std::vector<json> out;
  std::ifstream in(p);
  if (!in) throw Error("cannot read " + p.string());
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

std::string tags_of(const json& rec) {
  std::string s;
  for (const auto& t : rec.at("tags")) s += (s.empty() ? "" : " ") + t.get<std::string>();
  return s;
}

std::string records_table(const std::vector<json>& recs, TableFormat f) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const json& r = recs[i];
    const json& p = r.at("profile");
    rows.push_back({std::to_string(i + 1), str(r.at("set")), tags_of(r),
                    r.contains("orbit_size") ? str(r.at("orbit_size")) : "-",
                    p.is_null() ? "-" : std::to_string(p.at("subgroup_order").get<int>()),
                    p.is_null() ? "-" : str(p.at("l0")), p.is_null() ? "-" : str(p.at("k")),
                    p.is_null() ? "-" : str(p.at("lengths"))});
  }
  return render_table({"#", "set", "tags", "orbit", "|H|", "l0", "k", "lengths"}, rows, f);
}

std::string counts_line(const json& counts) {
  std::string s;
  for (const auto& [k, v] : counts.items()) s += (s.empty() ? "" : ", ") + k + " " + str(v);
  return s.empty() ? "none" : s;
}

}  // namespace

std::string render_campaign(const CampaignRecord& rec, const fs::path& dir, TableFormat f) {
  std::ostringstream out;
  const bool md = f == TableFormat::markdown;
  out << (md ? "## " : "") << "campaign " << rec.campaign_id << "\n\n";
  out << (md ? "- " : "") << "command: " << rec.command << (rec.group.empty() ? "" : " " + rec.group) << "\n";
  out << (md ? "- " : "") << "status: " << to_string(rec.status) << "\n";
  out << (md ? "- " : "") << "finished: " << rec.finished << " (" << rec.seconds << " s)\n\n";

  auto has = [&](const std::string& name) {
    return std::any_of(rec.artifacts.begin(), rec.artifacts.end(), [&](const Artifact& a) { return a.name == name; });
  };

  if (rec.command == "cr" && has("result.json")) {
    const json j = load_json(dir / "result.json");
    out << render_table({"group", "formula", "case", "searched", "status", "witness"},
                        {{str(j["group"]), str(j["formula"]), str(j["case"]), str(j["searched"]), str(j["status"]),
                          str(j["witness_max_nonspanning"])}},
                        f);
  } else if (rec.command == "verify-theorem-a" && has("table.json")) {
    const json j = load_json(dir / "table.json");
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : j.at("rows")) {
      rows.push_back({str(r["group"]), str(r["order"]), str(r["smallest_prime"]), str(r["case"]), str(r["formula"]),
                      str(r["searched"]), r["match"].get<bool>() ? "ok" : "MISMATCH"});
    }
    out << render_table({"group", "|G|", "p", "case", "formula", "searched", "match"}, rows, f);
    out << "\nall match: " << str(j["all_match"]) << "\n";
  } else if (rec.command == "fuzz-bounds" && has("fuzz.json")) {
    const json j = load_json(dir / "fuzz.json");
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : j.at("reports")) {
      std::string subs;
      for (const auto& s : r.at("subsuites")) {
        subs += (subs.empty() ? "" : "; ") + s.at("name").get<std::string>() + ": " + str(s.at("violations")) + "/" +
                str(s.at("cases")) + (s.at("counted").get<bool>() ? "" : " (info)");
      }
      rows.push_back({str(r["lemma"]), str(r["trials"]), str(r["applicable"]), str(r["violation_count"]),
                      subs.empty() ? "-" : subs});
    }
    out << render_table({"lemma", "trials", "applicable", "violations", "subsuites"}, rows, f);
  } else if (rec.command == "conjecture" && has("certificate.json")) {
    const json j = load_json(dir / "certificate.json");
    out << "conjecture " << str(j["conjecture"]) << " at (p,q) = (" << str(j["p"]) << "," << str(j["q"]) << ") over "
        << str(j["group"]) << ": " << str(j["verdict"]) << "\n";
    out << "extremal sets: " << str(j["extremal_sets"]) << ", counterexamples: " << j["counterexamples"].size()
        << ", unit orbits: " << str(j["orbits"]["count"]) << "\n";
    out << "tags: " << counts_line(j["tag_counts"]) << "\n\n";
    out << records_table(j.at("records").get<std::vector<json>>(), f);
  } else if ((rec.command == "enumerate-extremal" || rec.command == "verify-main") && has("records.jsonl")) {
    const std::string summary = rec.command == "verify-main" ? "report.json" : "summary.json";
    if (has(summary)) {
      const json s = load_json(dir / summary);
      if (s.contains("verdict")) out << "verdict: " << str(s["verdict"]) << "\n";
      out << "records: " << str(s["records"]) << ", tags: " << counts_line(s["tag_counts"]) << "\n\n";
    }
    out << records_table(load_jsonl(dir / "records.jsonl"), f);
  } else if (rec.command == "classify" && has("record.json")) {
    const json j = load_json(dir / "record.json");
    out << records_table({j.at("record")}, f);
    out << "\nobservation on complete subsets: " << (j.at("observation").at("holds").get<bool>() ? "holds" : "VIOLATED")
        << "\n";
  } else {
    out << "artifacts:\n";
    for (const auto& a : rec.artifacts) out << "  " << a.name << " (" << a.bytes << " bytes)\n";
  }
  return out.str();
}

std::string render_index(const std::vector<CampaignRecord>& recs, TableFormat f) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : recs) rows.push_back({r.campaign_id, to_string(r.status), r.command, r.group, r.finished});
  return render_table({"campaign", "status", "command", "group", "finished"}, rows, f);
}

}  // namespace spanlab
