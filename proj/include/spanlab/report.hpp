#pragma once

// JSON forms of search results and text/markdown rendering of stored
// campaigns.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "spanlab/critical.hpp"
#include "spanlab/store.hpp"

namespace spanlab {

nlohmann::json to_json(const CrResult& r);
nlohmann::json to_json(const TheoremAReport& r);

enum class TableFormat { text, markdown };
TableFormat table_format_from_string(const std::string& s);

std::string render_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
                         TableFormat f);

/// Renders a campaign from its stored artifacts.
std::string render_campaign(const CampaignRecord& rec, const std::filesystem::path& artifact_dir, TableFormat f);

/// One line per campaign: id, status, command, group, finished.
std::string render_index(const std::vector<CampaignRecord>& recs, TableFormat f);

}  // namespace spanlab
