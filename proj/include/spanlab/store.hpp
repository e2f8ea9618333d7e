#pragma once

// Persistent campaign store: an append-only campaigns.jsonl index plus one
// artifact directory per campaign, guarded by an advisory lock.
//
//   <root>/campaigns.jsonl
//   <root>/artifacts/<campaign_id>/<file>
//   <root>/lock

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace spanlab {

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(const std::string& bytes);
std::string read_file(const std::filesystem::path& p);

/// Writes to a sibling temp file, flushes it to disk and renames it over p,
/// so p never holds a truncated file.
void atomic_write(const std::filesystem::path& p, const std::string& bytes);

/// UTC "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp();

enum class CampaignStatus { complete, partial, failed };
std::string to_string(CampaignStatus s);
CampaignStatus campaign_status_from_string(const std::string& s);

struct Artifact {
  std::string name;  // file name inside the campaign's artifact directory
  std::string sha256;
  std::uint64_t bytes = 0;
};

struct CampaignRecord {
  std::string campaign_id;
  std::string command;        // subcommand name
  std::vector<std::string> argv;  // normalized invocation
  nlohmann::json config;      // effective configuration
  std::string group;          // empty when not group-specific
  CampaignStatus status = CampaignStatus::failed;
  std::string started, finished;
  double seconds = 0;
  std::vector<Artifact> artifacts;
  /// SHA-256 over the artifact digests in order.
  std::string checksum;
};

nlohmann::json to_json(const CampaignRecord& r);
CampaignRecord campaign_from_json(const nlohmann::json& j);

/// Holds the store's advisory lock for its lifetime.
class StoreLock {
 public:
  explicit StoreLock(const std::filesystem::path& root);
  ~StoreLock();
  StoreLock(const StoreLock&) = delete;
  StoreLock& operator=(const StoreLock&) = delete;

 private:
  int fd_ = -1;
};

class CampaignStore {
 public:
  explicit CampaignStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path artifact_dir(const std::string& campaign_id) const;

  /// Fresh id "c<seq>-<command>[-<group>]", unique within the store.
  std::string new_campaign_id(const std::string& command, const std::string& group);

  /// Writes one artifact atomically and returns its digest entry.
  Artifact put_artifact(const std::string& campaign_id, const std::string& name, const std::string& bytes);

  /// Fills checksum and appends the record; ids must be unique.
  void append(CampaignRecord r);

  std::vector<CampaignRecord> list() const;
  std::optional<CampaignRecord> find(const std::string& campaign_id) const;

  /// Empty when every artifact re-reads with its recorded digest and the
  /// record checksum matches; otherwise one message per problem.
  std::vector<std::string> verify(const CampaignRecord& r) const;

 private:
  std::filesystem::path index() const { return root_ / "campaigns.jsonl"; }

  std::filesystem::path root_;
};

std::string combined_checksum(const std::vector<Artifact>& artifacts);

}  // namespace spanlab
