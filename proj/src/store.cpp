#include "spanlab/store.hpp"

#include <fcntl.h>
#include <openssl/evp.h>
#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <memory>
#include <sstream>

#include "spanlab/group.hpp"

namespace spanlab {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr)) throw Error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void atomic_write(const fs::path& p, const std::string& bytes) {
  const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  if (!fs::is_directory(dir)) throw Error("cannot write " + p.string() + ": directory does not exist");
  const fs::path tmp = dir / ("." + p.filename().string() + ".tmp." + std::to_string(::getpid()));
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw Error("cannot write " + p.string() + ": " + std::strerror(errno));
  std::size_t done = 0;
  while (done < bytes.size()) {
    const ssize_t w = ::write(fd, bytes.data() + done, bytes.size() - done);
    if (w < 0) {
      ::close(fd);
      ::unlink(tmp.c_str());
      throw Error("write to " + tmp.string() + " failed");
    }
    done += static_cast<std::size_t>(w);
  }
  ::fsync(fd);
  ::close(fd);
  if (std::rename(tmp.c_str(), p.c_str()) != 0) {
    ::unlink(tmp.c_str());
    throw Error("cannot rename into " + p.string());
  }
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string to_string(CampaignStatus s) {
  switch (s) {
    case CampaignStatus::complete: return "COMPLETE";
    case CampaignStatus::partial: return "PARTIAL";
    case CampaignStatus::failed: return "FAILED";
  }
  return "?";
}

CampaignStatus campaign_status_from_string(const std::string& s) {
  if (s == "COMPLETE") return CampaignStatus::complete;
  if (s == "PARTIAL") return CampaignStatus::partial;
  if (s == "FAILED") return CampaignStatus::failed;
  throw Error("unknown campaign status '" + s + "'");
}

json to_json(const CampaignRecord& r) {
  json arts = json::array();
  for (const auto& a : r.artifacts) arts.push_back({{"name", a.name}, {"sha256", a.sha256}, {"bytes", a.bytes}});
  return {{"campaign_id", r.campaign_id},
          {"command", r.command},
          {"argv", r.argv},
          {"config", r.config},
          {"group", r.group},
          {"status", to_string(r.status)},
          {"started", r.started},
          {"finished", r.finished},
          {"seconds", r.seconds},
          {"artifacts", arts},
          {"checksum", r.checksum}};
}

CampaignRecord campaign_from_json(const json& j) {
  try {
    CampaignRecord r;
    r.campaign_id = j.at("campaign_id").get<std::string>();
    r.command = j.at("command").get<std::string>();
    r.argv = j.at("argv").get<std::vector<std::string>>();
    r.config = j.at("config");
    r.group = j.at("group").get<std::string>();
    r.status = campaign_status_from_string(j.at("status").get<std::string>());
    r.started = j.at("started").get<std::string>();
    r.finished = j.at("finished").get<std::string>();
    r.seconds = j.at("seconds").get<double>();
    for (const auto& a : j.at("artifacts")) {
      r.artifacts.push_back({a.at("name").get<std::string>(), a.at("sha256").get<std::string>(),
                             a.at("bytes").get<std::uint64_t>()});
    }
    r.checksum = j.at("checksum").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed campaign record: ") + e.what());
  }
}

std::string combined_checksum(const std::vector<Artifact>& artifacts) {
  std::string all;
  for (const auto& a : artifacts) all += a.name + ":" + a.sha256 + "\n";
  return sha256_hex(all);
}

StoreLock::StoreLock(const fs::path& root) {
  fd_ = ::open((root / "lock").c_str(), O_RDWR | O_CREAT, 0644);
  if (fd_ < 0) throw Error("cannot open store lock in " + root.string());
  if (::flock(fd_, LOCK_EX) != 0) {
    ::close(fd_);
    throw Error("cannot lock store " + root.string());
  }
}

StoreLock::~StoreLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

CampaignStore::CampaignStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_ / "artifacts", ec);
  if (ec) throw Error("cannot create store at " + root_.string() + ": " + ec.message());
}

fs::path CampaignStore::artifact_dir(const std::string& campaign_id) const { return root_ / "artifacts" / campaign_id; }

std::string CampaignStore::new_campaign_id(const std::string& command, const std::string& group) {
  StoreLock lock(root_);
  // The artifact directory doubles as the reservation.
  for (int seq = static_cast<int>(list().size()) + 1;; ++seq) {
    char num[16];
    std::snprintf(num, sizeof num, "c%04d", seq);
    std::string id = std::string(num) + "-" + command + (group.empty() ? "" : "-" + group);
    if (fs::create_directory(artifact_dir(id))) return id;
  }
}

Artifact CampaignStore::put_artifact(const std::string& campaign_id, const std::string& name, const std::string& bytes) {
  const fs::path dir = artifact_dir(campaign_id);
  fs::create_directories(dir);
  atomic_write(dir / name, bytes);
  return {name, sha256_hex(bytes), bytes.size()};
}

void CampaignStore::append(CampaignRecord r) {
  StoreLock lock(root_);
  for (const auto& existing : list())
    if (existing.campaign_id == r.campaign_id) throw Error("campaign id " + r.campaign_id + " already recorded");
  r.checksum = combined_checksum(r.artifacts);
  std::ofstream out(index(), std::ios::app | std::ios::binary);
  if (!out) throw Error("cannot append to " + index().string());
  out << to_json(r).dump() << '\n';
  out.flush();
  if (!out) throw Error("append to " + index().string() + " failed");
}

std::vector<CampaignRecord> CampaignStore::list() const {
  std::vector<CampaignRecord> out;
  std::ifstream in(index());
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(campaign_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw Error(index().string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::optional<CampaignRecord> CampaignStore::find(const std::string& campaign_id) const {
  for (auto& r : list())
    if (r.campaign_id == campaign_id) return r;
  return std::nullopt;
}

std::vector<std::string> CampaignStore::verify(const CampaignRecord& r) const {
  std::vector<std::string> bad;
  for (const auto& a : r.artifacts) {
    const fs::path p = artifact_dir(r.campaign_id) / a.name;
    if (!fs::exists(p)) {
      bad.push_back(a.name + ": missing");
      continue;
    }
    if (sha256_hex(read_file(p)) != a.sha256) bad.push_back(a.name + ": checksum mismatch");
  }
  if (combined_checksum(r.artifacts) != r.checksum) bad.push_back("record checksum mismatch");
  return bad;
}

}  // namespace spanlab
