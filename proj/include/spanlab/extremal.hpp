#pragma once

// Extremal non-spanning sets: A in G\{0} with |A| = cr(G) - 1 and
// Sigma(A) != G. Enumeration (resumable, optionally up to unit orbits),
// shape classification with re-checkable witnesses, coset profiles, and the
// campaigns built on them.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spanlab/group.hpp"
#include "spanlab/search.hpp"

namespace spanlab {

enum class Tag {
  shape_i,              // p = 2 and A = H\{0}, |H| = |G|/2
  shape_ii,             // p odd, |G|/p prime: H\{0} in A in H u (g+H) u (-g+H), |H| = |G|/p
  shape_b,              // |G| odd, |G|/p composite: same containment as shape_ii
  shape_ex1,            // p odd: A cap K = K\{0}, A in K u (g+K) u (-g+K), |K| = p
  shape_ex2,            // A = {+-g, +-2g, ..., +-(|A|/2)g}, ord(g) = |G|
  has_complete_subset,  // Sigma(A cap K) = K for a nontrivial subgroup K
  unclassified,         // no shape_* tag applies
};

/// "SHAPE_I", ..., "HAS_COMPLETE_SUBSET", "UNCLASSIFIED".
std::string to_string(Tag t);
Tag tag_from_string(const std::string& s);
bool is_shape(Tag t);

struct CosetProfile {
  explicit CosetProfile(SubgroupHandle h) : subgroup(std::move(h)) {}

  SubgroupHandle subgroup;
  int l0 = 0;                   // |A cap H|
  int k = 0;                    // nonzero cosets hit
  std::vector<int> lengths;     // l_1 >= ... >= l_k
  std::vector<int> coset_reps;  // least element of the coset behind each l_i
  std::array<int, 5> r{};       // r_u = #{i : l_i = u} for u <= 4, r_5 = #{i : l_i >= 5}
  std::array<int, 5> m{};       // m_t = k - (r_1 + ... + r_{t-1}) = #{i : l_i >= t}
};

/// Decomposes a by the cosets of a proper nontrivial subgroup h.
CosetProfile coset_profile(const ElementSet& a, const SubgroupHandle& h);

struct ShapeWitness {
  std::optional<ElementSet> subgroup;  // H or K
  std::optional<int> element;          // g
};

struct ExtremalRecord {
  ElementSet set;
  std::vector<Tag> tags;  // ascending
  std::map<Tag, ShapeWitness> witnesses;
  std::optional<CosetProfile> profile;
  std::optional<int> orbit_size;  // set when enumerated up to unit orbits

  bool has(Tag t) const;
};

/// Per-group data reused across classifications: the critical number and
/// the subgroup lattice.
class ExtremalContext {
 public:
  explicit ExtremalContext(GroupPtr g);

  const GroupPtr& group() const { return g_; }
  int smallest_prime() const { return p_; }
  /// cr_formula(G) - 1.
  int extremal_size() const { return size_; }
  const std::vector<SubgroupHandle>& subgroups() const { return subgroups_; }
  /// Elements of order |G|, ascending (empty unless G is cyclic).
  const std::vector<int>& generators() const { return generators_; }

  /// Throws unless a is in this group, 0 not in a, |a| = extremal_size()
  /// and Sigma(a) != G.
  void require_extremal(const ElementSet& a) const;

 private:
  GroupPtr g_;
  int p_ = 0;
  int size_ = 0;
  std::vector<SubgroupHandle> subgroups_;
  std::vector<int> generators_;
};

/// A nontrivial subgroup K with Sigma(a cap K) = K, or none.
///
/// A contains a complete subset B iff Sigma(A cap K) = K for some subgroup
/// K: given B, take K = <B>, then K = Sigma(B) in Sigma(A cap K) in K;
/// conversely A cap K is itself complete, since Sigma(A cap K) = K forces
/// <A cap K> = K. So scanning subgroups replaces scanning subsets. The
/// smallest such K (in subgroup order) is returned.
std::optional<SubgroupHandle> contains_complete_subset(const ElementSet& a);
std::optional<SubgroupHandle> contains_complete_subset(const ElementSet& a, const std::vector<SubgroupHandle>& subgroups);

/// Classifies an extremal set (checked). Every shape is tried over every
/// subgroup of the relevant order and every generator.
ExtremalRecord classify(const ElementSet& a, const ExtremalContext& ctx);
ExtremalRecord classify(const ElementSet& a);

/// Re-derives every tag of r from its witness alone; an empty list means
/// all tags check out.
std::vector<std::string> verify_tags(const ExtremalRecord& r);

struct ObservationReport {
  bool holds = true;
  std::vector<ElementSet> complete_subgroups;  // every K with Sigma(a cap K) = K
  std::vector<ElementSet> violations;          // those K with a cap K != K\{0}
};

/// For every subgroup K with Sigma(a cap K) = K, checks a cap K = K\{0}.
ObservationReport check_observation_31(const ElementSet& a, const ExtremalContext& ctx);
ObservationReport check_observation_31(const ElementSet& a);

/// p, q odd primes, p + floor(2 sqrt(p-2)) + 1 < q < 2p + 3. Over Z_pq with
/// K = <q>: K\{0} plus q - 2 random elements of (g+K) u (-g+K) for a random
/// g outside K, redrawn until Sigma(A) != G (at most 1000 attempts).
ElementSet make_example_1(int p, int q, std::uint64_t seed);

/// p, q odd primes, p < q <= p + floor(2 sqrt(p-2)) + 1, ord(g) = pq:
/// {+-g, ..., +-((p+q-2)/2) g} in Z_pq.
ElementSet make_example_2(int p, int q, int g);

// ---------------------------------------------------------------------------
// Enumeration

inline constexpr const char* kEngineVersion = "spanlab-enum-1";
inline constexpr int kRecordSchemaVersion = 1;

struct EnumerationCheckpoint {
  std::string engine_version = kEngineVersion;
  std::string group;
  int set_size = 0;
  bool orbit_dedup = false;
  int unit = 0;        // next work unit
  Frontier frontier;   // position inside that unit
  std::uint64_t records_emitted = 0;
  std::uint64_t output_bytes = 0;  // length of the record stream at this point
  std::uint64_t nodes = 0;
};

nlohmann::json to_json(const EnumerationCheckpoint& c);
/// Throws Error with a diagnostic on malformed input.
EnumerationCheckpoint checkpoint_from_json(const nlohmann::json& j);

struct EnumerateOptions {
  bool orbit_dedup = false;  // single-factor specs only
  bool extended = false;     // lift the candidate-count limit
  std::uint64_t max_candidates = 10'000'000;  // C(|G|-1, cr-1) limit without `extended`
  SearchBudget budget;
  int threads = 1;
  /// Serial mode: hook called every checkpoint_every_nodes search nodes
  /// (0 = never) and when the budget runs out.
  std::uint64_t checkpoint_every_nodes = 0;
};

enum class RunStatus { complete, partial };
std::string to_string(RunStatus s);

struct EnumerateResult {
  RunStatus status = RunStatus::complete;
  std::uint64_t records = 0;  // including records emitted before a resume
  std::uint64_t nodes = 0;
  double seconds = 0;
  int units = 0;
  std::optional<EnumerationCheckpoint> checkpoint;  // set when partial
};

using RecordSink = std::function<void(const ExtremalRecord&)>;
using CheckpointSink = std::function<void(EnumerationCheckpoint&)>;

/// Streams every extremal set of G exactly once, classified. In orbit mode
/// one representative per unit orbit is streamed (the lexicographically
/// least member that misses the orbit's canonical target), with orbit_size.
/// Serial runs are deterministic: identical options give identical streams,
/// also across interruption and resume.
EnumerateResult enumerate_extremal(const ExtremalContext& ctx, const EnumerateOptions& opt, const RecordSink& emit,
                                   const CheckpointSink& on_checkpoint = {},
                                   const std::optional<EnumerationCheckpoint>& resume = std::nullopt);

/// Number of k-subsets of an m-set, saturating at UINT64_MAX.
std::uint64_t binomial(int m, int k);

// ---------------------------------------------------------------------------
// Campaigns

enum class Verdict { verified, refuted, partial };
std::string to_string(Verdict v);

struct OrbitSummary {
  int orbits = 0;
  std::map<int, int> orbit_sizes;  // size -> how many orbits
};

struct ConjectureReport {
  int which = 0;
  int p = 0, q = 0;
  std::string group;
  Verdict verdict = Verdict::partial;
  std::vector<ExtremalRecord> records;
  std::vector<ElementSet> counterexamples;
  std::map<std::string, int> tag_counts;
  OrbitSummary orbits;
  /// For the symmetric-progression property: how many generators g realize
  /// each matching set, mapped to how many sets have that count.
  std::map<int, int> generators_per_set;
  EnumerateResult run;
};

/// which = 1: every extremal set of Z_pq contains a complete subset
/// (p + floor(2 sqrt(p-2)) + 1 < q < 2p + 3).
/// which = 2: every extremal set is {+-g, ..., +-((p+q-2)/2)g} for some g of
/// order pq (p < q <= p + floor(2 sqrt(p-2)) + 1).
ConjectureReport check_conjecture(int which, int p, int q, const EnumerateOptions& opt = {});

/// True when p = 2 and |G| >= 36, or |G|/p is prime and |G|/p >= 2p + 3.
bool main_theorem_applies(const Group& g);

struct TheoremReport {
  std::string group;
  int p = 0;
  Verdict verdict = Verdict::partial;
  bool orbit_dedup = false;
  std::uint64_t records = 0;
  std::map<std::string, int> tag_counts;
  std::vector<ElementSet> counterexamples;
  EnumerateResult run;
};

/// Checks that every extremal set has shape_i (p = 2) or shape_ii (p odd).
/// Throws when main_theorem_applies(*g) is false.
TheoremReport verify_theorem_main(const GroupPtr& g, const EnumerateOptions& opt,
                                  const RecordSink& emit = {}, const CheckpointSink& on_checkpoint = {},
                                  const std::optional<EnumerationCheckpoint>& resume = std::nullopt);

nlohmann::json to_json(const CosetProfile& p);
nlohmann::json to_json(const ExtremalRecord& r);
ExtremalRecord record_from_json(const nlohmann::json& j, const GroupPtr& g);
nlohmann::json to_json(const ObservationReport& r);
nlohmann::json to_json(const EnumerateResult& r);
nlohmann::json to_json(const ConjectureReport& r);
nlohmann::json to_json(const TheoremReport& r);

}  // namespace spanlab
