#include "spanlab/extremal.hpp"

#include <algorithm>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <set>

#include "spanlab/critical.hpp"
#include "spanlab/sumset.hpp"

namespace spanlab {

using nlohmann::json;

namespace {

const std::pair<Tag, const char*> kTagNames[] = {
    {Tag::shape_i, "SHAPE_I"},         {Tag::shape_ii, "SHAPE_II"},
    {Tag::shape_b, "SHAPE_B"},         {Tag::shape_ex1, "SHAPE_EX1"},
    {Tag::shape_ex2, "SHAPE_EX2"},     {Tag::has_complete_subset, "HAS_COMPLETE_SUBSET"},
    {Tag::unclassified, "UNCLASSIFIED"},
};

ElementSet without_zero(ElementSet s) {
  s.erase(0);
  return s;
}

bool is_subgroup(const ElementSet& h) { return generated_subgroup(h).elements == h; }

// g outside H with H\{0} in A in H u (g+H) u (-g+H), if one exists. Any
// valid g can be replaced by the least element of A\H (or its negative,
// which gives the same union), so that one candidate decides the question.
std::optional<int> containment_witness(const ElementSet& a, const ElementSet& h) {
  if (!without_zero(h).is_subset_of(a)) return std::nullopt;
  const ElementSet rest = a - h;
  const int g = rest.empty() ? h.complement().first() : rest.first();
  if (g < 0) return std::nullopt;
  if (!rest.is_subset_of(h.translated(g) | h.translated(a.group().neg(g)))) return std::nullopt;
  return g;
}

bool containment_holds(const ElementSet& a, const ElementSet& h, int g) {
  return !h.contains(g) && without_zero(h).is_subset_of(a) &&
         a.is_subset_of(h | h.translated(g) | h.translated(a.group().neg(g)));
}

ElementSet symmetric_progression(const GroupPtr& g, int gen, int half) {
  ElementSet s(g);
  for (int j = 1; j <= half; ++j) {
    const int x = g->multiple(j, gen);
    s.insert(x);
    s.insert(g->neg(x));
  }
  return s;
}

std::optional<int> ex2_witness(const ElementSet& a, const ExtremalContext& ctx) {
  if (a.size() % 2 != 0) return std::nullopt;
  for (int gen : ctx.generators())
    if (a.contains(gen) && symmetric_progression(ctx.group(), gen, a.size() / 2) == a) return gen;
  return std::nullopt;
}

int count_ex2_generators(const ElementSet& a, const ExtremalContext& ctx) {
  if (a.size() % 2 != 0) return 0;
  int c = 0;
  for (int gen : ctx.generators())
    if (a.contains(gen) && symmetric_progression(ctx.group(), gen, a.size() / 2) == a) ++c;
  return c;
}

SubgroupHandle handle_of(const ElementSet& h) {
  SubgroupHandle s{h, h.size(), h.group().order() / std::max(1, h.size())};
  return s;
}

bool odd_prime(int n) { return n > 2 && is_prime(n); }

}  // namespace

std::string to_string(Tag t) {
  for (const auto& [tag, name] : kTagNames)
    if (tag == t) return name;
  return "?";
}

Tag tag_from_string(const std::string& s) {
  for (const auto& [tag, name] : kTagNames)
    if (s == name) return tag;
  throw Error("unknown tag '" + s + "'");
}

bool is_shape(Tag t) { return t != Tag::has_complete_subset && t != Tag::unclassified; }

bool ExtremalRecord::has(Tag t) const { return std::find(tags.begin(), tags.end(), t) != tags.end(); }

CosetProfile coset_profile(const ElementSet& a, const SubgroupHandle& h) {
  if (!a.group().same_as(h.elements.group())) throw Error("set and subgroup belong to different groups");
  if (h.order <= 1 || h.order >= a.group().order()) throw Error("coset profile needs a proper nontrivial subgroup");
  CosetProfile p{h};
  const auto cs = cosets(h);
  p.l0 = (a & cs[0]).size();
  std::vector<std::pair<int, int>> hit;  // (l_i, rep)
  for (std::size_t i = 1; i < cs.size(); ++i) {
    const int l = (a & cs[i]).size();
    if (l > 0) hit.emplace_back(l, cs[i].first());
  }
  std::stable_sort(hit.begin(), hit.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  p.k = static_cast<int>(hit.size());
  for (const auto& [l, rep] : hit) {
    p.lengths.push_back(l);
    p.coset_reps.push_back(rep);
    ++p.r[std::min(l, 5) - 1];
  }
  int acc = 0;
  for (int t = 0; t < 5; ++t) {
    p.m[t] = p.k - acc;
    acc += p.r[t];
  }
  return p;
}

ExtremalContext::ExtremalContext(GroupPtr g) : g_(std::move(g)) {
  p_ = smallest_prime_divisor(*g_);
  size_ = cr_formula(*g_).value - 1;
  subgroups_ = all_subgroups(g_);
  for (int x = 1; x < g_->order(); ++x)
    if (g_->element_order(x) == g_->order()) generators_.push_back(x);
}

void ExtremalContext::require_extremal(const ElementSet& a) const {
  if (!a.group().same_as(*g_)) throw Error("set does not belong to " + g_->name());
  if (a.contains(0)) throw Error("not extremal: contains 0");
  if (a.size() != size_) {
    throw Error("not extremal: |A| = " + std::to_string(a.size()) + ", expected cr(G) - 1 = " + std::to_string(size_));
  }
  if (spans(a)) throw Error("not extremal: Sigma(A) = G");
}

std::optional<SubgroupHandle> contains_complete_subset(const ElementSet& a,
                                                       const std::vector<SubgroupHandle>& subgroups) {
  for (const auto& k : subgroups) {
    if (k.order <= 1) continue;
    const ElementSet b = a & k.elements;
    if (!b.empty() && subset_sums(b) == k.elements) return k;
  }
  return std::nullopt;
}

std::optional<SubgroupHandle> contains_complete_subset(const ElementSet& a) {
  return contains_complete_subset(a, all_subgroups(a.group_ptr()));
}

ExtremalRecord classify(const ElementSet& a, const ExtremalContext& ctx) {
  ctx.require_extremal(a);
  const Group& g = *ctx.group();
  const int n = g.order(), p = ctx.smallest_prime();
  ExtremalRecord r{a, {}, {}, std::nullopt, std::nullopt};

  auto try_containment = [&](Tag tag, int order) {
    for (const auto& h : ctx.subgroups()) {
      if (h.order != order) continue;
      if (auto w = containment_witness(a, h.elements)) {
        r.witnesses[tag] = {h.elements, *w};
        return;
      }
    }
  };
  if (p == 2) {
    for (const auto& h : ctx.subgroups()) {
      if (h.order == n / 2 && without_zero(h.elements) == a) {
        r.witnesses[Tag::shape_i] = {h.elements, std::nullopt};
        break;
      }
    }
  } else if (n > p) {
    if (is_prime(n / p)) try_containment(Tag::shape_ii, n / p);
    else try_containment(Tag::shape_b, n / p);
    try_containment(Tag::shape_ex1, p);
  }
  if (auto gen = ex2_witness(a, ctx)) r.witnesses[Tag::shape_ex2] = {std::nullopt, *gen};
  if (auto k = contains_complete_subset(a, ctx.subgroups())) {
    r.witnesses[Tag::has_complete_subset] = {k->elements, std::nullopt};
  }

  bool shaped = false;
  for (const auto& [tag, w] : r.witnesses) {
    r.tags.push_back(tag);
    shaped = shaped || is_shape(tag);
  }
  if (!shaped) r.tags.push_back(Tag::unclassified);
  std::sort(r.tags.begin(), r.tags.end());

  std::optional<ElementSet> h;
  for (Tag t : {Tag::shape_i, Tag::shape_ii, Tag::shape_b, Tag::shape_ex1, Tag::has_complete_subset}) {
    auto it = r.witnesses.find(t);
    if (it != r.witnesses.end() && it->second.subgroup && it->second.subgroup->size() < n) {
      h = it->second.subgroup;
      break;
    }
  }
  if (!h && n > p) {
    for (const auto& s : ctx.subgroups())
      if (s.order == n / p) {
        h = s.elements;
        break;
      }
  }
  if (h) r.profile = coset_profile(a, handle_of(*h));
  return r;
}

ExtremalRecord classify(const ElementSet& a) { return classify(a, ExtremalContext(a.group_ptr())); }

std::vector<std::string> verify_tags(const ExtremalRecord& r) {
  std::vector<std::string> bad;
  const ElementSet& a = r.set;
  const Group& g = a.group();
  const int n = g.order(), p = smallest_prime_divisor(n);
  auto fail = [&](Tag t, const std::string& why) { bad.push_back(to_string(t) + ": " + why); };
  bool shaped = false;
  for (Tag t : r.tags) {
    shaped = shaped || is_shape(t);
    if (t == Tag::unclassified) continue;
    auto it = r.witnesses.find(t);
    if (it == r.witnesses.end()) {
      fail(t, "no witness");
      continue;
    }
    const ShapeWitness& w = it->second;
    if (w.subgroup && !is_subgroup(*w.subgroup)) {
      fail(t, "witness is not a subgroup");
      continue;
    }
    switch (t) {
      case Tag::shape_i:
        if (!w.subgroup || p != 2 || w.subgroup->size() != n / 2 || without_zero(*w.subgroup) != a) fail(t, "A != H\\{0}");
        break;
      case Tag::shape_ii:
      case Tag::shape_b:
      case Tag::shape_ex1: {
        const int want = t == Tag::shape_ex1 ? p : n / p;
        if (!w.subgroup || !w.element || w.subgroup->size() != want) fail(t, "witness has the wrong form");
        else if (!containment_holds(a, *w.subgroup, *w.element)) fail(t, "containment fails");
        break;
      }
      case Tag::shape_ex2:
        if (!w.element || g.element_order(*w.element) != n ||
            symmetric_progression(a.group_ptr(), *w.element, a.size() / 2) != a) {
          fail(t, "A is not the symmetric progression of g");
        }
        break;
      case Tag::has_complete_subset:
        if (!w.subgroup || w.subgroup->size() <= 1 || (a & *w.subgroup).empty() ||
            subset_sums(a & *w.subgroup) != *w.subgroup) {
          fail(t, "Sigma(A cap K) != K");
        }
        break;
      case Tag::unclassified: break;
    }
  }
  if (r.has(Tag::unclassified) && shaped) bad.push_back("UNCLASSIFIED alongside a shape tag");
  if (!r.has(Tag::unclassified) && !shaped) bad.push_back("no shape tag and no UNCLASSIFIED");
  return bad;
}

ObservationReport check_observation_31(const ElementSet& a, const ExtremalContext& ctx) {
  ctx.require_extremal(a);
  ObservationReport rep;
  for (const auto& k : ctx.subgroups()) {
    if (k.order <= 1) continue;
    const ElementSet b = a & k.elements;
    if (b.empty() || subset_sums(b) != k.elements) continue;
    rep.complete_subgroups.push_back(k.elements);
    if (b != without_zero(k.elements)) rep.violations.push_back(k.elements);
  }
  rep.holds = rep.violations.empty();
  return rep;
}

ObservationReport check_observation_31(const ElementSet& a) {
  return check_observation_31(a, ExtremalContext(a.group_ptr()));
}

ElementSet make_example_1(int p, int q, std::uint64_t seed) {
  if (!odd_prime(p) || !odd_prime(q)) throw Error("p and q must be odd primes");
  const int lo = p + floor_two_sqrt(p - 2) + 1;
  if (!(lo < q && q < 2 * p + 3)) {
    throw Error("need " + std::to_string(lo) + " < q < " + std::to_string(2 * p + 3) + " for p = " + std::to_string(p) +
                ", got q = " + std::to_string(q));
  }
  GroupPtr g = Group::make({p * q});
  const ElementSet k = generated_subgroup(ElementSet(g, {q})).elements;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> any(0, p * q - 1);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    int x;
    do x = any(rng);
    while (k.contains(x));
    std::vector<int> pool = (k.translated(x) | k.translated(g->neg(x))).elements();
    std::shuffle(pool.begin(), pool.end(), rng);
    ElementSet a = without_zero(k);
    for (int i = 0; i < q - 2; ++i) a.insert(pool[i]);
    if (a.size() == p + q - 3 && !spans(a)) return a;
  }
  throw Error("no non-spanning instance found in 1000 attempts");
}

ElementSet make_example_2(int p, int q, int g) {
  if (!odd_prime(p) || !odd_prime(q)) throw Error("p and q must be odd primes");
  const int hi = p + floor_two_sqrt(p - 2) + 1;
  if (!(p < q && q <= hi)) {
    throw Error("need " + std::to_string(p) + " < q <= " + std::to_string(hi) + ", got q = " + std::to_string(q));
  }
  GroupPtr grp = Group::make({p * q});
  if (g < 0 || g >= p * q || grp->element_order(g) != p * q) {
    throw Error("g = " + std::to_string(g) + " does not have order " + std::to_string(p * q));
  }
  ElementSet a = symmetric_progression(grp, g, (p + q - 2) / 2);
  if (a.size() != p + q - 2) throw Error("internal: progression has " + std::to_string(a.size()) + " elements");
  if (spans(a)) throw Error("internal: progression spans the group");
  return a;
}

// ---------------------------------------------------------------------------
// Enumeration

std::string to_string(RunStatus s) { return s == RunStatus::complete ? "COMPLETE" : "PARTIAL"; }
std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::verified: return "VERIFIED";
    case Verdict::refuted: return "REFUTED";
    case Verdict::partial: return "PARTIAL";
  }
  return "?";
}

std::uint64_t binomial(int m, int k) {
  if (k < 0 || k > m) return 0;
  k = std::min(k, m - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (m - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

json to_json(const EnumerationCheckpoint& c) {
  return {{"engine_version", c.engine_version},
          {"group", c.group},
          {"set_size", c.set_size},
          {"orbit_dedup", c.orbit_dedup},
          {"unit", c.unit},
          {"frontier", {{"prefix", c.frontier.prefix}, {"cursor", c.frontier.cursor}}},
          {"records_emitted", c.records_emitted},
          {"output_bytes", c.output_bytes},
          {"nodes", c.nodes}};
}

EnumerationCheckpoint checkpoint_from_json(const json& j) {
  try {
    EnumerationCheckpoint c;
    c.engine_version = j.at("engine_version").get<std::string>();
    c.group = j.at("group").get<std::string>();
    c.set_size = j.at("set_size").get<int>();
    c.orbit_dedup = j.at("orbit_dedup").get<bool>();
    c.unit = j.at("unit").get<int>();
    c.frontier.prefix = j.at("frontier").at("prefix").get<std::vector<int>>();
    c.frontier.cursor = j.at("frontier").at("cursor").get<int>();
    c.records_emitted = j.at("records_emitted").get<std::uint64_t>();
    c.output_bytes = j.at("output_bytes").get<std::uint64_t>();
    c.nodes = j.at("nodes").get<std::uint64_t>();
    return c;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed checkpoint: ") + e.what());
  }
}

namespace {

struct Unit {
  int target;
  int first;
};

class Enumerator {
 public:
  Enumerator(const ExtremalContext& ctx, const EnumerateOptions& opt) : ctx_(ctx), g_(*ctx.group()), opt_(opt) {
    n_ = g_.order();
    if (opt.orbit_dedup) {
      if (!g_.is_cyclic()) throw Error("orbit reduction needs a single-factor spec, got " + g_.name());
      units_ = unit_multipliers(g_);
      for (int u : units_) {
        int inv = 1;
        while (static_cast<long>(u) * inv % n_ != 1 % n_) ++inv;
        inverse_.push_back(inv);
      }
    }
    for (int t : search_targets(g_, opt.orbit_dedup))
      for (int f = 1; f < n_; ++f)
        if (f != t) work_.push_back({t, f});
  }

  int size() const { return ctx_.extremal_size(); }
  const std::vector<Unit>& work() const { return work_; }

  /// Nullopt: the set belongs to another unit (or another orbit member).
  /// Otherwise the orbit size, 0 outside orbit mode.
  std::optional<int> accept(int target, const std::vector<int>& a, const Word* sums) const {
    if (!opt_.orbit_dedup) {
      if (bits::first_clear(sums, n_) != target) return std::nullopt;
      return 0;
    }
    for (int m = 0; m < n_; ++m)
      if (!bits::test(sums, m) && rep(m) < target) return std::nullopt;
    std::set<std::vector<int>> orbit;
    std::vector<int> ua(a.size());
    for (std::size_t i = 0; i < units_.size(); ++i) {
      const int u = units_[i];
      for (std::size_t j = 0; j < a.size(); ++j) ua[j] = static_cast<int>(static_cast<long>(u) * a[j] % n_);
      std::sort(ua.begin(), ua.end());
      const int pre = static_cast<int>(static_cast<long>(inverse_[i]) * target % n_);
      if (!bits::test(sums, pre) && ua < a) return std::nullopt;
      orbit.insert(ua);
    }
    return static_cast<int>(orbit.size());
  }

  ExtremalRecord record(const std::vector<int>& a, int orbit) const {
    ExtremalRecord r = classify(ElementSet(ctx_.group(), a), ctx_);
    if (opt_.orbit_dedup) r.orbit_size = orbit;
    return r;
  }

 private:
  int rep(int m) const { return m == 0 ? 0 : std::gcd(m, n_); }

  const ExtremalContext& ctx_;
  const Group& g_;
  const EnumerateOptions& opt_;
  int n_ = 0;
  std::vector<int> units_, inverse_;
  std::vector<Unit> work_;
};

EnumerationCheckpoint make_checkpoint(const ExtremalContext& ctx, const EnumerateOptions& opt, int unit, Frontier f,
                                      std::uint64_t records, std::uint64_t nodes) {
  EnumerationCheckpoint c;
  c.group = ctx.group()->name();
  c.set_size = ctx.extremal_size();
  c.orbit_dedup = opt.orbit_dedup;
  c.unit = unit;
  c.frontier = std::move(f);
  c.records_emitted = records;
  c.nodes = nodes;
  return c;
}

}  // namespace

EnumerateResult enumerate_extremal(const ExtremalContext& ctx, const EnumerateOptions& opt, const RecordSink& emit,
                                   const CheckpointSink& on_checkpoint,
                                   const std::optional<EnumerationCheckpoint>& resume) {
  const Group& g = *ctx.group();
  const int size = ctx.extremal_size();
  if (size < 1) throw Error("no extremal sets to enumerate in " + g.name());
  const std::uint64_t candidates = binomial(g.order() - 1, size);
  if (!opt.extended && candidates > opt.max_candidates) {
    throw Error("C(" + std::to_string(g.order() - 1) + ", " + std::to_string(size) + ") = " + std::to_string(candidates) +
                " candidates exceeds the limit of " + std::to_string(opt.max_candidates) + "; use extended mode");
  }
  Enumerator en(ctx, opt);
  const auto& work = en.work();
  const int total = static_cast<int>(work.size());

  int unit = 0;
  std::uint64_t records = 0, base_nodes = 0;
  std::optional<Frontier> pending;
  if (resume) {
    if (resume->engine_version != kEngineVersion) {
      throw Error("checkpoint engine version '" + resume->engine_version + "' does not match '" + kEngineVersion + "'");
    }
    if (resume->group != g.name() || resume->set_size != size || resume->orbit_dedup != opt.orbit_dedup) {
      throw Error("checkpoint was written for a different enumeration (" + resume->group + ", size " +
                  std::to_string(resume->set_size) + (resume->orbit_dedup ? ", orbit mode)" : ")"));
    }
    if (resume->unit < 0 || resume->unit > total) throw Error("checkpoint unit out of range");
    unit = resume->unit;
    records = resume->records_emitted;
    base_nodes = resume->nodes;
    if (unit < total) pending = resume->frontier;
  }

  BudgetClock clock(opt.budget);
  EnumerateResult res;
  res.units = total;
  auto finish = [&](RunStatus st, int at, Frontier f) {
    res.status = st;
    res.records = records;
    res.nodes = base_nodes + clock.nodes();
    res.seconds = clock.elapsed_seconds();
    EnumerationCheckpoint c = make_checkpoint(ctx, opt, at, std::move(f), records, res.nodes);
    if (on_checkpoint) on_checkpoint(c);
    if (st == RunStatus::partial) res.checkpoint = c;
    return res;
  };

  if (opt.threads <= 1) {
    std::uint64_t since = 0;
    for (; unit < total; ++unit) {
      AvoidingWalker w(g, work[unit].target, size, true, work[unit].first);
      if (pending) {
        w.restore(*pending);
        pending.reset();
      }
      while (true) {
        const std::uint64_t before = w.nodes();
        const auto step = w.next(4096);
        const std::uint64_t delta = w.nodes() - before;
        clock.charge(delta);
        since += delta;
        if (step == AvoidingWalker::Step::found) {
          if (auto orbit = en.accept(work[unit].target, w.current(), w.current_sums())) {
            emit(en.record(w.current(), *orbit));
            ++records;
          }
        } else if (step == AvoidingWalker::Step::exhausted) {
          break;
        }
        if (clock.exhausted()) return finish(RunStatus::partial, unit, w.frontier());
        if (opt.checkpoint_every_nodes && since >= opt.checkpoint_every_nodes && on_checkpoint) {
          since = 0;
          EnumerationCheckpoint c =
              make_checkpoint(ctx, opt, unit, w.frontier(), records, base_nodes + clock.nodes());
          on_checkpoint(c);
        }
      }
    }
    return finish(RunStatus::complete, total, Frontier{});
  }

  // Parallel: whole units per worker, flushed to emit in unit order.
  const int start = unit;
  std::vector<std::optional<std::vector<ExtremalRecord>>> done(total);
  std::mutex mu;
  int flushed = start;
  parallel_for(total - start, opt.threads, [&](int i) {
    const int u = start + i;
    if (clock.exhausted()) return;
    AvoidingWalker w(g, work[u].target, size, true, work[u].first);
    if (u == start && pending) w.restore(*pending);
    std::vector<ExtremalRecord> found;
    while (true) {
      const std::uint64_t before = w.nodes();
      const auto step = w.next(4096);
      clock.charge(w.nodes() - before);
      if (step == AvoidingWalker::Step::found) {
        if (auto orbit = en.accept(work[u].target, w.current(), w.current_sums()))
          found.push_back(en.record(w.current(), *orbit));
      } else if (step == AvoidingWalker::Step::exhausted) {
        break;
      }
      if (clock.exhausted()) return;
    }
    std::lock_guard lock(mu);
    done[u] = std::move(found);
    while (flushed < total && done[flushed]) {
      for (const auto& r : *done[flushed]) emit(r);
      records += done[flushed]->size();
      done[flushed].reset();
      ++flushed;
    }
  });
  if (flushed < total) {
    Frontier f = flushed == start && pending ? *pending : Frontier{};
    return finish(RunStatus::partial, flushed, f);
  }
  return finish(RunStatus::complete, total, Frontier{});
}

// ---------------------------------------------------------------------------
// Campaigns

namespace {

std::vector<int> unit_orbit_canonical(const ElementSet& a) {
  const Group& g = a.group();
  const int n = g.order();
  std::vector<int> best = a.elements(), cur;
  for (int u : unit_multipliers(g)) {
    cur.clear();
    a.for_each([&](int x) { cur.push_back(static_cast<int>(static_cast<long>(u) * x % n)); });
    std::sort(cur.begin(), cur.end());
    best = std::min(best, cur);
  }
  return best;
}

}  // namespace

ConjectureReport check_conjecture(int which, int p, int q, const EnumerateOptions& opt) {
  if (which != 1 && which != 2) throw Error("conjecture must be 1 or 2");
  if (!odd_prime(p) || !odd_prime(q)) throw Error("p and q must be odd primes");
  const int f = floor_two_sqrt(p - 2);
  if (which == 1 && !(p + f + 1 < q && q < 2 * p + 3)) {
    throw Error("conjecture 1 needs " + std::to_string(p + f + 1) + " < q < " + std::to_string(2 * p + 3) +
                " for p = " + std::to_string(p));
  }
  if (which == 2 && !(p < q && q <= p + f + 1)) {
    throw Error("conjecture 2 needs " + std::to_string(p) + " < q <= " + std::to_string(p + f + 1) + " for p = " +
                std::to_string(p));
  }
  ConjectureReport rep;
  rep.which = which;
  rep.p = p;
  rep.q = q;
  GroupPtr g = Group::make({p * q});
  rep.group = g->name();
  const ExtremalContext ctx(g);
  const int expected = which == 1 ? p + q - 3 : p + q - 2;
  if (ctx.extremal_size() != expected) throw Error("internal: cr(G) - 1 disagrees with p + q - " + std::to_string(which == 1 ? 3 : 2));

  const Tag wanted = which == 1 ? Tag::has_complete_subset : Tag::shape_ex2;
  rep.run = enumerate_extremal(ctx, opt, [&](const ExtremalRecord& r) {
    rep.records.push_back(r);
    for (Tag t : r.tags) ++rep.tag_counts[to_string(t)];
    if (!r.has(wanted)) rep.counterexamples.push_back(r.set);
    if (which == 2 && r.has(Tag::shape_ex2)) ++rep.generators_per_set[count_ex2_generators(r.set, ctx)];
  });

  if (opt.orbit_dedup) {
    for (const auto& r : rep.records) ++rep.orbits.orbit_sizes[r.orbit_size.value_or(1)];
    rep.orbits.orbits = static_cast<int>(rep.records.size());
  } else {
    std::map<std::vector<int>, int> classes;
    for (const auto& r : rep.records) ++classes[unit_orbit_canonical(r.set)];
    for (const auto& [canon, count] : classes) ++rep.orbits.orbit_sizes[count];
    rep.orbits.orbits = static_cast<int>(classes.size());
  }
  if (rep.run.status == RunStatus::partial) rep.verdict = Verdict::partial;
  else rep.verdict = rep.counterexamples.empty() ? Verdict::verified : Verdict::refuted;
  return rep;
}

bool main_theorem_applies(const Group& g) {
  const int n = g.order();
  if (n < 2) return false;
  const int p = smallest_prime_divisor(n);
  return (p == 2 && n >= 36) || (is_prime(n / p) && n / p >= 2 * p + 3);
}

TheoremReport verify_theorem_main(const GroupPtr& g, const EnumerateOptions& opt, const RecordSink& emit,
                                  const CheckpointSink& on_checkpoint,
                                  const std::optional<EnumerationCheckpoint>& resume) {
  if (!main_theorem_applies(*g)) {
    throw Error(g->name() + " is outside the theorem's hypothesis (p = 2 and |G| >= 36, or |G|/p prime with |G|/p >= 2p + 3)");
  }
  TheoremReport rep;
  rep.group = g->name();
  rep.p = smallest_prime_divisor(*g);
  rep.orbit_dedup = opt.orbit_dedup;
  const ExtremalContext ctx(g);
  const Tag wanted = rep.p == 2 ? Tag::shape_i : Tag::shape_ii;
  rep.run = enumerate_extremal(
      ctx, opt,
      [&](const ExtremalRecord& r) {
        for (Tag t : r.tags) ++rep.tag_counts[to_string(t)];
        if (!r.has(wanted)) rep.counterexamples.push_back(r.set);
        if (emit) emit(r);
      },
      on_checkpoint, resume);
  rep.records = rep.run.records;
  if (!rep.counterexamples.empty()) rep.verdict = Verdict::refuted;
  else rep.verdict = rep.run.status == RunStatus::partial ? Verdict::partial : Verdict::verified;
  return rep;
}

// ---------------------------------------------------------------------------
// JSON

json to_json(const CosetProfile& p) {
  return {{"subgroup", p.subgroup.elements.elements()},
          {"subgroup_order", p.subgroup.order},
          {"l0", p.l0},
          {"k", p.k},
          {"lengths", p.lengths},
          {"coset_reps", p.coset_reps},
          {"r", p.r},
          {"m", p.m}};
}

json to_json(const ExtremalRecord& r) {
  json tags = json::array();
  for (Tag t : r.tags) tags.push_back(to_string(t));
  json wit = json::object();
  for (const auto& [t, w] : r.witnesses) {
    json e = json::object();
    if (w.subgroup) e["subgroup"] = w.subgroup->elements();
    if (w.element) e["g"] = *w.element;
    wit[to_string(t)] = e;
  }
  json j = {{"schema_version", kRecordSchemaVersion},
            {"group", r.set.group().name()},
            {"set", r.set.elements()},
            {"tags", tags},
            {"witnesses", wit},
            {"profile", r.profile ? to_json(*r.profile) : json(nullptr)}};
  if (r.orbit_size) j["orbit_size"] = *r.orbit_size;
  return j;
}

ExtremalRecord record_from_json(const json& j, const GroupPtr& g) {
  try {
    if (j.at("schema_version").get<int>() != kRecordSchemaVersion) throw Error("unsupported record schema version");
    if (j.at("group").get<std::string>() != g->name()) throw Error("record belongs to " + j.at("group").get<std::string>());
    ExtremalRecord r{ElementSet(g, j.at("set").get<std::vector<int>>()), {}, {}, std::nullopt, std::nullopt};
    for (const auto& t : j.at("tags")) r.tags.push_back(tag_from_string(t.get<std::string>()));
    for (const auto& [name, w] : j.at("witnesses").items()) {
      ShapeWitness sw;
      if (w.contains("subgroup")) sw.subgroup = ElementSet(g, w.at("subgroup").get<std::vector<int>>());
      if (w.contains("g")) sw.element = w.at("g").get<int>();
      r.witnesses[tag_from_string(name)] = sw;
    }
    if (j.contains("profile") && !j.at("profile").is_null()) {
      const json& p = j.at("profile");
      CosetProfile cp{handle_of(ElementSet(g, p.at("subgroup").get<std::vector<int>>()))};
      cp.l0 = p.at("l0").get<int>();
      cp.k = p.at("k").get<int>();
      cp.lengths = p.at("lengths").get<std::vector<int>>();
      cp.coset_reps = p.at("coset_reps").get<std::vector<int>>();
      cp.r = p.at("r").get<std::array<int, 5>>();
      cp.m = p.at("m").get<std::array<int, 5>>();
      r.profile = cp;
    }
    if (j.contains("orbit_size")) r.orbit_size = j.at("orbit_size").get<int>();
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed record: ") + e.what());
  }
}

json to_json(const ObservationReport& r) {
  json cs = json::array(), vs = json::array();
  for (const auto& k : r.complete_subgroups) cs.push_back(k.elements());
  for (const auto& k : r.violations) vs.push_back(k.elements());
  return {{"holds", r.holds}, {"complete_subgroups", cs}, {"violations", vs}};
}

json to_json(const EnumerateResult& r) {
  // Wall time stays out so that repeated runs serialize identically.
  json j = {{"status", to_string(r.status)}, {"records", r.records}, {"nodes", r.nodes}, {"units", r.units}};
  if (r.checkpoint) j["checkpoint"] = to_json(*r.checkpoint);
  return j;
}

namespace {

json sets_to_json(const std::vector<ElementSet>& sets) {
  json a = json::array();
  for (const auto& s : sets) a.push_back(s.elements());
  return a;
}

json int_map_json(const std::map<int, int>& m) {
  json o = json::object();
  for (const auto& [k, v] : m) o[std::to_string(k)] = v;
  return o;
}

}  // namespace

json to_json(const ConjectureReport& r) {
  json recs = json::array();
  for (const auto& x : r.records) recs.push_back(to_json(x));
  return {{"conjecture", r.which},
          {"p", r.p},
          {"q", r.q},
          {"group", r.group},
          {"verdict", to_string(r.verdict)},
          {"extremal_sets", r.records.size()},
          {"counterexamples", sets_to_json(r.counterexamples)},
          {"tag_counts", r.tag_counts},
          {"orbits", {{"count", r.orbits.orbits}, {"sizes", int_map_json(r.orbits.orbit_sizes)}}},
          {"generators_per_set", int_map_json(r.generators_per_set)},
          {"enumeration", to_json(r.run)},
          {"records", recs}};
}

json to_json(const TheoremReport& r) {
  return {{"group", r.group},
          {"p", r.p},
          {"verdict", to_string(r.verdict)},
          {"orbit_dedup", r.orbit_dedup},
          {"records", r.records},
          {"tag_counts", r.tag_counts},
          {"counterexamples", sets_to_json(r.counterexamples)},
          {"enumeration", to_json(r.run)}};
}

}  // namespace spanlab
