#pragma once
// Verification suites built on the ball oracle, the branch oracle and the
// sequence/pattern machinery: initial-strip inventories, crossing-move
// audits, geodesic-language cut points, unique-geodesic fellow traveling,
// almost-convexity sweeps and the base-group falsification-by-fellow-
// traveler constant.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hnnpat/branch.hpp"
#include "hnnpat/patterns.hpp"

namespace hnnpat {

// ---- initial strips -------------------------------------------------------
//
// A strip adjacent to the base plane has its departure line inside the base
// plane, and the base plane embeds isometrically (checked in the tests), so
// the labels can be computed from the base metric alone.  That keeps the
// inventory exact at radii whose full balls would not fit in memory, and the
// wide measuring window pins each core exactly instead of truncating it at
// the ball boundary.

struct InitialStrip {
  int rule = 0;
  int sign = 1;
  Vec rep;        // departure-line representative point
  Vec dir;        // departure-line direction
  int min_label = 0;
  Sequence seq;   // exact core, wide-window measurement
};

// Families of initial cores, keyed by their repeating unit.  ZeroUnit covers
// 0^k (k >= 0, so V-shaped lines with a unique closest point count too);
// TenUnit covers (10)^k and its boundary variant 0(10)^k, either orientation.
enum class InitialClass { ZeroUnit, TenUnit, Other };

inline InitialClass initial_class(const std::vector<int>& core) {
  if (std::all_of(core.begin(), core.end(), [](int x) { return x == 0; }))
    return InitialClass::ZeroUnit;
  auto ten = [](std::vector<int> c) {
    if (!c.empty() && c.front() == 0) c.erase(c.begin());
    if (c.empty() || c.size() % 2 != 0) return false;
    for (std::size_t i = 0; i < c.size(); i += 2)
      if (c[i] != 1 || c[i + 1] != 0) return false;
    return true;
  };
  if (ten(core) || ten(m0_core(core))) return InitialClass::TenUnit;
  return InitialClass::Other;
}

inline std::vector<InitialStrip> initial_strips(const Presentation& p,
                                                int radius) {
  if (p.rank() != 2)
    throw precondition_error("initial strip enumeration needs a rank-2 base");
  if (radius < 1) throw precondition_error("radius must be positive");
  const BaseMetric& bm = p.metric();
  int cmax = 1;
  for (const BaseGen& g : p.base_gens())
    for (Coord x : g.vec) cmax = std::max(cmax, std::abs(int(x)));

  std::vector<InitialStrip> out;
  for (int rule = 0; rule < static_cast<int>(p.rules().size()); ++rule) {
    const StableRule& r = p.rules()[rule];
    for (int sign : {1, -1}) {
      Vec dir = sign > 0 ? r.u_vec : r.v_vec;
      Coord g = std::gcd(dir[0], dir[1]);
      Vec prim{dir[0] / g, dir[1] / g};
      // Smallest complement w with det(prim, w) = 1 parameterizes the line
      // cosets; the torsion index j picks the residue along prim.
      Vec w{0, 0};
      for (Coord norm = 1; norm <= 16 && w == Vec{0, 0}; ++norm)
        for (Coord wx = -norm; wx <= norm && w == Vec{0, 0}; ++wx)
          for (Coord wy = -norm; wy <= norm; ++wy)
            if (prim[0] * wy - prim[1] * wx == 1) {
              w = Vec{wx, wy};
              break;
            }
      if (w == Vec{0, 0})
        throw precondition_error("no unimodular complement for the line direction");
      long M = static_cast<long>(cmax) * radius + 6;
      long K = 8L * cmax * radius + 64;
      long W = 2L * radius + 8;
      for (long m = -M; m <= M; ++m) {
        for (Coord j = 0; j < g; ++j) {
          Vec rep{static_cast<Coord>(m * w[0] + j * prim[0]),
                  static_cast<Coord>(m * w[1] + j * prim[1])};
          auto at = [&](long k) {
            return bm.distance(Vec{static_cast<Coord>(rep[0] + k * dir[0]),
                                   static_cast<Coord>(rep[1] + k * dir[1])});
          };
          // Scan around the Euclidean foot of the line; the metric minimum
          // of any line meeting B(radius) sits within O(radius) of it.
          long k0 = std::lround(
              -double(rep[0] * dir[0] + rep[1] * dir[1]) /
              double(dir[0] * dir[0] + dir[1] * dir[1]));
          int best = std::numeric_limits<int>::max();
          long kc = k0;
          for (long k = k0 - K; k <= k0 + K; ++k) {
            int d = at(k);
            if (d < best) {
              best = d;
              kc = k;
            }
          }
          if (best > radius - 1) continue;  // no crossing point inside B(radius)
          std::vector<int> labels;
          labels.reserve(static_cast<std::size_t>(2 * W + 1));
          for (long k = kc - W; k <= kc + W; ++k) labels.push_back(at(k));
          InitialStrip s;
          s.rule = rule;
          s.sign = sign;
          s.rep = rep;
          s.dir = dir;
          s.min_label = best;
          s.seq = extract_sequence(labels);
          if (s.seq.truncated)
            throw precondition_error(
                "initial strip window too narrow to confirm terminals");
          out.push_back(std::move(s));
        }
      }
    }
  }
  return out;
}

struct InitialSurvey {
  int radius = 0;
  long strips = 0;
  long zero_unit = 0, ten_unit = 0, other = 0;
  bool all_conjectured = true;
  std::vector<std::pair<std::string, long>> cores;  // canonical core -> count
  std::string first_other;
};

inline InitialSurvey survey_initial_strips(const Presentation& p, int radius) {
  InitialSurvey sv;
  sv.radius = radius;
  std::map<std::string, long> tally;
  for (const InitialStrip& s : initial_strips(p, radius)) {
    ++sv.strips;
    if (!matches_conjectured_form(s.seq)) sv.all_conjectured = false;
    switch (initial_class(s.seq.core)) {
      case InitialClass::ZeroUnit: ++sv.zero_unit; break;
      case InitialClass::TenUnit: ++sv.ten_unit; break;
      default:
        ++sv.other;
        if (sv.first_other.empty()) sv.first_other = print_sequence(s.seq);
    }
    ++tally[print_sequence(Sequence{canonical_core(s.seq.core)})];
  }
  sv.cores.assign(tally.begin(), tally.end());
  return sv;
}

// ---- in-ball strip survey --------------------------------------------------

struct StripSurvey {
  int radius = 0;
  long strips = 0;
  long truncated = 0;
  long violations = 0;
  std::vector<std::pair<std::string, long>> cores;  // canonical core -> count
  std::string first_violation;
};

inline StripSurvey survey_strip_sequences(const DistanceMap& dm) {
  StripSurvey sv;
  sv.radius = dm.radius();
  std::map<std::string, long> tally;
  for (const Strip& s : enumerate_strips(dm)) {
    Sequence q = extract_sequence(s);
    ++sv.strips;
    if (q.truncated) ++sv.truncated;
    if (!matches_conjectured_form(q)) {
      ++sv.violations;
      if (sv.first_violation.empty()) sv.first_violation = print_sequence(q);
    }
    ++tally[print_sequence(Sequence{canonical_core(q.core)})];
  }
  sv.cores.assign(tally.begin(), tally.end());
  return sv;
}

// ---- crossing-move audit ---------------------------------------------------
//
// For each consecutive strip pair inside the ball the exit-line labels are
// recomputed from the entry strip's landing labels:
//
//   exit(m) = min_k [ landing(k) + D(exit.base + m*exit.dir_parent
//                                     - k*entry.dir_child) ]
//
// Every geodesic to a point of the shared plane enters it through the entry
// strip, so the identity is exact.  A landing column whose point lies outside
// the ball has distance at least radius+1 there, which cannot beat an
// in-ball exit label; restricting the minimum to in-ball columns is
// therefore still exact for every audited point.

struct CrossingAudit {
  int radius = 0;
  long pairs = 0;
  long points = 0;            // exit-line labels recomputed and compared
  long mismatches = 0;
  std::array<long, 5> kinds{};
  long landing_plus_one_bad = 0;  // landing label != departure label + 1
  std::string first_mismatch;
};

inline CrossingAudit audit_crossing_moves(const DistanceMap& dm) {
  const Presentation& p = dm.pres();
  const BaseMetric& bm = p.metric();
  CrossingAudit au;
  au.radius = dm.radius();
  std::vector<Strip> strips = enumerate_strips(dm);
  for (const CrossingPair& cp : enumerate_crossing_pairs(dm, strips)) {
    const Strip& e = strips[cp.entry];
    const Strip& x = strips[cp.exit];
    ++au.pairs;
    ++au.kinds[static_cast<std::size_t>(crossing_kind(e, x))];

    std::vector<std::pair<long, int>> landing;
    for (long k = e.lo; k <= e.hi; ++k) {
      Vec tail{static_cast<Coord>(k * e.dir_child[0]),
               static_cast<Coord>(k * e.dir_child[1])};
      std::int64_t idx = dm.find(plane_point(p, e.child_key, tail));
      if (idx < 0) continue;
      int v = dm.distance_at(static_cast<std::size_t>(idx));
      if (v != e.label(k) + 1) ++au.landing_plus_one_bad;
      landing.emplace_back(k, v);
    }

    for (long m = x.lo; m <= x.hi; ++m) {
      int pred = std::numeric_limits<int>::max();
      for (const auto& [k, v] : landing) {
        Vec delta{static_cast<Coord>(x.base[0] + m * x.dir_parent[0] -
                                     k * e.dir_child[0]),
                  static_cast<Coord>(x.base[1] + m * x.dir_parent[1] -
                                     k * e.dir_child[1])};
        pred = std::min(pred, v + bm.distance(delta));
      }
      ++au.points;
      if (pred != x.label(m)) {
        ++au.mismatches;
        if (au.first_mismatch.empty())
          au.first_mismatch = "rule " + std::to_string(x.rule) + " column " +
                              std::to_string(m) + ": predicted " +
                              std::to_string(pred) + ", measured " +
                              std::to_string(x.label(m));
      }
    }

  }
  return au;
}

// ---- geodesic-language cut points ------------------------------------------
//
// The witness family b^-1 s^n continued along the a-line of the n-th plane
// stays geodesic for exactly 2^n - 1 steps.  The same continuation along the
// image line (c for the first built-in) dies immediately; it is reported
// alongside for contrast.

struct CutPointReport {
  int n = 0;
  Word witness;                  // b^-1 s^n
  std::string continuation;      // base letter extending the witness
  long max_geodesic_k = 0;
  long expected = 0;             // 2^n - 1
  bool agrees = false;
  long image_line_max_k = 0;     // same probe along the image direction
};

namespace detail {

inline long continuation_cutoff(const Presentation& p, const BranchOracle& bo,
                                const Word& stem, int letter, long limit) {
  NormalForm x = normalize(p, stem);
  long base_len = static_cast<long>(stem.size());
  if (bo.distance(x) != base_len)
    throw precondition_error("witness stem is not geodesic");
  long max_k = 0;
  bool dead = false;
  for (long k = 1; k <= limit; ++k) {
    nf_mul(p, x, Letter{letter, false, 1});
    bool geo = bo.distance(x) == base_len + k;
    if (geo && dead)
      throw precondition_error("geodesy resumed after a cut point");
    if (geo) max_k = k;
    else dead = true;
  }
  return max_k;
}

}  // namespace detail

inline CutPointReport nonregularity_cutpoints(const Presentation& p, int n) {
  if (n < 1) throw precondition_error("cut point index must be positive");
  if (n > 3)
    throw precondition_error(
        "witness length grows as 2^n; refusing beyond n = 3");
  BranchOracle bo(p);
  CutPointReport rep;
  rep.n = n;
  rep.expected = (1L << n) - 1;
  rep.witness.push_back(Letter{1, false, -1});
  for (int i = 0; i < n; ++i) rep.witness.push_back(Letter{0, true, 1});
  rep.continuation = p.base_gens()[0].name;
  long limit = rep.expected + 4;
  rep.max_geodesic_k =
      detail::continuation_cutoff(p, bo, rep.witness, 0, limit);
  rep.image_line_max_k =
      detail::continuation_cutoff(p, bo, rep.witness, 2, limit);
  rep.agrees = rep.max_geodesic_k == rep.expected;
  return rep;
}

// ---- unique geodesics and fellow traveling ----------------------------------
//
// Two geodesics that climb the same tower of n+1 strips and descend n times,
// entering every strip window at its two optimal columns.  The d-runs of the
// first word double on the way up (d^2, d^4, ..., d^{2^n}); the second word
// runs a deficit of 2^{i-1} at the i-th climb and repays it while descending.
// Both are unique geodesics, their endpoints are one edge apart, and their
// synchronous divergence grows with n (checked against the oracle).

inline std::pair<Word, Word> unique_geodesic_pair(const Presentation& p,
                                                  int n) {
  if (n < 1 || n > 3)
    throw precondition_error("word family defined for n in [1, 3]");
  if (p.rules().size() < 1 || p.base_gens().size() < 4)
    throw precondition_error("word family needs generators a, b, d and rule s");
  auto rep = [](Word& w, int letter, bool stable, int sign, long count) {
    for (long i = 0; i < count; ++i) w.push_back(Letter{letter, stable, sign});
  };
  Word w;
  w.push_back(Letter{1, false, 1});                       // b
  for (int i = 1; i <= n; ++i) {
    w.push_back(Letter{0, true, 1});                      // s
    rep(w, 3, false, 1, 1L << i);                         // d^{2^i}
  }
  w.push_back(Letter{0, true, 1});                        // s
  w.push_back(Letter{0, false, 1});                       // a
  w.push_back(Letter{0, true, -1});                       // s^-1
  w.push_back(Letter{3, false, 1});                       // d
  rep(w, 0, true, -1, n - 1);                             // s^-(n-1)
  Word v;
  v.push_back(Letter{3, false, -1});                      // d^-1
  for (int i = 1; i <= n; ++i) {
    v.push_back(Letter{0, true, 1});                      // s
    rep(v, 3, false, 1, 1L << (i - 1));                   // d^{2^{i-1}}
  }
  v.push_back(Letter{0, true, 1});                        // s
  v.push_back(Letter{0, false, 1});                       // a
  for (int i = 0; i < n; ++i) {
    v.push_back(Letter{0, true, -1});                     // s^-1
    long run = (i == 0 ? 1 : 0) + (1L << (n - 1 - i));    // repay the deficit
    if (i == n - 1) run = (i == 0 ? 1 : 0) + 1;
    rep(v, 3, false, 1, run);                             // d^run
  }
  return {std::move(w), std::move(v)};
}

struct FellowTravelReport {
  int n = 0;
  Word w, w_prime;
  bool both_geodesic = false;
  std::uint64_t count_w = 0, count_w_prime = 0;
  bool both_unique = false;
  long endpoint_distance = -1;
  long sync_constant = -1;       // max_t d(w(t), w'(t)), synchronous
  long sync_reversed = -1;       // same for the reversed traversals
  bool reversal_same = false;
};

namespace detail {

// d(w(t), v(t)) for t = 1..max(|w|,|v|); traversals clamp at their endpoints.
inline std::vector<long> sync_profile(const Presentation& p,
                                      const BranchOracle& bo, const Word& w,
                                      const Word& v) {
  std::size_t L = std::max(w.size(), v.size());
  NormalForm a = nf_identity(p), b = nf_identity(p);
  std::vector<long> out;
  out.reserve(L);
  for (std::size_t t = 1; t <= L; ++t) {
    if (t <= w.size()) nf_mul(p, a, w[t - 1]);
    if (t <= v.size()) nf_mul(p, b, v[t - 1]);
    NormalForm gap = nf_mul_nf(p, nf_invert(p, a), b);
    out.push_back(static_cast<long>(bo.distance(gap)));
  }
  return out;
}

}  // namespace detail

inline FellowTravelReport fellow_traveler_audit(const Presentation& p, int n) {
  BranchOracle bo(p);
  FellowTravelReport rep;
  rep.n = n;
  std::tie(rep.w, rep.w_prime) = unique_geodesic_pair(p, n);
  NormalForm wa = normalize(p, rep.w), wb = normalize(p, rep.w_prime);
  rep.both_geodesic =
      bo.distance(wa) == static_cast<int>(rep.w.size()) &&
      bo.distance(wb) == static_cast<int>(rep.w_prime.size());
  rep.count_w = bo.geodesic_count(wa);
  rep.count_w_prime = bo.geodesic_count(wb);
  rep.both_unique = rep.count_w == 1 && rep.count_w_prime == 1;
  rep.endpoint_distance = bo.distance(nf_mul_nf(p, nf_invert(p, wa), wb));
  std::vector<long> prof = detail::sync_profile(p, bo, rep.w, rep.w_prime);
  rep.sync_constant = *std::max_element(prof.begin(), prof.end());
  // For equal-length words the constant is invariant under sweeping both
  // traversals backward; the reversed sweep is recorded alongside.
  long rev = 0;
  for (auto it = prof.rbegin(); it != prof.rend(); ++it)
    rev = std::max(rev, *it);
  rep.sync_reversed = rev;
  rep.reversal_same = rep.sync_constant == rep.sync_reversed;
  return rep;
}

// ---- almost convexity --------------------------------------------------------

struct ConvexityReport {
  int radius = 0;            // N: the audited sphere
  long bound = 0;            // claimed connecting-length bound
  long sphere_size = 0;
  long pairs = 0;            // unordered distance-<=2 pairs on S(N)
  long pairs_length1 = 0;    // joined by a single edge
  long pairs_length2 = 0;    // joined through an in-ball midpoint
  long pairs_bfs = 0;        // needed an in-ball search
  long worst = 0;            // max over pairs of min in-ball path length
  bool ok = false;           // worst <= bound and every pair connected
  NormalForm worst_a, worst_b;
};

namespace detail {

// Min path length between two ball indices through B(N) only, by
// bidirectional level expansion; returns -1 if longer than cap.
class InBallConnector {
 public:
  explicit InBallConnector(const DistanceMap& dm)
      : dm_(&dm),
        alpha_(generator_alphabet(dm.pres())),
        stamp_(dm.size(), 0),
        side_(dm.size(), 0),
        depth_(dm.size(), 0) {}

  long connect(std::size_t a, std::size_t b, long cap) {
    if (a == b) return 0;
    ++epoch_;
    const Presentation& p = dm_->pres();
    std::vector<std::size_t> front[2];
    front[0].push_back(a);
    front[1].push_back(b);
    mark(a, 0, 0);
    mark(b, 1, 0);
    long da = 0, db = 0;
    long best = cap + 1;
    while (!front[0].empty() || !front[1].empty()) {
      // Any path still undiscovered is longer than da + db + 1.
      if (da + db + 1 >= best || da + db >= cap) break;
      int side = front[0].size() <= front[1].size() ? 0 : 1;
      if (front[side].empty()) side ^= 1;
      long& d = side == 0 ? da : db;
      std::vector<std::size_t> next;
      for (std::size_t i : front[side]) {
        NormalForm x = dm_->element(i);
        for (const Letter& l : alpha_) {
          NormalForm y = x;
          nf_mul(p, y, l);
          std::int64_t j = dm_->find(y);
          if (j < 0) continue;
          std::size_t u = static_cast<std::size_t>(j);
          if (stamp_[u] == epoch_) {
            if (side_[u] != side)
              best = std::min(best, d + 1 + depth_[u]);
            continue;
          }
          mark(u, side, d + 1);
          next.push_back(u);
        }
      }
      ++d;
      front[side] = std::move(next);
    }
    return best <= cap ? best : -1;
  }

 private:
  void mark(std::size_t i, int side, long depth) {
    stamp_[i] = epoch_;
    side_[i] = static_cast<std::uint8_t>(side);
    depth_[i] = static_cast<std::uint16_t>(depth);
  }
  const DistanceMap* dm_;
  std::vector<Letter> alpha_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint8_t> side_;
  std::vector<std::uint16_t> depth_;
  std::uint32_t epoch_ = 0;
};

}  // namespace detail

inline ConvexityReport almost_convex_audit(const DistanceMap& dm,
                                           long bound) {
  const Presentation& p = dm.pres();
  const int N = dm.radius();
  std::vector<Letter> alpha = generator_alphabet(p);
  ConvexityReport rep;
  rep.radius = N;
  rep.bound = bound;
  rep.ok = true;
  auto [s_lo, s_hi] = dm.sphere(N);
  rep.sphere_size = static_cast<long>(s_hi - s_lo);
  detail::InBallConnector conn(dm);

  std::vector<std::size_t> d1;
  // j -> has an in-ball midpoint
  std::vector<std::pair<std::size_t, bool>> d2;
  for (std::size_t i = s_lo; i < s_hi; ++i) {
    NormalForm x = dm.element(i);
    d1.clear();
    d2.clear();
    for (const Letter& g : alpha) {
      NormalForm z = x;
      nf_mul(p, z, g);
      std::int64_t zi = dm.find(z);
      bool z_in = zi >= 0;
      if (z_in && dm.distance_at(static_cast<std::size_t>(zi)) == N &&
          static_cast<std::size_t>(zi) > i)
        d1.push_back(static_cast<std::size_t>(zi));
      for (const Letter& h : alpha) {
        NormalForm y = z;
        nf_mul(p, y, h);
        std::int64_t yi = dm.find(y);
        if (yi < 0 || dm.distance_at(static_cast<std::size_t>(yi)) != N)
          continue;
        if (static_cast<std::size_t>(yi) <= i) continue;
        d2.emplace_back(static_cast<std::size_t>(yi), z_in);
      }
    }
    std::sort(d1.begin(), d1.end());
    d1.erase(std::unique(d1.begin(), d1.end()), d1.end());
    std::sort(d2.begin(), d2.end());
    // keep one entry per endpoint, midpoint flag OR-ed
    std::vector<std::pair<std::size_t, bool>> uniq;
    for (const auto& [j, via] : d2) {
      if (!uniq.empty() && uniq.back().first == j)
        uniq.back().second = uniq.back().second || via;
      else
        uniq.emplace_back(j, via);
    }
    for (const auto& [j, via] : uniq) {
      if (std::binary_search(d1.begin(), d1.end(), j)) continue;
      ++rep.pairs;
      long len;
      if (via) {
        ++rep.pairs_length2;
        len = 2;
      } else {
        ++rep.pairs_bfs;
        len = conn.connect(i, j, bound);
      }
      if (len < 0) {
        rep.ok = false;
        len = bound + 1;
      }
      if (len > rep.worst) {
        rep.worst = len;
        rep.worst_a = x;
        rep.worst_b = dm.element(j);
      }
      if (len > bound) rep.ok = false;
    }
    rep.pairs += static_cast<long>(d1.size());
    rep.pairs_length1 += static_cast<long>(d1.size());
    if (rep.worst < 1 && !d1.empty()) {
      rep.worst = 1;
      rep.worst_a = x;
      rep.worst_b = dm.element(d1.front());
    }
  }
  return rep;
}

// Independent pair count for cross-checking the sweep above: walks every
// unordered sphere pair and tests d <= 2 through a small auxiliary ball.
inline long convexity_pair_count_bruteforce(const DistanceMap& dm) {
  const Presentation& p = dm.pres();
  const int N = dm.radius();
  DistanceMap b2(p, 2);
  auto [s_lo, s_hi] = dm.sphere(N);
  long pairs = 0;
  for (std::size_t i = s_lo; i < s_hi; ++i) {
    NormalForm xi = nf_invert(p, dm.element(i));
    for (std::size_t j = i + 1; j < s_hi; ++j) {
      NormalForm gap = nf_mul_nf(p, xi, dm.element(j));
      if (b2.find(gap) >= 0) ++pairs;
    }
  }
  return pairs;
}

// ---- base-group falsification by fellow travelers ---------------------------
//
// Exhaustive check over base-group words up to max_len: every non-geodesic
// word must admit a strictly shorter word with the same endpoints whose
// prefix stays within k of the corresponding prefix (candidate clamped at
// its end).  Implemented as a breadth-first sweep over pairs
// (endpoint, candidate-state set); the candidate state is the offset to the
// current prefix endpoint plus an active/ended flag, so words sharing the
// state set collapse and the sweep stays far below the 8^L word count.

struct FftpReport {
  int k = 0;
  int max_len = 0;
  bool holds = false;
  Word counterexample;  // nonempty iff !holds
};

inline FftpReport fftp_base_check(const Presentation& p, int k,
                                  int max_len = 8,
                                  std::size_t max_states = 4000000) {
  if (p.rank() != 2)
    throw precondition_error("fftp sweep needs a rank-2 base");
  const BaseMetric& bm = p.metric();
  FftpReport rep;
  rep.k = k;
  rep.max_len = max_len;

  int cmax = 1;
  std::vector<std::pair<Letter, Vec>> alpha;
  for (int gi = 0; gi < static_cast<int>(p.base_gens().size()); ++gi) {
    const Vec& v = p.base_gens()[gi].vec;
    for (Coord x : v) cmax = std::max(cmax, std::abs(int(x)));
    alpha.emplace_back(Letter{gi, false, 1}, v);
    alpha.emplace_back(Letter{gi, false, -1}, Vec{-v[0], -v[1]});
  }
  const int B = cmax * std::max(k, 1);
  const int side = 2 * B + 1;
  const int cells = side * side;
  auto cell = [&](int x, int y) { return (x + B) * side + (y + B); };
  std::vector<char> in_ball(static_cast<std::size_t>(cells), 0);
  for (int x = -B; x <= B; ++x)
    for (int y = -B; y <= B; ++y)
      in_ball[static_cast<std::size_t>(cell(x, y))] =
          bm.distance(Vec{static_cast<Coord>(x), static_cast<Coord>(y)}) <= k;

  const int bits = 2 * cells;  // [cell] active, [cells + cell] ended
  const int words = (bits + 63) / 64;
  using StateSet = std::vector<std::uint64_t>;
  auto set_bit = [&](StateSet& s, int b) { s[b >> 6] |= 1ULL << (b & 63); };
  auto get_bit = [&](const StateSet& s, int b) {
    return (s[b >> 6] >> (b & 63)) & 1;
  };

  struct Node {
    Vec z;
    StateSet s;
    std::uint32_t parent;
    Letter via;
  };
  std::vector<Node> nodes;
  StateSet init(static_cast<std::size_t>(words), 0);
  set_bit(init, cell(0, 0));
  nodes.push_back(Node{Vec{0, 0}, std::move(init), 0, Letter{}});

  auto key_of = [&](const Node& n) {
    std::string key(reinterpret_cast<const char*>(n.z.data()),
                    n.z.size() * sizeof(Coord));
    key.append(reinterpret_cast<const char*>(n.s.data()),
               n.s.size() * sizeof(std::uint64_t));
    return key;
  };

  std::size_t level_lo = 0, level_hi = 1;
  for (int t = 1; t <= max_len; ++t) {
    std::unordered_map<std::string, std::uint32_t> seen;
    std::size_t next_lo = nodes.size();
    for (std::size_t ni = level_lo; ni < level_hi; ++ni) {
      for (const auto& [lx, lv] : alpha) {
        Node nd;
        nd.z = Vec{static_cast<Coord>(nodes[ni].z[0] + lv[0]),
                   static_cast<Coord>(nodes[ni].z[1] + lv[1])};
        nd.s.assign(static_cast<std::size_t>(words), 0);
        const StateSet& src = nodes[ni].s;
        for (int wi = 0; wi < words; ++wi) {
          std::uint64_t bitsw = src[static_cast<std::size_t>(wi)];
          while (bitsw) {
            int b = wi * 64 + std::countr_zero(bitsw);
            bitsw &= bitsw - 1;
            bool ended = b >= cells;
            int c = ended ? b - cells : b;
            int ox = c / side - B, oy = c % side - B;
            // candidate prefix offset after w consumes this letter
            int sx = ox - lv[0], sy = oy - lv[1];
            if (!ended) {
              if (std::abs(sx) <= B && std::abs(sy) <= B &&
                  in_ball[static_cast<std::size_t>(cell(sx, sy))])
                set_bit(nd.s, cells + cell(sx, sy));  // candidate stops here
              for (const auto& [mx, mv] : alpha) {
                int tx = sx + mv[0], ty = sy + mv[1];
                if (std::abs(tx) <= B && std::abs(ty) <= B &&
                    in_ball[static_cast<std::size_t>(cell(tx, ty))])
                  set_bit(nd.s, cell(tx, ty));
              }
            } else if (std::abs(sx) <= B && std::abs(sy) <= B &&
                       in_ball[static_cast<std::size_t>(cell(sx, sy))]) {
              set_bit(nd.s, cells + cell(sx, sy));
            }
          }
        }
        if (bm.distance(nd.z) < t && !get_bit(nd.s, cells + cell(0, 0))) {
          // non-geodesic word with no shorter fellow-traveling companion
          rep.holds = false;
          Word w{lx};
          for (std::size_t at = ni; at != 0; at = nodes[at].parent)
            w.push_back(nodes[at].via);
          std::reverse(w.begin(), w.end());
          rep.counterexample = std::move(w);
          return rep;
        }
        nd.parent = static_cast<std::uint32_t>(ni);
        nd.via = lx;
        std::string key = key_of(nd);
        if (seen.emplace(std::move(key), 0).second) {
          nodes.push_back(std::move(nd));
          if (nodes.size() > max_states)
            throw resource_error("fftp state sweep exceeded its cap", t - 1);
        }
      }
    }
    level_lo = next_lo;
    level_hi = nodes.size();
  }
  rep.holds = true;
  return rep;
}

inline int fftp_base_constant(const Presentation& p, int max_len = 8,
                              int k_cap = 6) {
  for (int k = 0; k <= k_cap; ++k)
    if (fftp_base_check(p, k, max_len).holds) return k;
  return -1;
}

}  // namespace hnnpat
