#pragma once

// Exact metric ball in the Cayley graph (BFS over canonical normal forms),
// plus the strip structure: each tree edge between adjacent base planes
// carries distance labels along its departure line (parent side) and
// landing line (child side; always the parent labels plus one).

#include <cstring>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "hnnpat/presentation.hpp"

namespace hnnpat {

inline std::vector<Letter> generator_alphabet(const Presentation& p) {
  std::vector<Letter> out;
  for (int i = 0; i < static_cast<int>(p.base_gens().size()); ++i)
    for (int s : {1, -1}) out.push_back({i, false, s});
  for (int i = 0; i < static_cast<int>(p.rules().size()); ++i)
    for (int s : {1, -1}) out.push_back({i, true, s});
  return out;
}

// Coset of the base subgroup containing the element: everything but the
// final block.  Empty key = the plane through the identity.
inline std::vector<Coord> plane_key(const NormalForm& nf) {
  return std::vector<Coord>(nf.data.begin(), nf.data.end() - nf.rank);
}

inline NormalForm plane_point(const Presentation& p,
                              const std::vector<Coord>& key, const Vec& tail) {
  NormalForm nf;
  nf.rank = p.rank();
  nf.data = key;
  nf.data.insert(nf.data.end(), tail.begin(), tail.end());
  return nf;
}

class DistanceMap {
 public:
  DistanceMap(const Presentation& p, int radius,
              std::size_t max_elements = 60000000)
      : p_(&p), radius_(radius) {
    if (radius < 0 || radius > 250)
      throw precondition_error("ball radius must be in [0, 250]");
    build(max_elements);
  }

  const Presentation& pres() const { return *p_; }
  int radius() const { return radius_; }
  std::size_t size() const { return off_.size() - 1; }

  std::int64_t find(const NormalForm& nf) const {
    std::uint64_t h = fnv1a64(nf.data.data(), nf.data.size() * sizeof(Coord));
    std::uint64_t i = h & mask_;
    while (true) {
      std::uint32_t v = slots_[i];
      if (v == 0) return -1;
      std::uint32_t idx = v - 1;
      if (hash_[idx] == h && length(idx) == nf.data.size() &&
          std::memcmp(arena_.data() + off_[idx], nf.data.data(),
                      nf.data.size() * sizeof(Coord)) == 0)
        return idx;
      i = (i + 1) & mask_;
    }
  }

  bool contains(const NormalForm& nf) const { return find(nf) >= 0; }

  int distance(const NormalForm& nf) const {
    std::int64_t idx = find(nf);
    if (idx < 0)
      throw out_of_radius_error("element outside the computed ball");
    return dist_[idx];
  }

  int distance_at(std::size_t idx) const { return dist_[idx]; }

  NormalForm element(std::size_t idx) const {
    NormalForm nf;
    nf.rank = p_->rank();
    nf.data.assign(arena_.begin() + off_[idx], arena_.begin() + off_[idx + 1]);
    return nf;
  }

  // Index range of the sphere of radius r.
  std::pair<std::size_t, std::size_t> sphere(int r) const {
    if (r < 0 || r > radius_)
      throw out_of_radius_error("sphere outside the computed ball");
    return {layer_[r], layer_[r + 1]};
  }

  std::vector<std::uint64_t> sphere_sizes() const {
    std::vector<std::uint64_t> out;
    for (int r = 0; r <= radius_; ++r) out.push_back(layer_[r + 1] - layer_[r]);
    return out;
  }

  bool is_geodesic(const Word& w) const {
    return distance(normalize(*p_, w)) == static_cast<int>(w.size());
  }

  // Number of geodesic words from the identity to nf (saturating).
  std::uint64_t geodesic_count(const NormalForm& nf) const {
    std::int64_t idx = find(nf);
    if (idx < 0)
      throw out_of_radius_error("element outside the computed ball");
    build_counts();
    return gcount_[idx];
  }

  void save(std::ostream& out) const {
    const char magic[8] = {'H', 'N', 'N', 'B', 'A', 'L', 'L', '1'};
    out.write(magic, 8);
    auto w64 = [&](std::uint64_t v) {
      out.write(reinterpret_cast<const char*>(&v), 8);
    };
    w64(p_->hash());
    w64(static_cast<std::uint64_t>(radius_));
    w64(size());
    w64(arena_.size());
    out.write(reinterpret_cast<const char*>(off_.data()),
              static_cast<std::streamsize>(off_.size() * 8));
    out.write(reinterpret_cast<const char*>(dist_.data()),
              static_cast<std::streamsize>(dist_.size()));
    out.write(reinterpret_cast<const char*>(arena_.data()),
              static_cast<std::streamsize>(arena_.size() * sizeof(Coord)));
  }

  static DistanceMap load(std::istream& in, const Presentation& p) {
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, "HNNBALL1", 8) != 0)
      throw malformed_word_error("not a distance map file");
    auto r64 = [&]() {
      std::uint64_t v = 0;
      in.read(reinterpret_cast<char*>(&v), 8);
      return v;
    };
    std::uint64_t phash = r64();
    if (phash != p.hash())
      throw precondition_error("distance map was built for a different presentation");
    DistanceMap dm(p);
    dm.radius_ = static_cast<int>(r64());
    std::uint64_t count = r64();
    std::uint64_t arena_len = r64();
    dm.off_.resize(count + 1);
    in.read(reinterpret_cast<char*>(dm.off_.data()),
            static_cast<std::streamsize>((count + 1) * 8));
    dm.dist_.resize(count);
    in.read(reinterpret_cast<char*>(dm.dist_.data()),
            static_cast<std::streamsize>(count));
    dm.arena_.resize(arena_len);
    in.read(reinterpret_cast<char*>(dm.arena_.data()),
            static_cast<std::streamsize>(arena_len * sizeof(Coord)));
    if (!in) throw malformed_word_error("truncated distance map file");
    dm.layer_.assign(1, 0);
    for (std::size_t i = 0; i < count; ++i)
      while (static_cast<int>(dm.layer_.size()) <= dm.dist_[i])
        dm.layer_.push_back(static_cast<std::uint32_t>(i));
    while (static_cast<int>(dm.layer_.size()) <= dm.radius_ + 1)
      dm.layer_.push_back(static_cast<std::uint32_t>(count));
    dm.hash_.resize(count);
    for (std::size_t i = 0; i < count; ++i)
      dm.hash_[i] = fnv1a64(dm.arena_.data() + dm.off_[i],
                            (dm.off_[i + 1] - dm.off_[i]) * sizeof(Coord));
    dm.rebuild_slots();
    return dm;
  }

 private:
  explicit DistanceMap(const Presentation& p) : p_(&p), radius_(0) {}

  std::size_t length(std::uint32_t idx) const {
    return off_[idx + 1] - off_[idx];
  }

  void rebuild_slots() {
    std::uint64_t cap = 16;
    while (cap * 5 < size() * 8) cap <<= 1;
    slots_.assign(cap, 0);
    mask_ = cap - 1;
    for (std::uint32_t idx = 0; idx < size(); ++idx) {
      std::uint64_t i = hash_[idx] & mask_;
      while (slots_[i] != 0) i = (i + 1) & mask_;
      slots_[i] = idx + 1;
    }
  }

  // Returns the index, inserting if absent.
  std::uint32_t intern(const NormalForm& nf, int d, bool& inserted) {
    if ((size() + 1) * 8 > slots_.size() * 5) {
      slots_.assign(slots_.size() * 2, 0);
      mask_ = slots_.size() - 1;
      for (std::uint32_t idx = 0; idx < size(); ++idx) {
        std::uint64_t i = hash_[idx] & mask_;
        while (slots_[i] != 0) i = (i + 1) & mask_;
        slots_[i] = idx + 1;
      }
    }
    std::uint64_t h = fnv1a64(nf.data.data(), nf.data.size() * sizeof(Coord));
    std::uint64_t i = h & mask_;
    while (true) {
      std::uint32_t v = slots_[i];
      if (v == 0) break;
      std::uint32_t idx = v - 1;
      if (hash_[idx] == h && length(idx) == nf.data.size() &&
          std::memcmp(arena_.data() + off_[idx], nf.data.data(),
                      nf.data.size() * sizeof(Coord)) == 0) {
        inserted = false;
        return idx;
      }
      i = (i + 1) & mask_;
    }
    std::uint32_t idx = static_cast<std::uint32_t>(size());
    arena_.insert(arena_.end(), nf.data.begin(), nf.data.end());
    off_.push_back(arena_.size());
    dist_.push_back(static_cast<std::uint8_t>(d));
    hash_.push_back(h);
    slots_[i] = idx + 1;
    inserted = true;
    return idx;
  }

  void build(std::size_t max_elements) {
    off_ = {0};
    slots_.assign(1024, 0);
    mask_ = slots_.size() - 1;
    NormalForm id = nf_identity(*p_);
    bool ins = false;
    intern(id, 0, ins);
    layer_ = {0, 1};
    std::vector<Letter> alphabet = generator_alphabet(*p_);
    NormalForm tmp;
    tmp.rank = p_->rank();
    for (int r = 0; r < radius_; ++r) {
      std::size_t begin = layer_[r], end = layer_[r + 1];
      for (std::size_t i = begin; i < end; ++i) {
        for (const Letter& l : alphabet) {
          tmp.data.assign(arena_.begin() + off_[i],
                          arena_.begin() + off_[i + 1]);
          nf_mul(*p_, tmp, l);
          if (size() >= max_elements) {
            std::int64_t existing = find(tmp);
            if (existing >= 0) continue;
            throw resource_error(
                "ball exceeds element cap at radius " + std::to_string(r + 1),
                r);
          }
          intern(tmp, r + 1, ins);
        }
      }
      layer_.push_back(static_cast<std::uint32_t>(size()));
      if (layer_[r + 2] == layer_[r + 1]) {
        // graph exhausted early (cannot happen here, but keep layers sane)
        while (static_cast<int>(layer_.size()) <= radius_ + 1)
          layer_.push_back(layer_.back());
        break;
      }
    }
  }

  void build_counts() const {
    if (!gcount_.empty()) return;
    gcount_.resize(size(), 0);
    gcount_[0] = 1;
    std::vector<Letter> alphabet = generator_alphabet(*p_);
    NormalForm tmp;
    tmp.rank = p_->rank();
    for (std::size_t i = 1; i < size(); ++i) {
      std::uint64_t total = 0;
      for (const Letter& l : alphabet) {
        tmp.data.assign(arena_.begin() + off_[i], arena_.begin() + off_[i + 1]);
        nf_mul(*p_, tmp, l);
        std::int64_t j = find(tmp);
        if (j >= 0 && dist_[j] + 1 == dist_[i])
          total = sat_add(total, gcount_[j]);
      }
      gcount_[i] = total;
    }
  }

  const Presentation* p_;
  int radius_;
  std::vector<Coord> arena_;
  std::vector<std::uint64_t> off_;
  std::vector<std::uint8_t> dist_;
  std::vector<std::uint64_t> hash_;
  std::vector<std::uint32_t> layer_;
  std::vector<std::uint32_t> slots_;
  std::uint64_t mask_ = 0;
  mutable std::vector<std::uint64_t> gcount_;
};

// One tree edge between a parent plane and a child plane.  The departure
// line in the parent plane is {base + k*dir_parent}; crossing at k lands on
// {k*dir_child} in the child plane.  labels[k - lo] is the graph distance of
// the departure-line point; the landing-line point is one larger.
struct Strip {
  std::vector<Coord> child_key;
  int rule = 0;
  int sign = 1;
  Vec base;
  Vec dir_parent;
  Vec dir_child;
  long lo = 0, hi = -1;
  std::vector<int> labels;

  std::vector<Coord> parent_key(int rank) const {
    return std::vector<Coord>(child_key.begin(),
                              child_key.end() - (rank + 1));
  }
  int label(long k) const {
    if (k < lo || k > hi)
      throw out_of_radius_error("strip label outside the computed window");
    return labels[static_cast<std::size_t>(k - lo)];
  }
};

namespace detail {

// Builds the strip for a child plane key, walking the departure line
// outward from k0 (a column known to be inside the ball).
inline Strip build_strip(const DistanceMap& dm,
                         const std::vector<Coord>& child_key, long k0) {
  const Presentation& p = dm.pres();
  const int n = p.rank();
  Strip s;
  s.child_key = child_key;
  Coord code = child_key.back();
  s.rule = std::abs(code) - 1;
  s.sign = code > 0 ? 1 : -1;
  const StableRule& r = p.rules()[s.rule];
  s.dir_parent = s.sign > 0 ? r.u_vec : r.v_vec;
  s.dir_child = s.sign > 0 ? r.v_vec : r.u_vec;
  s.base = Vec(child_key.end() - (n + 1), child_key.end() - 1);
  std::vector<Coord> pkey = s.parent_key(n);
  auto label_at = [&](long k) -> int {
    Vec tail = s.base;
    for (int i = 0; i < n; ++i) tail[i] += static_cast<Coord>(k) * s.dir_parent[i];
    std::int64_t idx = dm.find(plane_point(p, pkey, tail));
    return idx < 0 ? -1 : dm.distance_at(static_cast<std::size_t>(idx));
  };
  long lo = k0, hi = k0;
  std::vector<int> right, left;
  for (long k = k0;; ++k) {
    int d = label_at(k);
    if (d < 0) break;
    right.push_back(d);
    hi = k;
  }
  for (long k = k0 - 1;; --k) {
    int d = label_at(k);
    if (d < 0) break;
    left.push_back(d);
    lo = k;
  }
  s.lo = lo;
  s.hi = hi;
  s.labels.assign(left.rbegin(), left.rend());
  s.labels.insert(s.labels.end(), right.begin(), right.end());
  return s;
}

inline long child_column(const Strip& s, const Vec& tail) {
  int j = first_nonzero(s.dir_child);
  return tail[j] / s.dir_child[j];
}

}  // namespace detail

// The strip crossed when multiplying x by the given stable letter.  Both x
// and the product must lie inside the ball.
inline Strip strip_crossed(const DistanceMap& dm, const NormalForm& x,
                           int rule, int sign) {
  const Presentation& p = dm.pres();
  if (!dm.contains(x))
    throw out_of_radius_error("element outside the computed ball");
  NormalForm y = x;
  nf_mul(p, y, Letter{rule, true, sign});
  if (!dm.contains(y))
    throw out_of_radius_error("crossing leaves the computed ball");
  bool up = y.segments() > x.segments();
  const NormalForm& child = up ? y : x;
  std::vector<Coord> key = plane_key(child);
  Strip s0;
  s0.child_key = key;
  Coord code = key.back();
  int srule = std::abs(code) - 1;
  int ssign = code > 0 ? 1 : -1;
  const StableRule& r = p.rules()[srule];
  s0.dir_child = ssign > 0 ? r.v_vec : r.u_vec;
  long k0 = detail::child_column(s0, nf_tail(child));
  return detail::build_strip(dm, key, k0);
}

// All strips with at least one landing-line point inside the ball, in
// deterministic discovery order.
inline std::vector<Strip> enumerate_strips(const DistanceMap& dm) {
  const Presentation& p = dm.pres();
  std::vector<Strip> out;
  std::unordered_set<Vec, VecHash> seen;
  NormalForm x;
  for (std::size_t i = 0; i < dm.size(); ++i) {
    x = dm.element(i);
    for (int rule = 0; rule < static_cast<int>(p.rules().size()); ++rule) {
      for (int sign : {1, -1}) {
        NormalForm y = x;
        nf_mul(p, y, Letter{rule, true, sign});
        if (y.segments() <= x.segments()) continue;  // up-crossings only
        if (!dm.contains(y)) continue;
        std::vector<Coord> key = plane_key(y);
        if (!seen.insert(key).second) continue;
        Strip probe;
        probe.child_key = key;
        Coord code = key.back();
        const StableRule& r = p.rules()[std::abs(code) - 1];
        probe.dir_child = code > 0 ? r.v_vec : r.u_vec;
        out.push_back(
            detail::build_strip(dm, key, detail::child_column(probe, nf_tail(y))));
      }
    }
  }
  return out;
}

// Distance labels on both sides of one crossing.
struct CrossingLabels {
  Strip strip;
  long landing_lo = 0, landing_hi = -1;
  std::vector<int> landing;  // child-side labels over [landing_lo, landing_hi]
};

inline CrossingLabels crossing_labels(const DistanceMap& dm,
                                      const NormalForm& x, int rule,
                                      int sign) {
  const Presentation& p = dm.pres();
  CrossingLabels out;
  out.strip = strip_crossed(dm, x, rule, sign);
  auto label_at = [&](long k) -> int {
    Vec tail(p.rank(), 0);
    for (int i = 0; i < p.rank(); ++i)
      tail[i] = static_cast<Coord>(k) * out.strip.dir_child[i];
    std::int64_t idx = dm.find(plane_point(p, out.strip.child_key, tail));
    return idx < 0 ? -1 : dm.distance_at(static_cast<std::size_t>(idx));
  };
  // The child window is contained in the parent window.
  long k0 = out.strip.lo;
  while (k0 <= out.strip.hi && label_at(k0) < 0) ++k0;
  if (k0 > out.strip.hi) return out;
  std::vector<int> vals;
  long hi = k0 - 1;
  for (long k = k0; k <= out.strip.hi; ++k) {
    int d = label_at(k);
    if (d < 0) break;
    vals.push_back(d);
    hi = k;
  }
  out.landing_lo = k0;
  out.landing_hi = hi;
  out.landing = std::move(vals);
  return out;
}

// Consecutive crossings: the exit strip departs from the plane the entry
// strip lands in.
struct CrossingPair {
  std::size_t entry = 0, exit = 0;
};

inline std::vector<CrossingPair> enumerate_crossing_pairs(
    const DistanceMap& dm, const std::vector<Strip>& strips) {
  const int n = dm.pres().rank();
  std::unordered_map<Vec, std::size_t, VecHash> by_key;
  for (std::size_t i = 0; i < strips.size(); ++i)
    by_key.emplace(strips[i].child_key, i);
  std::vector<CrossingPair> out;
  for (std::size_t j = 0; j < strips.size(); ++j) {
    auto it = by_key.find(strips[j].parent_key(n));
    if (it != by_key.end()) out.push_back({it->second, j});
  }
  return out;
}

inline bool collinear(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (static_cast<long long>(a[i]) * b[j] !=
          static_cast<long long>(a[j]) * b[i])
        return false;
  return true;
}

// Geometric type of a crossing pair: 1 parallel lines, 2 image-to-domain,
// 3 domain-to-image, 4 image-to-image, 0 anything else.
inline int crossing_kind(const Strip& entry, const Strip& exit) {
  if (collinear(entry.dir_child, exit.dir_parent)) return 1;
  bool in_image = entry.sign > 0;
  bool out_domain = exit.sign > 0;
  if (in_image && out_domain) return 2;
  if (!in_image && !out_domain) return 3;
  if (in_image && !out_domain) return 4;
  return 0;
}

}  // namespace hnnpat
