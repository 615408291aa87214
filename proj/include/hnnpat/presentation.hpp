#pragma once

// Group presentations: free abelian base Z^n with a chosen finite generating
// set, plus stable letters s_i acting by s_i^-1 u_i s_i = v_i on cyclic
// subgroups <u_i>, <v_i> of the base.  Provides Britton normal forms with a
// canonical rightward coset convention, word parsing/printing, pinch
// detection, and the base word metric.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <memory>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "hnnpat/base.hpp"

namespace hnnpat {

struct Letter {
  int index = 0;    // into base_gens() or rules()
  bool stable = false;
  int sign = 1;     // +1 or -1
  bool operator==(const Letter&) const = default;
};

using Word = std::vector<Letter>;

struct BaseGen {
  std::string name;
  Vec vec;
};

struct StableRule {
  std::string name;
  int u_gen = 0;
  Coord u_pow = 1;
  int v_gen = 0;
  Coord v_pow = 1;
  Vec u_vec;  // u_pow * gens[u_gen]
  Vec v_vec;  // v_pow * gens[v_gen]
};

// Word metric on Z^n w.r.t. a fixed symmetric generating set.  Uses a
// closed form when the set is {+-(1,0),+-(0,1),+-(1,1),+-(1,-1)} (max-norm),
// otherwise a growing BFS memo from the origin.
class BaseMetric {
 public:
  explicit BaseMetric(std::vector<Vec> gens, int max_radius = 512)
      : max_radius_(max_radius) {
    for (const Vec& g : gens) {
      steps_.push_back(g);
      Vec neg = vec_scale(-1, g);
      if (neg != g) steps_.push_back(neg);
    }
    std::sort(steps_.begin(), steps_.end());
    steps_.erase(std::unique(steps_.begin(), steps_.end()), steps_.end());
    rank_ = steps_.empty() ? 0 : static_cast<int>(steps_[0].size());
    chebyshev_ = detect_chebyshev();
    dist_[Vec(rank_, 0)] = 0;
    frontier_.push_back(Vec(rank_, 0));
  }

  int rank() const { return rank_; }
  bool has_closed_form() const { return chebyshev_; }
  const std::vector<Vec>& steps() const { return steps_; }

  int distance(const Vec& v) const {
    if (chebyshev_)
      return std::max(std::abs(static_cast<long>(v[0])),
                      std::abs(static_cast<long>(v[1])));
    return distance_bfs(v);
  }

  int distance_bfs(const Vec& v) const {
    auto it = dist_.find(v);
    while (it == dist_.end()) {
      if (radius_ >= max_radius_ || frontier_.empty())
        throw out_of_radius_error("base metric query beyond radius cap");
      grow_one();
      it = dist_.find(v);
    }
    return it->second;
  }

  // Number of geodesic words over the generating set spelling v (saturating).
  std::uint64_t geodesic_word_count(const Vec& v) const {
    auto it = counts_.find(v);
    if (it != counts_.end()) return it->second;
    int d = distance(v);
    std::uint64_t total = 0;
    if (d == 0) {
      total = 1;
    } else {
      for (const Vec& s : steps_) {
        Vec w = vec_sub(v, s);
        if (distance(w) == d - 1)
          total = sat_add(total, geodesic_word_count(w));
      }
    }
    counts_[v] = total;
    return total;
  }

 private:
  bool detect_chebyshev() const {
    if (rank_ != 2 || steps_.size() != 8) return false;
    std::vector<Vec> king = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                             {0, 1},   {1, -1}, {1, 0},  {1, 1}};
    return steps_ == king;
  }

  void grow_one() const {
    std::vector<Vec> next;
    for (const Vec& v : frontier_) {
      for (const Vec& s : steps_) {
        Vec w = vec_add(v, s);
        if (dist_.emplace(w, radius_ + 1).second) next.push_back(std::move(w));
      }
    }
    frontier_ = std::move(next);
    ++radius_;
  }

  std::vector<Vec> steps_;
  int rank_ = 0;
  int max_radius_;
  bool chebyshev_ = false;
  mutable std::unordered_map<Vec, int, VecHash> dist_;
  mutable std::unordered_map<Vec, std::uint64_t, VecHash> counts_;
  mutable std::vector<Vec> frontier_;
  mutable int radius_ = 0;
};

namespace detail {

inline int first_nonzero(const Vec& w) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] != 0) return static_cast<int>(i);
  return -1;
}

// k such that g - k*w has first-nonzero-coordinate residue in [0, |w_j|).
inline Coord coset_quotient(const Vec& g, const Vec& w) {
  int j = first_nonzero(w);
  if (j < 0) throw precondition_error("coset reduction by zero vector");
  Coord wj = w[j];
  if (wj > 0) return floordiv(g[j], wj);
  return -floordiv(g[j], -wj);
}

inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace detail

inline bool subgroup_member(const Vec& g, const Vec& w, Coord* k_out = nullptr) {
  int j = detail::first_nonzero(w);
  if (j < 0) throw precondition_error("membership in trivial subgroup");
  if (g[j] % w[j] != 0) return false;
  Coord k = g[j] / w[j];
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] != k * w[i]) return false;
  if (k_out) *k_out = k;
  return true;
}

class Presentation {
 public:
  Presentation(std::string name, int rank, std::vector<BaseGen> gens,
               std::vector<StableRule> rules)
      : name_(std::move(name)),
        rank_(rank),
        gens_(std::move(gens)),
        rules_(std::move(rules)) {
    for (StableRule& r : rules_) {
      r.u_vec = vec_scale(r.u_pow, gens_.at(r.u_gen).vec);
      r.v_vec = vec_scale(r.v_pow, gens_.at(r.v_gen).vec);
    }
  }

  // Base Z^2 with a=(1,0), b=(0,1), c=(1,1), d=(1,-1);
  // s conjugates <a> to <c>, t conjugates <a> to <d>.
  static Presentation g11() {
    return Presentation(
        "g11", 2,
        {{"a", {1, 0}}, {"b", {0, 1}}, {"c", {1, 1}}, {"d", {1, -1}}},
        {{"s", 0, 1, 2, 1, {}, {}}, {"t", 0, 1, 3, 1, {}, {}}});
  }

  // Base Z^2 with a=(1,0), b=(0,1), c=(1,1), d=(2,2);
  // s conjugates <a> to <d>, t conjugates <b> to <d>.
  static Presentation gw() {
    return Presentation(
        "gw", 2,
        {{"a", {1, 0}}, {"b", {0, 1}}, {"c", {1, 1}}, {"d", {2, 2}}},
        {{"s", 0, 1, 3, 1, {}, {}}, {"t", 1, 1, 3, 1, {}, {}}});
  }

  static Presentation from_name(const std::string& name) {
    if (name == "g11") return g11();
    if (name == "gw") return gw();
    throw precondition_error("unknown builtin presentation: " + name);
  }

  // Text format, one directive per line ('#' starts a comment):
  //   name g11
  //   rank 2
  //   gen a 1 0
  //   rule s a 1 c 1
  static Presentation parse(const std::string& text) {
    std::string name;
    int rank = -1;
    std::vector<BaseGen> gens;
    struct RawRule {
      std::string name, u, v;
      Coord up, vp;
    };
    std::vector<RawRule> raw;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::string kw;
      if (!(ls >> kw)) continue;
      auto fail = [&](const std::string& msg) {
        throw malformed_word_error("presentation line " +
                                   std::to_string(lineno) + ": " + msg);
      };
      if (kw == "name") {
        if (!(ls >> name)) fail("missing name");
      } else if (kw == "rank") {
        if (!(ls >> rank) || rank < 1) fail("bad rank");
      } else if (kw == "gen") {
        if (rank < 1) fail("gen before rank");
        BaseGen g;
        if (!(ls >> g.name)) fail("missing generator name");
        g.vec.resize(rank);
        for (int i = 0; i < rank; ++i)
          if (!(ls >> g.vec[i])) fail("missing coordinate");
        gens.push_back(std::move(g));
      } else if (kw == "rule") {
        RawRule r;
        if (!(ls >> r.name >> r.u >> r.up >> r.v >> r.vp))
          fail("rule needs: name u_gen u_pow v_gen v_pow");
        raw.push_back(std::move(r));
      } else {
        fail("unknown directive '" + kw + "'");
      }
      std::string extra;
      if (ls >> extra) fail("trailing tokens");
    }
    if (rank < 1) throw malformed_word_error("presentation: missing rank");
    auto gen_index = [&](const std::string& nm) {
      for (std::size_t i = 0; i < gens.size(); ++i)
        if (gens[i].name == nm) return static_cast<int>(i);
      throw malformed_word_error("presentation: unknown base generator '" +
                                 nm + "'");
    };
    std::vector<StableRule> rules;
    for (const RawRule& r : raw)
      rules.push_back(
          {r.name, gen_index(r.u), r.up, gen_index(r.v), r.vp, {}, {}});
    Presentation p(name.empty() ? "custom" : name, rank, std::move(gens),
                   std::move(rules));
    p.validate();
    return p;
  }

  std::string serialize() const {
    std::ostringstream out;
    out << "name " << name_ << "\n";
    out << "rank " << rank_ << "\n";
    for (const BaseGen& g : gens_) {
      out << "gen " << g.name;
      for (Coord c : g.vec) out << ' ' << c;
      out << "\n";
    }
    for (const StableRule& r : rules_)
      out << "rule " << r.name << ' ' << gens_[r.u_gen].name << ' ' << r.u_pow
          << ' ' << gens_[r.v_gen].name << ' ' << r.v_pow << "\n";
    return out.str();
  }

  std::uint64_t hash() const { return fnv1a64(serialize()); }

  // Structural checks plus the standing geometric assumptions: the base
  // generators generate Z^n and each rule conjugates between subgroups whose
  // generators are equidistant from the identity.
  void validate() const {
    if (rank_ < 1) throw precondition_error("rank must be >= 1");
    if (gens_.empty()) throw precondition_error("need at least one generator");
    std::vector<std::string> names;
    auto check_name = [&](const std::string& nm) {
      if (nm.empty()) throw precondition_error("empty name");
      for (char c : nm)
        if (!detail::is_ident_char(c))
          throw precondition_error("bad character in name '" + nm + "'");
      if (std::find(names.begin(), names.end(), nm) != names.end())
        throw precondition_error("duplicate name '" + nm + "'");
      names.push_back(nm);
    };
    for (const BaseGen& g : gens_) {
      check_name(g.name);
      if (static_cast<int>(g.vec.size()) != rank_)
        throw precondition_error("generator vector has wrong length");
      if (vec_is_zero(g.vec))
        throw precondition_error("zero base generator '" + g.name + "'");
    }
    for (const StableRule& r : rules_) {
      check_name(r.name);
      if (r.u_gen < 0 || r.u_gen >= static_cast<int>(gens_.size()) ||
          r.v_gen < 0 || r.v_gen >= static_cast<int>(gens_.size()))
        throw precondition_error("rule generator out of range");
      if (r.u_pow == 0 || r.v_pow == 0)
        throw precondition_error("rule subgroup power must be nonzero");
    }
    BaseMetric& bm = metric();
    for (int i = 0; i < rank_; ++i) {
      Vec e(rank_, 0);
      e[i] = 1;
      try {
        bm.distance_bfs(e);
      } catch (const out_of_radius_error&) {
        throw precondition_error("base generators do not generate Z^n");
      }
    }
    for (const StableRule& r : rules_)
      if (bm.distance(r.u_vec) != bm.distance(r.v_vec))
        throw precondition_error("rule '" + r.name +
                                 "' joins non-equidistant subgroups");
  }

  const std::string& name() const { return name_; }
  int rank() const { return rank_; }
  const std::vector<BaseGen>& base_gens() const { return gens_; }
  const std::vector<StableRule>& rules() const { return rules_; }

  Letter letter(const std::string& nm, int sign = 1) const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (gens_[i].name == nm) return {static_cast<int>(i), false, sign};
    for (std::size_t i = 0; i < rules_.size(); ++i)
      if (rules_[i].name == nm) return {static_cast<int>(i), true, sign};
    throw malformed_word_error("unknown generator '" + nm + "'");
  }

  const std::string& letter_name(const Letter& l) const {
    return l.stable ? rules_.at(l.index).name : gens_.at(l.index).name;
  }

  BaseMetric& metric() const {
    if (!metric_) {
      std::vector<Vec> vs;
      for (const BaseGen& g : gens_) vs.push_back(g.vec);
      metric_ = std::make_unique<BaseMetric>(std::move(vs));
    }
    return *metric_;
  }

 private:
  std::string name_;
  int rank_;
  std::vector<BaseGen> gens_;
  std::vector<StableRule> rules_;
  mutable std::unique_ptr<BaseMetric> metric_;
};

// Britton normal form g0 s^{e1} g1 ... s^{em} gm, flat-encoded as
// [g0 (n coords)] then per segment [code (one entry, +-(rule+1))][gi (n)].
// Interior blocks are canonical coset representatives: block g preceding
// s^{+1} is reduced mod <u>, block preceding s^{-1} is reduced mod <v>,
// where "reduced" pins the first nonzero coordinate of the subgroup
// generator into [0, |w_j|).  The final block is unconstrained.
struct NormalForm {
  int rank = 0;
  std::vector<Coord> data;

  int segments() const {
    return rank == 0 ? 0
                     : static_cast<int>((data.size() - rank) / (rank + 1));
  }
  bool is_identity() const {
    return segments() == 0 && vec_is_zero(data);
  }
  bool operator==(const NormalForm&) const = default;
  std::uint64_t hash() const {
    return fnv1a64(data.data(), data.size() * sizeof(Coord),
                   fnv1a64(&rank, sizeof(rank)));
  }
};

struct NfHash {
  std::size_t operator()(const NormalForm& nf) const {
    return static_cast<std::size_t>(nf.hash());
  }
};

inline NormalForm nf_identity(const Presentation& p) {
  NormalForm nf;
  nf.rank = p.rank();
  nf.data.assign(p.rank(), 0);
  return nf;
}

inline Vec nf_block(const NormalForm& nf, int j) {
  const int n = nf.rank;
  std::size_t off =
      (j == 0) ? 0 : static_cast<std::size_t>(n) + (j - 1) * (n + 1) + 1;
  return Vec(nf.data.begin() + off, nf.data.begin() + off + n);
}

// Code of the j-th stable letter, j in [1, segments()]; +-(rule+1).
inline Coord nf_code(const NormalForm& nf, int j) {
  const int n = nf.rank;
  return nf.data[static_cast<std::size_t>(n) + (j - 1) * (n + 1)];
}

inline Vec nf_tail(const NormalForm& nf) {
  return Vec(nf.data.end() - nf.rank, nf.data.end());
}

inline void nf_tail_add(NormalForm& nf, const Vec& v) {
  Coord* t = nf.data.data() + nf.data.size() - nf.rank;
  for (int i = 0; i < nf.rank; ++i) t[i] += v[i];
}

inline void nf_mul(const Presentation& p, NormalForm& nf, const Letter& l) {
  const int n = p.rank();
  if (!l.stable) {
    if (l.index < 0 || l.index >= static_cast<int>(p.base_gens().size()))
      throw malformed_word_error("base generator index out of range");
    const Vec& g = p.base_gens()[l.index].vec;
    Coord* t = nf.data.data() + nf.data.size() - n;
    for (int i = 0; i < n; ++i) t[i] += l.sign * g[i];
    return;
  }
  if (l.index < 0 || l.index >= static_cast<int>(p.rules().size()))
    throw malformed_word_error("stable letter index out of range");
  const StableRule& r = p.rules()[l.index];
  const Vec& w = (l.sign > 0) ? r.u_vec : r.v_vec;
  const Vec& img = (l.sign > 0) ? r.v_vec : r.u_vec;
  Vec tail = nf_tail(nf);
  if (nf.segments() > 0) {
    Coord prev = nf.data[nf.data.size() - n - 1];
    int prev_rule = std::abs(prev) - 1;
    int prev_sign = prev > 0 ? 1 : -1;
    if (prev_rule == l.index && prev_sign == -l.sign) {
      Coord k = 0;
      if (subgroup_member(tail, w, &k)) {
        nf.data.resize(nf.data.size() - n - 1);
        Coord* t = nf.data.data() + nf.data.size() - n;
        for (int i = 0; i < n; ++i) t[i] += k * img[i];
        return;
      }
    }
  }
  Coord k = detail::coset_quotient(tail, w);
  Coord* t = nf.data.data() + nf.data.size() - n;
  for (int i = 0; i < n; ++i) t[i] -= k * w[i];
  nf.data.push_back(l.sign * (l.index + 1));
  for (int i = 0; i < n; ++i) nf.data.push_back(k * img[i]);
}

inline NormalForm nf_mul(const Presentation& p, NormalForm nf, const Word& w) {
  for (const Letter& l : w) nf_mul(p, nf, l);
  return nf;
}

inline NormalForm normalize(const Presentation& p, const Word& w) {
  if (w.size() > kMaxWordLetters)
    throw resource_error("word longer than the supported bound");
  return nf_mul(p, nf_identity(p), w);
}

inline NormalForm nf_mul_nf(const Presentation& p, const NormalForm& a,
                            const NormalForm& b) {
  NormalForm r = a;
  nf_tail_add(r, nf_block(b, 0));
  const int m = b.segments();
  for (int j = 1; j <= m; ++j) {
    Coord code = nf_code(b, j);
    nf_mul(p, r, Letter{std::abs(code) - 1, true, code > 0 ? 1 : -1});
    nf_tail_add(r, nf_block(b, j));
  }
  return r;
}

inline NormalForm nf_invert(const Presentation& p, const NormalForm& a) {
  NormalForm r = nf_identity(p);
  const int m = a.segments();
  nf_tail_add(r, vec_scale(-1, nf_block(a, m)));
  for (int j = m; j >= 1; --j) {
    Coord code = nf_code(a, j);
    nf_mul(p, r, Letter{std::abs(code) - 1, true, code > 0 ? -1 : 1});
    nf_tail_add(r, vec_scale(-1, nf_block(a, j - 1)));
  }
  return r;
}

inline Word stable_letter_sequence(const NormalForm& nf) {
  Word out;
  const int m = nf.segments();
  for (int j = 1; j <= m; ++j) {
    Coord code = nf_code(nf, j);
    out.push_back({std::abs(code) - 1, true, code > 0 ? 1 : -1});
  }
  return out;
}

inline Word free_reduce(const Word& w) {
  Word out;
  for (const Letter& l : w) {
    if (!out.empty() && out.back().index == l.index &&
        out.back().stable == l.stable && out.back().sign == -l.sign)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

inline Vec word_vector(const Presentation& p, const Word& w) {
  Vec v(p.rank(), 0);
  for (const Letter& l : w) {
    if (l.stable)
      throw precondition_error("expected a word in base generators");
    const Vec& g = p.base_gens().at(l.index).vec;
    for (int i = 0; i < p.rank(); ++i) v[i] += l.sign * g[i];
  }
  return v;
}

struct PinchReport {
  bool found = false;
  std::size_t begin = 0;  // half-open range [begin, end) covering s...s
  std::size_t end = 0;
  Word replacement;       // base word equal to the pinched subword
};

// Leftmost innermost pinch: a subword s^{-1} B s with vec(B) in <u>, or
// s B s^{-1} with vec(B) in <v>, where B has no stable letters.
inline PinchReport find_pinch(const Presentation& p, const Word& w) {
  std::ptrdiff_t prev = -1;  // position of previous stable letter
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!w[i].stable) continue;
    if (prev >= 0) {
      const Letter& a = w[prev];
      const Letter& b = w[i];
      if (a.index == b.index && a.sign == -b.sign) {
        const StableRule& r = p.rules()[a.index];
        Word mid(w.begin() + prev + 1, w.begin() + i);
        Vec v = word_vector(p, mid);
        const Vec& sub = (a.sign < 0) ? r.u_vec : r.v_vec;
        Coord k = 0;
        if (subgroup_member(v, sub, &k)) {
          PinchReport rep;
          rep.found = true;
          rep.begin = static_cast<std::size_t>(prev);
          rep.end = i + 1;
          Coord img_pow = k * ((a.sign < 0) ? r.v_pow : r.u_pow);
          int gen = (a.sign < 0) ? r.v_gen : r.u_gen;
          for (Coord c = 0; c < std::abs(img_pow); ++c)
            rep.replacement.push_back({gen, false, img_pow > 0 ? 1 : -1});
          return rep;
        }
      }
    }
    prev = static_cast<std::ptrdiff_t>(i);
  }
  return {};
}

inline int base_word_metric(const Presentation& p, const Vec& v) {
  return p.metric().distance(v);
}

inline int base_word_metric(const Presentation& p, const Word& w) {
  return p.metric().distance(word_vector(p, w));
}

// ---- text formats ----

inline std::string print_word(const Presentation& p, const Word& w) {
  std::ostringstream out;
  std::size_t i = 0;
  bool first = true;
  while (i < w.size()) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    if (!first) out << ' ';
    first = false;
    out << p.letter_name(w[i]);
    if (w[i].sign < 0) out << '\'';
    if (j - i > 1) out << '^' << (j - i);
    i = j;
  }
  return out.str();
}

// Tokens separated by whitespace: name, name', name^k, name'^k; k may be
// negative (folds into the sign).
inline Word parse_word(const Presentation& p, const std::string& text) {
  Word out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    std::string name;
    std::size_t i = 0;
    while (i < tok.size() && detail::is_ident_char(tok[i])) name += tok[i++];
    if (name.empty())
      throw malformed_word_error("bad token '" + tok + "'");
    int sign = 1;
    if (i < tok.size() && tok[i] == '\'') {
      sign = -1;
      ++i;
    }
    long expo = 1;
    if (i < tok.size() && tok[i] == '^') {
      ++i;
      std::size_t pos = 0;
      try {
        expo = std::stol(tok.substr(i), &pos);
      } catch (const std::exception&) {
        throw malformed_word_error("bad exponent in '" + tok + "'");
      }
      if (pos != tok.size() - i)
        throw malformed_word_error("bad exponent in '" + tok + "'");
      i = tok.size();
    }
    if (i != tok.size())
      throw malformed_word_error("bad token '" + tok + "'");
    Letter l = p.letter(name, sign);
    if (expo < 0) {
      l.sign = -l.sign;
      expo = -expo;
    }
    if (out.size() + static_cast<std::size_t>(expo) > kMaxWordLetters)
      throw resource_error("word longer than the supported bound");
    for (long k = 0; k < expo; ++k) out.push_back(l);
  }
  return out;
}

inline std::string vec_to_string(const Vec& v) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ',';
    out << v[i];
  }
  out << ')';
  return out.str();
}

inline std::string nf_to_string(const Presentation& p, const NormalForm& nf) {
  std::ostringstream out;
  out << vec_to_string(nf_block(nf, 0));
  const int m = nf.segments();
  for (int j = 1; j <= m; ++j) {
    Coord code = nf_code(nf, j);
    out << ' ' << p.rules()[std::abs(code) - 1].name;
    if (code < 0) out << '\'';
    out << ' ' << vec_to_string(nf_block(nf, j));
  }
  return out.str();
}

// Parses the nf_to_string format: (x,y) [name['] (x,y)]*.  The result is
// re-normalized, so arbitrary block values are accepted.
inline NormalForm nf_parse(const Presentation& p, const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  NormalForm nf = nf_identity(p);
  bool expect_vec = true;
  auto parse_vec = [&](const std::string& t) {
    if (t.size() < 2 || t.front() != '(' || t.back() != ')')
      throw malformed_word_error("bad vector '" + t + "'");
    Vec v;
    std::string body = t.substr(1, t.size() - 2);
    std::istringstream bs(body);
    std::string num;
    while (std::getline(bs, num, ',')) {
      try {
        std::size_t pos = 0;
        v.push_back(static_cast<Coord>(std::stol(num, &pos)));
        if (pos != num.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw malformed_word_error("bad vector '" + t + "'");
      }
    }
    if (static_cast<int>(v.size()) != p.rank())
      throw malformed_word_error("vector of wrong rank '" + t + "'");
    return v;
  };
  bool saw_any = false;
  while (in >> tok) {
    saw_any = true;
    if (expect_vec) {
      nf_tail_add(nf, parse_vec(tok));
      expect_vec = false;
    } else {
      int sign = 1;
      std::string name = tok;
      if (!name.empty() && name.back() == '\'') {
        sign = -1;
        name.pop_back();
      }
      Letter l = p.letter(name, sign);
      if (!l.stable)
        throw malformed_word_error("expected stable letter, got '" + tok + "'");
      nf_mul(p, nf, l);
      expect_vec = true;
    }
  }
  if (saw_any && expect_vec)
    throw malformed_word_error("normal form must end with a vector");
  return nf;
}

}  // namespace hnnpat
