#pragma once

// Sequences and patterns on strips, and the rewriting moves between them.
//
// A sequence is the bi-infinite difference labeling of a strip: an implicit
// infinite run of -1 on the left, a finite core over {-1,0,1}, an implicit
// infinite run of +1 on the right.  A pattern abstracts a sequence into
// repeatable groups.  Crossing a plane from one strip to the next rewrites
// the sequence; move kinds 0-4 classify the crossings, and for kinds 2/3
// symbolic rewrite tables are implemented alongside the exact geometric
// envelope that they summarize.

#include <map>
#include <optional>
#include <set>

#include "hnnpat/cayley.hpp"

namespace hnnpat {

// ---- sequences ----

struct Sequence {
  std::vector<int> core;  // trimmed: no leading -1, no trailing +1
  // Set when the label window was too short to confirm both terminals
  // (metadata only; equality and ordering are on the core).
  bool truncated = false;
  bool operator==(const Sequence& o) const { return core == o.core; }
  bool operator<(const Sequence& o) const { return core < o.core; }
};

inline std::vector<int> trim_core(std::vector<int> v) {
  std::size_t b = 0, e = v.size();
  while (b < e && v[b] == -1) ++b;
  while (e > b && v[e - 1] == 1) --e;
  return std::vector<int>(v.begin() + b, v.begin() + e);
}

inline Sequence make_sequence(std::vector<int> raw) {
  for (int x : raw)
    if (x < -1 || x > 1)
      throw precondition_error("sequence symbols must be in {-1,0,1}");
  return Sequence{trim_core(std::move(raw))};
}

inline Sequence extract_sequence(const std::vector<int>& labels) {
  std::vector<int> diffs;
  for (std::size_t i = 0; i + 1 < labels.size(); ++i) {
    int d = labels[i + 1] - labels[i];
    if (d < -1 || d > 1)
      throw precondition_error("adjacent strip labels differ by more than 1");
    diffs.push_back(d);
  }
  // Terminal-confirmed: the window shows both infinite runs starting.
  bool confirmed = diffs.size() >= 4 && diffs[0] == -1 && diffs[1] == -1 &&
                   diffs[diffs.size() - 1] == 1 && diffs[diffs.size() - 2] == 1;
  Sequence s{trim_core(std::move(diffs))};
  s.truncated = !confirmed;
  return s;
}

inline Sequence extract_sequence(const Strip& s) {
  return extract_sequence(s.labels);
}

inline Sequence extract_sequence(const CrossingLabels& c) {
  return extract_sequence(c.landing);
}

// Reverse traversal direction: reverse the core and negate every symbol.
inline std::vector<int> m0_core(const std::vector<int>& core) {
  std::vector<int> out(core.rbegin(), core.rend());
  for (int& x : out) x = -x;
  return trim_core(std::move(out));
}

inline std::vector<int> canonical_core(const std::vector<int>& core) {
  std::vector<int> other = m0_core(core);
  return other < core ? other : core;
}

// Every -1 occurs before every +1 in the core.
inline bool matches_conjectured_form(const Sequence& s) {
  bool seen_one = false;
  for (int x : s.core) {
    if (x == 1) seen_one = true;
    if (x == -1 && seen_one) return false;
  }
  return true;
}

inline bool is_well_behaved(const Sequence& s) {
  return matches_conjectured_form(s);
}

enum class SeqClass { Zeros, AltOneZero, Other };

// Zeros: core (0)^k (k >= 0).  AltOneZero: core (10)^k or its reversal class
// (0 -1)^k, k >= 1.  Everything else: Other.
inline SeqClass classify_sequence(const Sequence& s) {
  bool zeros = true;
  for (int x : s.core) zeros = zeros && x == 0;
  if (zeros) return SeqClass::Zeros;
  auto alt = [](const std::vector<int>& c) {
    if (c.empty() || c.size() % 2 != 0) return false;
    for (std::size_t i = 0; i < c.size(); i += 2)
      if (c[i] != 1 || c[i + 1] != 0) return false;
    return true;
  };
  if (alt(s.core) || alt(m0_core(s.core))) return SeqClass::AltOneZero;
  return SeqClass::Other;
}

// ---- moves ----

enum MoveKind { M0 = 0, M1 = 1, M2 = 2, M3 = 3, M4 = 4 };

struct MoveSpec {
  int kind = M1;
  long split = 0;          // M2: core index of the w2|w3 boundary;
                           // M3: core index of the anchoring 0
  bool insert_zero = false;  // M2: emit the crossing-point 0 between halves
  int pairing = 0;           // M3: 0 = left-aligned, 1 = right-aligned
};

namespace detail {

inline std::vector<int> m2_left_image(const std::vector<int>& w) {
  std::vector<int> out;
  for (int x : w) {
    if (x == -1) {
      out.push_back(-1);
      out.push_back(-1);
    } else if (x == 0) {
      out.push_back(0);
      out.push_back(-1);
    } else {
      out.push_back(0);
      out.push_back(0);
    }
  }
  return out;
}

inline std::vector<int> m2_right_image(const std::vector<int>& w) {
  std::vector<int> out;
  for (int x : w) {
    if (x == -1)
      throw precondition_error("move 2 right half may not contain -1");
    out.push_back(1);
    out.push_back(x);  // 0 -> 10, 1 -> 11
  }
  return out;
}

inline std::vector<int> m3_pair_image(const std::vector<int>& w) {
  if (w.size() % 2 != 0)
    throw precondition_error("move 3 pairs an even number of symbols");
  std::vector<int> out;
  for (std::size_t i = 0; i < w.size(); i += 2) {
    if ((w[i] != 0 && w[i] != 1) || (w[i + 1] != 0 && w[i + 1] != 1))
      throw precondition_error("move 3 region must be over {0,1}");
    out.push_back(w[i] + w[i + 1] - 1);
  }
  return out;
}

}  // namespace detail

inline Sequence apply_move_sequence(const Sequence& s, const MoveSpec& m) {
  switch (m.kind) {
    case M0:
      return Sequence{m0_core(s.core)};
    case M1:
      return s;
    case M4:
      return Sequence{{}};
    case M2: {
      if (m.split < 0 || m.split > static_cast<long>(s.core.size()))
        throw precondition_error("move 2 split outside the core");
      std::vector<int> w2(s.core.begin(), s.core.begin() + m.split);
      std::vector<int> w3(s.core.begin() + m.split, s.core.end());
      std::vector<int> out = detail::m2_left_image(w2);
      if (m.insert_zero) out.push_back(0);
      std::vector<int> right = detail::m2_right_image(w3);
      out.insert(out.end(), right.begin(), right.end());
      return Sequence{trim_core(std::move(out))};
    }
    case M3: {
      if (m.split < 0 || m.split >= static_cast<long>(s.core.size()) ||
          s.core[m.split] != 0)
        throw precondition_error("move 3 must anchor at a 0 in the core");
      std::vector<int> w1(s.core.begin() + m.split + 1, s.core.end());
      if (w1.empty()) throw precondition_error("move 3 region is empty");
      for (int x : w1)
        if (x != 0 && x != 1)
          throw precondition_error("move 3 region must be over {0,1}");
      std::vector<int> out;
      if (m.pairing == 0) {
        out = detail::m3_pair_image(w1);
      } else {
        // Right-aligned: walk the pairs from the right end backwards.
        if (w1.size() % 2 != 0)
          throw precondition_error("move 3 pairs an even number of symbols");
        for (std::size_t i = w1.size(); i >= 2; i -= 2)
          out.insert(out.begin(), w1[i - 2] + w1[i - 1] - 1);
        for (int x : out)
          if (x < -1 || x > 1)
            throw precondition_error("move 3 region must be over {0,1}");
      }
      return Sequence{trim_core(std::move(out))};
    }
    default:
      throw precondition_error("unknown move kind");
  }
}

// ---- geometric moves ----

// Exit-line labels predicted by the min-plus envelope across one crossing.
// Entry labels f live on the line {j * dir_in} for j in [f_lo, f_lo + |f|);
// the exit line is {offset + m * dir_out} in the same plane.  Beyond its
// window f continues with slope one per step (the sequence terminals).
inline std::vector<int> crossing_envelope(const BaseMetric& bm,
                                          const std::vector<int>& f, long f_lo,
                                          const Vec& dir_in, const Vec& dir_out,
                                          const Vec& offset, long m_lo,
                                          long m_hi) {
  if (f.empty()) throw precondition_error("empty entry label window");
  const long f_hi = f_lo + static_cast<long>(f.size()) - 1;
  long pad = 0;
  for (Coord c : offset) pad = std::max(pad, std::labs(c));
  pad += static_cast<long>(f.size()) + std::max(std::labs(m_lo), std::labs(m_hi)) + 8;
  auto f_at = [&](long j) -> long {
    if (j < f_lo) return f.front() + (f_lo - j);
    if (j > f_hi) return f.back() + (j - f_hi);
    return f[std::size_t(j - f_lo)];
  };
  std::vector<int> out;
  Vec pt(dir_in.size());
  for (long m = m_lo; m <= m_hi; ++m) {
    long best = std::numeric_limits<int>::max() / 2;
    for (long j = f_lo - pad; j <= f_hi + pad; ++j) {
      for (std::size_t i = 0; i < pt.size(); ++i)
        pt[i] = offset[i] + static_cast<Coord>(m) * dir_out[i] -
                static_cast<Coord>(j) * dir_in[i];
      best = std::min(best, f_at(j) + static_cast<long>(bm.distance(pt)));
    }
    out.push_back(static_cast<int>(best));
  }
  return out;
}

// The sequence of the exit strip predicted from the entry strip by crossing
// geometry alone.  Entry landing labels are the parent labels plus one; the
// constant shift does not change differences, so the parent labels are used
// directly.
inline Sequence geometric_move(const BaseMetric& bm, const Strip& entry,
                               const Strip& exit) {
  long span = static_cast<long>(entry.labels.size());
  for (Coord c : exit.base) span += std::labs(c);
  span += 8;
  std::vector<int> g =
      crossing_envelope(bm, entry.labels, entry.lo, entry.dir_child,
                        exit.dir_parent, exit.base, -span, span);
  return extract_sequence(g);
}

// ---- patterns ----

// Interior groups only; the infinite (-1) and (1) terminals are implicit.
// Every stored group is repeatable (canonical form).
struct PatternGroup {
  std::vector<int> word;
  bool repeatable = true;
  bool operator==(const PatternGroup&) const = default;
  bool operator<(const PatternGroup& o) const {
    return std::tie(word, repeatable) < std::tie(o.word, o.repeatable);
  }
};

struct Pattern {
  std::vector<PatternGroup> groups;
  bool operator==(const Pattern&) const = default;
  bool operator<(const Pattern& o) const { return groups < o.groups; }
};

// T = (-1)(0)(1).
inline Pattern trivial_pattern() { return Pattern{{PatternGroup{{0}, true}}}; }

inline Pattern canonical_pattern(Pattern p) {
  std::vector<PatternGroup> out;
  for (PatternGroup& g : p.groups) {
    if (g.word.empty()) continue;
    if (!out.empty() && out.back() == g && g.repeatable) continue;
    out.push_back(std::move(g));
  }
  return Pattern{std::move(out)};
}

inline Pattern m0_pattern(const Pattern& p) {
  Pattern out;
  for (auto it = p.groups.rbegin(); it != p.groups.rend(); ++it) {
    PatternGroup g = *it;
    std::reverse(g.word.begin(), g.word.end());
    for (int& x : g.word) x = -x;
    out.groups.push_back(std::move(g));
  }
  return canonical_pattern(std::move(out));
}

inline Pattern canonical_mod_m0(const Pattern& p) {
  Pattern a = canonical_pattern(p);
  Pattern b = m0_pattern(a);
  return b < a ? b : a;
}

// Conjectured form for a pattern: no instance puts a +1 before a -1.
// Doubling each repeatable group catches violations across repetitions.
inline bool matches_conjectured_form(const Pattern& p) {
  std::vector<int> flat;
  for (const PatternGroup& g : p.groups) {
    flat.insert(flat.end(), g.word.begin(), g.word.end());
    if (g.repeatable) flat.insert(flat.end(), g.word.begin(), g.word.end());
  }
  return matches_conjectured_form(Sequence{std::move(flat)});
}

inline bool is_well_behaved(const Pattern& p) {
  return matches_conjectured_form(p);
}

// Move 2 on patterns: group boundary split; the crossing point contributes a
// repeatable (0) group between the two halves.
inline Pattern apply_move2_pattern(const Pattern& p, std::size_t boundary) {
  if (boundary > p.groups.size())
    throw precondition_error("move 2 boundary outside the pattern");
  Pattern out;
  for (std::size_t i = 0; i < boundary; ++i)
    out.groups.push_back(
        {detail::m2_left_image(p.groups[i].word), p.groups[i].repeatable});
  out.groups.push_back({{0}, true});
  for (std::size_t i = boundary; i < p.groups.size(); ++i)
    out.groups.push_back(
        {detail::m2_right_image(p.groups[i].word), p.groups[i].repeatable});
  return canonical_pattern(std::move(out));
}

// Move 3 on patterns: anchor at a (0) group; all groups to its right form
// the region and must be over {0,1}.  A group of odd word length must be
// repeatable; its pairs are read across repetitions (image of ww, halved).
inline Pattern apply_move3_pattern(const Pattern& p, std::size_t anchor) {
  if (anchor >= p.groups.size() || p.groups[anchor].word != std::vector<int>{0})
    throw precondition_error("move 3 must anchor at a (0) group");
  if (anchor + 1 == p.groups.size())
    throw precondition_error("move 3 region is empty");
  Pattern out;
  for (std::size_t i = anchor + 1; i < p.groups.size(); ++i) {
    const PatternGroup& g = p.groups[i];
    for (int x : g.word)
      if (x != 0 && x != 1)
        throw precondition_error("move 3 region must be over {0,1}");
    if (g.word.size() % 2 == 0) {
      out.groups.push_back({detail::m3_pair_image(g.word), g.repeatable});
    } else {
      if (!g.repeatable)
        throw precondition_error("move 3 cannot pair an odd fixed group");
      std::vector<int> ww = g.word;
      ww.insert(ww.end(), g.word.begin(), g.word.end());
      out.groups.push_back({detail::m3_pair_image(ww), true});
    }
  }
  return canonical_pattern(std::move(out));
}

inline Pattern apply_move_pattern(const Pattern& p, const MoveSpec& m) {
  switch (m.kind) {
    case M0:
      return m0_pattern(p);
    case M1:
      return canonical_pattern(p);
    case M4:
      return Pattern{};
    case M2:
      return apply_move2_pattern(p, static_cast<std::size_t>(m.split));
    case M3:
      return apply_move3_pattern(p, static_cast<std::size_t>(m.split));
    default:
      throw precondition_error("unknown move kind");
  }
}

// ---- reachability ----

struct ReachableItem {
  Pattern pattern;     // canonical mod move 0
  // Witness move word ("2@0 3@1"); it reaches the stored pattern or its
  // move-0 mirror.  Minimal-depth witnesses never repeat move 0.
  std::string moves;
  int depth = 0;
};

struct ReachableSequence {
  Sequence seq;
  std::string moves;  // "2@k" splits with an inserted 0, "2@k~" without
  int depth = 0;
};

// All patterns reachable from the trivial pattern by at most `depth` moves
// from {0,2,3}, presented modulo move 0 (a mirror symmetry).  The search
// walks plain patterns breadth-first -- the move-2 tables are not mirror
// symmetric, so both mirrors of a class must be expanded -- and reports each
// class once at its first (shallowest) appearance.  Exceeding a cap throws
// resource_error naming the last fully enumerated depth.
inline std::vector<ReachableItem> enumerate_reachable(
    int depth, std::size_t max_items = 500000, std::size_t max_groups = 64,
    std::size_t max_word = 2048) {
  std::map<Pattern, std::string> seen;  // plain pattern -> witness
  std::map<Pattern, ReachableItem> classes;
  Pattern t = canonical_pattern(trivial_pattern());
  seen.emplace(t, "");
  classes.emplace(canonical_mod_m0(t), ReachableItem{canonical_mod_m0(t), "", 0});
  std::vector<Pattern> frontier = {t};
  for (int d = 1; d <= depth && !frontier.empty(); ++d) {
    std::vector<Pattern> next;
    for (const Pattern& p : frontier) {
      const std::string& from = seen.at(p);
      auto consider = [&](Pattern q, const std::string& mv) {
        if (q.groups.size() > max_groups)
          throw resource_error("reachable pattern exceeds the group cap", d - 1);
        for (const PatternGroup& g : q.groups)
          if (g.word.size() > max_word)
            throw resource_error("reachable pattern exceeds the word cap", d - 1);
        if (seen.count(q)) return;
        if (seen.size() >= max_items)
          throw resource_error("reachable pattern set exceeds the cap", d - 1);
        std::string word = from.empty() ? mv : from + " " + mv;
        seen.emplace(q, word);
        next.push_back(q);
        Pattern c = canonical_mod_m0(q);
        if (!classes.count(c)) classes.emplace(c, ReachableItem{c, word, d});
      };
      consider(m0_pattern(p), "0");
      for (std::size_t b = 0; b <= p.groups.size(); ++b) {
        bool ok = true;
        for (std::size_t i = b; i < p.groups.size() && ok; ++i)
          for (int x : p.groups[i].word)
            if (x == -1) ok = false;
        if (ok) consider(apply_move2_pattern(p, b), "2@" + std::to_string(b));
      }
      for (std::size_t a = 0; a + 1 < p.groups.size(); ++a) {
        if (p.groups[a].word != std::vector<int>{0}) continue;
        bool ok = true;
        for (std::size_t i = a + 1; i < p.groups.size() && ok; ++i) {
          for (int x : p.groups[i].word)
            if (x != 0 && x != 1) ok = false;
          if (p.groups[i].word.size() % 2 == 1 && !p.groups[i].repeatable)
            ok = false;
        }
        if (ok) consider(apply_move3_pattern(p, a), "3@" + std::to_string(a));
      }
    }
    frontier = std::move(next);
  }
  std::vector<ReachableItem> out;
  for (auto& [k, v] : classes) out.push_back(v);
  return out;
}

// All trimmed sequences reachable from the trivial sequence by at most
// `depth` moves from {0,2,3}.  Move 2 is tried at every split both with and
// without the inserted 0, move 3 at every valid anchor.
inline std::vector<ReachableSequence> enumerate_reachable_sequences(
    int depth, std::size_t max_items = 500000, std::size_t max_core = 2048) {
  std::map<Sequence, ReachableSequence> seen;
  Sequence t = make_sequence({0});
  seen.emplace(t, ReachableSequence{t, "", 0});
  std::vector<Sequence> frontier = {t};
  for (int d = 1; d <= depth && !frontier.empty(); ++d) {
    std::vector<Sequence> next;
    for (const Sequence& s : frontier) {
      const std::string& from = seen.at(s).moves;
      auto consider = [&](const Sequence& q, const std::string& mv) {
        if (q.core.size() > max_core)
          throw resource_error("reachable sequence exceeds the core cap", d - 1);
        if (seen.count(q)) return;
        if (seen.size() >= max_items)
          throw resource_error("reachable sequence set exceeds the cap", d - 1);
        std::string word = from.empty() ? mv : from + " " + mv;
        seen.emplace(q, ReachableSequence{q, word, d});
        next.push_back(q);
      };
      consider(apply_move_sequence(s, MoveSpec{M0, 0, false, 0}), "0");
      const long n = static_cast<long>(s.core.size());
      for (long k = 0; k <= n; ++k) {
        bool ok = true;
        for (long i = k; i < n; ++i)
          if (s.core[i] == -1) ok = false;
        if (!ok) continue;
        consider(apply_move_sequence(s, MoveSpec{M2, k, true, 0}),
                 "2@" + std::to_string(k));
        consider(apply_move_sequence(s, MoveSpec{M2, k, false, 0}),
                 "2@" + std::to_string(k) + "~");
      }
      for (long k = 0; k < n; ++k) {
        if (s.core[k] != 0 || k + 1 == n) continue;
        bool ok = (n - k - 1) % 2 == 0;
        for (long i = k + 1; i < n && ok; ++i)
          if (s.core[i] != 0 && s.core[i] != 1) ok = false;
        if (ok)
          consider(apply_move_sequence(s, MoveSpec{M3, k, false, 0}),
                   "3@" + std::to_string(k));
      }
    }
    frontier = std::move(next);
  }
  std::vector<ReachableSequence> out;
  for (auto& [k, v] : seen) out.push_back(v);
  return out;
}

// ---- notation ----

namespace detail {

inline std::string group_word_to_string(const std::vector<int>& w) {
  bool has_neg = false;
  for (int x : w) has_neg = has_neg || x == -1;
  std::ostringstream out;
  if (has_neg && w.size() > 1) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out << ',';
      out << w[i];
    }
    return out.str();
  }
  // Runs of length >= 4 compress to caret form, space-separated.
  std::vector<std::string> toks;
  std::size_t i = 0;
  bool any_caret = false;
  while (i < w.size()) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    std::size_t run = j - i;
    if (run >= 4) {
      toks.push_back(std::to_string(w[i]) + "^" + std::to_string(run));
      any_caret = true;
    } else {
      std::string t;
      for (std::size_t k = 0; k < run; ++k) t += std::to_string(w[i]);
      toks.push_back(t);
    }
    i = j;
  }
  std::string sep = any_caret ? " " : "";
  std::string s;
  for (std::size_t k = 0; k < toks.size(); ++k) {
    if (k) s += sep;
    s += toks[k];
  }
  return s;
}

inline std::vector<int> parse_group_word(const std::string& body) {
  std::vector<int> out;
  auto push_sym = [&](int sym, long rep) {
    if (sym < -1 || sym > 1)
      throw malformed_word_error("sequence symbol out of range in '" + body +
                                 "'");
    for (long r = 0; r < rep; ++r) out.push_back(sym);
  };
  std::istringstream in(body);
  std::string tok;
  while (in >> tok) {
    // Token forms: "110", "-1", "0,-1", "1^7", "0^3"
    std::size_t i = 0;
    while (i < tok.size()) {
      int sign = 1;
      if (tok[i] == '-') {
        sign = -1;
        ++i;
      }
      if (i >= tok.size() || !std::isdigit(static_cast<unsigned char>(tok[i])))
        throw malformed_word_error("bad sequence token '" + tok + "'");
      int sym = sign * (tok[i] - '0');
      ++i;
      long rep = 1;
      if (i < tok.size() && tok[i] == '^') {
        ++i;
        std::size_t j = i;
        while (j < tok.size() &&
               std::isdigit(static_cast<unsigned char>(tok[j])))
          ++j;
        if (j == i)
          throw malformed_word_error("bad exponent in '" + tok + "'");
        rep = std::stol(tok.substr(i, j - i));
        i = j;
      }
      if (i < tok.size() && tok[i] == ',') ++i;
      push_sym(sym, rep);
    }
  }
  return out;
}

// Splits "(...)(...)^k..." into (body, exponent) items.
inline std::vector<std::pair<std::string, long>> split_groups(
    const std::string& text) {
  std::vector<std::pair<std::string, long>> items;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
  };
  skip_ws();
  while (i < text.size()) {
    if (text[i] != '(')
      throw malformed_word_error("expected '(' in sequence notation");
    std::size_t close = text.find(')', i);
    if (close == std::string::npos)
      throw malformed_word_error("unbalanced parenthesis in notation");
    std::string body = text.substr(i + 1, close - i - 1);
    i = close + 1;
    long expo = 1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      std::size_t j = i;
      if (j < text.size() && text[j] == '-') ++j;
      while (j < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      if (j == i)
        throw malformed_word_error("bad group exponent in notation");
      expo = std::stol(text.substr(i, j - i));
      if (expo < 0) throw malformed_word_error("negative group exponent");
      i = j;
    }
    items.emplace_back(body, expo);
    skip_ws();
  }
  return items;
}

}  // namespace detail

// Canonical sequence printing: explicit terminals, one group per maximal
// symbol run, exponent for runs of length >= 2, e.g. "(-1)(0)^6(1)".
inline std::string print_sequence(const Sequence& s) {
  std::ostringstream out;
  out << "(-1)";
  std::size_t i = 0;
  while (i < s.core.size()) {
    std::size_t j = i;
    while (j < s.core.size() && s.core[j] == s.core[i]) ++j;
    out << '(' << s.core[i] << ')';
    if (j - i > 1) out << '^' << (j - i);
    i = j;
  }
  out << "(1)";
  return out.str();
}

// Accepts any parenthesized group notation ("(-1)(0)(10)(1110)(1^7 0)(1)");
// groups are flattened and the result trimmed to a canonical core.
inline Sequence parse_sequence(const std::string& text) {
  std::vector<int> flat;
  for (auto& [body, expo] : detail::split_groups(text)) {
    std::vector<int> w = detail::parse_group_word(body);
    for (long r = 0; r < expo; ++r)
      flat.insert(flat.end(), w.begin(), w.end());
  }
  return make_sequence(std::move(flat));
}

// Pattern printing: terminals plus one parenthesized group per stored group,
// e.g. "(-1)(0)(10)(1110)(1^7 0)(1)".
inline std::string print_pattern(const Pattern& p) {
  std::ostringstream out;
  out << "(-1)";
  for (const PatternGroup& g : p.groups)
    out << '(' << detail::group_word_to_string(g.word) << ')';
  out << "(1)";
  return out.str();
}

// Reads pattern notation; the leading (-1) and trailing (1) groups are the
// terminals, every interior group is repeatable.
inline Pattern parse_pattern(const std::string& text) {
  auto items = detail::split_groups(text);
  if (items.size() < 2)
    throw malformed_word_error("pattern needs (-1) and (1) terminals");
  auto first = detail::parse_group_word(items.front().first);
  auto last = detail::parse_group_word(items.back().first);
  if (first != std::vector<int>{-1} || last != std::vector<int>{1})
    throw malformed_word_error("pattern must start with (-1) and end with (1)");
  Pattern p;
  for (std::size_t i = 1; i + 1 < items.size(); ++i) {
    if (items[i].second != 1)
      throw malformed_word_error("interior pattern groups take no exponent");
    p.groups.push_back({detail::parse_group_word(items[i].first), true});
  }
  return canonical_pattern(std::move(p));
}

}  // namespace hnnpat
