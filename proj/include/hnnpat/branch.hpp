#pragma once

// Exact distance and geodesic-count oracle for a single normal form, without
// building a ball.  Every geodesic to an element crosses the same plane
// sequence as its normal form (a pinch would shorten the word by at least
// two), so distance transfers plane by plane: enter the next plane somewhere
// on the departure line, pay one stable letter, continue from the landing
// line.  The oracle evaluates that min-plus envelope over finite windows.
//
// Window soundness: a weight vector lambda with <lambda,u_i> = <lambda,v_i>
// for every rule induces a homomorphism G -> Z that moves by at most Lambda
// per letter, so any point whose weight exceeds (word-length bound) * Lambda
// cannot lie on a geodesic.  Both window directions must have nonzero weight;
// the constructor searches a small box for such a lambda and reports failure
// honestly when none exists.

#include <cmath>

#include "hnnpat/presentation.hpp"

namespace hnnpat {

class BranchOracle {
 public:
  explicit BranchOracle(const Presentation& p) : p_(&p) {
    const int n = p.rank();
    if (n > 4)
      throw precondition_error("weight search only implemented for rank <= 4");
    Vec best;
    long best_scale = 0;
    Vec probe(n, -4);
    for (;;) {
      long scale = admissible_scale(probe);
      if (scale > 0 && (best.empty() || scale < best_scale)) {
        best = probe;
        best_scale = scale;
      }
      int i = 0;
      while (i < n && probe[i] == 4) probe[i++] = -4;
      if (i == n) break;
      ++probe[i];
    }
    if (best.empty())
      throw precondition_error(
          "no weight vector certifies search windows for this presentation");
    lambda_ = best;
    scale_ = static_cast<int>(best_scale);
  }

  const Vec& weight() const { return lambda_; }
  int weight_scale() const { return scale_; }

  int distance(const NormalForm& x) const { return solve(x).first; }

  std::uint64_t geodesic_count(const NormalForm& x) const {
    return solve(x).second;
  }

 private:
  long dot(const Vec& lam, const Vec& v) const {
    long s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += long(lam[i]) * v[i];
    return s;
  }

  // Returns max per-letter weight step if lam is admissible, else 0.
  long admissible_scale(const Vec& lam) const {
    for (const StableRule& r : p_->rules()) {
      if (dot(lam, r.u_vec) != dot(lam, r.v_vec)) return 0;
      if (dot(lam, r.u_vec) == 0 || dot(lam, r.v_vec) == 0) return 0;
    }
    long scale = 0;
    for (const BaseGen& g : p_->base_gens())
      scale = std::max(scale, std::labs(dot(lam, g.vec)));
    return scale;
  }

  struct Line {
    long lo = 0, hi = -1;  // inclusive window, empty when hi < lo
    std::vector<int> val;
    std::vector<std::uint64_t> cnt;
    int& v(long k) { return val[std::size_t(k - lo)]; }
    std::uint64_t& c(long k) { return cnt[std::size_t(k - lo)]; }
    void reset(long l, long h) {
      lo = l;
      hi = h;
      val.assign(std::size_t(h - l + 1), std::numeric_limits<int>::max() / 2);
      cnt.assign(std::size_t(h - l + 1), 0);
    }
  };

  // Window for |c + t*m| <= bound, padded by two.
  static std::pair<long, long> window(long c, long m, long bound) {
    double a = (double(-bound) - double(c)) / double(m);
    double b = (double(bound) - double(c)) / double(m);
    long lo = static_cast<long>(std::floor(std::min(a, b))) - 2;
    long hi = static_cast<long>(std::ceil(std::max(a, b))) + 2;
    return {lo, hi};
  }

  // One line per crossing, indexed by the column where the geodesic takes
  // the stable letter.  A geodesic word factors uniquely as base words
  // separated by the normal form's stable letters, so summing counts over
  // optimal columns counts each word exactly once.
  std::pair<int, std::uint64_t> solve(const NormalForm& x) const {
    const BaseMetric& bm = p_->metric();
    const int n = p_->rank();
    const int m = x.segments();
    Vec g0(x.data.begin(), x.data.begin() + n);
    if (m == 0) return {bm.distance(g0), bm.geodesic_word_count(g0)};

    // Word-length upper bound from spelling the normal form directly.
    long upper = bm.distance(g0);
    for (int i = 1; i <= m; ++i) upper += 1 + bm.distance(nf_block(x, i));
    const long bound = upper * std::max<long>(scale_, 1);

    Line land;  // value/count standing at landing point j*w_out, crossing i
    long weight_prefix = 0;  // sum of block weights before current crossing
    Vec prev_out;            // landing direction of the previous crossing

    for (int i = 1; i <= m; ++i) {
      Coord code = nf_code(x, i);
      const StableRule& rule = p_->rules()[std::size_t(std::abs(code) - 1)];
      const Vec& w_in = code > 0 ? rule.u_vec : rule.v_vec;
      const Vec& w_out = code > 0 ? rule.v_vec : rule.u_vec;
      Vec block = nf_block(x, i - 1);
      weight_prefix += dot(lambda_, block);

      auto [jlo, jhi] = window(weight_prefix, dot(lambda_, w_in), bound);
      Line cur;
      cur.reset(jlo, jhi);
      for (long j = jlo; j <= jhi; ++j) {
        Vec pt = vec_add(block, vec_scale(Coord(j), w_in));
        if (i == 1) {
          cur.v(j) = bm.distance(pt) + 1;
          cur.c(j) = bm.geodesic_word_count(pt);
          continue;
        }
        int best = std::numeric_limits<int>::max() / 2;
        std::uint64_t cnt = 0;
        for (long k = land.lo; k <= land.hi; ++k) {
          if (land.v(k) > upper) continue;
          Vec step = vec_sub(pt, vec_scale(Coord(k), prev_out));
          int cand = land.v(k) + bm.distance(step);
          if (cand < best) {
            best = cand;
            cnt = 0;
          }
          if (cand == best)
            cnt =
                sat_add(cnt, sat_mul(land.c(k), bm.geodesic_word_count(step)));
        }
        cur.v(j) = best + 1;
        cur.c(j) = cnt;
      }
      land = std::move(cur);
      prev_out = w_out;
    }

    Vec tail = nf_tail(x);
    int best = std::numeric_limits<int>::max() / 2;
    std::uint64_t cnt = 0;
    for (long k = land.lo; k <= land.hi; ++k) {
      if (land.v(k) > upper) continue;
      Vec step = vec_sub(tail, vec_scale(Coord(k), prev_out));
      int cand = land.v(k) + bm.distance(step);
      if (cand < best) {
        best = cand;
        cnt = 0;
      }
      if (cand == best)
        cnt = sat_add(cnt, sat_mul(land.c(k), bm.geodesic_word_count(step)));
    }
    if (best > upper)
      throw precondition_error("branch oracle window failed its upper bound");
    return {best, cnt};
  }

  const Presentation* p_;
  Vec lambda_;
  int scale_ = 0;
};

// Distance between two elements d(a, b) = |a^{-1} b|.
inline int branch_distance(const BranchOracle& oracle, const Presentation& p,
                           const NormalForm& a, const NormalForm& b) {
  return oracle.distance(nf_mul_nf(p, nf_invert(p, a), b));
}

}  // namespace hnnpat
