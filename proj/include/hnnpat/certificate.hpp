#pragma once

// Machine-readable run certificates plus human-readable renderings.
//
// Every experiment is summarized as a JSON certificate carrying the tool
// version, the presentation name and hash, the full configuration (including
// the seed, even when unused), the results, and a pass verdict.  Identical
// configurations yield byte-identical certificates: there are no timestamps
// and the field order is fixed.  The table and CSV renderings are pure
// functions of the certificate -- they never recompute anything.

#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>

#include "hnnpat/analysis.hpp"
#include "json.hpp"

namespace hnnpat {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

// Experiments that check finitely many instances of a claim quantified over
// all n (or all k) are labeled as finite shadows, not proofs.
inline constexpr const char* kScopeExact = "exact within the stated bounds";
inline constexpr const char* kScopeShadow = "finite shadow of an unbounded claim";

namespace detail {

inline std::string hex64(std::uint64_t h) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

inline Json core_list(const std::vector<std::pair<std::string, long>>& cores) {
  Json out = Json::array();
  for (const auto& [core, count] : cores)
    out.push_back(Json{{"core", core}, {"count", count}});
  return out;
}

}  // namespace detail

inline Json make_certificate(const Presentation& p, const std::string& name,
                             const char* scope, Json config, Json results,
                             bool pass) {
  Json j;
  j["certificate"] = name;
  j["tool_version"] = kToolVersion;
  j["presentation"] = p.name();
  j["presentation_hash"] = detail::hex64(p.hash());
  j["scope"] = scope;
  j["config"] = std::move(config);
  j["results"] = std::move(results);
  j["pass"] = pass;
  return j;
}

// ---- result serializers ----------------------------------------------------

inline Json to_json(const InitialSurvey& sv) {
  Json j;
  j["radius"] = sv.radius;
  j["strips"] = sv.strips;
  j["zero_unit"] = sv.zero_unit;
  j["ten_unit"] = sv.ten_unit;
  j["other"] = sv.other;
  j["all_conjectured"] = sv.all_conjectured;
  j["first_other"] = sv.first_other;
  j["cores"] = detail::core_list(sv.cores);
  return j;
}

inline Json to_json(const StripSurvey& sv) {
  Json j;
  j["radius"] = sv.radius;
  j["strips"] = sv.strips;
  j["truncated"] = sv.truncated;
  j["violations"] = sv.violations;
  j["first_violation"] = sv.first_violation;
  j["cores"] = detail::core_list(sv.cores);
  return j;
}

inline Json to_json(const CrossingAudit& a) {
  Json j;
  j["radius"] = a.radius;
  j["pairs"] = a.pairs;
  j["points"] = a.points;
  j["mismatches"] = a.mismatches;
  j["landing_plus_one_bad"] = a.landing_plus_one_bad;
  j["first_mismatch"] = a.first_mismatch;
  j["move_kinds"] = Json::array({a.kinds[0], a.kinds[1], a.kinds[2],
                                 a.kinds[3], a.kinds[4]});
  return j;
}

inline Json to_json(const Presentation& p, const CutPointReport& r) {
  Json j;
  j["n"] = r.n;
  j["witness"] = print_word(p, r.witness);
  j["continuation"] = r.continuation;
  j["max_geodesic_k"] = r.max_geodesic_k;
  j["expected"] = r.expected;
  j["agrees"] = r.agrees;
  j["image_line_max_k"] = r.image_line_max_k;
  return j;
}

inline Json to_json(const Presentation& p, const FellowTravelReport& r) {
  Json j;
  j["n"] = r.n;
  j["word"] = print_word(p, r.w);
  j["word_prime"] = print_word(p, r.w_prime);
  j["length"] = r.w.size();
  j["both_geodesic"] = r.both_geodesic;
  j["count_w"] = r.count_w;
  j["count_w_prime"] = r.count_w_prime;
  j["both_unique"] = r.both_unique;
  j["endpoint_distance"] = r.endpoint_distance;
  j["sync_constant"] = r.sync_constant;
  j["sync_reversed"] = r.sync_reversed;
  j["reversal_same"] = r.reversal_same;
  return j;
}

inline Json to_json(const Presentation& p, const ConvexityReport& r) {
  Json j;
  j["radius"] = r.radius;
  j["bound"] = r.bound;
  j["sphere_size"] = r.sphere_size;
  j["pairs"] = r.pairs;
  j["pairs_length1"] = r.pairs_length1;
  j["pairs_length2"] = r.pairs_length2;
  j["pairs_bfs"] = r.pairs_bfs;
  j["worst"] = r.worst;
  j["ok"] = r.ok;
  if (r.pairs > 0 && r.worst > 0) {
    j["worst_pair"] = Json::array(
        {nf_to_string(p, r.worst_a), nf_to_string(p, r.worst_b)});
  }
  return j;
}

inline Json to_json(const Presentation& p, const FftpReport& r) {
  Json j;
  j["k"] = r.k;
  j["max_len"] = r.max_len;
  j["holds"] = r.holds;
  j["counterexample"] = print_word(p, r.counterexample);
  return j;
}

inline Json ball_results(const DistanceMap& dm) {
  Json j;
  j["radius"] = dm.radius();
  Json spheres = Json::array();
  std::uint64_t total = 0;
  for (std::uint64_t s : dm.sphere_sizes()) {
    spheres.push_back(s);
    total += s;
  }
  j["sphere_sizes"] = spheres;
  j["ball_size"] = total;
  return j;
}

// ---- renderings ------------------------------------------------------------
//
// Both renderers are total on any certificate produced above and read only
// the certificate; unknown experiment kinds fall back to pretty JSON.

namespace detail {

inline std::string table_header(const Json& c) {
  std::ostringstream out;
  out << "certificate   " << c.at("certificate").get<std::string>() << "\n"
      << "tool_version  " << c.at("tool_version").get<std::string>() << "\n"
      << "presentation  " << c.at("presentation").get<std::string>()
      << "  hash " << c.at("presentation_hash").get<std::string>() << "\n"
      << "scope         " << c.at("scope").get<std::string>() << "\n"
      << "config        " << c.at("config").dump() << "\n"
      << "pass          " << (c.at("pass").get<bool>() ? "yes" : "no") << "\n";
  return out.str();
}

inline void table_cores(std::ostream& out, const Json& cores,
                        const char* title) {
  out << "  " << title << "\n";
  for (const Json& row : cores)
    out << "    " << std::left << std::setw(40)
        << row.at("core").get<std::string>() << std::right << std::setw(8)
        << row.at("count").get<long>() << "\n";
}

inline void table_survey(std::ostream& out, const Json& r) {
  out << "  radius " << r.at("radius") << "  strips " << r.at("strips");
  if (r.contains("zero_unit"))
    out << "  zero-unit " << r.at("zero_unit") << "  ten-unit "
        << r.at("ten_unit") << "  other " << r.at("other");
  if (r.contains("truncated")) out << "  truncated " << r.at("truncated");
  if (r.contains("violations")) out << "  violations " << r.at("violations");
  out << "\n";
  if (r.contains("first_violation") &&
      !r.at("first_violation").get<std::string>().empty())
    out << "  first violation: " << r.at("first_violation").get<std::string>()
        << "\n";
  if (r.contains("first_other") &&
      !r.at("first_other").get<std::string>().empty())
    out << "  first unclassified: " << r.at("first_other").get<std::string>()
        << "\n";
  table_cores(out, r.at("cores"), "cores");
}

}  // namespace detail

inline std::string render_table(const Json& c) {
  std::ostringstream out;
  out << detail::table_header(c) << "\n";
  const std::string kind = c.at("certificate").get<std::string>();
  const Json& r = c.at("results");
  if (kind == "ball-growth") {
    out << "  r   |S(r)|      |B(r)|\n";
    std::uint64_t total = 0;
    int i = 0;
    for (const Json& s : r.at("sphere_sizes")) {
      total += s.get<std::uint64_t>();
      out << std::setw(3) << i++ << std::setw(9) << s.get<std::uint64_t>()
          << std::setw(12) << total << "\n";
    }
  } else if (kind == "strip-sequences") {
    out << "initial strips (departure lines in the base plane)\n";
    detail::table_survey(out, r.at("initial"));
    if (!r.at("in_ball").is_null()) {
      out << "strips inside the ball\n";
      detail::table_survey(out, r.at("in_ball"));
      const Json& d = r.at("in_ball").at("by_depth");
      out << "  strips by depth:";
      for (auto it = d.begin(); it != d.end(); ++it)
        out << "  " << it.key() << ": " << it.value().get<long>();
      out << "\n";
    }
    if (!r.at("crossings").is_null()) {
      const Json& a = r.at("crossings");
      out << "crossing-move audit\n  pairs " << a.at("pairs") << "  points "
          << a.at("points") << "  mismatches " << a.at("mismatches")
          << "  landing+1 bad " << a.at("landing_plus_one_bad")
          << "\n  move kinds (0..4):";
      for (const Json& k : a.at("move_kinds")) out << " " << k.get<long>();
      out << "\n";
    }
  } else if (kind == "reachable-patterns") {
    out << "  depth " << r.at("depth") << "  classes " << r.at("classes")
        << "  all conjectured form: "
        << (r.at("all_conjectured").get<bool>() ? "yes" : "no") << "\n\n";
    out << "  depth  moves                    pattern\n";
    for (const Json& row : r.at("patterns"))
      out << std::setw(7) << row.at("depth").get<int>() << "  " << std::left
          << std::setw(23) << row.at("moves").get<std::string>() << std::right
          << "  " << row.at("pattern").get<std::string>() << "\n";
  } else if (kind == "geodesic-cut-points") {
    out << "  n   max geodesic k   expected 2^n-1   image line   agrees\n";
    for (const Json& row : r.at("rows"))
      out << std::setw(3) << row.at("n").get<int>() << std::setw(17)
          << row.at("max_geodesic_k").get<long>() << std::setw(17)
          << row.at("expected").get<long>() << std::setw(13)
          << row.at("image_line_max_k").get<long>() << std::setw(9)
          << (row.at("agrees").get<bool>() ? "yes" : "no") << "\n";
  } else if (kind == "fellow-traveler") {
    out << "  n  len  counts  endpoint  sync  sync(rev)  unique\n";
    for (const Json& row : r.at("rows"))
      out << std::setw(3) << row.at("n").get<int>() << std::setw(5)
          << row.at("length").get<long>() << std::setw(5)
          << row.at("count_w").get<std::uint64_t>() << "/"
          << row.at("count_w_prime").get<std::uint64_t>() << std::setw(10)
          << row.at("endpoint_distance").get<long>() << std::setw(6)
          << row.at("sync_constant").get<long>() << std::setw(11)
          << row.at("sync_reversed").get<long>() << std::setw(8)
          << (row.at("both_unique").get<bool>() ? "yes" : "no") << "\n";
    for (const Json& row : r.at("rows")) {
      out << "\n  n=" << row.at("n").get<int>() << "\n    w  = "
          << row.at("word").get<std::string>() << "\n    w' = "
          << row.at("word_prime").get<std::string>() << "\n";
    }
  } else if (kind == "almost-convexity") {
    out << "  N   |S(N)|  pairs   1-step  2-step  searched  worst  bound  ok\n";
    for (const Json& row : r.at("rows"))
      out << std::setw(3) << row.at("radius").get<int>() << std::setw(9)
          << row.at("sphere_size").get<long>() << std::setw(7)
          << row.at("pairs").get<long>() << std::setw(8)
          << row.at("pairs_length1").get<long>() << std::setw(8)
          << row.at("pairs_length2").get<long>() << std::setw(10)
          << row.at("pairs_bfs").get<long>() << std::setw(7)
          << row.at("worst").get<long>() << std::setw(7)
          << row.at("bound").get<long>() << std::setw(4)
          << (row.at("ok").get<bool>() ? "yes" : "no") << "\n";
  } else if (kind == "fftp-base") {
    out << "  k " << r.at("k") << "  max length " << r.at("max_len")
        << "  holds: " << (r.at("holds").get<bool>() ? "yes" : "no") << "\n";
    if (!r.at("counterexample").get<std::string>().empty())
      out << "  counterexample: " << r.at("counterexample").get<std::string>()
          << "\n";
  } else if (kind == "normal-form") {
    out << "  word         " << r.at("word").get<std::string>() << "\n"
        << "  normal form  " << r.at("normal_form").get<std::string>() << "\n"
        << "  segments     " << r.at("segments") << "\n"
        << "  length       " << r.at("length") << "\n"
        << "  round trip   " << r.at("round_trip").get<std::string>() << "\n";
  } else {
    out << r.dump(2) << "\n";
  }
  return out.str();
}

// Plot-ready rows; one header line, comma-separated, no quoting needed for
// the emitted vocabularies.
inline std::string render_csv(const Json& c) {
  std::ostringstream out;
  const std::string kind = c.at("certificate").get<std::string>();
  const Json& r = c.at("results");
  if (kind == "ball-growth") {
    out << "radius,sphere\n";
    int i = 0;
    for (const Json& s : r.at("sphere_sizes"))
      out << i++ << "," << s.get<std::uint64_t>() << "\n";
  } else if (kind == "strip-sequences") {
    out << "survey,core,count\n";
    for (const Json& row : r.at("initial").at("cores"))
      out << "initial," << row.at("core").get<std::string>() << ","
          << row.at("count").get<long>() << "\n";
    if (!r.at("in_ball").is_null())
      for (const Json& row : r.at("in_ball").at("cores"))
        out << "in_ball," << row.at("core").get<std::string>() << ","
            << row.at("count").get<long>() << "\n";
  } else if (kind == "reachable-patterns") {
    out << "depth,moves,pattern\n";
    for (const Json& row : r.at("patterns"))
      out << row.at("depth").get<int>() << "," << row.at("moves").get<std::string>()
          << "," << row.at("pattern").get<std::string>() << "\n";
  } else if (kind == "geodesic-cut-points") {
    // k vs geodesic status along the witness continuation, per n.
    out << "n,k,is_geodesic\n";
    for (const Json& row : r.at("rows")) {
      long maxk = row.at("max_geodesic_k").get<long>();
      for (long k = 1; k <= maxk + 1; ++k)
        out << row.at("n").get<int>() << "," << k << ","
            << (k <= maxk ? 1 : 0) << "\n";
    }
  } else if (kind == "fellow-traveler") {
    out << "n,length,endpoint_distance,sync_constant\n";
    for (const Json& row : r.at("rows"))
      out << row.at("n").get<int>() << "," << row.at("length").get<long>()
          << "," << row.at("endpoint_distance").get<long>() << ","
          << row.at("sync_constant").get<long>() << "\n";
  } else if (kind == "almost-convexity") {
    out << "radius,pairs,worst,bound,ok\n";
    for (const Json& row : r.at("rows"))
      out << row.at("radius").get<int>() << "," << row.at("pairs").get<long>()
          << "," << row.at("worst").get<long>() << ","
          << row.at("bound").get<long>() << ","
          << (row.at("ok").get<bool>() ? 1 : 0) << "\n";
  } else if (kind == "fftp-base") {
    out << "k,max_len,holds\n"
        << r.at("k").get<int>() << "," << r.at("max_len").get<int>() << ","
        << (r.at("holds").get<bool>() ? 1 : 0) << "\n";
  } else {
    out << "certificate\n" << c.dump() << "\n";
  }
  return out.str();
}

// Canonical byte form of a certificate: 2-space indent, trailing newline.
inline std::string render_json(const Json& c) { return c.dump(2) + "\n"; }

inline std::string render(const Json& c, const std::string& format) {
  if (format == "json") return render_json(c);
  if (format == "csv") return render_csv(c);
  if (format == "table") return render_table(c);
  throw precondition_error("unknown output format: " + format);
}

}  // namespace hnnpat
