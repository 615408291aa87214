// Command-line front door for the strip-pattern experiments: build or load
// geodesic balls, survey strip sequences, enumerate rewriting moves, and run
// the language/convexity audits.  Every run emits a certificate (JSON, CSV,
// or a table rendered from the same data) and exits 0 only if the invoked
// experiment's assertions all passed (1 on a failed assertion, 2 when the
// experiment could not run).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "hnnpat/certificate.hpp"

namespace {

using namespace hnnpat;

struct Common {
  std::string presentation = "g11";
  std::string format = "table";
  std::string output;
  std::uint64_t seed = 0;
};

Presentation load_presentation(const std::string& which) {
  if (which == "g11") return Presentation::g11();
  if (which == "gw") return Presentation::gw();
  if (std::filesystem::exists(which)) {
    std::ifstream in(which);
    std::ostringstream text;
    text << in.rdbuf();
    return Presentation::parse(text.str());
  }
  throw precondition_error("unknown presentation: " + which +
                           " (no such builtin or file)");
}

DistanceMap obtain_ball(const Presentation& p, int radius,
                        const std::string& cache) {
  if (!cache.empty() && std::filesystem::exists(cache)) {
    std::ifstream in(cache, std::ios::binary);
    DistanceMap dm = DistanceMap::load(in, p);
    if (dm.radius() == radius) return dm;
  }
  DistanceMap dm(p, radius);
  if (!cache.empty()) {
    std::ofstream out(cache, std::ios::binary);
    dm.save(out);
    if (!out) throw resource_error("cannot write ball cache: " + cache);
  }
  return dm;
}

// Renders the certificate in the chosen format and maps the verdict to the
// process exit code.
int finish(const Json& cert, const Common& c) {
  std::string text = render(cert, c.format);
  if (c.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(c.output, std::ios::binary);
    out << text;
    if (!out) throw resource_error("cannot write output: " + c.output);
  }
  return cert.at("pass").get<bool>() ? 0 : 1;
}

int cmd_ball(const Common& c, int radius, std::string cache, bool no_cache) {
  Presentation p = load_presentation(c.presentation);
  DistanceMap dm(p, radius);
  if (!no_cache) {
    if (cache.empty())
      cache = p.name() + "-r" + std::to_string(radius) + ".ball";
    std::ofstream out(cache, std::ios::binary);
    dm.save(out);
    if (!out) throw resource_error("cannot write ball cache: " + cache);
    std::cerr << "ball cache written: " << cache << "\n";
  }
  Json config{{"radius", radius}, {"seed", c.seed}};
  return finish(make_certificate(p, "ball-growth", kScopeExact, config,
                                 ball_results(dm), true),
                c);
}

int cmd_sequences(const Common& c, int radius, int ball_radius,
                  const std::string& cache) {
  Presentation p = load_presentation(c.presentation);
  if (ball_radius < 0) ball_radius = std::min(radius, 6);
  InitialSurvey init = survey_initial_strips(p, radius);
  bool pass = init.other == 0;
  Json results;
  results["initial"] = to_json(init);
  if (ball_radius > 0) {
    DistanceMap dm = obtain_ball(p, ball_radius, cache);
    StripSurvey sv = survey_strip_sequences(dm);
    Json in_ball = to_json(sv);
    std::map<int, long> depth_tally;
    const int seg = p.rank() + 1;
    for (const Strip& s : enumerate_strips(dm))
      ++depth_tally[static_cast<int>(s.child_key.size()) / seg];
    Json by_depth;
    for (const auto& [d, n] : depth_tally) by_depth[std::to_string(d)] = n;
    in_ball["by_depth"] = by_depth;
    CrossingAudit audit = audit_crossing_moves(dm);
    pass = pass && audit.mismatches == 0 && audit.landing_plus_one_bad == 0;
    results["in_ball"] = in_ball;
    results["crossings"] = to_json(audit);
  } else {
    results["in_ball"] = nullptr;
    results["crossings"] = nullptr;
  }
  Json config{{"radius", radius},
              {"ball_radius", ball_radius},
              {"seed", c.seed}};
  return finish(make_certificate(p, "strip-sequences", kScopeExact, config,
                                 std::move(results), pass),
                c);
}

int cmd_moves(const Common& c, int depth) {
  Presentation p = load_presentation(c.presentation);
  std::vector<ReachableItem> items = enumerate_reachable(depth);
  std::sort(items.begin(), items.end(),
            [](const ReachableItem& a, const ReachableItem& b) {
              std::string pa = print_pattern(a.pattern);
              std::string pb = print_pattern(b.pattern);
              return std::tie(a.depth, pa) < std::tie(b.depth, pb);
            });
  bool all_ok = true;
  Json rows = Json::array();
  for (const ReachableItem& it : items) {
    all_ok = all_ok && matches_conjectured_form(it.pattern);
    rows.push_back(Json{{"depth", it.depth},
                        {"moves", it.moves},
                        {"pattern", print_pattern(it.pattern)}});
  }
  Json results{{"depth", depth},
               {"classes", items.size()},
               {"all_conjectured", all_ok},
               {"patterns", rows}};
  Json config{{"depth", depth}, {"seed", c.seed}};
  return finish(make_certificate(p, "reachable-patterns", kScopeExact, config,
                                 std::move(results), all_ok),
                c);
}

int cmd_nonreg(const Common& c, int n_max) {
  Presentation p = load_presentation(c.presentation);
  bool pass = true;
  Json rows = Json::array();
  for (int n = 1; n <= n_max; ++n) {
    CutPointReport rep = nonregularity_cutpoints(p, n);
    pass = pass && rep.agrees;
    rows.push_back(to_json(p, rep));
  }
  Json config{{"n_max", n_max}, {"seed", c.seed}};
  return finish(make_certificate(p, "geodesic-cut-points", kScopeShadow,
                                 config, Json{{"rows", rows}}, pass),
                c);
}

int cmd_fellow(const Common& c, int n, int n_max) {
  Presentation p = load_presentation(c.presentation);
  int lo = n_max > 0 ? 1 : n;
  int hi = n_max > 0 ? n_max : n;
  bool pass = true;
  long prev_sync = -1;
  bool increasing = true;
  Json rows = Json::array();
  for (int i = lo; i <= hi; ++i) {
    FellowTravelReport rep = fellow_traveler_audit(p, i);
    pass = pass && rep.both_geodesic && rep.both_unique &&
           rep.endpoint_distance <= 1;
    if (prev_sync >= 0 && rep.sync_constant <= prev_sync) increasing = false;
    prev_sync = rep.sync_constant;
    rows.push_back(to_json(p, rep));
  }
  if (hi > lo) pass = pass && increasing;
  Json results{{"rows", rows}};
  if (hi > lo) results["sync_strictly_increasing"] = increasing;
  Json config{{"n", n}, {"n_max", n_max}, {"seed", c.seed}};
  return finish(make_certificate(p, "fellow-traveler", kScopeShadow, config,
                                 std::move(results), pass),
                c);
}

int cmd_ac(const Common& c, int radius, long bound, bool all,
           const std::string& cache) {
  Presentation p = load_presentation(c.presentation);
  bool pass = true;
  Json rows = Json::array();
  for (int N = all ? 1 : radius; N <= radius; ++N) {
    DistanceMap dm = N == radius ? obtain_ball(p, N, cache)
                                 : DistanceMap(p, N);
    ConvexityReport rep = almost_convex_audit(dm, bound);
    pass = pass && rep.ok;
    rows.push_back(to_json(p, rep));
  }
  Json config{{"radius", radius},
              {"bound", bound},
              {"all", all},
              {"seed", c.seed}};
  return finish(make_certificate(p, "almost-convexity", kScopeExact, config,
                                 Json{{"rows", rows}}, pass),
                c);
}

int cmd_fftp(const Common& c, int k, int max_len, std::size_t max_states) {
  Presentation p = load_presentation(c.presentation);
  FftpReport rep = fftp_base_check(p, k, max_len, max_states);
  Json config{{"k", k},
              {"max_len", max_len},
              {"max_states", max_states},
              {"seed", c.seed}};
  return finish(make_certificate(p, "fftp-base", kScopeExact, config,
                                 to_json(p, rep), rep.holds),
                c);
}

int cmd_normalize(const Common& c, const std::string& text) {
  Presentation p = load_presentation(c.presentation);
  Word w = parse_word(p, text);
  NormalForm nf = normalize(p, w);
  std::string printed = print_word(p, w);
  Word reparsed = parse_word(p, printed);
  bool round = reparsed == w;
  Json results{{"word", printed},
               {"normal_form", nf_to_string(p, nf)},
               {"segments", nf.segments()},
               {"length", w.size()},
               {"round_trip", print_word(p, reparsed)}};
  Json config{{"word", text}, {"seed", c.seed}};
  return finish(make_certificate(p, "normal-form", kScopeExact, config,
                                 std::move(results), round),
                c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "hnnpat -- geodesic experiments on strip-equidistant multiple HNN "
      "extensions of Z^n.\n"
      "Words use the letter syntax of the presentation: tokens separated by "
      "spaces,\n' for inverse, ^k for powers (k may be negative), e.g. "
      "\"b' s s a s' d^4\"."};
  app.require_subcommand(1);

  Common c;
  auto add_common = [&](CLI::App* s) {
    s->add_option("-p,--presentation", c.presentation,
                  "builtin name (g11, gw) or a presentation file")
        ->capture_default_str();
    s->add_option("-f,--format", c.format, "certificate rendering")
        ->check(CLI::IsMember({"json", "csv", "table"}))
        ->capture_default_str();
    s->add_option("-o,--output", c.output, "write to file instead of stdout");
    s->add_option("--seed", c.seed,
                  "echoed into the certificate; pins any randomized sampling")
        ->capture_default_str();
  };

  std::function<int()> run;

  int ball_radius_opt = 0;
  std::string ball_cache;
  bool no_cache = false;
  CLI::App* ball = app.add_subcommand(
      "ball", "build the geodesic ball and report sphere sizes");
  add_common(ball);
  ball->add_option("-r,--radius", ball_radius_opt, "ball radius")
      ->required()
      ->check(CLI::Range(0, 250));
  ball->add_option("--cache", ball_cache,
                   "cache path (default <name>-r<radius>.ball)");
  ball->add_flag("--no-cache", no_cache, "do not write a cache file");
  ball->callback(
      [&] { run = [&] { return cmd_ball(c, ball_radius_opt, ball_cache, no_cache); }; });

  int seq_radius = 0, seq_ball_radius = -1;
  std::string seq_cache;
  CLI::App* seq = app.add_subcommand(
      "sequences",
      "survey strip sequences: departure lines in the base plane at the given "
      "radius, plus windows and crossing moves inside a ball");
  add_common(seq);
  seq->add_option("-r,--radius", seq_radius, "base-plane survey radius")
      ->required()
      ->check(CLI::Range(1, 10000));
  seq->add_option("--ball-radius", seq_ball_radius,
                  "in-ball survey radius (default min(radius, 6); 0 skips)")
      ->check(CLI::Range(0, 250));
  seq->add_option("--cache", seq_cache, "load/save the ball at this path");
  seq->callback([&] {
    run = [&] { return cmd_sequences(c, seq_radius, seq_ball_radius, seq_cache); };
  });

  int moves_depth = 0;
  CLI::App* moves = app.add_subcommand(
      "moves", "enumerate sequence patterns reachable by rewriting moves");
  add_common(moves);
  moves->add_option("-d,--depth", moves_depth, "maximum number of moves")
      ->required()
      ->check(CLI::Range(0, 16));
  moves->callback([&] { run = [&] { return cmd_moves(c, moves_depth); }; });

  int nonreg_n_max = 3;
  CLI::App* nonreg = app.add_subcommand(
      "nonreg",
      "geodesic cut points along the witness line (dead ends after 2^n - 1 "
      "steps)");
  add_common(nonreg);
  nonreg->add_option("--n-max", nonreg_n_max, "check n = 1..n_max")
      ->check(CLI::Range(1, 3))
      ->capture_default_str();
  nonreg->callback([&] { run = [&] { return cmd_nonreg(c, nonreg_n_max); }; });

  int fellow_n = 1, fellow_n_max = 0;
  CLI::App* fellow = app.add_subcommand(
      "fellow",
      "unique geodesic pairs with adjacent endpoints and growing synchronous "
      "divergence");
  add_common(fellow);
  fellow->add_option("--n", fellow_n, "family index")
      ->check(CLI::Range(1, 3))
      ->capture_default_str();
  fellow->add_option("--n-max", fellow_n_max,
                     "sweep n = 1..n_max (overrides --n)")
      ->check(CLI::Range(1, 3));
  fellow->callback(
      [&] { run = [&] { return cmd_fellow(c, fellow_n, fellow_n_max); }; });

  int ac_radius = 0;
  long ac_bound = 22;
  bool ac_all = false;
  std::string ac_cache;
  CLI::App* ac = app.add_subcommand(
      "ac",
      "almost-convexity audit: connect distance-<=2 sphere pairs inside the "
      "ball");
  add_common(ac);
  ac->add_option("-r,--radius", ac_radius, "audited sphere")
      ->required()
      ->check(CLI::Range(1, 250));
  ac->add_option("--bound", ac_bound,
                 "claimed connecting-length bound (default 10*2+2 from the "
                 "base fellow-traveler constant 2)")
      ->capture_default_str();
  ac->add_flag("--all", ac_all, "audit every sphere 1..radius");
  ac->add_option("--cache", ac_cache,
                 "load/save the ball at the audited radius");
  ac->callback([&] {
    run = [&] { return cmd_ac(c, ac_radius, ac_bound, ac_all, ac_cache); };
  });

  int fftp_k = 2, fftp_max_len = 6;
  std::size_t fftp_max_states = 4000000;
  CLI::App* fftp = app.add_subcommand(
      "fftp",
      "check the k-fellow-traveler property over all base geodesic pairs up "
      "to a length");
  add_common(fftp);
  fftp->add_option("--k", fftp_k, "fellow-traveler constant to test")
      ->check(CLI::Range(0, 64))
      ->capture_default_str();
  fftp->add_option("--max-len", fftp_max_len, "geodesic length horizon")
      ->check(CLI::Range(1, 16))
      ->capture_default_str();
  fftp->add_option("--max-states", fftp_max_states, "state cap for the sweep")
      ->capture_default_str();
  fftp->callback([&] {
    run = [&] { return cmd_fftp(c, fftp_k, fftp_max_len, fftp_max_states); };
  });

  std::string norm_word;
  CLI::App* norm = app.add_subcommand(
      "normalize", "rewrite a word into its normal form (debugging aid)");
  add_common(norm);
  norm->add_option("-w,--word", norm_word, "word in letter syntax")
      ->required();
  norm->callback([&] { run = [&] { return cmd_normalize(c, norm_word); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return run();
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
