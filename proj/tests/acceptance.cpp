// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>

#include <fmt/core.h>

#include "support.hpp"
#include "vmirror/centrality.hpp"
#include "vmirror/metrics.hpp"
#include "vmirror/pipeline.hpp"
#include "vmirror/report.hpp"
#include "vmirror/stats.hpp"
#include "vmirror/synth.hpp"

using namespace vmirror;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    ok = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

int failures = 0;

void criterion(const std::string& name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  if (!o.ok) ++failures;
  std::cout << (o.ok ? "PASS " : "FAIL ") << name << (o.detail.empty() ? "" : " | " + o.detail) << std::endl;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct PairTarget {
  std::string a, b;
  double r;
  double p;          // p < 0.0005 is encoded as 0
  std::string stars;
};

// Reference correlations for data/table1.csv.
const std::vector<PairTarget>& reference_pairs() {
  static const std::vector<PairTarget> t = {
      {"creativity", "bc_oscillations", -0.830, 0.003, "**"},
      {"creativity", "art_norm_min", 0.656, 0.039, "*"},
      {"creativity", "pos_sent", -0.684, 0.029, "*"},
      {"creativity", "awvci", 0.612, 0.060, ""},
      {"creativity", "msg_recvd", -0.652, 0.041, "*"},
      {"art_norm_min", "awvci", 0.930, 0.0, "**"},
      {"gbc_strong_tie", "group_dc", 0.776, 0.008, "**"},
      {"group_dc", "num_actors", 0.768, 0.010, "**"},
      {"num_actors", "msg_recvd", 0.801, 0.005, "**"},
  };
  return t;
}

std::vector<std::string> reference_columns() {
  return {"creativity", "bc_oscillations", "art_norm_min", "pos_sent", "awvci",
          "gbc_strong_tie", "group_dc", "num_actors", "msg_recvd"};
}

CommGraph to_graph(const testing::SmallGraph& g) {
  CommGraph out;
  for (int i = 0; i < g.n; ++i) out.add_node(ActorId(testing::node_name(i)));
  for (const auto& [e, w] : g.arcs) {
    out.add_edge(ActorId(testing::node_name(e.first)), ActorId(testing::node_name(e.second)), w);
  }
  return out;
}

}  // namespace

int main() {
  const auto table1 = testing::data_dir() / "table1.csv";

  criterion("correlations: correlate on the team table reproduces r and p (r +-0.02, p +-0.005, < 1 s)", [&] {
    Outcome o;
    testing::TempDir dir("accept-t2");
    const auto t0 = Clock::now();
    const auto corr = run_correlate(table1, reference_columns(), dir.path());
    const double elapsed = seconds_since(t0);
    double worst_r = 0, worst_p = 0;
    for (const auto& t : reference_pairs()) {
      const auto& c = corr.cell(t.a, t.b);
      if (!c || !c->p) {
        o.fail(t.a + "/" + t.b + " missing");
        continue;
      }
      const double dr = std::abs(c->r - t.r);
      worst_r = std::max(worst_r, dr);
      if (dr > 0.02) o.fail(fmt::format("{}/{} r={:.4f} want {:.3f}", t.a, t.b, c->r, t.r));
      if (t.p == 0.0) {
        if (*c->p >= 0.0005) o.fail(fmt::format("{}/{} p={:.5f} want <0.0005", t.a, t.b, *c->p));
      } else {
        const double dp = std::abs(*c->p - t.p);
        worst_p = std::max(worst_p, dp);
        if (dp > 0.005) o.fail(fmt::format("{}/{} p={:.5f} want {:.3f}", t.a, t.b, *c->p, t.p));
      }
    }
    if (elapsed >= 1.0) o.fail(fmt::format("took {:.3f} s", elapsed));
    o.detail += fmt::format("{}max |dr|={:.4f} max |dp|={:.4f} time={:.3f}s", o.detail.empty() ? "" : "; ",
                            worst_r, worst_p, elapsed);
    return o;
  });

  criterion("correlations: significance stars match for every listed pair", [&] {
    Outcome o;
    const auto t = read_team_metrics_csv(testing::slurp(table1));
    const auto corr = correlation_matrix(std::span<const TeamMetricsRow>(t.rows), reference_columns());
    for (const auto& target : reference_pairs()) {
      const std::string got = significance_stars(*corr.cell(target.a, target.b)->p);
      if (got != target.stars) o.fail(fmt::format("{}/{} '{}' want '{}'", target.a, target.b, got, target.stars));
    }
    return o;
  });

  criterion("betweenness: exact agreement with path enumeration on 300 graphs of <= 7 nodes (< 10 s)", [&] {
    Outcome o;
    std::mt19937_64 rng(2024);
    const auto t0 = Clock::now();
    int graphs = 0;
    double worst = 0;
    for (int trial = 0; trial < 300; ++trial) {
      const auto sg = testing::random_graph(rng, 7, 0.15 + 0.5 * (trial % 5) / 4.0);
      const CommGraph g = to_graph(sg);
      for (bool directed : {false, true}) {
        for (bool normalized : {false, true}) {
          const auto got = betweenness(g, normalized, directed);
          const auto want = testing::brute_betweenness(sg, normalized, directed);
          for (int i = 0; i < sg.n; ++i) {
            worst = std::max(worst, std::abs(got.at(ActorId(testing::node_name(i))) - want[static_cast<std::size_t>(i)]));
          }
        }
      }
      ++graphs;
    }
    const double elapsed = seconds_since(t0);
    if (worst > 1e-9) o.fail(fmt::format("max deviation {:.3g}", worst));
    if (elapsed >= 10.0) o.fail(fmt::format("took {:.2f} s", elapsed));
    o.detail += fmt::format("{}graphs={} max dev={:.2g} time={:.3f}s", o.detail.empty() ? "" : "; ", graphs, worst,
                            elapsed);
    return o;
  });

  criterion("p-value: 100k-shuffle permutation test agrees with analytic p within 0.01", [&] {
    Outcome o;
    const auto t = read_team_metrics_csv(testing::slurp(table1));
    auto col = [&](const std::string& c) {
      std::vector<double> v;
      for (const auto& row : t.rows) v.push_back(*column_value(row, c));
      return v;
    };
    std::mt19937_64 rng(12345);
    double worst = 0;
    std::string worst_pair;
    for (const auto& target : reference_pairs()) {
      const auto x = col(target.a);
      auto y = col(target.b);
      const double r = testing::pearson_ref(x, y);
      const double analytic = two_tailed_p(pearson(x, y), x.size());
      constexpr int kShuffles = 100000;
      int extreme = 0;
      for (int s = 0; s < kShuffles; ++s) {
        std::shuffle(y.begin(), y.end(), rng);
        if (std::abs(testing::pearson_ref(x, y)) >= std::abs(r) - 1e-12) ++extreme;
      }
      const double perm = static_cast<double>(extreme) / kShuffles;
      const double d = std::abs(perm - analytic);
      if (d > worst) {
        worst = d;
        worst_pair = target.a + "/" + target.b;
      }
      if (d > 0.01) o.fail(fmt::format("{}/{} permutation {:.4f} analytic {:.4f}", target.a, target.b, perm, analytic));
    }
    o.detail += fmt::format("{}max |diff|={:.4f} ({})", o.detail.empty() ? "" : "; ", worst, worst_pair);
    return o;
  });

  criterion("synthetic: handovers exact for k in {0,1,5,20}, ART within 0.5 min, sentiment within 0.05 pp", [&] {
    Outcome o;
    testing::TempDir dir("accept-synth");
    const auto params = default_course_params(150, 42);
    const auto corpus = generate_course(params);
    write_course(corpus, dir.path());
    const auto cfg = load_config(dir.path() / "course.conf", {"output=" + (dir.path() / "out").string()});
    const auto result = run_analysis(cfg);
    const Corpus loaded = load_corpus(cfg);
    const auto& teams = corpus.manifest["teams"];
    if (result.rows.size() != teams.size()) {
      o.fail("row count mismatch");
      return o;
    }
    std::set<int> ks;
    double worst_art = 0, worst_sent = 0;
    for (std::size_t i = 0; i < teams.size(); ++i) {
      const auto& want = teams[i];
      const auto& row = result.rows[i];
      const int k = want["handovers"].get<int>();
      ks.insert(k);
      if (row.bc_oscillations != k) o.fail(fmt::format("team {} handovers {} want {}", row.team, row.bc_oscillations, k));
      if (!row.art_norm_min) {
        o.fail("team " + row.team + " has no ART");
      } else {
        const double d = std::abs(*row.art_norm_min - want["expected_art_minutes"].get<double>());
        worst_art = std::max(worst_art, d);
        if (d > 0.5) o.fail(fmt::format("team {} ART off by {:.3f}", row.team, d));
      }
      const auto s = team_sentiment(loaded.messages, row.team, SentimentLexicon::builtin());
      const double dp = std::abs(s.pos - want["expected_pos_sent"].get<double>());
      const double dn = std::abs(s.neg - want["expected_neg_sent"].get<double>());
      worst_sent = std::max({worst_sent, dp, dn});
      if (dp > 0.05 || dn > 0.05) o.fail(fmt::format("team {} sentiment off by {:.3f}/{:.3f}", row.team, dp, dn));
      if (!row.pos_sent || std::abs(*row.pos_sent - s.pos) > 1e-9) o.fail("team " + row.team + " pos_sent column");
    }
    for (int k : {0, 1, 5, 20}) {
      if (!ks.count(k)) o.fail(fmt::format("no team scripted with k={}", k));
    }
    o.detail += fmt::format("{}teams={} max ART dev={:.3f} min, max sentiment dev={:.4f} pp",
                            o.detail.empty() ? "" : "; ", teams.size(), worst_art, worst_sent);
    return o;
  });

  criterion("properties: contribution index bounds and edge values", [&] {
    Outcome o;
    if (contribution_index(5, 0) != 1.0) o.fail("pure sender");
    if (contribution_index(0, 5) != -1.0) o.fail("pure receiver");
    if (contribution_index(7, 7) != 0.0) o.fail("balanced");
    try {
      contribution_index(0, 0);
      o.fail("(0,0) did not throw");
    } catch (const std::invalid_argument&) {
    }
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10000; ++i) {
      const auto s = static_cast<std::int64_t>(rng() % 1000), r = static_cast<std::int64_t>(rng() % 1000);
      if (s + r == 0) continue;
      const double ci = contribution_index(s, r);
      if (ci < -1.0 || ci > 1.0) o.fail("out of range");
    }
    return o;
  });

  criterion("properties: awvci >= 0 and zero iff contribution indices are constant", [&] {
    Outcome o;
    TeamRoster roster;
    roster.team = "t";
    for (int i = 0; i < 4; ++i) roster.members.insert(ActorId(testing::node_name(i)));
    std::mt19937_64 rng(77);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<Message> msgs;
      std::map<int, std::pair<std::int64_t, std::int64_t>> counts;
      const bool balanced = trial % 3 == 0;
      const int n_msgs = 1 + static_cast<int>(rng() % 30);
      for (int m = 0; m < n_msgs; ++m) {
        const int from = static_cast<int>(rng() % 4);
        const int to = balanced ? (from ^ 1) : static_cast<int>((from + 1 + rng() % 3) % 4);
        for (int rep = 0; rep < (balanced ? 2 : 1); ++rep) {
          const int f = rep == 0 ? from : to, t = rep == 0 ? to : from;
          Message msg;
          msg.id = fmt::format("{}-{}", m, rep);
          msg.sender = ActorId(testing::node_name(f));
          msg.recipients = {ActorId(testing::node_name(t))};
          msg.timestamp = Timestamp{} + std::chrono::minutes(m);
          msg.team = "t";
          msgs.push_back(msg);
          counts[f].first++;
          counts[t].second++;
        }
      }
      const MessageSet ms(std::move(msgs));
      const double v = awvci(ms, roster);
      std::set<std::pair<std::int64_t, std::int64_t>> reduced;  // CI as a reduced fraction
      for (const auto& [a, c] : counts) {
        const auto num = c.first - c.second, den = c.first + c.second;
        const auto g = std::gcd(num < 0 ? -num : num, den);
        reduced.insert({num / g, den / g});
      }
      const bool constant = reduced.size() == 1;
      if (v < 0) o.fail("negative awvci");
      if (constant && std::abs(v) > 1e-12) o.fail(fmt::format("constant CI but awvci={}", v));
      if (!constant && v <= 0) o.fail("varying CI but awvci == 0");
      ++checked;
    }
    o.detail = fmt::format("{}{} message sets", o.detail.empty() ? "" : o.detail + "; ", checked);
    return o;
  });

  criterion("properties: centralization in [0,1], 0 on regular graphs, 1 on stars; density in [0,1]", [&] {
    Outcome o;
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
      const auto sg = testing::random_graph(rng, 9, 0.3);
      const CommGraph g = to_graph(sg);
      const auto n = g.node_count();
      const double cb = centralization(betweenness(g, true), n), cd = centralization(degree(g), n);
      if (cb < -1e-12 || cb > 1 + 1e-12 || cd < -1e-12 || cd > 1 + 1e-12) o.fail("centralization out of range");
      const double dens = density(g);
      if (dens < 0 || dens > 1) o.fail("density out of range");
    }
    for (int n = 3; n <= 9; ++n) {
      CommGraph star, ring, complete;
      for (int i = 1; i < n; ++i) star.add_edge(ActorId(testing::node_name(0)), ActorId(testing::node_name(i)));
      for (int i = 0; i < n; ++i) {
        ring.add_edge(ActorId(testing::node_name(i)), ActorId(testing::node_name((i + 1) % n)));
        for (int j = 0; j < n; ++j) {
          if (i != j) complete.add_edge(ActorId(testing::node_name(i)), ActorId(testing::node_name(j)));
        }
      }
      const auto N = static_cast<std::size_t>(n);
      if (std::abs(centralization(degree(star), N) - 1.0) > 1e-12) o.fail(fmt::format("degree star n={}", n));
      if (std::abs(centralization(betweenness(star, true), N) - 1.0) > 1e-12) o.fail(fmt::format("bc star n={}", n));
      for (const CommGraph* regular : {&ring, &complete}) {
        if (std::abs(centralization(degree(*regular), N)) > 1e-12) o.fail(fmt::format("degree regular n={}", n));
        if (std::abs(centralization(betweenness(*regular, true), N)) > 1e-12) o.fail(fmt::format("bc regular n={}", n));
      }
    }
    return o;
  });

  criterion("properties: handovers <= defined windows - 1", [&] {
    Outcome o;
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 2000; ++trial) {
      LeaderSeries s;
      const int len = static_cast<int>(rng() % 40);
      int defined = 0, expected = 0;
      std::optional<std::string> prev;
      bool prev_defined = false;
      for (int d = 0; d < len; ++d) {
        s.days.push_back(d);
        if (rng() % 5 == 0) {
          s.leaders.push_back(std::nullopt);
          prev_defined = false;
          continue;
        }
        const std::string who = testing::node_name(static_cast<int>(rng() % 3));
        s.leaders.emplace_back(ActorId(who));
        if (prev_defined && *prev != who) ++expected;
        prev = who;
        prev_defined = true;
        ++defined;
      }
      const int h = count_handovers(s);
      if (h != expected) o.fail(fmt::format("trial {} got {} want {}", trial, h, expected));
      if (h < 0 || (defined > 0 && h > defined - 1) || (defined == 0 && h != 0)) o.fail("bound violated");
      if (!o.ok) break;
    }
    return o;
  });

  criterion("properties: two analyze runs produce identical output hashes", [&] {
    Outcome o;
    testing::TempDir dir("accept-det");
    const auto cfg = load_config(testing::data_dir() / "fixture" / "course.conf",
                                 {"output=" + (dir.path() / "run").string()});
    const auto a = run_analysis(cfg);
    std::map<std::string, std::string> first;
    for (const auto& f : a.files) first[f.string()] = sha256_file(f);
    const auto b = run_analysis(cfg);
    if (b.files.size() != a.files.size()) o.fail("different file sets");
    for (const auto& f : b.files) {
      if (sha256_file(f) != first[f.string()]) o.fail(f.filename().string() + " differs");
    }
    if (!(a.rows == b.rows)) o.fail("rows differ");
    o.detail = fmt::format("{}{} files", o.detail.empty() ? "" : o.detail + "; ", a.files.size());
    return o;
  });

  criterion("performance: analyze on a >= 10,000-message synthetic course (10 teams, 150 days) < 10 s", [&] {
    Outcome o;
    testing::TempDir dir("accept-perf");
    auto params = default_course_params(150, 7);
    params.chatter_per_day = 2;
    write_course(generate_course(params), dir.path());
    const auto cfg = load_config(dir.path() / "course.conf", {"output=" + (dir.path() / "out").string()});
    const auto t0 = Clock::now();
    const auto result = run_analysis(cfg);
    const double elapsed = seconds_since(t0);
    const auto kept = result.manifest["messages"]["total"].get<std::size_t>();
    if (kept < 10000) o.fail(fmt::format("only {} messages", kept));
    if (result.rows.size() != 10) o.fail("expected 10 teams");
    if (elapsed >= 10.0) o.fail(fmt::format("took {:.2f} s", elapsed));
    o.detail += fmt::format("{}messages={} time={:.3f}s", o.detail.empty() ? "" : "; ", kept, elapsed);
    return o;
  });

  std::cout << (failures == 0 ? "ALL PASS" : fmt::format("{} FAILED", failures)) << std::endl;
  return failures == 0 ? 0 : 1;
}
