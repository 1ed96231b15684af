#include <doctest.h>

#include "support.hpp"
#include "vmirror/centrality.hpp"
#include "vmirror/error.hpp"
#include "vmirror/metrics.hpp"
#include "vmirror/pipeline.hpp"
#include "vmirror/sentiment.hpp"
#include "vmirror/synth.hpp"

using namespace vmirror;
using namespace std::chrono;

namespace {

const Timestamp kDay0 = day_start(15950);

CommGraph to_graph(const testing::SmallGraph& g) {
  CommGraph out;
  for (int i = 0; i < g.n; ++i) out.add_node(ActorId(testing::node_name(i)));
  for (const auto& [e, w] : g.arcs) {
    out.add_edge(ActorId(testing::node_name(e.first)), ActorId(testing::node_name(e.second)), w);
  }
  return out;
}

CommGraph star(int n) {
  CommGraph g;
  for (int i = 1; i < n; ++i) g.add_edge(ActorId(testing::node_name(0)), ActorId(testing::node_name(i)));
  return g;
}

Message msg(const std::string& id, const std::string& from, std::vector<std::string> to, Timestamp t,
            const std::string& subject = "s", std::vector<std::string> parents = {}, std::string body = "") {
  Message m;
  m.id = id;
  m.sender = ActorId(from);
  for (const auto& r : to) m.recipients.emplace_back(r);
  m.timestamp = t;
  m.subject = subject;
  m.reply_parents = std::move(parents);
  m.body = std::move(body);
  m.team = "1";
  return m;
}

TeamRoster roster(std::vector<std::string> members) {
  TeamRoster r;
  r.team = "1";
  for (const auto& m : members) r.members.emplace(m);
  return r;
}

LeaderSeries series(std::vector<std::optional<std::string>> names) {
  LeaderSeries s;
  for (std::size_t i = 0; i < names.size(); ++i) {
    s.days.push_back(static_cast<int>(i));
    s.leaders.push_back(names[i] ? std::optional<ActorId>(ActorId(*names[i])) : std::nullopt);
  }
  return s;
}

Corpus fixture_corpus() {
  return load_corpus(load_config(testing::data_dir() / "fixture" / "course.conf"));
}

}  // namespace

TEST_SUITE("centrality") {
  TEST_CASE("path and star") {
    CommGraph path;
    path.add_edge(ActorId("a@x"), ActorId("b@x"));
    path.add_edge(ActorId("b@x"), ActorId("c@x"));
    const auto raw = betweenness(path, false);
    CHECK(raw.at(ActorId("b@x")) == 1.0);
    CHECK(raw.at(ActorId("a@x")) == 0.0);
    CHECK(raw.at(ActorId("c@x")) == 0.0);
    CHECK(betweenness(star(5), true).at(ActorId(testing::node_name(0))) == doctest::Approx(1.0));
  }

  TEST_CASE("betweenness matches exhaustive path enumeration") {
    std::mt19937_64 rng(2013);
    for (int trial = 0; trial < 300; ++trial) {
      const auto sg = testing::random_graph(rng, 7, trial % 3 == 0 ? 0.25 : 0.4);
      const CommGraph g = to_graph(sg);
      for (bool directed : {false, true}) {
        for (bool normalized : {false, true}) {
          const auto expected = testing::brute_betweenness(sg, normalized, directed);
          const auto got = betweenness(g, normalized, directed);
          for (int v = 0; v < sg.n; ++v) {
            CHECK(got.at(ActorId(testing::node_name(v))) ==
                  doctest::Approx(expected[static_cast<std::size_t>(v)]).epsilon(1e-9));
          }
        }
      }
    }
  }

  TEST_CASE("degree") {
    CommGraph g = star(5);
    g.add_node(ActorId("lonely@x"));
    const auto d = degree(g);
    CHECK(d.at(ActorId(testing::node_name(0))) == 4);
    CHECK(d.at(ActorId("lonely@x")) == 0);
  }

  TEST_CASE("degree matches neighbour sets on the fixture team graphs") {
    const Corpus c = fixture_corpus();
    for (const auto& r : c.rosters) {
      const CommGraph g = build_graph(c.messages, full_span(c.messages), r);
      std::map<ActorId, std::set<ActorId>> nbrs;
      for (const auto& [e, w] : g.edges()) {
        nbrs[e.first].insert(e.second);
        nbrs[e.second].insert(e.first);
      }
      const auto d = degree(g);
      for (const auto& a : g.nodes()) CHECK(d.at(a) == static_cast<double>(nbrs[a].size()));
    }
  }

  TEST_CASE("centralization edge values") {
    CHECK(centralization(degree(star(5)), 5) == doctest::Approx(1.0));
    CHECK(centralization(betweenness(star(6), true), 6) == doctest::Approx(1.0));
    CommGraph ring;
    for (int i = 0; i < 6; ++i) ring.add_edge(ActorId(testing::node_name(i)), ActorId(testing::node_name((i + 1) % 6)));
    CHECK(centralization(degree(ring), 6) == doctest::Approx(0.0));
    CHECK(centralization(betweenness(ring, true), 6) == doctest::Approx(0.0));
    CommGraph complete;
    for (int a = 0; a < 5; ++a)
      for (int b = a + 1; b < 5; ++b) complete.add_edge(ActorId(testing::node_name(a)), ActorId(testing::node_name(b)));
    CHECK(centralization(degree(complete), 5) == 0.0);
    CHECK(centralization(degree(star(2)), 2) == 0.0);
  }

  TEST_CASE("centralization equals the direct formula and stays in [0,1]") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 200; ++trial) {
      const auto sg = testing::random_graph(rng, 7, 0.35);
      const CommGraph g = to_graph(sg);
      const double n = sg.n;
      const auto nb = testing::neighbours(sg, false);
      double dmax = 0, dsum = 0;
      for (const auto& s : nb) dmax = std::max(dmax, static_cast<double>(s.size()));
      for (const auto& s : nb) dsum += dmax - static_cast<double>(s.size());
      const double expected_dc = sg.n < 3 ? 0.0 : dsum / ((n - 1) * (n - 2));
      const double dc = centralization(degree(g), g.node_count());
      CHECK(dc == doctest::Approx(expected_dc).epsilon(1e-12));

      const auto bc = testing::brute_betweenness(sg, true, false);
      const double bmax = *std::max_element(bc.begin(), bc.end());
      double bsum = 0;
      for (double b : bc) bsum += bmax - b;
      const double expected_bc = sg.n < 3 ? 0.0 : bsum / (n - 1);
      const double gbc = centralization(betweenness(g, true), g.node_count());
      CHECK(gbc == doctest::Approx(expected_bc).epsilon(1e-9));
      for (double c : {dc, gbc}) {
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
      }
    }
  }
}

TEST_SUITE("metrics") {
  TEST_CASE("contribution index") {
    CHECK(contribution_index(10, 0) == 1.0);
    CHECK(contribution_index(5, 5) == 0.0);
    CHECK(contribution_index(0, 7) == -1.0);
    CHECK_THROWS_AS(contribution_index(0, 0), std::invalid_argument);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) {
      const auto s = static_cast<std::int64_t>(rng() % 50), r = static_cast<std::int64_t>(rng() % 50);
      if (s + r == 0) continue;
      const double ci = contribution_index(s, r);
      CHECK(ci >= -1.0);
      CHECK(ci <= 1.0);
    }
  }

  TEST_CASE("awvci") {
    // a<->b equal exchange: identical CI -> 0
    MessageSet even({msg("1", "a@x", {"b@x"}, kDay0), msg("2", "b@x", {"a@x"}, kDay0 + hours(1))});
    CHECK(awvci(even, roster({"a@x", "b@x"})) == doctest::Approx(0.0));
    // a only sends, b only receives, equal traffic: CI {+1,-1} -> 1
    MessageSet one_way({msg("1", "a@x", {"b@x"}, kDay0), msg("2", "a@x", {"b@x"}, kDay0 + hours(1))});
    CHECK(awvci(one_way, roster({"a@x", "b@x"})) == doctest::Approx(1.0));
    CHECK_THROWS_AS(awvci(MessageSet{}, roster({"a@x"})), MetricError);

    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Message> msgs;
      for (int i = 0; i < 20; ++i) {
        const int s = static_cast<int>(rng() % 4);
        const int r = (s + 1 + static_cast<int>(rng() % 3)) % 4;
        msgs.push_back(msg(std::to_string(i), testing::node_name(s), {testing::node_name(r)}, kDay0 + minutes(i)));
      }
      const MessageSet ms(std::move(msgs));
      const auto team = roster({testing::node_name(0), testing::node_name(1), testing::node_name(2),
                                testing::node_name(3)});
      const double v = awvci(ms, team);
      CHECK(v >= 0.0);
      std::set<double> cis;
      for (const auto& [a, c] : member_traffic(ms, team)) {
        if (c.sent + c.received > 0) cis.insert(contribution_index(c.sent, c.received));
      }
      CHECK((v < 1e-15) == (cis.size() <= 1));
    }
  }

  TEST_CASE("handover counting") {
    CHECK(count_handovers(series({"a@x", "a@x", "a@x", "a@x"})) == 0);
    CHECK(count_handovers(series({"a@x", "b@x", "a@x", "b@x"})) == 3);
    CHECK(count_handovers(series({"a@x", std::nullopt, "b@x"})) == 0);
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<std::optional<std::string>> names;
      int defined = 0;
      for (int i = 0; i < 15; ++i) {
        const auto pick = rng() % 4;
        if (pick == 3) {
          names.push_back(std::nullopt);
        } else {
          names.push_back(testing::node_name(static_cast<int>(pick)));
          ++defined;
        }
      }
      CHECK(count_handovers(series(names)) <= std::max(0, defined - 1));
    }
  }

  TEST_CASE("leadership series") {
    // a constant star around m
    std::vector<Message> msgs;
    for (int d = 0; d < 10; ++d) {
      msgs.push_back(msg("s" + std::to_string(d), "m@x", {"b@x", "c@x", "d@x"}, kDay0 + days(d) + hours(9)));
    }
    const MessageSet ms(std::move(msgs));
    const auto team = roster({"b@x", "c@x", "d@x", "m@x"});
    const auto s = leadership_series(window_series(ms, WindowConfig{}, team), team);
    for (const auto& l : s.leaders) CHECK(l == ActorId("m@x"));

    // a triangle has zero betweenness everywhere -> no leader
    const MessageSet tri({msg("1", "a@x", {"b@x", "c@x"}, kDay0), msg("2", "b@x", {"c@x"}, kDay0 + hours(1))});
    const auto team3 = roster({"a@x", "b@x", "c@x"});
    const auto none = leadership_series(window_series(tri, WindowConfig{}, team3), team3);
    REQUIRE(none.leaders.size() == 1);
    CHECK_FALSE(none.leaders[0].has_value());
  }

  TEST_CASE("response times") {
    const MessageSet one({msg("1", "a@x", {"b@x"}, kDay0), msg("2", "b@x", {"a@x"}, kDay0 + minutes(60), "Re: s", {"1"})});
    const auto r1 = response_times(one, "1", 20160);
    CHECK(r1.mean_minutes == doctest::Approx(60.0));
    CHECK(r1.pairs == 1);

    const MessageSet two({msg("1", "a@x", {"b@x"}, kDay0, "x"),
                          msg("2", "b@x", {"a@x"}, kDay0 + minutes(30), "Re: x", {"1"}),
                          msg("3", "c@x", {"a@x"}, kDay0 + minutes(40), "Re: x", {"1"}),
                          msg("4", "a@x", {"c@x"}, kDay0 + hours(5), "y"),
                          msg("5", "c@x", {"a@x"}, kDay0 + hours(5) + minutes(90), "RE: y")});
    const auto r2 = response_times(two, "1", 20160);
    CHECK(r2.mean_minutes == doctest::Approx(60.0));
    CHECK(r2.pairs == 2);

    const MessageSet slow({msg("1", "a@x", {"b@x"}, kDay0), msg("2", "b@x", {"a@x"}, kDay0 + days(20), "Re: s", {"1"})});
    CHECK_THROWS_AS(response_times(slow, "1", 20160), MetricError);
    CHECK(normalize_subject("Re: FWD:  Hello World ") == "hello world");
  }

  TEST_CASE("fixture: recovered leaders, latency and traffic match the generator manifest") {
    const Corpus c = fixture_corpus();
    const auto manifest = testing::load_json(testing::data_dir() / "fixture" / "manifest.json");
    WindowConfig wcfg;
    wcfg.origin_day = day_number(parse_iso8601(manifest["start_date"].get<std::string>())->time);
    for (const auto& team : manifest["teams"]) {
      const TeamRoster* r = nullptr;
      for (const auto& x : c.rosters) {
        if (x.team == team["team"]) r = &x;
      }
      REQUIRE(r);
      const auto leaders = leadership_series(window_series(c.messages, wcfg, *r), *r);
      REQUIRE(leaders.leaders.size() == team["expected_leaders"].size());
      for (std::size_t d = 0; d < leaders.leaders.size(); ++d) {
        REQUIRE(leaders.leaders[d].has_value());
        CHECK(leaders.leaders[d]->str() == team["expected_leaders"][d].get<std::string>());
      }
      CHECK(count_handovers(leaders) == team["handovers"].get<int>());

      const auto art = response_times(c.messages, r->team, 20160);
      CHECK(std::abs(art.mean_minutes - team["expected_art_minutes"].get<double>()) < 0.5);
      CHECK(art.pairs == team["reply_pairs"].get<std::size_t>());

      const auto traffic = member_traffic(c.messages, *r);
      double total = 0, mean = 0, var = 0;
      for (const auto& [a, t] : traffic) {
        CHECK(t.sent == team["sent"][a.str()].get<std::int64_t>());
        CHECK(t.received == team["received"][a.str()].get<std::int64_t>());
        total += static_cast<double>(t.sent + t.received);
      }
      // spreadsheet-style: share-weighted mean, then share-weighted squared deviations
      for (const auto& [a, t] : traffic) {
        const double s = static_cast<double>(t.sent), rr = static_cast<double>(t.received);
        mean += (s + rr) / total * ((s - rr) / (s + rr));
      }
      for (const auto& [a, t] : traffic) {
        const double s = static_cast<double>(t.sent), rr = static_cast<double>(t.received);
        var += (s + rr) / total * std::pow((s - rr) / (s + rr) - mean, 2);
      }
      CHECK(awvci(c.messages, *r) == doctest::Approx(var).epsilon(1e-12));

      const CommGraph g = build_graph(c.messages, full_span(c.messages), *r);
      std::int64_t manifest_weight = 0;
      for (const auto& e : team["edges"]) {
        const auto w = e[2].get<std::int64_t>();
        manifest_weight += w;
        CHECK(g.weight(ActorId(e[0].get<std::string>()), ActorId(e[1].get<std::string>())) == w);
      }
      CHECK(g.total_weight() == manifest_weight);
    }
  }
}

TEST_SUITE("sentiment") {
  const SentimentLexicon lex = SentimentLexicon::from_text("great\n", "bad\n");

  TEST_CASE("direct ratios") {
    const auto s = sentiment_score("great great bad", lex);
    CHECK(s.pos == doctest::Approx(200.0 / 3.0));
    CHECK(s.neg == doctest::Approx(100.0 / 3.0));
    const auto empty = sentiment_score("", lex);
    CHECK(empty.pos == 0.0);
    CHECK(empty.neg == 0.0);
  }

  TEST_CASE("quotes and signatures are ignored") {
    const auto s = sentiment_score("Great plan\n> bad idea\nok\n-- \nbad signature\n", lex);
    CHECK(s.pos == doctest::Approx(100.0 / 3.0));
    CHECK(s.neg == 0.0);
  }

  TEST_CASE("1000-token message with 21 positive hits") {
    std::string body;
    for (int i = 0; i < 1000; ++i) body += (i % 47 == 0 && i / 47 < 21) ? "great " : "plain ";
    const auto s = sentiment_score(body, lex);
    CHECK(s.pos == doctest::Approx(2.1));
    CHECK(s.pos >= 0.131);
    CHECK(s.pos <= 2.696);
  }

  TEST_CASE("team aggregation and emotionality") {
    const MessageSet ms({msg("1", "a@x", {"b@x"}, kDay0, "s", {}, "great bad bad bad bad plain plain plain plain plain"),
                         msg("2", "b@x", {"a@x"}, kDay0 + hours(1), "s", {}, "great great bad plain plain plain plain plain plain plain")});
    const auto t = team_sentiment(ms, "1", lex);
    CHECK(t.pos == doctest::Approx(15.0));
    CHECK(t.neg == doctest::Approx(25.0));
    CHECK(t.emotionality == doctest::Approx(40.0));
    CHECK_THROWS_AS(team_sentiment(ms, "2", lex), MetricError);
  }

  TEST_CASE("lexicon validation") {
    CHECK_THROWS(SentimentLexicon::from_text("good\n", "good\n"));
    CHECK_THROWS(SentimentLexicon::from_text("", "bad\n"));
    const auto& builtin = SentimentLexicon::builtin();
    for (const auto& w : synth_filler_words()) CHECK_FALSE((builtin.is_positive(w) || builtin.is_negative(w)));
    for (const auto& w : synth_positive_words()) CHECK(builtin.is_positive(w));
    for (const auto& w : synth_negative_words()) CHECK(builtin.is_negative(w));
  }

  TEST_CASE("fixture: team sentiment equals per-message tabulation") {
    const Corpus c = fixture_corpus();
    const auto manifest = testing::load_json(testing::data_dir() / "fixture" / "manifest.json");
    for (const auto& team : manifest["teams"]) {
      const auto t = team_sentiment(c.messages, team["team"].get<std::string>(), SentimentLexicon::builtin());
      CHECK(std::abs(t.pos - team["expected_pos_sent"].get<double>()) < 0.05);
      CHECK(std::abs(t.neg - team["expected_neg_sent"].get<double>()) < 0.05);
    }
  }
}
