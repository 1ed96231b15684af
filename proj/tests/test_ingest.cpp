#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "vmirror/error.hpp"
#include "vmirror/ingest.hpp"

using namespace vmirror;

namespace {

std::string mbox_message(const std::string& id, const std::string& from, const std::string& to,
                         const std::string& date, const std::string& extra = "",
                         const std::string& body = "hello") {
  std::string m = "From " + from + " Mon Sep  2 08:00:00 2013\n";
  m += "From: " + from + "\nTo: " + to + "\n";
  if (!date.empty()) m += "Date: " + date + "\n";
  m += "Subject: test\nMessage-ID: <" + id + ">\n" + extra + "\n" + body + "\n\n";
  return m;
}

MessageSet load_fixture() {
  const auto dir = testing::data_dir() / "fixture";
  CanonicalizeOptions opts;
  opts.dummy_addresses.insert(ActorId("archive@coin-course.org"));
  const auto aliases = load_aliases((dir / "aliases.tsv").string());
  const auto rosters = canonicalize_rosters(load_rosters((dir / "rosters.csv").string()), aliases);
  const auto ms = canonicalize_actors(parse_mbox((dir / "course.mbox").string()), aliases, opts);
  return assign_teams(ms, rosters);
}

}  // namespace

TEST_SUITE("ingest") {
  TEST_CASE("address normalization") {
    CHECK(ActorId("Alice <A@X.EDU>").str() == "a@x.edu");
    CHECK(ActorId("  \"Smith, Bob\" <Bob@Y.org> ").str() == "bob@y.org");
    CHECK(ActorId("carol@z.com (Carol)").str() == "carol@z.com");
    CHECK(normalize_address(normalize_address("Dan <D@Q.DE>")) == "d@q.de");
  }

  TEST_CASE("three well-formed messages") {
    std::string text = mbox_message("1@x", "a@x.edu", "b@x.edu", "Mon, 2 Sep 2013 08:00:00 +0000") +
                       mbox_message("2@x", "b@x.edu", "a@x.edu", "Mon, 2 Sep 2013 09:00:00 +0000") +
                       mbox_message("3@x", "a@x.edu", "c@x.edu", "Mon, 2 Sep 2013 10:00:00 +0000");
    const MessageSet ms = parse_mbox_text(text);
    CHECK(ms.size() == 3);
    CHECK(ms.diagnostics().total() == 0);
    CHECK(ms.actors().size() == 3);
  }

  TEST_CASE("message without Date is skipped with a warning") {
    const MessageSet ms = parse_mbox_text(mbox_message("1@x", "a@x.edu", "b@x.edu", ""));
    CHECK(ms.size() == 0);
    CHECK(ms.diagnostics().total() == 1);
    CHECK(ms.diagnostics().count("missing_date") == 1);
  }

  TEST_CASE("headers, recipients, threading and time zones") {
    const std::string text = mbox_message(
        "c@x", "Ann <ann@x.edu>", "Bob <bob@x.edu>, carl@x.edu", "Mon, 2 Sep 2013 10:30:00 -0400",
        "Cc: BOB@x.edu, dee@x.edu\nIn-Reply-To: <p1@x>\nReferences: <p0@x> <p1@x>\n");
    const MessageSet ms = parse_mbox_text(text);
    REQUIRE(ms.size() == 1);
    const Message& m = ms.messages()[0];
    CHECK(m.id == "c@x");
    CHECK(m.sender.str() == "ann@x.edu");
    REQUIRE(m.recipients.size() == 3);
    CHECK(m.recipients[0].str() == "bob@x.edu");
    CHECK(m.recipients[1].str() == "carl@x.edu");
    CHECK(m.recipients[2].str() == "dee@x.edu");
    CHECK(format_iso8601(m.timestamp) == "2013-09-02T14:30:00Z");
    CHECK(m.reply_parents == std::vector<std::string>{"p1@x", "p0@x"});
  }

  TEST_CASE("missing zone is assumed UTC with a warning") {
    const MessageSet ms = parse_mbox_text(mbox_message("1@x", "a@x.edu", "b@x.edu", "2 Sep 2013 08:00:00"));
    REQUIRE(ms.size() == 1);
    CHECK(format_iso8601(ms.messages()[0].timestamp) == "2013-09-02T08:00:00Z");
    CHECK(ms.diagnostics().count("assumed_utc") == 1);
  }

  TEST_CASE("multipart bodies: plain preferred, html stripped, attachments dropped") {
    const std::string alt =
        "Content-Type: multipart/mixed; boundary=\"m\"\n";
    const std::string body =
        "--m\nContent-Type: multipart/alternative; boundary=\"a\"\n\n"
        "--a\nContent-Type: text/html\n\n<p>html version</p>\n"
        "--a\nContent-Type: text/plain\nContent-Transfer-Encoding: quoted-printable\n\nsoft=\nbreak caf=C3=A9\n"
        "--a--\n"
        "--m\nContent-Type: application/pdf\nContent-Disposition: attachment; filename=x.pdf\n"
        "Content-Transfer-Encoding: base64\n\nJVBERi0xLjQK\n--m--";
    const MessageSet ms =
        parse_mbox_text(mbox_message("1@x", "a@x.edu", "b@x.edu", "Mon, 2 Sep 2013 08:00:00 +0000", alt, body));
    REQUIRE(ms.size() == 1);
    CHECK(ms.messages()[0].body == "softbreak café");

    const MessageSet html = parse_mbox_text(mbox_message(
        "2@x", "a@x.edu", "b@x.edu", "Mon, 2 Sep 2013 08:00:00 +0000", "Content-Type: text/html\n",
        "<html><body><p>Great&nbsp;news &amp; more</p><script>bad()</script></body></html>"));
    REQUIRE(html.size() == 1);
    CHECK(html.messages()[0].body.find("Great news & more") != std::string::npos);
    CHECK(html.messages()[0].body.find("bad()") == std::string::npos);
  }

  TEST_CASE("encoded-word subjects are decoded") {
    std::string text = mbox_message("1@x", "a@x.edu", "b@x.edu", "Mon, 2 Sep 2013 08:00:00 +0000");
    text.replace(text.find("Subject: test"), 13, "Subject: =?UTF-8?Q?J=C3=BCrgen?= =?UTF-8?B?c2F5cw==?=");
    const MessageSet ms = parse_mbox_text(text);
    REQUIRE(ms.size() == 1);
    CHECK(ms.messages()[0].subject == "Jürgensays");
  }

  TEST_CASE("duplicate Message-IDs keep the first occurrence") {
    std::string text = mbox_message("1@x", "a@x.edu", "b@x.edu", "Mon, 2 Sep 2013 08:00:00 +0000") +
                       mbox_message("1@x", "a@x.edu", "c@x.edu", "Mon, 2 Sep 2013 08:00:00 +0000");
    const MessageSet ms = parse_mbox_text(text);
    REQUIRE(ms.size() == 1);
    CHECK(ms.messages()[0].recipients[0].str() == "b@x.edu");
    CHECK(ms.diagnostics().count("duplicate_id") == 1);
  }

  TEST_CASE("messages are time-ordered and span matches") {
    std::string text = mbox_message("2@x", "a@x.edu", "b@x.edu", "Tue, 3 Sep 2013 08:00:00 +0000") +
                       mbox_message("1@x", "a@x.edu", "b@x.edu", "Mon, 2 Sep 2013 08:00:00 +0000");
    const MessageSet ms = parse_mbox_text(text);
    REQUIRE(ms.size() == 2);
    CHECK(ms.messages()[0].id == "1@x");
    CHECK(ms.span().first == ms.messages()[0].timestamp);
    CHECK(ms.span().last == ms.messages()[1].timestamp);
  }

  TEST_CASE("parsing is deterministic") {
    const auto text = testing::slurp(testing::data_dir() / "fixture" / "course.mbox");
    const MessageSet a = parse_mbox_text(text);
    const MessageSet b = parse_mbox_text(text);
    CHECK(a.messages() == b.messages());
  }

  TEST_CASE("message CSV") {
    const std::string ok =
        "id,sender,recipients,timestamp,subject,reply_parents,body\n"
        "1@x,a@x.edu,b@x.edu;c@x.edu,2013-09-02T08:00:00Z,hi,,\"multi\nline\"\n"
        "2@x,b@x.edu,a@x.edu,2013-09-02T09:00:00+02:00,Re: hi,1@x,ok\n";
    const MessageSet ms = parse_message_csv_text(ok);
    CHECK(ms.size() == 2);
    CHECK(ms.messages()[0].id == "2@x");  // 07:00Z sorts first
    CHECK(ms.messages()[1].body == "multi\nline");

    const std::string missing = "id,sender,recipients,subject,reply_parents,body\n1,a@x,b@x,s,,b\n";
    try {
      parse_message_csv_text(missing);
      FAIL("expected an error");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("missing column: timestamp") != std::string::npos);
    }

    const std::string bad =
        "id,sender,recipients,timestamp,subject,reply_parents,body\n"
        "1@x,a@x.edu,b@x.edu,not-a-date,hi,,x\n"
        "2@x,a@x.edu,b@x.edu,2013-09-02T08:00:00Z,hi,,x\n";
    const MessageSet partial = parse_message_csv_text(bad);
    CHECK(partial.size() == 1);
    CHECK(partial.diagnostics().count("bad_date") == 1);
  }

  TEST_CASE("mbox -> CSV -> MessageSet round trip on the fixture") {
    const MessageSet ms = parse_mbox((testing::data_dir() / "fixture" / "course.mbox").string());
    std::ostringstream out;
    write_message_csv(ms, out);
    const MessageSet back = parse_message_csv_text(out.str());
    REQUIRE(back.size() == ms.size());
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const Message& a = ms.messages()[i];
      const Message& b = back.messages()[i];
      CHECK(a.id == b.id);
      CHECK(a.sender == b.sender);
      CHECK(a.recipients == b.recipients);
      CHECK(a.timestamp == b.timestamp);
      CHECK(a.subject == b.subject);
      CHECK(a.reply_parents == b.reply_parents);
      CHECK(a.body == b.body);
    }
  }

  TEST_CASE("canonicalize_actors") {
    const std::string text =
        mbox_message("1@x", "Alice <A@X.EDU>", "b@x.edu, dummy@course.org", "Mon, 2 Sep 2013 08:00:00 +0000") +
        mbox_message("2@x", "a@gmail.com", "b@x.edu", "Mon, 2 Sep 2013 09:00:00 +0000") +
        mbox_message("3@x", "a@x.edu", "A@gmail.com", "Mon, 2 Sep 2013 10:00:00 +0000");
    AliasMap aliases;
    aliases.add("a@gmail.com", "a@x.edu");
    CanonicalizeOptions opts;
    opts.dummy_addresses.insert(ActorId("dummy@course.org"));
    const MessageSet ms = canonicalize_actors(parse_mbox_text(text), aliases, opts);
    REQUIRE(ms.size() == 2);
    CHECK(ms.messages()[0].sender.str() == "a@x.edu");
    CHECK(ms.messages()[0].recipients == std::vector<ActorId>{ActorId("b@x.edu")});
    CHECK(ms.messages()[1].sender.str() == "a@x.edu");
    CHECK(ms.diagnostics().count("self_loop") == 1);

    const MessageSet twice = canonicalize_actors(ms, aliases, opts);
    CHECK(twice.messages() == ms.messages());
  }

  TEST_CASE("alias chains are configuration errors") {
    AliasMap aliases;
    aliases.add("a@gmail.com", "a@x.edu");
    aliases.add("a@x.edu", "a@y.edu");
    CHECK_THROWS_AS(aliases.validate(), ConfigError);
    CHECK_THROWS_AS(parse_alias_tsv("a@g.com\ta@x.edu\na@x.edu\ta@y.edu\n"), ConfigError);
  }

  TEST_CASE("rosters") {
    const auto rosters = parse_rosters_csv(
        "team,member,creativity,presentation,content\n1,A@x.edu,2.4,3,3\n1,b@x.edu,2.4,3,3\n2,c@x.edu,1,1,1\n");
    REQUIRE(rosters.size() == 2);
    CHECK(rosters[0].contains(ActorId("a@x.edu")));
    CHECK(rosters[0].ratings.creativity == doctest::Approx(2.4));
    CHECK_THROWS_AS(parse_rosters_csv("team,member,creativity,presentation,content\n1,a@x,6,3,3\n"), ConfigError);
    CHECK_THROWS_AS(parse_rosters_csv("team,member,creativity,presentation,content\n1,a@x,2,3,3\n1,b@x,3,3,3\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_rosters_csv("team,member,creativity,presentation,content\n1,a@x,2,3,3\n2,a@x,3,3,3\n"),
                    ConfigError);
    const auto shared = parse_rosters_csv(
        "team,member,creativity,presentation,content,shared\n1,m@x,2,3,3,yes\n2,m@x,3,3,3,yes\n1,a@x,2,3,3,\n");
    CHECK(shared.size() == 2);
  }

  TEST_CASE("assign_teams") {
    const auto rosters = parse_rosters_csv(
        "team,member,creativity,presentation,content,shared\n"
        "1,a@x,2,3,3,\n1,b@x,2,3,3,\n1,m@x,2,3,3,yes\n"
        "2,c@x,3,3,3,\n2,d@x,3,3,3,\n2,m@x,3,3,3,yes\n"
        "5,e@x,3,3,3,\n5,f@x,3,3,3,\n");
    const std::string text =
        mbox_message("1@x", "e@x", "f@x", "Mon, 2 Sep 2013 08:00:00 +0000") +
        mbox_message("2@x", "a@x", "c@x, d@x", "Mon, 2 Sep 2013 09:00:00 +0000") +
        mbox_message("3@x", "m@x", "c@x, d@x, a@x", "Mon, 2 Sep 2013 10:00:00 +0000") +
        mbox_message("4@x", "m@x", "c@x, a@x", "Mon, 2 Sep 2013 11:00:00 +0000") +
        mbox_message("5@x", "z@x", "a@x, b@x", "Mon, 2 Sep 2013 12:00:00 +0000");
    const MessageSet ms = assign_teams(parse_mbox_text(text), rosters);
    REQUIRE(ms.size() == 5);
    CHECK(ms.messages()[0].team == TeamId("5"));
    CHECK_FALSE(ms.messages()[1].team.has_value());
    CHECK(ms.messages()[2].team == TeamId("2"));
    CHECK(ms.messages()[3].team == TeamId("1"));  // tie -> smallest id
    CHECK_FALSE(ms.messages()[4].team.has_value());
  }

  TEST_CASE("fixture: per-team counts and actors match the generator manifest") {
    const auto manifest = testing::load_json(testing::data_dir() / "fixture" / "manifest.json");
    const MessageSet ms = load_fixture();
    CHECK(ms.size() == manifest["expected_messages"].get<std::size_t>());
    for (const auto& [kind, count] : manifest["expected_warnings"].items()) {
      CHECK_MESSAGE(ms.diagnostics().count(kind) == count.get<std::size_t>(), kind);
    }
    for (const auto& team : manifest["teams"]) {
      const std::string id = team["team"];
      std::size_t count = 0;
      std::set<ActorId> actors;
      for (const auto& m : ms.messages()) {
        if (m.team != id) continue;
        ++count;
        actors.insert(m.sender);
        actors.insert(m.recipients.begin(), m.recipients.end());
      }
      CHECK_MESSAGE(count == team["messages"].get<std::size_t>(), "team " << id);
      // roster size plus external mentors
      std::size_t externals = 0;
      for (const auto& a : actors) externals += a.str().find("partner-company") != std::string::npos ? 1 : 0;
      CHECK(actors.size() == team["members"].size() + externals);
      CHECK(actors.size() == team["num_actors"].get<std::size_t>());
    }
  }
}
