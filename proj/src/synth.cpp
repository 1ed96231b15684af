#include "vmirror/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "vmirror/report.hpp"
#include "vmirror/timeutil.hpp"

namespace vmirror {
namespace {

using namespace std::chrono;

constexpr std::string_view kDomain = "coin-course.org";
constexpr std::string_view kCollector = "archive@coin-course.org";
constexpr std::string_view kInstructor = "instructor@coin-course.org";

struct University {
  std::string_view domain;
  int utc_offset_hours;
};

constexpr University kUniversities[] = {
    {"mit.edu", -4}, {"scad.edu", -4}, {"aalto.fi", 3}, {"uni-koeln.de", 2}, {"uni-bamberg.de", 2}};

constexpr std::string_view kFirstNames[] = {
    "Anna",  "Ben",   "Clara", "David", "Elena", "Felix", "Greta",  "Hannu", "Ines",   "Jonas",
    "Kaisa", "Lukas", "Maria", "Niko",  "Olivia", "Paul", "Riikka", "Jürgen", "Sofia", "Tom"};
constexpr std::string_view kLastNames[] = {
    "Berg",  "Carter", "Dietz",  "Evans", "Fischer", "Garcia", "Hall",   "Ivanov",
    "Jones", "Koski",  "Lehmann", "Moore", "Nieminen", "Ortiz", "Parker", "Quinn",
    "Richter", "Smith", "Tanaka", "Urban", "Virtanen", "Weber", "Young"};

constexpr std::string_view kTopics[] = {"survey design", "interview plan", "network maps",
                                        "literature list", "draft outline", "final slides",
                                        "data cleanup", "video call"};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  std::uint64_t below(std::uint64_t n) { return g_() % n; }
  double uniform() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return uniform() < p; }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 g_;
};

struct Person {
  std::string display;
  std::string address;  // canonical, lowercase
  std::optional<std::string> alias;
  int utc_offset_hours = 0;
};

enum class Encoding { plain, quoted_printable, alternative };

struct Draft {
  std::string id;
  Timestamp time{};
  const Person* from = nullptr;
  bool from_alias = false;
  std::vector<std::pair<const Person*, bool>> to;  // (person, via alias)
  std::vector<std::string> cc;                       // raw addresses
  std::string subject;
  std::string body;
  std::optional<std::string> parent;
  bool omit_date = false;
  bool upper_case_recipients = false;
  Encoding encoding = Encoding::plain;
};

std::string encode_header_word(std::string_view text) {
  if (std::all_of(text.begin(), text.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; })) {
    return std::string(text);
  }
  std::string out = "=?UTF-8?Q?";
  for (unsigned char c : text) {
    if (c == ' ') out += '_';
    else if (c >= 0x80 || c == '=' || c == '?' || c == '_') out += fmt::format("={:02X}", c);
    else out += static_cast<char>(c);
  }
  return out + "?=";
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string date_header(Timestamp t, int offset_hours) {
  std::string s = format_rfc2822(t + hours(offset_hours));
  s.resize(s.size() - 5);
  return s + fmt::format("{}{:02d}00", offset_hours < 0 ? '-' : '+', std::abs(offset_hours));
}

std::string asctime_line(Timestamp t) {
  // "Mon, 2 Sep 2013 08:00:00 +0000" -> "Mon Sep  2 08:00:00 2013"
  auto day = floor<days>(t);
  year_month_day ymd{day};
  std::string rfc = format_rfc2822(t);
  std::istringstream in(rfc);
  std::string wd, d, mon, year, time;
  in >> wd >> d >> mon >> year >> time;
  wd.pop_back();
  return fmt::format("{} {} {:>2} {} {}", wd, mon, static_cast<unsigned>(ymd.day()), time, year);
}

std::string quoted_printable(std::string_view text) {
  std::string out;
  std::size_t col = 0;
  for (unsigned char c : text) {
    if (c == '\n') {
      out += '\n';
      col = 0;
      continue;
    }
    std::string piece = (c >= 0x80 || c == '=') ? fmt::format("={:02X}", c) : std::string(1, static_cast<char>(c));
    if (col + piece.size() > 40 && c != ' ') {
      out += "=\n";
      col = 0;
    }
    out += piece;
    col += piece.size();
  }
  return out;
}

std::string html_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

std::string render(const Draft& m) {
  std::string out = fmt::format("From {} {}\n", m.from_alias ? *m.from->alias : m.from->address,
                                asctime_line(m.time));
  out += fmt::format("From: {} <{}>\n", encode_header_word(m.from->display),
                     m.from_alias ? *m.from->alias : m.from->address);
  std::vector<std::string> to;
  for (const auto& [p, via_alias] : m.to) {
    std::string addr = via_alias ? *p->alias : p->address;
    if (m.upper_case_recipients) addr = upper(addr);
    to.push_back(fmt::format("{} <{}>", encode_header_word(p->display), addr));
  }
  out += "To: ";
  for (std::size_t i = 0; i < to.size(); ++i) out += (i ? ",\n " : "") + to[i];
  out += '\n';
  if (!m.cc.empty()) {
    out += "Cc: ";
    for (std::size_t i = 0; i < m.cc.size(); ++i) out += (i ? ", " : "") + m.cc[i];
    out += '\n';
  }
  if (!m.omit_date) out += "Date: " + date_header(m.time, m.from->utc_offset_hours) + '\n';
  out += "Subject: " + m.subject + '\n';
  out += "Message-ID: <" + m.id + ">\n";
  if (m.parent) {
    out += "In-Reply-To: <" + *m.parent + ">\n";
    out += "References: <" + *m.parent + ">\n";
  }
  out += "MIME-Version: 1.0\n";

  std::string body;
  switch (m.encoding) {
    case Encoding::plain:
      out += "Content-Type: text/plain; charset=utf-8\n";
      body = m.body;
      break;
    case Encoding::quoted_printable:
      out += "Content-Type: text/plain; charset=utf-8\nContent-Transfer-Encoding: quoted-printable\n";
      body = quoted_printable(m.body);
      break;
    case Encoding::alternative: {
      const std::string boundary = "b-" + m.id.substr(0, m.id.find('@'));
      out += "Content-Type: multipart/alternative; boundary=\"" + boundary + "\"\n";
      body = "This is a multi-part message in MIME format.\n\n--" + boundary +
             "\nContent-Type: text/plain; charset=utf-8\n\n" + m.body + "\n--" + boundary +
             "\nContent-Type: text/html; charset=utf-8\n\n<html><body><p>" + html_escape(m.body) +
             "</p></body></html>\n--" + boundary + "--";
      break;
    }
  }
  out += '\n';
  std::istringstream lines(body);
  std::string line;
  while (std::getline(lines, line)) {
    std::size_t gt = line.find_first_not_of('>');
    if (gt != std::string::npos && line.compare(gt, 5, "From ") == 0) line.insert(0, ">");
    out += line + '\n';
  }
  return out + '\n';
}

std::string wrap(const std::vector<std::string>& words) {
  std::string out, line;
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::string w = words[i];
    if (i % 11 == 10) w += ",";
    if (i % 17 == 16 || i + 1 == words.size()) w += ".";
    if (!line.empty() && line.size() + 1 + w.size() > 70) {
      out += line + '\n';
      line.clear();
    }
    line += (line.empty() ? "" : " ") + w;
  }
  return out + line;
}

struct BodyStats {
  std::size_t tokens = 0, pos = 0, neg = 0;
};

struct TeamTruth {
  std::vector<const Person*> members;
  std::vector<const Person*> leaders;  // per segment
  std::vector<std::pair<int, int>> segments;
  std::vector<double> first_reply_minutes;
  double pos_sum = 0, neg_sum = 0;
  std::size_t messages = 0;
  std::int64_t msg_recvd = 0;
  std::map<std::string, std::int64_t> sent, received;
  std::map<std::pair<std::string, std::string>, std::int64_t> edges;
  std::set<std::string> actors;
};

class Generator {
 public:
  explicit Generator(const SynthParams& p) : p_(p), noise_rng_(p.seed ^ 0x9e3779b97f4a7c15ULL) {}

  SynthCorpus run();

 private:
  std::size_t draw_count(Rng& rng, double expected) {
    const double whole = std::floor(expected);
    return static_cast<std::size_t>(whole) + (rng.chance(expected - whole) ? 1 : 0);
  }

  std::string make_body(Rng& rng, const SynthTeamSpec& spec, const Person& author,
                        const std::string* quoted, BodyStats* stats);
  void record(std::size_t team, const Draft& d, const BodyStats& s);

  const SynthParams& p_;
  Rng noise_rng_;
  std::vector<Person> people_;
  std::vector<Draft> drafts_;
  std::vector<TeamTruth> truth_;
  std::size_t duplicates_ = 0, self_loops_ = 0, skipped_ = 0;
};

std::string Generator::make_body(Rng& rng, const SynthTeamSpec& spec, const Person& author,
                                 const std::string* quoted, BodyStats* stats) {
  const auto& filler = synth_filler_words();
  const auto& pos_words = synth_positive_words();
  const auto& neg_words = synth_negative_words();
  const int spread = std::max(1, p_.body_tokens / 3);
  const std::size_t n = static_cast<std::size_t>(
      std::max(10, p_.body_tokens - spread + static_cast<int>(rng.below(2 * spread + 1))));
  std::size_t pos = std::min(n, draw_count(rng, n * spec.pos_percent / 100.0));
  std::size_t neg = std::min(n - pos, draw_count(rng, n * spec.neg_percent / 100.0));

  std::vector<std::string> words;
  for (std::size_t i = 0; i < pos; ++i) words.push_back(pos_words[rng.below(pos_words.size())]);
  for (std::size_t i = 0; i < neg; ++i) words.push_back(neg_words[rng.below(neg_words.size())]);
  while (words.size() < n) words.push_back(filler[rng.below(filler.size())]);
  rng.shuffle(words);
  if (!words.empty()) words[0][0] = static_cast<char>(std::toupper(static_cast<unsigned char>(words[0][0])));

  std::string body = wrap(words);
  if (quoted) {
    body += "\n\n";
    std::istringstream in(*quoted);
    std::string line;
    for (int i = 0; i < 3 && std::getline(in, line); ++i) body += "> " + line + '\n';
    body += ">> great work, thanks for the excellent notes";
  }
  body += rng.chance(0.5) ? "\n\n-- \n" : "\n\n--\n";
  body += author.display + "\nGreat teams love good feedback, no problem is too bad\n";
  stats->tokens = n;
  stats->pos = pos;
  stats->neg = neg;
  return body;
}

void Generator::record(std::size_t team, const Draft& d, const BodyStats& s) {
  TeamTruth& t = truth_[team];
  ++t.messages;
  t.pos_sum += 100.0 * static_cast<double>(s.pos) / static_cast<double>(s.tokens);
  t.neg_sum += 100.0 * static_cast<double>(s.neg) / static_cast<double>(s.tokens);
  const std::string& from = d.from->address;
  ++t.sent[from];
  t.actors.insert(from);
  for (const auto& [p, _] : d.to) {
    ++t.received[p->address];
    ++t.msg_recvd;
    ++t.edges[{from, p->address}];
    t.actors.insert(p->address);
  }
  for (const auto& cc : d.cc) {
    if (cc != kCollector) t.actors.insert(cc);
  }
}

SynthCorpus Generator::run() {
  if (p_.teams.empty()) throw std::invalid_argument("synth: no teams");
  if (p_.days < 1 || p_.lookback_days < 1) throw std::invalid_argument("synth: bad course length");
  const auto origin_time = parse_iso8601(p_.start_date);
  if (!origin_time) throw std::invalid_argument("synth: bad start_date " + p_.start_date);
  const std::int64_t origin = day_number(origin_time->time);

  std::size_t total_members = 0;
  for (const auto& spec : p_.teams) {
    if (spec.members < 2) throw std::invalid_argument("synth: teams need >= 2 members");
    if (spec.handovers < 0 || (spec.handovers + 1) * p_.lookback_days > p_.days) {
      throw std::invalid_argument(
          fmt::format("synth: {} handovers do not fit into {} days", spec.handovers, p_.days));
    }
    total_members += static_cast<std::size_t>(spec.members);
  }
  if (total_members > 400) throw std::invalid_argument("synth: too many students");

  // people_ must not reallocate once pointers are handed out
  people_.reserve(total_members + p_.teams.size() + 1);
  people_.push_back({"Course Instructor", std::string(kInstructor), std::nullopt, -4});
  const Person* instructor = &people_.back();
  truth_.resize(p_.teams.size());
  std::size_t g = 0;
  for (std::size_t t = 0; t < p_.teams.size(); ++t) {
    for (int i = 0; i < p_.teams[t].members; ++i, ++g) {
      const std::string first(kFirstNames[g % std::size(kFirstNames)]);
      const std::string last(kLastNames[(7 * g) % std::size(kLastNames)]);
      const auto& uni = kUniversities[(t + static_cast<std::size_t>(i)) % std::size(kUniversities)];
      std::string local = first + "." + last + std::to_string(g);
      Person person{first + " " + last, "", std::nullopt, uni.utc_offset_hours};
      std::string ascii;
      for (unsigned char c : local) {
        if (c < 0x80) ascii += static_cast<char>(std::tolower(c));
        else if (c == 0xbc) ascii += "ue";  // second byte of 'ü'
      }
      person.address = ascii + "@" + std::string(uni.domain);
      if (p_.noise && i == 0) {
        std::string compact = ascii;
        compact.erase(std::remove(compact.begin(), compact.end(), '.'), compact.end());
        person.alias = compact + "@gmail.com";
      }
      people_.push_back(person);
      truth_[t].members.push_back(&people_.back());
    }
  }

  std::vector<const Person*> students;
  for (const auto& tt : truth_) students.insert(students.end(), tt.members.begin(), tt.members.end());

  std::size_t team_message_no = 0;
  for (std::size_t t = 0; t < p_.teams.size(); ++t) {
    const SynthTeamSpec& spec = p_.teams[t];
    TeamTruth& tt = truth_[t];
    Rng rng(p_.seed * 1000003ULL + t * 7919ULL + 1);
    const int k = spec.handovers;
    const int base = p_.days / (k + 1), rem = p_.days % (k + 1);
    int start = 0;
    for (int s = 0; s <= k; ++s) {
      const int len = base + (s < rem ? 1 : 0);
      tt.segments.emplace_back(start, start + len - 1);
      tt.leaders.push_back(tt.members[(static_cast<std::size_t>(s) + t) % tt.members.size()]);
      start += len;
    }
    const std::string team_name = std::to_string(t + 1);
    const std::string external = fmt::format("mentor{}@partner-company.com", t + 1);

    for (int d = 0; d < p_.days; ++d) {
      std::size_t seg = 0;
      while (tt.segments[seg].second < d) ++seg;
      const Person* leader = tt.leaders[seg];
      const Timestamp day0 = day_start(origin + d);
      auto next_id = [&](std::string_view kind, int n) {
        return fmt::format("t{}.d{}.{}{}@{}", team_name, d, kind, n, kDomain);
      };
      auto emit = [&](Draft draft, const BodyStats& stats) {
        if (p_.noise && ++team_message_no % 37 == 0) draft.encoding = Encoding::alternative;
        else if (p_.noise && team_message_no % 53 == 0) draft.encoding = Encoding::quoted_printable;
        record(t, draft, stats);
        const bool duplicate = p_.noise && team_message_no % 41 == 0;
        drafts_.push_back(draft);
        if (duplicate) {
          drafts_.push_back(draft);
          ++duplicates_;
        }
      };

      // leader's daily coordination message
      Draft lead;
      lead.id = next_id("lead", 0);
      lead.time = day0 + hours(8) + seconds(rng.below(3600));
      lead.from = leader;
      lead.from_alias = leader->alias && rng.chance(0.2);
      for (const Person* m : tt.members) {
        if (m != leader) lead.to.emplace_back(m, m->alias && rng.chance(0.3));
      }
      if (p_.noise && rng.chance(0.3)) lead.cc.emplace_back(kCollector);
      if (rng.chance(0.1)) lead.cc.push_back(external);
      lead.upper_case_recipients = p_.noise && rng.chance(0.1);
      lead.subject = fmt::format("Team {} day {}: {}", team_name, d + 1,
                                 kTopics[rng.below(std::size(kTopics))]);
      BodyStats lead_stats;
      lead.body = make_body(rng, spec, *leader, nullptr, &lead_stats);
      emit(lead, lead_stats);

      // every other member replies; the first reply sets the response time
      std::vector<const Person*> repliers;
      for (const Person* m : tt.members) {
        if (m != leader) repliers.push_back(m);
      }
      rng.shuffle(repliers);
      const double latency_min = spec.mean_latency_min * (0.5 + rng.uniform());
      const auto first_delay = seconds(static_cast<std::int64_t>(std::llround(latency_min * 60.0)));
      tt.first_reply_minutes.push_back(static_cast<double>(first_delay.count()) / 60.0);
      for (std::size_t r = 0; r < repliers.size(); ++r) {
        Draft reply;
        reply.id = next_id("re", static_cast<int>(r));
        reply.time = lead.time + first_delay +
                     (r == 0 ? seconds(0) : seconds(300 + rng.below(10800)));
        reply.from = repliers[r];
        reply.from_alias = repliers[r]->alias && rng.chance(0.2);
        reply.to.emplace_back(leader, false);
        if (p_.noise && rng.chance(0.3)) reply.cc.emplace_back(kCollector);
        reply.subject = (rng.chance(0.5) ? "Re: " : "RE: ") + lead.subject;
        if (!(p_.noise && rng.chance(0.15))) reply.parent = lead.id;
        BodyStats stats;
        reply.body = make_body(rng, spec, *repliers[r], &lead.body, &stats);
        emit(reply, stats);
      }

      for (int c = 0; c < p_.chatter_per_day; ++c) {
        Draft note;
        note.id = next_id("note", c);
        note.time = day0 + hours(11) + seconds(rng.below(36000));
        note.from = repliers[rng.below(repliers.size())];
        note.to.emplace_back(leader, false);
        note.subject = fmt::format("{} notes", kTopics[rng.below(std::size(kTopics))]);
        BodyStats stats;
        note.body = make_body(rng, spec, *note.from, nullptr, &stats);
        emit(note, stats);
      }
    }
  }

  // traffic outside any team
  const SynthTeamSpec neutral{};
  for (int d = 0; d < p_.days; ++d) {
    const Timestamp day0 = day_start(origin + d);
    if (d % 7 == 0) {
      Draft a;
      a.id = fmt::format("announce.d{}@{}", d, kDomain);
      a.time = day0 + hours(7);
      a.from = instructor;
      for (const Person* s : students) a.to.emplace_back(s, false);
      a.cc.emplace_back(kCollector);
      a.subject = fmt::format("Course update, week {}", d / 7 + 1);
      BodyStats ignored;
      a.body = make_body(noise_rng_, neutral, *instructor, nullptr, &ignored);
      drafts_.push_back(a);
    }
    if (d % 3 == 1 && p_.teams.size() > 1) {
      const std::size_t ta = noise_rng_.below(p_.teams.size());
      const std::size_t tb = (ta + 1 + noise_rng_.below(p_.teams.size() - 1)) % p_.teams.size();
      Draft x;
      x.id = fmt::format("cross.d{}@{}", d, kDomain);
      x.time = day0 + hours(13) + seconds(noise_rng_.below(3600));
      x.from = truth_[ta].members[noise_rng_.below(truth_[ta].members.size())];
      x.to.emplace_back(truth_[tb].members[noise_rng_.below(truth_[tb].members.size())], false);
      x.subject = "Question about your survey";
      BodyStats ignored;
      x.body = make_body(noise_rng_, neutral, *x.from, nullptr, &ignored);
      drafts_.push_back(x);
    }
  }
  if (p_.noise) {
    Draft undated;
    undated.id = fmt::format("undated@{}", kDomain);
    undated.time = day_start(origin) + hours(6);
    undated.from = instructor;
    undated.to.emplace_back(students.front(), false);
    undated.subject = "Welcome";
    undated.body = "Welcome to the course.";
    undated.omit_date = true;
    drafts_.push_back(undated);
    ++skipped_;

    const Person* self = truth_.front().members.front();
    Draft reminder;
    reminder.id = fmt::format("self.reminder@{}", kDomain);
    reminder.time = day_start(origin + p_.days / 2) + hours(22);
    reminder.from = self;
    reminder.from_alias = self->alias.has_value();
    reminder.to.emplace_back(self, false);
    reminder.subject = "note to self";
    reminder.body = "Remember the slides.";
    drafts_.push_back(reminder);
    ++self_loops_;
  }

  std::stable_sort(drafts_.begin(), drafts_.end(),
                   [](const Draft& a, const Draft& b) { return a.time < b.time; });

  SynthCorpus out;
  for (const auto& d : drafts_) out.mbox += render(d);

  out.rosters_csv = "team,member,creativity,presentation,content\n";
  out.aliases_tsv = "# raw\tcanonical\n";
  for (std::size_t t = 0; t < p_.teams.size(); ++t) {
    for (std::size_t i = 0; i < truth_[t].members.size(); ++i) {
      const Person* m = truth_[t].members[i];
      // one roster entry in upper case, rosters are normalized on load
      out.rosters_csv += fmt::format("{},{},{:.1f},{:.1f},{:.1f}\n", t + 1,
                                     t == 0 && i == 1 ? upper(m->address) : m->address,
                                     p_.teams[t].creativity, 3.0, 3.0);
      if (m->alias) out.aliases_tsv += *m->alias + "\t" + m->address + "\n";
    }
  }
  out.config = fmt::format(
      "# synthetic course\ninput = course.mbox\nrosters = rosters.csv\naliases = aliases.tsv\n"
      "dummy = {}\nwindow.origin = {}\nwindow.lookback = {}\noutput = out\n",
      kCollector, p_.start_date, p_.lookback_days);

  nlohmann::json teams = nlohmann::json::array();
  for (std::size_t t = 0; t < p_.teams.size(); ++t) {
    const TeamTruth& tt = truth_[t];
    nlohmann::json segments = nlohmann::json::array();
    for (std::size_t s = 0; s < tt.segments.size(); ++s) {
      segments.push_back({{"first_day", tt.segments[s].first},
                          {"last_day", tt.segments[s].second},
                          {"leader", tt.leaders[s]->address}});
    }
    nlohmann::json leaders = nlohmann::json::array();
    for (int d = 0; d < p_.days; ++d) {
      const int earliest = std::max(0, d - p_.lookback_days + 1);
      std::size_t seg = 0;
      while (tt.segments[seg].second < earliest) ++seg;
      leaders.push_back(tt.leaders[seg]->address);
    }
    double art = 0;
    for (double m : tt.first_reply_minutes) art += m;
    art /= static_cast<double>(tt.first_reply_minutes.size());

    nlohmann::json members = nlohmann::json::array(), sent = nlohmann::json::object(),
                   received = nlohmann::json::object();
    double traffic = 0;
    for (const Person* m : tt.members) {
      members.push_back(m->address);
      const auto s = tt.sent.count(m->address) ? tt.sent.at(m->address) : 0;
      const auto r = tt.received.count(m->address) ? tt.received.at(m->address) : 0;
      sent[m->address] = s;
      received[m->address] = r;
      traffic += static_cast<double>(s + r);
    }
    // spreadsheet-style weighted variance of the contribution index
    double mean = 0, var = 0;
    for (const Person* m : tt.members) {
      const double s = static_cast<double>(sent[m->address].get<std::int64_t>());
      const double r = static_cast<double>(received[m->address].get<std::int64_t>());
      if (s + r > 0) mean += (s + r) / traffic * (s - r) / (s + r);
    }
    for (const Person* m : tt.members) {
      const double s = static_cast<double>(sent[m->address].get<std::int64_t>());
      const double r = static_cast<double>(received[m->address].get<std::int64_t>());
      if (s + r > 0) var += (s + r) / traffic * std::pow((s - r) / (s + r) - mean, 2);
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [e, w] : tt.edges) edges.push_back({e.first, e.second, w});

    teams.push_back({{"team", std::to_string(t + 1)},
                     {"members", members},
                     {"creativity", p_.teams[t].creativity},
                     {"handovers", p_.teams[t].handovers},
                     {"segments", segments},
                     {"expected_leaders", leaders},
                     {"mean_latency_min", p_.teams[t].mean_latency_min},
                     {"expected_art_minutes", art},
                     {"reply_pairs", tt.first_reply_minutes.size()},
                     {"target_pos_percent", p_.teams[t].pos_percent},
                     {"target_neg_percent", p_.teams[t].neg_percent},
                     {"expected_pos_sent", tt.pos_sum / static_cast<double>(tt.messages)},
                     {"expected_neg_sent", tt.neg_sum / static_cast<double>(tt.messages)},
                     {"messages", tt.messages},
                     {"msg_recvd", tt.msg_recvd},
                     {"num_actors", tt.actors.size()},
                     {"awvci", var},
                     {"sent", sent},
                     {"received", received},
                     {"edges", edges}});
  }
  const std::size_t unique = drafts_.size() - duplicates_;
  nlohmann::json warnings = nlohmann::json::object();
  if (duplicates_) warnings["duplicate_id"] = duplicates_;
  if (skipped_) warnings["missing_date"] = skipped_;
  if (self_loops_) warnings["self_loop"] = self_loops_;
  out.manifest = {{"generator", "vmirror synth"},
                  {"seed", p_.seed},
                  {"days", p_.days},
                  {"lookback_days", p_.lookback_days},
                  {"start_date", p_.start_date},
                  {"collector", kCollector},
                  {"messages_written", drafts_.size()},
                  {"expected_messages", unique - skipped_ - self_loops_},
                  {"expected_warnings", warnings},
                  {"teams", teams}};
  return out;
}

}  // namespace

const std::vector<std::string>& synth_filler_words() {
  static const std::vector<std::string> words = {
      "project", "team",    "meeting",  "schedule",  "draft",    "network",  "analysis",
      "data",    "slides",  "section",  "report",    "presentation", "review", "agenda",
      "call",    "time",    "week",     "document",  "survey",   "topic",    "research",
      "model",   "results", "version",  "link",     "file",     "notes",    "update",
      "plan",    "skype",   "tomorrow", "today",     "interview", "chapter", "figure",
      "table",   "email",   "course",   "students",  "question", "answer",   "idea",
      "next",    "send",    "attached", "see",       "below",    "folder",   "deadline",
      "monday",  "friday",  "outline",  "summary",   "the",      "and",      "we",
      "will",    "for",     "our",      "with",      "on",       "to",       "of"};
  return words;
}

const std::vector<std::string>& synth_positive_words() {
  static const std::vector<std::string> words = {"great",   "good",    "thanks",    "excellent",
                                                 "happy",   "nice",    "awesome",   "love",
                                                 "helpful", "perfect", "wonderful", "glad"};
  return words;
}

const std::vector<std::string>& synth_negative_words() {
  static const std::vector<std::string> words = {
      "bad", "problem", "wrong", "worried", "difficult", "confused", "unfortunately",
      "fail", "sad", "annoyed", "delay", "missing", "stress"};
  return words;
}

SynthParams default_course_params(int days, std::uint64_t seed) {
  SynthParams p;
  p.seed = seed;
  p.days = days;
  const int max_k = std::max(0, days / p.lookback_days - 1);
  constexpr int kHandovers[] = {0, 1, 5, 20};
  for (int i = 0; i < 10; ++i) {
    SynthTeamSpec t;
    t.members = 4 + i % 3;
    t.handovers = std::min(kHandovers[i % 4], max_k);
    t.mean_latency_min = 60.0 + 30.0 * i;
    t.pos_percent = 0.5 + 0.25 * i;
    t.neg_percent = 0.2 + 0.1 * ((i * 3) % 7);
    t.creativity = std::round(std::clamp(2.0 + 0.1 * t.handovers + 0.2 * (i % 3), 1.0, 5.0) * 10) / 10;
    p.teams.push_back(t);
  }
  return p;
}

SynthCorpus generate_course(const SynthParams& params) { return Generator(params).run(); }

std::vector<std::filesystem::path> write_course(const SynthCorpus& corpus,
                                                const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> files = {
      {"course.mbox", corpus.mbox},
      {"rosters.csv", corpus.rosters_csv},
      {"aliases.tsv", corpus.aliases_tsv},
      {"course.conf", corpus.config},
      {"manifest.json", corpus.manifest.dump(2) + "\n"}};
  std::vector<std::filesystem::path> out;
  for (const auto& [name, text] : files) {
    write_text_file(dir / name, text);
    out.push_back(dir / name);
  }
  return out;
}

}  // namespace vmirror
