#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vmirror/timeutil.hpp"

namespace vmirror {

/// Lowercase, trimmed bare address: display names, angle brackets, quotes
/// and RFC 5322 comments are removed. Idempotent.
std::string normalize_address(std::string_view raw);

/// Canonical identity of a communicating actor. Construction normalizes the
/// input, so two spellings of one address compare equal.
class ActorId {
 public:
  ActorId() = default;
  explicit ActorId(std::string_view raw) : canonical_(normalize_address(raw)) {}

  const std::string& str() const { return canonical_; }
  bool empty() const { return canonical_.empty(); }

  friend auto operator<=>(const ActorId&, const ActorId&) = default;

 private:
  std::string canonical_;
};

using TeamId = std::string;

struct Message {
  std::string id;
  ActorId sender;
  std::vector<ActorId> recipients;  // To and Cc merged, deduplicated, in header order
  Timestamp timestamp{};
  std::string subject;
  std::string body;
  std::vector<std::string> reply_parents;  // In-Reply-To first, then References
  std::optional<TeamId> team;

  friend bool operator==(const Message&, const Message&) = default;
};

/// Per-kind warning counters collected while reading and transforming a
/// corpus. Keys are stable identifiers (e.g. "missing_date") that end up
/// in the run manifest.
struct Diagnostics {
  std::map<std::string, std::size_t> counts;
  std::vector<std::string> details;  // human-readable, one per event

  void warn(const std::string& kind, std::string detail);
  std::size_t total() const;
  std::size_t count(const std::string& kind) const;
  void merge(const Diagnostics& other);
};

struct TimeSpan {
  Timestamp first{};
  Timestamp last{};
};

/// Immutable, time-ordered message collection. Construction sorts stably by
/// timestamp and drops later duplicates of a Message-ID (counted as
/// "duplicate_id").
class MessageSet {
 public:
  MessageSet() = default;
  explicit MessageSet(std::vector<Message> messages, Diagnostics diagnostics = {});

  const std::vector<Message>& messages() const { return messages_; }
  const std::set<ActorId>& actors() const { return actors_; }
  const Diagnostics& diagnostics() const { return diagnostics_; }
  std::size_t size() const { return messages_.size(); }
  bool empty() const { return messages_.empty(); }

  /// Only meaningful when non-empty.
  TimeSpan span() const;

  /// Messages with start <= timestamp < end.
  std::span<const Message> between(Timestamp start, Timestamp end) const;

  const Message* find(std::string_view id) const;

 private:
  std::vector<Message> messages_;
  std::set<ActorId> actors_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
  Diagnostics diagnostics_;
};

/// Raw address -> canonical actor.
class AliasMap {
 public:
  AliasMap() = default;

  /// Both sides are normalized. Throws ConfigError if the raw address is
  /// already mapped to a different target.
  void add(std::string_view raw, std::string_view canonical);

  /// Throws ConfigError when a target is itself mapped onward (a chain).
  void validate() const;

  ActorId resolve(const ActorId& actor) const;
  std::size_t size() const { return map_.size(); }

 private:
  std::map<std::string, std::string> map_;
};

struct Ratings {
  double creativity = 0;
  double presentation = 0;
  double content = 0;
};

struct TeamRoster {
  TeamId team;
  std::set<ActorId> members;
  std::set<ActorId> shared;  // members allowed to appear in several rosters
  Ratings ratings;

  bool contains(const ActorId& a) const { return members.count(a) != 0; }
};

struct CanonicalizeOptions {
  std::set<ActorId> dummy_addresses;  // collector mailboxes, never actors
};

MessageSet parse_mbox(const std::string& path);
MessageSet parse_mbox_text(std::string_view text);

MessageSet parse_message_csv(const std::string& path);
MessageSet parse_message_csv_text(std::string_view text);

/// Interchange format: `id,sender,recipients,timestamp,subject,reply_parents,body`.
void write_message_csv(const MessageSet& ms, std::ostream& out);

/// 2-column TSV `raw<TAB>canonical`; blank lines and `#` comments skipped.
AliasMap parse_alias_tsv(std::string_view text);
AliasMap load_aliases(const std::string& path);

/// CSV `team,member,creativity,presentation,content[,shared]`. Ratings must
/// agree across a team's rows and lie in [1,5]. Rosters keep file order.
std::vector<TeamRoster> parse_rosters_csv(std::string_view text);
std::vector<TeamRoster> load_rosters(const std::string& path);

/// Applies alias mapping to roster members (after normalization).
std::vector<TeamRoster> canonicalize_rosters(std::vector<TeamRoster> rosters,
                                             const AliasMap& aliases);

/// Maps every address through normalization and the alias map, removes
/// collector addresses from recipient lists, drops the sender from its own
/// recipients and removes messages addressed only to their sender.
MessageSet canonicalize_actors(const MessageSet& ms, const AliasMap& aliases,
                               const CanonicalizeOptions& options = {});

/// Tags each message with the team holding its sender and at least one
/// recipient. Among several candidates the one covering the most
/// participants wins; ties go to the smallest TeamId.
MessageSet assign_teams(const MessageSet& ms, std::span<const TeamRoster> rosters);

}  // namespace vmirror
