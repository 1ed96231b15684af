#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace vmirror {

struct SynthTeamSpec {
  int members = 5;              // 4..6 students
  int handovers = 0;            // scripted leadership changes
  double mean_latency_min = 120;  // first-reply latency is uniform in [0.5, 1.5] x this
  double pos_percent = 1.0;     // target positive word share of body tokens
  double neg_percent = 0.5;
  double creativity = 3.0;
};

struct SynthParams {
  std::uint64_t seed = 42;
  int days = 150;
  int lookback_days = 7;
  std::string start_date = "2013-09-02";
  int body_tokens = 60;       // mean body length in words
  int chatter_per_day = 0;    // extra member -> leader notes per team and day
  bool noise = true;          // duplicates, aliases, collector Cc, headerless replies, ...
  std::vector<SynthTeamSpec> teams;
};

/// Ten teams cycling through 0, 1, 5 and 20 handovers, capped to what the
/// number of days allows with segments of at least lookback_days.
SynthParams default_course_params(int days = 150, std::uint64_t seed = 42);

struct SynthCorpus {
  std::string mbox;
  std::string rosters_csv;
  std::string aliases_tsv;
  std::string config;        // analyze config referring to the sibling files
  nlohmann::json manifest;   // ground truth
};

/// Deterministic for a given SynthParams. Throws std::invalid_argument when
/// a team's handovers do not fit into the course length.
SynthCorpus generate_course(const SynthParams& params);

/// Writes course.mbox, rosters.csv, aliases.tsv, course.conf and
/// manifest.json into dir (created if needed).
std::vector<std::filesystem::path> write_course(const SynthCorpus& corpus,
                                                const std::filesystem::path& dir);

/// Neutral, positive and negative vocabularies used for message bodies.
const std::vector<std::string>& synth_filler_words();
const std::vector<std::string>& synth_positive_words();
const std::vector<std::string>& synth_negative_words();

}  // namespace vmirror
