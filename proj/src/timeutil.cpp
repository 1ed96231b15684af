#include "vmirror/timeutil.hpp"

#include <array>
#include <cctype>
#include <charconv>

#include <fmt/format.h>

namespace vmirror {
namespace {

using namespace std::chrono;

constexpr std::array<std::string_view, 12> kMonths = {"jan", "feb", "mar", "apr", "may", "jun",
                                                      "jul", "aug", "sep", "oct", "nov", "dec"};
constexpr std::array<std::string_view, 7> kWeekdays = {"Sun", "Mon", "Tue", "Wed",
                                                       "Thu", "Fri", "Sat"};

class Scanner {
 public:
  explicit Scanner(std::string_view s) : s_(s) {}

  void skip_space() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '(') {  // RFC 5322 comment, e.g. "(EDT)"
        int depth = 0;
        while (pos_ < s_.size()) {
          if (s_[pos_] == '(') ++depth;
          if (s_[pos_] == ')' && --depth == 0) {
            ++pos_;
            break;
          }
          ++pos_;
        }
      } else {
        break;
      }
    }
  }

  bool eat(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::optional<int> number(std::size_t min_digits, std::size_t max_digits) {
    std::size_t start = pos_;
    while (pos_ < s_.size() && pos_ - start < max_digits &&
           std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
    if (pos_ - start < min_digits) {
      pos_ = start;
      return std::nullopt;
    }
    int v = 0;
    std::from_chars(s_.data() + start, s_.data() + pos_, v);
    return v;
  }

  std::string_view word() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  bool done() const { return pos_ >= s_.size(); }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

std::optional<int> month_from_name(std::string_view name) {
  if (name.size() < 3) return std::nullopt;
  for (std::size_t i = 0; i < kMonths.size(); ++i) {
    bool match = true;
    for (std::size_t k = 0; k < 3; ++k) {
      if (std::tolower(static_cast<unsigned char>(name[k])) != kMonths[i][k]) match = false;
    }
    if (match) return static_cast<int>(i) + 1;
  }
  return std::nullopt;
}

std::optional<int> zone_offset_minutes(std::string_view name) {
  std::string upper;
  for (char c : name) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "UT" || upper == "UTC" || upper == "GMT" || upper == "Z") return 0;
  if (upper == "EST") return -5 * 60;
  if (upper == "EDT") return -4 * 60;
  if (upper == "CST") return -6 * 60;
  if (upper == "CDT") return -5 * 60;
  if (upper == "MST") return -7 * 60;
  if (upper == "MDT") return -6 * 60;
  if (upper == "PST") return -8 * 60;
  if (upper == "PDT") return -7 * 60;
  if (upper == "CET") return 60;
  if (upper == "CEST") return 120;
  if (upper == "EET") return 120;
  if (upper == "EEST") return 180;
  return std::nullopt;
}

std::optional<Timestamp> make_time(int y, int mo, int d, int h, int mi, int s) {
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) return std::nullopt;
  return Timestamp{sys_days{ymd}} + hours{h} + minutes{mi} + seconds{s};
}

}  // namespace

std::optional<ParsedTime> parse_rfc2822_date(std::string_view text) {
  Scanner sc(text);
  sc.skip_space();
  // Optional day-of-week.
  if (std::isalpha(static_cast<unsigned char>(sc.peek()))) {
    sc.word();
    sc.skip_space();
    sc.eat(',');
    sc.skip_space();
  }
  auto d = sc.number(1, 2);
  if (!d) return std::nullopt;
  sc.skip_space();
  auto mo = month_from_name(sc.word());
  if (!mo) return std::nullopt;
  sc.skip_space();
  auto y = sc.number(2, 4);
  if (!y) return std::nullopt;
  if (*y < 50) {
    *y += 2000;
  } else if (*y < 1000) {
    *y += 1900;
  }
  sc.skip_space();
  auto h = sc.number(1, 2);
  if (!h || !sc.eat(':')) return std::nullopt;
  auto mi = sc.number(2, 2);
  if (!mi) return std::nullopt;
  int sec = 0;
  if (sc.eat(':')) {
    auto s = sc.number(2, 2);
    if (!s) return std::nullopt;
    sec = *s;
  }
  auto t = make_time(*y, *mo, *d, *h, *mi, sec);
  if (!t) return std::nullopt;

  sc.skip_space();
  ParsedTime out{*t, true};
  char c = sc.peek();
  if (c == '+' || c == '-') {
    sc.eat(c);
    auto z = sc.number(4, 4);
    if (!z) return std::nullopt;
    int off = (*z / 100) * 60 + (*z % 100);
    out.time -= minutes{c == '+' ? off : -off};
  } else if (std::isalpha(static_cast<unsigned char>(c))) {
    auto off = zone_offset_minutes(sc.word());
    if (!off) {
      out.had_zone = false;  // military or unknown zone: treat as UTC
    } else {
      out.time -= minutes{*off};
    }
  } else {
    out.had_zone = false;
  }
  return out;
}

std::optional<ParsedTime> parse_iso8601(std::string_view text) {
  Scanner sc(text);
  sc.skip_space();
  auto y = sc.number(4, 4);
  if (!y || !sc.eat('-')) return std::nullopt;
  auto mo = sc.number(2, 2);
  if (!mo || !sc.eat('-')) return std::nullopt;
  auto d = sc.number(2, 2);
  if (!d) return std::nullopt;
  int h = 0, mi = 0, sec = 0;
  if (sc.eat('T') || sc.eat('t') || sc.eat(' ')) {
    auto hh = sc.number(2, 2);
    if (!hh || !sc.eat(':')) return std::nullopt;
    auto mm = sc.number(2, 2);
    if (!mm) return std::nullopt;
    h = *hh;
    mi = *mm;
    if (sc.eat(':')) {
      auto ss = sc.number(2, 2);
      if (!ss) return std::nullopt;
      sec = *ss;
      if (sc.eat('.') || sc.eat(',')) sc.number(1, 9);
    }
  }
  auto t = make_time(*y, *mo, *d, h, mi, sec);
  if (!t) return std::nullopt;
  ParsedTime out{*t, true};
  if (sc.eat('Z') || sc.eat('z')) {
  } else if (char c = sc.peek(); c == '+' || c == '-') {
    sc.eat(c);
    auto oh = sc.number(2, 2);
    if (!oh) return std::nullopt;
    sc.eat(':');
    auto om = sc.number(2, 2);
    int off = *oh * 60 + om.value_or(0);
    out.time -= minutes{c == '+' ? off : -off};
  } else {
    out.had_zone = false;
  }
  sc.skip_space();
  if (!sc.done()) return std::nullopt;
  return out;
}

std::string format_iso8601(Timestamp t) {
  auto day = floor<days>(t);
  year_month_day ymd{day};
  hh_mm_ss hms{t - day};
  return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                     hms.hours().count(), hms.minutes().count(), hms.seconds().count());
}

std::string format_rfc2822(Timestamp t) {
  auto day = floor<days>(t);
  year_month_day ymd{day};
  weekday wd{day};
  hh_mm_ss hms{t - day};
  std::string mon(kMonths[static_cast<unsigned>(ymd.month()) - 1]);
  mon[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(mon[0])));
  return fmt::format("{}, {} {} {:04d} {:02d}:{:02d}:{:02d} +0000", kWeekdays[wd.c_encoding()],
                     static_cast<unsigned>(ymd.day()), mon, static_cast<int>(ymd.year()),
                     hms.hours().count(), hms.minutes().count(), hms.seconds().count());
}

}  // namespace vmirror
