#include "mime.hpp"

#include <algorithm>
#include <cctype>

namespace vmirror::mime {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::string normalize_newlines(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r') {
      out += '\n';
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
    } else {
      out += text[i];
    }
  }
  return out;
}

std::string decode_transfer(const Headers& headers, std::string_view body) {
  auto enc = to_lower(first(headers, "content-transfer-encoding").value_or(""));
  if (enc == "quoted-printable") return decode_quoted_printable(body);
  if (enc == "base64") return normalize_newlines(decode_base64(body));
  return std::string(body);
}

// Splits a multipart body on its boundary; preamble and epilogue are dropped.
std::vector<std::string_view> split_multipart(std::string_view body, const std::string& boundary) {
  std::vector<std::string_view> parts;
  const std::string delim = "--" + boundary;
  std::size_t pos = 0;
  std::size_t part_start = std::string_view::npos;
  while (pos <= body.size()) {
    std::size_t eol = body.find('\n', pos);
    std::string_view line = body.substr(pos, eol == std::string_view::npos ? body.size() - pos
                                                                           : eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.starts_with(delim)) {
      if (part_start != std::string_view::npos) {
        std::size_t end = pos > part_start ? pos - 1 : part_start;  // drop the newline before
        parts.push_back(body.substr(part_start, end - part_start));
      }
      if (line.substr(delim.size()).starts_with("--")) break;
      part_start = eol == std::string_view::npos ? body.size() : eol + 1;
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return parts;
}

}  // namespace

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::pair<std::string_view, std::string_view> split_head_body(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) break;
    std::string_view line = text.substr(pos, eol - pos);
    if (line.empty() || line == "\r") return {text.substr(0, pos), text.substr(eol + 1)};
    pos = eol + 1;
  }
  return {text, {}};
}

Headers parse_headers(std::string_view block) {
  Headers headers;
  std::size_t pos = 0;
  while (pos < block.size()) {
    std::size_t eol = block.find('\n', pos);
    std::string_view line =
        block.substr(pos, eol == std::string_view::npos ? block.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? block.size() : eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (is_space(line.front())) {
      if (!headers.empty()) {
        headers.back().value += ' ';
        headers.back().value += trim(line);
      }
      continue;
    }
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos || colon == 0) continue;
    std::string name = to_lower(trim(line.substr(0, colon)));
    if (name.find(' ') != std::string::npos) continue;
    headers.push_back({std::move(name), trim(line.substr(colon + 1))});
  }
  return headers;
}

std::optional<std::string> first(const Headers& headers, std::string_view name) {
  for (const auto& h : headers) {
    if (h.name == name) return h.value;
  }
  return std::nullopt;
}

std::vector<std::string> all(const Headers& headers, std::string_view name) {
  std::vector<std::string> out;
  for (const auto& h : headers) {
    if (h.name == name) out.push_back(h.value);
  }
  return out;
}

std::string decode_quoted_printable(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c != '=') {
      if (c != '\r') out += c;
      continue;
    }
    if (i + 1 < text.size() && (text[i + 1] == '\n' || text[i + 1] == '\r')) {
      ++i;  // soft line break
      if (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      continue;
    }
    if (i + 2 < text.size()) {
      int hi = hex_value(text[i + 1]);
      int lo = hex_value(text[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out += static_cast<char>(hi * 16 + lo);
        i += 2;
        continue;
      }
    }
    out += c;
  }
  return out;
}

std::string decode_base64(std::string_view text) {
  auto value = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+' || c == '-') return 62;
    if (c == '/' || c == '_') return 63;
    return -1;
  };
  std::string out;
  unsigned buffer = 0;
  int bits = 0;
  for (char c : text) {
    if (c == '=') break;
    int v = value(c);
    if (v < 0) continue;
    buffer = (buffer << 6) | static_cast<unsigned>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out += static_cast<char>((buffer >> bits) & 0xFF);
    }
  }
  return out;
}

std::string decode_encoded_words(std::string_view value) {
  std::string out;
  std::size_t pos = 0;
  bool last_was_encoded = false;
  while (pos < value.size()) {
    std::size_t start = value.find("=?", pos);
    if (start == std::string_view::npos) {
      out += value.substr(pos);
      break;
    }
    std::size_t q1 = value.find('?', start + 2);
    std::size_t q2 = q1 == std::string_view::npos ? q1 : value.find('?', q1 + 1);
    std::size_t end = q2 == std::string_view::npos ? q2 : value.find("?=", q2 + 1);
    if (end == std::string_view::npos || q2 != q1 + 2) {
      out += value.substr(pos);
      break;
    }
    std::string_view gap = value.substr(pos, start - pos);
    // Whitespace between adjacent encoded words is not displayed.
    bool only_space = std::all_of(gap.begin(), gap.end(), is_space);
    if (!(last_was_encoded && only_space)) out += gap;

    char encoding = static_cast<char>(std::toupper(static_cast<unsigned char>(value[q1 + 1])));
    std::string_view payload = value.substr(q2 + 1, end - q2 - 1);
    if (encoding == 'B') {
      out += decode_base64(payload);
    } else if (encoding == 'Q') {
      std::string tmp(payload);
      std::replace(tmp.begin(), tmp.end(), '_', ' ');
      out += decode_quoted_printable(tmp);
    } else {
      out += value.substr(start, end + 2 - start);
    }
    last_was_encoded = true;
    pos = end + 2;
  }
  return out;
}

MediaType parse_media_type(std::string_view value) {
  MediaType mt;
  std::size_t semi = value.find(';');
  std::string type = to_lower(trim(value.substr(0, semi)));
  std::size_t slash = type.find('/');
  if (slash != std::string::npos) {
    mt.type = type.substr(0, slash);
    mt.subtype = type.substr(slash + 1);
  } else if (!type.empty()) {
    mt.type = type;
    mt.subtype.clear();
  }
  while (semi != std::string_view::npos) {
    std::size_t next = semi + 1;
    // Parameter values may be quoted and contain ';'.
    std::size_t eq = value.find('=', next);
    if (eq == std::string_view::npos) break;
    std::string key = to_lower(trim(value.substr(next, eq - next)));
    std::size_t vpos = eq + 1;
    while (vpos < value.size() && is_space(value[vpos])) ++vpos;
    std::string val;
    if (vpos < value.size() && value[vpos] == '"') {
      std::size_t close = vpos + 1;
      while (close < value.size() && value[close] != '"') {
        if (value[close] == '\\' && close + 1 < value.size()) ++close;
        val += value[close];
        ++close;
      }
      semi = value.find(';', close);
    } else {
      semi = value.find(';', vpos);
      val = trim(value.substr(vpos, semi == std::string_view::npos ? semi : semi - vpos));
    }
    mt.params[key] = val;
  }
  return mt;
}

std::string html_to_text(std::string_view html) {
  std::string out;
  std::size_t i = 0;
  while (i < html.size()) {
    char c = html[i];
    if (c == '<') {
      std::size_t close = html.find('>', i);
      if (close == std::string_view::npos) break;
      std::string tag = to_lower(html.substr(i + 1, close - i - 1));
      std::string name;
      for (char t : tag) {
        if (is_space(t) || t == '/' || t == '>') {
          if (!name.empty()) break;
          if (t == '/') continue;
        }
        name += t;
      }
      if (name == "script" || name == "style") {
        std::size_t end = to_lower(html.substr(close)).find("</" + name);
        i = end == std::string::npos ? html.size() : close + end;
        continue;
      }
      if (name == "br" || name == "p" || name == "div" || name == "tr" || name == "li") {
        out += '\n';
      }
      i = close + 1;
    } else if (c == '&') {
      std::size_t semi = html.find(';', i);
      std::string_view ent =
          semi == std::string_view::npos || semi - i > 8 ? "" : html.substr(i + 1, semi - i - 1);
      if (ent == "amp") out += '&';
      else if (ent == "lt") out += '<';
      else if (ent == "gt") out += '>';
      else if (ent == "quot") out += '"';
      else if (ent == "apos" || ent == "#39") out += '\'';
      else if (ent == "nbsp") out += ' ';
      else {
        out += c;
        ++i;
        continue;
      }
      i = semi + 1;
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

std::string extract_text(const Headers& headers, std::string_view body) {
  auto ct = first(headers, "content-type");
  MediaType mt = ct ? parse_media_type(*ct) : MediaType{};
  auto disposition = to_lower(first(headers, "content-disposition").value_or(""));
  if (disposition.starts_with("attachment")) return {};

  if (mt.type == "multipart") {
    auto boundary = mt.params.find("boundary");
    if (boundary == mt.params.end() || boundary->second.empty()) return {};
    std::vector<std::string> plain;
    std::vector<std::string> html;
    for (std::string_view part : split_multipart(body, boundary->second)) {
      auto [head, part_body] = split_head_body(part);
      Headers part_headers = parse_headers(head);
      auto pct = first(part_headers, "content-type");
      MediaType pmt = pct ? parse_media_type(*pct) : MediaType{};
      std::string text = extract_text(part_headers, part_body);
      if (text.empty()) continue;
      if (pmt.type == "text" && pmt.subtype == "html") {
        html.push_back(std::move(text));
      } else {
        plain.push_back(std::move(text));
      }
    }
    // multipart/alternative carries one message in several renderings.
    const auto& chosen = plain.empty() ? html : plain;
    if (mt.subtype == "alternative") return chosen.empty() ? std::string{} : chosen.front();
    std::string joined;
    for (const auto& t : chosen) {
      if (!joined.empty()) joined += '\n';
      joined += t;
    }
    return joined;
  }
  if (mt.type != "text") return {};
  std::string decoded = decode_transfer(headers, body);
  if (mt.subtype == "html") return html_to_text(decoded);
  return decoded;
}

std::vector<std::string> split_addresses(std::string_view list) {
  std::vector<std::string> out;
  std::string current;
  bool quoted = false;
  int angle = 0;
  int comment = 0;
  auto flush = [&] {
    std::string t = trim(current);
    if (!t.empty()) out.push_back(std::move(t));
    current.clear();
  };
  for (std::size_t i = 0; i < list.size(); ++i) {
    char c = list[i];
    if (quoted) {
      if (c == '\\' && i + 1 < list.size()) {
        current += c;
        current += list[++i];
        continue;
      }
      if (c == '"') quoted = false;
      current += c;
      continue;
    }
    switch (c) {
      case '"': quoted = true; break;
      case '<': ++angle; break;
      case '>': angle = std::max(0, angle - 1); break;
      case '(': ++comment; break;
      case ')': comment = std::max(0, comment - 1); break;
      default: break;
    }
    if (angle == 0 && comment == 0) {
      if (c == ',' || c == ';') {
        flush();
        continue;
      }
      if (c == ':') {  // group display name
        current.clear();
        continue;
      }
    }
    current += c;
  }
  flush();
  return out;
}

std::vector<std::string> message_ids(std::string_view value) {
  std::vector<std::string> ids;
  std::size_t pos = 0;
  while (true) {
    std::size_t open = value.find('<', pos);
    if (open == std::string_view::npos) break;
    std::size_t close = value.find('>', open);
    if (close == std::string_view::npos) break;
    std::string id = trim(value.substr(open + 1, close - open - 1));
    if (!id.empty()) ids.push_back(std::move(id));
    pos = close + 1;
  }
  if (ids.empty()) {
    std::string tok;
    for (char c : value) {
      if (is_space(c)) {
        if (!tok.empty()) ids.push_back(std::move(tok));
        tok.clear();
      } else {
        tok += c;
      }
    }
    if (!tok.empty()) ids.push_back(std::move(tok));
  }
  return ids;
}

}  // namespace vmirror::mime
