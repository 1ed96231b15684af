#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vmirror::mime {

struct Header {
  std::string name;  // lowercased
  std::string value;  // unfolded, trimmed
};

using Headers = std::vector<Header>;

/// Parses an RFC 5322 header block; continuation lines are unfolded.
Headers parse_headers(std::string_view block);

std::optional<std::string> first(const Headers& headers, std::string_view name);
std::vector<std::string> all(const Headers& headers, std::string_view name);

/// Splits "head\n\nbody"; the body is empty when there is no blank line.
std::pair<std::string_view, std::string_view> split_head_body(std::string_view text);

/// RFC 2047 encoded words (=?charset?B|Q?...?=). Bytes are passed through
/// without charset conversion.
std::string decode_encoded_words(std::string_view value);

std::string decode_quoted_printable(std::string_view text);
std::string decode_base64(std::string_view text);

struct MediaType {
  std::string type = "text";
  std::string subtype = "plain";
  std::map<std::string, std::string> params;  // lowercased keys
};

MediaType parse_media_type(std::string_view value);

/// Plain text of a MIME entity: text/plain parts are preferred, HTML is
/// stripped to text when it is the only alternative, attachments and
/// non-text parts are dropped.
std::string extract_text(const Headers& headers, std::string_view body);

std::string html_to_text(std::string_view html);

/// Splits an address list on commas outside quotes, angle brackets and
/// comments. Group syntax ("team: a@x, b@y;") is flattened.
std::vector<std::string> split_addresses(std::string_view list);

/// All <...> tokens, brackets removed. Falls back to whitespace-separated
/// tokens when no angle brackets are present.
std::vector<std::string> message_ids(std::string_view value);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

}  // namespace vmirror::mime
