#pragma once

#include "lolab/core.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace lolab {

using Json = nlohmann::ordered_json;

// Parses {"dim": int, "delta": rational, "vectors": [[rational, ...], ...]}.
// Rationals are "p/q" strings, integers, or bare decimal numbers, which are
// converted exactly from their literal text. "delta" is optional.
VectorConfig parse_config(std::string_view text, bool relaxed = false);
VectorConfig read_config_file(const std::string& path, std::string* text_out = nullptr);
Json config_to_json(const VectorConfig& config);

// Parses JSON keeping every non-integer number as its literal string.
Json parse_json_exact(std::string_view text);

// Accepts a string ("p/q", decimal) or a JSON number kept as a literal string.
Rational rational_from_json(const Json& value);

Json prob_to_json(const ExactProb& p);
ExactProb prob_from_json(const Json& value);

// 64-bit FNV-1a of the bytes, as "fnv1a64:<16 hex digits>".
std::string digest(std::string_view bytes);

struct RunManifest {
  std::string command;
  Json params = Json::object();
  std::string input_digest;
  std::string version;
  std::uint64_t seed = 0;
  double duration_seconds = 0.0;

  Json to_json() const;
  static RunManifest from_json(const Json& j);
};

std::string tool_version();

// Writes text followed by a newline-terminated end, atomically enough for a
// desk tool (truncate + write). Throws InvalidInput on I/O failure.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

// Minimal CSV writer: quotes fields containing separators or quotes.
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace lolab
