#include "lolab/report.hpp"

#include "lolab/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#ifndef LOLAB_VERSION
#define LOLAB_VERSION "0.0.0"
#endif

namespace lolab {

namespace {

// SAX consumer building a Json tree in which floating literals stay strings.
class ExactBuilder {
 public:
  using number_integer_t = Json::number_integer_t;
  using number_unsigned_t = Json::number_unsigned_t;
  using number_float_t = Json::number_float_t;
  using string_t = Json::string_t;
  using binary_t = Json::binary_t;

  bool null() { return put(Json(nullptr)); }
  bool boolean(bool v) { return put(Json(v)); }
  bool number_integer(number_integer_t v) { return put(Json(v)); }
  bool number_unsigned(number_unsigned_t v) { return put(Json(v)); }
  bool number_float(number_float_t, const string_t& literal) { return put(Json(literal)); }
  bool string(string_t& v) { return put(Json(v)); }
  bool binary(binary_t&) { return put(Json(nullptr)); }

  bool start_object(std::size_t) {
    Json* slot = slot_for(Json::object());
    stack_.push_back(slot);
    return true;
  }
  bool key(string_t& k) {
    key_ = k;
    return true;
  }
  bool end_object() {
    stack_.pop_back();
    return true;
  }
  bool start_array(std::size_t) {
    Json* slot = slot_for(Json::array());
    stack_.push_back(slot);
    return true;
  }
  bool end_array() {
    stack_.pop_back();
    return true;
  }
  bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& ex) {
    throw InvalidInput("malformed JSON at byte " + std::to_string(position) + ": " + ex.what());
  }

  Json result() && { return std::move(root_); }

 private:
  Json* slot_for(Json value) {
    if (stack_.empty()) {
      root_ = std::move(value);
      return &root_;
    }
    Json& top = *stack_.back();
    if (top.is_object()) {
      top[key_] = std::move(value);
      return &top[key_];
    }
    top.push_back(std::move(value));
    return &top.back();
  }

  bool put(Json value) {
    slot_for(std::move(value));
    return true;
  }

  Json root_;
  std::vector<Json*> stack_;
  std::string key_;
};

std::size_t json_size(const Json& j, const char* what) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::size_t>(j.get<std::int64_t>());
  throw InvalidInput(std::string(what) + " must be a nonnegative integer");
}

}  // namespace

Json parse_json_exact(std::string_view text) {
  ExactBuilder builder;
  nlohmann::json::sax_parse(text.begin(), text.end(), &builder);
  return std::move(builder).result();
}

Rational rational_from_json(const Json& value) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_unsigned()) return Rational(BigInt(value.get<std::uint64_t>()));
  if (value.is_number_integer()) return Rational(BigInt(value.get<std::int64_t>()));
  if (value.is_number_float()) throw InvalidInput("floating JSON number without its literal text");
  throw InvalidInput("expected a rational number, got " + value.dump());
}

VectorConfig parse_config(std::string_view text, bool relaxed) {
  const Json doc = parse_json_exact(text);
  if (!doc.is_object()) throw InvalidInput("configuration must be a JSON object");
  if (!doc.contains("dim")) throw InvalidInput("configuration lacks \"dim\"");
  if (!doc.contains("vectors")) throw InvalidInput("configuration lacks \"vectors\"");
  const std::size_t dim = json_size(doc["dim"], "dim");
  const Json& vs = doc["vectors"];
  if (!vs.is_array()) throw InvalidInput("\"vectors\" must be an array");
  if (vs.empty()) throw InvalidInput("\"vectors\" is empty");
  std::vector<RationalVector> vectors;
  for (const auto& v : vs) {
    if (!v.is_array()) throw InvalidInput("every vector must be an array of coordinates");
    RationalVector row;
    for (const auto& c : v) row.push_back(rational_from_json(c));
    vectors.push_back(std::move(row));
  }
  std::optional<Rational> delta;
  if (doc.contains("delta") && !doc["delta"].is_null()) delta = rational_from_json(doc["delta"]);
  return VectorConfig::make(dim, std::move(vectors), std::move(delta), relaxed);
}

VectorConfig read_config_file(const std::string& path, std::string* text_out) {
  std::string text = read_text_file(path);
  VectorConfig config = parse_config(text);
  if (text_out) *text_out = std::move(text);
  return config;
}

Json config_to_json(const VectorConfig& config) {
  Json j = Json::object();
  j["dim"] = config.dim();
  if (config.delta()) j["delta"] = to_string(*config.delta());
  Json vs = Json::array();
  for (const auto& v : config.vectors()) {
    Json row = Json::array();
    for (const auto& c : v) row.push_back(to_string(c));
    vs.push_back(std::move(row));
  }
  j["vectors"] = std::move(vs);
  return j;
}

Json prob_to_json(const ExactProb& p) {
  Json j = Json::object();
  j["num"] = p.numerator.str();
  j["log2_den"] = p.log2_den;
  return j;
}

ExactProb prob_from_json(const Json& value) {
  if (!value.is_object() || !value.contains("num") || !value.contains("log2_den")) {
    throw InvalidInput("exact probability must be {\"num\", \"log2_den\"}");
  }
  const Json& num = value["num"];
  BigInt n;
  try {
    n = BigInt(num.is_string() ? num.get<std::string>() : num.dump());
  } catch (const std::exception&) {
    throw InvalidInput("bad probability numerator " + num.dump());
  }
  const auto k = json_size(value["log2_den"], "log2_den");
  if (k > 4096) throw InvalidInput("log2_den out of range");
  return ExactProb::from_count(n, static_cast<std::uint32_t>(k));
}

std::string digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json RunManifest::to_json() const {
  Json j = Json::object();
  j["command"] = command;
  j["params"] = params;
  j["input_digest"] = input_digest;
  j["version"] = version;
  j["seed"] = seed;
  j["duration_seconds"] = duration_seconds;
  return j;
}

RunManifest RunManifest::from_json(const Json& j) {
  if (!j.is_object() || !j.contains("command") || !j.contains("params")) {
    throw InvalidInput("report lacks a run manifest");
  }
  RunManifest m;
  m.command = j["command"].get<std::string>();
  m.params = j["params"];
  m.input_digest = j.value("input_digest", "");
  m.version = j.value("version", "");
  m.seed = j.value("seed", std::uint64_t{0});
  m.duration_seconds = j.value("duration_seconds", 0.0);
  return m;
}

std::string tool_version() { return LOLAB_VERSION; }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
  if (!out) throw InvalidInput("failed writing " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) row += ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n") == std::string::npos) {
      row += f;
      continue;
    }
    row += '"';
    for (char c : f) {
      if (c == '"') row += '"';
      row += c;
    }
    row += '"';
  }
  return row + '\n';
}

}  // namespace lolab
