#include "helpers.hpp"

#include "lolab/errors.hpp"
#include "lolab/report.hpp"

#include <doctest.h>

using namespace lolab;
using testing::rv;

TEST_CASE("config parsing keeps decimals exact") {
  const auto c = parse_config(R"({"dim": 2, "delta": 1.35, "vectors": [[0.1, "1"], ["3/4", -2.5]]})", true);
  CHECK(c.dim() == 2);
  CHECK(*c.delta() == Rational(27, 20));
  CHECK(c[0] == rv({"1/10", "1"}));
  CHECK(c[1] == rv({"3/4", "-5/2"}));
  CHECK(parse_config(config_to_json(c).dump(), true) == c);
}

TEST_CASE("config parsing rejects malformed input") {
  CHECK_THROWS_AS(parse_config(R"({"dim": 2, "vectors": []})"), InvalidInput);
  CHECK_THROWS_AS(parse_config(R"({"dim": 2, "vectors": [[1]]})"), InvalidInput);
  CHECK_THROWS_AS(parse_config(R"({"vectors": [[1]]})"), InvalidInput);
  CHECK_THROWS_AS(parse_config(R"({"dim": 1, "vectors": [["1/0"]]})"), InvalidInput);
  CHECK_THROWS_AS(parse_config(R"({"dim": 1, "vectors": [[0.5]]})"), InvalidInput);
}

TEST_CASE("exact probabilities round-trip through JSON") {
  const ExactProb p{(BigInt(1) << 100) + 7, 101};
  const Json j = prob_to_json(p);
  CHECK(j["num"].is_string());
  CHECK(j["log2_den"] == 101);
  CHECK(prob_from_json(parse_json_exact(j.dump())) == p);
}

TEST_CASE("digest and manifest") {
  CHECK(digest("") == "fnv1a64:cbf29ce484222325");
  CHECK(digest("a") == "fnv1a64:af63dc4c8601ec8c");
  RunManifest m;
  m.command = "exact";
  m.params = Json{{"delta", "3/2"}};
  m.input_digest = digest("x");
  m.version = tool_version();
  m.seed = 42;
  const auto back = RunManifest::from_json(m.to_json());
  CHECK(back.command == m.command);
  CHECK(back.params == m.params);
  CHECK(back.input_digest == m.input_digest);
  CHECK(back.seed == 42);
}

TEST_CASE("CSV quoting") {
  CHECK(csv_row({"a", "b,c", "d\"e"}) == "a,\"b,c\",\"d\"\"e\"\n");
}
