#include <doctest.h>

#include <cmath>

#include "pintconv/errors.hpp"
#include "pintconv/text.hpp"

using namespace pintconv;

TEST_CASE("format_real round-trips and spells infinity") {
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
  const double x = 0.1 + 0.2;
  CHECK(parse_real(format_real(x)) == x);
}

TEST_CASE("parse_real accepts fractions and inf") {
  CHECK(parse_real("1/512") == doctest::Approx(1.0 / 512));
  CHECK(std::isinf(parse_real("inf")));
  CHECK_THROWS_AS(parse_real("abc"), ConfigError);
}

TEST_CASE("integer lists with ranges") {
  const auto v = parse_int_list("2..4,8,16");
  CHECK(v == std::vector<int>{2, 3, 4, 8, 16});
  CHECK_THROWS_AS(parse_int_list("5..2"), ConfigError);
}

TEST_CASE("key-value parsing rejects unknown and duplicate keys") {
  const auto kv = parse_key_values("# comment\nfine = bwe\nk = 2,4 # trailing\n", {"fine", "k"});
  CHECK(kv.at("fine") == "bwe");
  CHECK(kv.at("k") == "2,4");
  CHECK_THROWS_AS(parse_key_values("bogus = 1\n", {"fine"}), ConfigError);
  CHECK_THROWS_AS(parse_key_values("fine = a\nfine = b\n", {"fine"}), ConfigError);
  CHECK_THROWS_AS(parse_key_values("no equals sign\n", {"fine"}), ConfigError);
}
