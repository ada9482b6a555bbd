#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "cliquenet/message.hpp"

using namespace cliquenet;

TEST_CASE("messages sort their entries and validate structure") {
  SparseMessage m({{9, 3}, {2, 7}, {5, 0}});
  REQUIRE(m.order() == 3);
  REQUIRE(m.entries()[0] == Entry{2, 7});
  REQUIRE(m.entries()[1] == Entry{5, 0});
  REQUIRE(m.entries()[2] == Entry{9, 3});

  REQUIRE_THROWS_AS(SparseMessage({{1, 0}}), std::invalid_argument);
  REQUIRE_THROWS_AS(SparseMessage({}), std::invalid_argument);
  // one fanal per cluster, never two
  REQUIRE_THROWS_AS(SparseMessage({{4, 0}, {4, 1}}), std::invalid_argument);
  REQUIRE_THROWS_AS(SparseMessage({{4, 2}, {4, 2}}), std::invalid_argument);
}

TEST_CASE("contiguity and bounds checks") {
  REQUIRE(SparseMessage({{3, 0}, {4, 9}, {5, 2}}).contiguous());
  REQUIRE_FALSE(SparseMessage({{3, 0}, {5, 2}}).contiguous());

  Topology t(8, 16);
  REQUIRE(SparseMessage({{0, 0}, {7, 15}}).fits(t));
  REQUIRE_FALSE(SparseMessage({{0, 0}, {8, 0}}).fits(t));   // cluster out of range
  REQUIRE_FALSE(SparseMessage({{0, 16}, {7, 0}}).fits(t));  // fanal out of range
}

TEST_CASE("order profiles") {
  OrderProfile c = OrderProfile::constant(12);
  REQUIRE(c.is_constant());
  REQUIRE(c.min_order() == 12);
  REQUIRE(c.spread() == 1);

  OrderProfile r = OrderProfile::uniform_range(6, 18);
  REQUIRE_FALSE(r.is_constant());
  REQUIRE(r.spread() == 13);

  REQUIRE_THROWS_AS(OrderProfile::constant(1), std::invalid_argument);
  REQUIRE_THROWS_AS(OrderProfile::uniform_range(8, 7), std::invalid_argument);
}

TEST_CASE("text format round trip") {
  SparseMessage m({{3, 17}, {9, 0}, {41, 63}});
  REQUIRE(format_message(m) == "3:17,9:0,41:63");
  REQUIRE(parse_message("3:17,9:0,41:63") == m);
  // parser tolerates unsorted input; the message sorts itself
  REQUIRE(parse_message("41:63,3:17,9:0") == m);
}

TEST_CASE("parser rejects malformed text") {
  REQUIRE_THROWS_AS(parse_message(""), FormatError);
  REQUIRE_THROWS_AS(parse_message("3:17,"), FormatError);
  REQUIRE_THROWS_AS(parse_message("317"), FormatError);
  REQUIRE_THROWS_AS(parse_message("3:17,9"), FormatError);
  REQUIRE_THROWS_AS(parse_message("3:x"), FormatError);
  REQUIRE_THROWS_AS(parse_message("-3:17,9:0"), FormatError);
  REQUIRE_THROWS_AS(parse_message("3:17"), FormatError);        // order 1
  REQUIRE_THROWS_AS(parse_message("3:17,3:18"), FormatError);   // duplicate cluster
}

TEST_CASE("message files skip comments and blank lines") {
  std::istringstream in(
      "# header comment\n"
      "\n"
      "0:1,1:2\n"
      "  2:3,4:5  \n"
      "#trailing\n");
  auto messages = read_messages(in);
  REQUIRE(messages.size() == 2);
  REQUIRE(messages[0] == parse_message("0:1,1:2"));
  REQUIRE(messages[1] == parse_message("2:3,4:5"));

  std::ostringstream out;
  write_messages(out, messages);
  REQUIRE(out.str() == "0:1,1:2\n2:3,4:5\n");
}

TEST_CASE("message file errors carry the line number") {
  std::istringstream in("0:1,1:2\nbroken\n");
  try {
    read_messages(in);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    REQUIRE(std::string(e.what()).find("line 2") != std::string::npos);
  }
}
