#include <atomic>
#include <numbers>
#include <sstream>

#include "levydec/grid.hpp"
#include "levydec/table_io.hpp"
#include "support.hpp"

using namespace levydec;
using testing_support::error_code;

TEST_SUITE("grid") {
  TEST_CASE("separation grid validation") {
    CHECK(error_code([] { SeparationGrid({1.0, 1.0}); }) == ErrorCode::InvalidArgument);
    CHECK(error_code([] { SeparationGrid(std::vector<double>{}); }) == ErrorCode::InvalidArgument);
    const auto g = SeparationGrid::uniform(-5.0, 5.0, 101);
    CHECK(g.size() == 101);
    CHECK(g.is_symmetric());
    REQUIRE(g.index_of(0.0).has_value());
    CHECK(g[*g.index_of(0.0)] == 0.0);
    CHECK(g.front() == -5.0);
    CHECK(g.back() == 5.0);
    CHECK_FALSE(SeparationGrid({0.0, 1.0, 2.0}).is_symmetric());
  }

  TEST_CASE("uniform grid pair reciprocity") {
    const UniformGridPair pair(-3.0, 0.01, 1024, 0.5);
    CHECK(pair.ds() == doctest::Approx(2.0 * std::numbers::pi * 0.5 / (1024 * 0.01)).epsilon(1e-15));
    CHECK(pair.s(pair.zero_index()) == 0.0);
    CHECK(pair.q(0) == -3.0);
    const auto c = UniformGridPair::covering(-3.0, 5.0, 1 << 10);
    CHECK(c.dq() == doctest::Approx(8.0 / 1024));
    CHECK(error_code([] { UniformGridPair(0.0, 0.1, 1000); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("parallel_for independent of worker count") {
    std::vector<double> a(1000), b(1000);
    parallel_for(a.size(), 1, [&](std::size_t i) { a[i] = std::sin(static_cast<double>(i)); });
    parallel_for(b.size(), 5, [&](std::size_t i) { b[i] = std::sin(static_cast<double>(i)); });
    CHECK(a == b);
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw std::runtime_error("x"); }),
                    std::runtime_error);
  }
}

TEST_SUITE("table_io") {
  TEST_CASE("parses comments and blank lines") {
    std::istringstream in("# header\n\n0 1\n  # indented comment\n1.5 2e-3\n2 0\n");
    const Table t = parse_table(in);
    CHECK(t.x == std::vector<double>{0.0, 1.5, 2.0});
    CHECK(t.y == std::vector<double>{1.0, 2e-3, 0.0});
  }

  TEST_CASE("rejects malformed tables") {
    auto parse = [](const char* text) {
      std::istringstream in(text);
      return parse_table(in);
    };
    CHECK(error_code([&] { parse("0 1\n0 2\n"); }) == ErrorCode::ParseError);
    CHECK(error_code([&] { parse("0 1 3\n"); }) == ErrorCode::ParseError);
    CHECK(error_code([&] { parse("0 abc\n"); }) == ErrorCode::ParseError);
    CHECK(error_code([&] { parse("# only comments\n"); }) == ErrorCode::ParseError);
    CHECK(error_code([] { read_table("/nonexistent/table.txt"); }) == ErrorCode::ParseError);
  }
}
