#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "cylbem/errors.hpp"
#include "cylbem/io.hpp"

using namespace cylbem;
using namespace cylbem::io;
namespace fs = std::filesystem;

TEST_CASE("doubles round-trip through text") {
  for (const double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 5e-324}) {
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("csv quoting round trip") {
  std::stringstream s;
  CsvWriter w(s);
  w.header({"name", "value"});
  w << "plain" << 1.5;
  w.end_row();
  w << "has,comma \"quoted\"" << -3;
  w.end_row();
  const auto t = read_csv(s);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.header == std::vector<std::string>{"name", "value"});
  CHECK(t.rows[1][0] == "has,comma \"quoted\"");
  CHECK(t.rows[1][t.column("value")] == "-3");
  CHECK_THROWS_AS(t.column("missing"), UsageError);
  CHECK(csv_field("a\"b") == "\"a\"\"b\"");
  CHECK(csv_field("ab") == "ab");
}

TEST_CASE("config parsing") {
  std::istringstream ok("# comment\nka = 12.5\n\n  ops=S,D  # trailing\n");
  const auto m = parse_config(ok);
  CHECK(m.at("ka") == "12.5");
  CHECK(m.at("ops") == "S,D");
  std::istringstream bad("ka = 1\nnot a pair\n");
  try {
    parse_config(bad);
    FAIL("expected UsageError");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}

TEST_CASE("bessel reference round trip keeps huge exponents") {
  BesselReference r;
  r.q = 900;
  r.z = {3.5, -0.25};
  r.j = ScaledComplex({0.6, -0.1}, -4000);
  r.h2 = ScaledComplex({-0.3, 0.7}, 3900);
  std::stringstream s;
  write_bessel_reference(s, {r});
  const auto back = read_bessel_reference(s);
  REQUIRE(back.size() == 1);
  CHECK(back[0].q == 900);
  CHECK(back[0].z == r.z);
  CHECK(back[0].j.exp2() == r.j.exp2());
  CHECK(back[0].j.mantissa() == r.j.mantissa());
  CHECK(back[0].h2.mantissa() == r.h2.mantissa());
}

TEST_CASE("atomic file") {
  const fs::path dir = fs::temp_directory_path() / "cylbem_io_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    AtomicFile f(dir / "kept.txt");
    f.stream() << "x";
    f.commit();
  }
  {
    AtomicFile f(dir / "dropped.txt");
    f.stream() << "y";
  }
  CHECK(fs::exists(dir / "kept.txt"));
  CHECK_FALSE(fs::exists(dir / "dropped.txt"));
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  fs::remove_all(dir);
}
