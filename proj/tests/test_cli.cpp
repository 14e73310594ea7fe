// End-to-end smoke tests of the command-line tool. The binary path comes
// from the SEGEO_BIN environment variable (set by CTest).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

std::string binary() {
  const char* bin = std::getenv("SEGEO_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "SEGEO_BIN must point at the segeo binary");
  return bin;
}

int run(const std::string& args) {
  const std::string cmd = binary() + " " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str());
}

std::vector<char> read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() / "segeo-cli-test";
    fs::create_directories(dir);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
};

}  // namespace

TEST_CASE("kernel subcommand is deterministic and self-describing") {
  TempDir tmp;
  const std::string a = (tmp.dir / "a.sgk").string();
  const std::string b = (tmp.dir / "b.sgk").string();
  const std::string flags =
      "kernel --kind fp --paths 20000 --steps 12 --seed 7 -o ";
  CHECK(run(flags + a) == 0);
  CHECK(run(flags + b) == 0);
  const auto bytes_a = read_all(a);
  CHECK(!bytes_a.empty());
  CHECK(bytes_a == read_all(b));
  // the cache file header starts with the format magic
  CHECK(std::string(bytes_a.begin(), bytes_a.begin() + 4) == "SGK1");
}

TEST_CASE("group subcommand produces identical reports for identical flags") {
  TempDir tmp;
  const std::string kernel = (tmp.dir / "fp.sgk").string();
  REQUIRE(run("kernel --kind fp --paths 50000 --steps 14 -o " + kernel) == 0);

  const std::string r1 = (tmp.dir / "r1.txt").string();
  const std::string r2 = (tmp.dir / "r2.txt").string();
  const std::string svg = (tmp.dir / "u.svg").string();
  const std::string flags =
      "group --generate fhh --angle-step 15 --stimulus-seed 1 --kernel " +
      kernel + " --render " + svg + " --out ";
  REQUIRE(run(flags + r1) == 0);
  REQUIRE(run(flags + r2) == 0);
  const auto report = read_all(r1);
  CHECK(!report.empty());
  CHECK(report == read_all(r2));
  CHECK(std::string(report.begin(), report.begin() + 5) == "unit ");
  const auto svg_bytes = read_all(svg);
  const std::string svg_text(svg_bytes.begin(), svg_bytes.end());
  CHECK(svg_text.substr(0, 5) == "<?xml");
  CHECK(svg_text.find("<svg") != std::string::npos);
}

TEST_CASE("usage errors exit nonzero") {
  CHECK(run("experiment no-such-experiment") != 0);
  CHECK(run("group") != 0);           // missing stimulus source
  CHECK(run("validate sweep") != 0);  // missing required inputs
  CHECK(run("") != 0);                // no subcommand
}
