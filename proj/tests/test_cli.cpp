#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string binary() {
  const char* bin = std::getenv("SPONGELAB_BIN");
  REQUIRE(bin != nullptr);
  return bin;
}

int run(const std::string& args, const std::string& out_file = "") {
  std::string cmd = binary() + " " + args;
  if (!out_file.empty()) cmd += " > " + out_file + " 2>/dev/null";
  else cmd += " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string strip_timestamp(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line))
    if (line.find("generated_at") == std::string::npos) out << line << "\n";
  return out.str();
}

}  // namespace

TEST_CASE("verify exits zero on the exhaustive suite") {
  CHECK(run("verify --r 1 --c 1 --seed 3") == 0);
  CHECK(run("verify --r 2 --c 3 --seed 3") == 0);
}

TEST_CASE("invalid regime is a usage error naming the constraint") {
  std::string path = "/tmp/spongelab_cli_err.txt";
  std::string cmd = binary() + " verify --r 3 --c 2 2> " + path + " > /dev/null";
  int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 2);
  CHECK(read_file(path).find("r <= c") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("census reports the (1,1) coset structure") {
  std::string path = "/tmp/spongelab_census.json";
  CHECK(run("coset-census --r 1 --c 1 --out " + path) == 0);
  std::string text = read_file(path);
  CHECK(text.find("\"group_order\": 24") != std::string::npos);
  // sizes {8, 8, 4, 4}
  size_t eights = 0, fours = 0, pos = 0;
  while ((pos = text.find("\"size\": 8", pos)) != std::string::npos) ++eights, pos += 8;
  pos = 0;
  while ((pos = text.find("\"size\": 4", pos)) != std::string::npos) ++fours, pos += 8;
  CHECK(eights == 2);
  CHECK(fours == 2);
  std::remove(path.c_str());
}

TEST_CASE("reports are byte-identical modulo the timestamp line") {
  std::string a = "/tmp/spongelab_rep_a.json", b = "/tmp/spongelab_rep_b.json";
  std::string args = "indiff --r 1 --c 2 --trials 300 --seed 9 --out ";
  CHECK(run(args + a) == 0);
  CHECK(run(args + b) == 0);
  CHECK(strip_timestamp(read_file(a)) == strip_timestamp(read_file(b)));
  CHECK(read_file(a).find("generated_at") != std::string::npos);
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("reports do not depend on the worker count") {
  std::string a = "/tmp/spongelab_thr_a.json", b = "/tmp/spongelab_thr_b.json";
  std::string args = "tradeoff --r 6 --c 6 --cell 8,4,2 --instances 4 --trials 400 "
                     "--seed 5 --out ";
  std::string one = "SPONGELAB_THREADS=1 " + binary() + " " + args + a + " > /dev/null";
  std::string four = "SPONGELAB_THREADS=4 " + binary() + " " + args + b + " > /dev/null";
  CHECK(WEXITSTATUS(std::system(one.c_str())) == 0);
  CHECK(WEXITSTATUS(std::system(four.c_str())) == 0);
  CHECK(strip_timestamp(read_file(a)) == strip_timestamp(read_file(b)));
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("csv format carries the schema and isolated header") {
  std::string path = "/tmp/spongelab_trunc.csv";
  CHECK(run("truncation-curve --n 12 --m 6 --q 0 --q 64 --trials 400 --format csv --out " +
            path) == 0);
  std::string text = read_file(path);
  CHECK(text.rfind("# generated_at=", 0) == 0);
  CHECK(text.find("q,advantage,sigma") != std::string::npos);
  CHECK(text.find("\n0,0,") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("declarative config files drive experiments") {
  std::string cfg_path = "/tmp/spongelab_cfg.json";
  std::string out_path = "/tmp/spongelab_cfg_out.json";
  {
    std::ofstream cfg(cfg_path);
    cfg << R"({"experiment":"separation","n":10,"trials":500,"seed":4,"out":")" << out_path
        << R"("})";
  }
  CHECK(run("--config " + cfg_path) == 0);
  std::string text = read_file(out_path);
  CHECK(text.find("\"rate\": 1.0") != std::string::npos);  // trapdoor world wins always
  std::remove(cfg_path.c_str());
  std::remove(out_path.c_str());
}

TEST_CASE("remove-sr reports one advice bit and exact reproduction") {
  std::string path = "/tmp/spongelab_rmsr.json";
  CHECK(run("remove-sr --r 1 --c 1 --out " + path) == 0);
  std::string text = read_file(path);
  CHECK(text.find("\"extra_advice_bits\": 1") != std::string::npos);
  CHECK(text.find("\"reproduces_exactly\": true") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("unknown and missing subcommands fail with usage help") {
  CHECK(run("no-such-thing") != 0);
  CHECK(run("") != 0);
}
