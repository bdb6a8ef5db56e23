#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "shadowseg/image_io.hpp"
#include "support/oracles.hpp"
#include "support/scenes.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell with stderr folded into the captured text.
Result cli(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + " '" SHADOWSEG_CLI_PATH "' " + args + " 2>&1";
  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("command-line interface") {
  oracle::TempDir dir("cli");
  const fs::path root = dir.path();
  scenes::BandScene::write(root, 4);
  const std::string data = "-i " + q(root / "frames") + " --gt-cast " + q(root / "gt_cast") +
                           " --gt-self " + q(root / "gt_self") + " -t 5";

  SUBCASE("help and version") {
    CHECK(cli("--help").code == 0);
    const Result v = cli("--version");
    CHECK(v.code == 0);
    CHECK(v.out.find("1.0.0") != std::string::npos);
  }

  SUBCASE("run with designed intervals reports F = 1") {
    const Result r = cli("run " + data + " --intervals 100,140,560,640 -o " + q(root / "out"));
    CHECK(r.code == 0);
    CHECK(r.out.find("frames\t1.000000\t1.000000\n") != std::string::npos);
    CHECK(fs::exists(root / "out" / "in000004.dualmap.png"));
    CHECK(fs::exists(root / "out" / "report.txt"));

    const Result e = cli("eval " + data + " --predictions " + q(root / "out"));
    CHECK(e.code == 0);
    CHECK(e.out.find("frames\t1.000000\t1.000000\n") != std::string::npos);
  }

  SUBCASE("calibrate writes a config that run accepts") {
    const fs::path cfg = root / "bands.cfg";
    const Result c = cli("calibrate " + data + " -p 0.000001 -w " + q(cfg));
    CHECK(c.code == 0);
    CHECK(c.out.starts_with("cast_min = "));
    const Result r = cli("run -c " + q(cfg) + " " + data + " -o " + q(root / "cal"));
    CHECK(r.code == 0);
    CHECK(r.out.find("frames\t1.000000\t1.000000\n") != std::string::npos);
  }

  SUBCASE("sweep prints a ranked table") {
    const Result s = cli("sweep " + data + " --thresholds 5,60 --candidate 0,50,60,70" +
                         " --candidate 100,140,560,640");
    CHECK(s.code == 0);
    CHECK(s.out.find("1\t5\t100\t140\t560\t640\t1.000000\t1.000000\t1.000000\n") !=
          std::string::npos);
  }

  SUBCASE("output directory from the environment") {
    const fs::path env_out = root / "env_out";
    const Result r = cli("run -i " + q(root / "frames") + " --emit-dualmap false",
                         "SHADOWSEG_OUTPUT_DIR=" + q(env_out));
    CHECK(r.code == 0);
    CHECK(fs::exists(env_out / "in000002.motion.png"));
    CHECK_FALSE(fs::exists(env_out / "in000002.dualmap.png"));
  }

  SUBCASE("usage errors exit 2") {
    CHECK(cli("").code == 2);
    CHECK(cli("frobnicate").code == 2);
    CHECK(cli("run --no-such-flag").code == 2);
    const Result missing_input = cli("run -o " + q(root / "x"));
    CHECK(missing_input.code == 2);
    CHECK(missing_input.out.find("usage error") != std::string::npos);
    CHECK(cli("run " + data + " --threshold=-1").code == 2);
    CHECK(cli("run " + data + " --cast-min 5").code == 2);
    CHECK(cli("run " + data + " --intervals 1,2,3").code == 2);
    CHECK(cli("run " + data + " -p 50 --calibrate").code == 2);
    CHECK(cli("sweep -i " + q(root / "frames") + " --candidate 1,2,3,4").code == 2);
    CHECK(cli("eval " + data).code == 2);
  }

  SUBCASE("runtime errors exit 1") {
    const Result r = cli("run -i " + q(root / "absent") + " -o " + q(root / "y"));
    CHECK(r.code == 1);
    CHECK(r.out.find("io error") != std::string::npos);
    std::ofstream(root / "frames" / "in000009.png") << "broken";
    CHECK(cli("run -i " + q(root / "frames") + " -o " + q(root / "z")).code == 1);
  }
}
