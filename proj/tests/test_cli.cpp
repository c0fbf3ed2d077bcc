#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "test_helpers.hpp"

namespace {

const char* kCli = MGPD_CLI_PATH;

struct Workdir {
  std::string root;
  Workdir() {
    char tmpl[] = "/tmp/mgpd_cli_XXXXXX";
    root = mkdtemp(tmpl);
  }
  std::string operator/(const std::string& name) const { return root + "/" + name; }
};

int run(const std::string& args, std::string* out = nullptr) {
  const std::string cmd = std::string(kCli) + " " + args + " >/tmp/mgpd_cli_out.txt 2>&1";
  const int status = std::system(cmd.c_str());
  if (out) {
    std::ifstream is("/tmp/mgpd_cli_out.txt");
    std::ostringstream os;
    os << is.rdbuf();
    *out = os.str();
  }
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  os << text;
}

const char* kLogisticModel =
    R"({"type":"gp","sigma":[1,1],"gamma":[0,0],"tau":[1,1],)"
    R"("stdf":{"variant":"logistic","dim":2,"params":{"theta":0.5}}})";

}  // namespace

TEST_CASE("simulate is reproducible from the seed") {
  Workdir wd;
  write(wd / "m.json", kLogisticModel);
  const std::string base = "simulate --model " + (wd / "m.json") + " --n 200 ";
  CHECK(run(base + "--seed 7 --out " + (wd / "a.csv")) == 0);
  CHECK(run(base + "--seed 7 --out " + (wd / "b.csv")) == 0);
  CHECK(run(base + "--seed 8 --out " + (wd / "c.csv")) == 0);
  CHECK(slurp(wd / "a.csv") == slurp(wd / "b.csv"));
  CHECK(slurp(wd / "a.csv") != slurp(wd / "c.csv"));

  // The sidecar alone reproduces the batch.
  const std::string sidecar = slurp(wd / "a.json");
  CHECK(sidecar.find("\"seed\": 7") != std::string::npos);
  CHECK(sidecar.find("\"representation\"") != std::string::npos);
}

TEST_CASE("simulate with n = 0 emits a header-only csv") {
  Workdir wd;
  write(wd / "m.json", kLogisticModel);
  CHECK(run("simulate --model " + (wd / "m.json") + " --n 0 --seed 1 --out " + (wd / "e.csv")) ==
        0);
  CHECK(slurp(wd / "e.csv") == "x1,x2\n");
}

TEST_CASE("seed is required for simulation") {
  Workdir wd;
  write(wd / "m.json", kLogisticModel);
  CHECK(run("simulate --model " + (wd / "m.json") + " --n 10 --out " + (wd / "x.csv")) == 2);
}

TEST_CASE("excess selects and shifts the exceeding rows") {
  Workdir wd;
  write(wd / "in.csv", "x1,x2\n2,0\n0.5,0.5\n0,3\n");
  std::string out;
  CHECK(run("excess --in " + (wd / "in.csv") + " --thresholds 1,1 --out " + (wd / "out.csv"),
            &out) == 0);
  CHECK(out.find("kept 2 of 3") != std::string::npos);
  CHECK(slurp(wd / "out.csv") == "x1,x2\n1,-1\n-1,2\n");

  // A -inf threshold admits every row.
  CHECK(run("excess --in " + (wd / "in.csv") + " --thresholds -inf,-inf --out " +
            (wd / "all.csv"), &out) == 0);
  CHECK(out.find("kept 3 of 3") != std::string::npos);

  // All rows below the threshold: header-only output.
  CHECK(run("excess --in " + (wd / "in.csv") + " --thresholds 10,10 --out " + (wd / "none.csv"),
            &out) == 0);
  CHECK(slurp(wd / "none.csv") == "x1,x2\n");
}

TEST_CASE("eval") {
  Workdir wd;
  write(wd / "m.json", kLogisticModel);
  std::string out;
  CHECK(run("eval --model " + (wd / "m.json") + " --x 0,0", &out) == 0);
  CHECK(out.find("\"cdf\":0.0") != std::string::npos);
  CHECK(run("eval --model " + (wd / "m.json") + " --x 0,0 --survival", &out) == 0);
  CHECK(out.find("\"survival\":1.0") != std::string::npos);
}

TEST_CASE("domain and usage failures map to distinct exit codes") {
  Workdir wd;
  write(wd / "m.json", kLogisticModel);
  write(wd / "bad.json", R"({"type":"gp","sigma":[1,1]})");
  std::string out;
  // Missing fields in the model: domain/model error.
  CHECK(run("eval --model " + (wd / "bad.json") + " --x 0,0", &out) == 3);
  // Unknown option: usage error.
  CHECK(run("eval --bogus 1", &out) == 2);
  // Dimension mismatch in x.
  CHECK(run("eval --model " + (wd / "m.json") + " --x 0,0,0", &out) == 3);
}

TEST_CASE("convert round trip preserves the excess law") {
  Workdir wd;
  write(wd / "g.json",
        R"({"type":"gev","mu":[0,0],"gamma":[1,1],"alpha":[1,1],)"
        R"("stdf":{"variant":"logistic","dim":2,"params":{"theta":0.5}}})");
  std::string out;
  CHECK(run("convert --in " + (wd / "g.json") + " --out " + (wd / "h.json")) == 0);
  const std::string gp_text = slurp(wd / "h.json");
  CHECK(gp_text.find("\"type\":\"gp\"") != std::string::npos);

  // In-process oracle: the converted cdf agrees with the library conversion.
  const mgpd::GevParams g = mgpd::gev_from_json(slurp(wd / "g.json"));
  const mgpd::GpParams expected = mgpd::gev_to_gp(g);
  const mgpd::GpParams converted = mgpd::gp_from_json(gp_text);
  for (const mgpd::Vec& x : {mgpd::Vec{0.5, 0.5}, mgpd::Vec{2.0, -0.3}}) {
    CHECK(mgpd::gp_cdf(converted, x) ==
          doctest::Approx(mgpd::gp_cdf(expected, x)).epsilon(1e-12));
  }

  // And back: gp -> gev -> gp is the identity on the excess law.
  CHECK(run("convert --in " + (wd / "h.json") + " --out " + (wd / "g2.json")) == 0);
  CHECK(run("convert --in " + (wd / "g2.json") + " --out " + (wd / "h2.json")) == 0);
  const mgpd::GpParams twice = mgpd::gp_from_json(slurp(wd / "h2.json"));
  CHECK(mgpd::gp_cdf(twice, mgpd::Vec{0.5, 0.5}) ==
        doctest::Approx(mgpd::gp_cdf(expected, mgpd::Vec{0.5, 0.5})).epsilon(1e-10));
}

TEST_CASE("fit recovers univariate parameters through the cli") {
  Workdir wd;
  write(wd / "m.json",
        R"({"type":"gp","sigma":[1],"gamma":[0.2],"tau":[1],)"
        R"("stdf":{"variant":"independence","dim":1}})");
  CHECK(run("simulate --model " + (wd / "m.json") + " --n 4000 --seed 3 --out " +
            (wd / "d.csv")) == 0);
  std::string out;
  CHECK(run("fit --family univariate_gp --in " + (wd / "d.csv") + " --init 0.5,0.0", &out) == 0);
  const auto sigma_pos = out.find("\"sigma\": ");
  REQUIRE(sigma_pos != std::string::npos);
  const double sigma = std::stod(out.substr(sigma_pos + 9));
  CHECK(std::abs(sigma - 1.0) <= 0.15);
  CHECK(out.find("\"converged\": true") != std::string::npos);
}

TEST_CASE("diagnose reports a flat scaling ratio on simulated data") {
  Workdir wd;
  write(wd / "m.json", kLogisticModel);
  CHECK(run("simulate --model " + (wd / "m.json") + " --n 200000 --seed 5 --out " +
            (wd / "d.csv")) == 0);
  std::string out;
  CHECK(run("diagnose --model " + (wd / "m.json") + " --in " + (wd / "d.csv") + " --p 0.05,0.1",
            &out) == 0);
  std::istringstream lines(out);
  std::string line;
  int passes = 0;
  while (std::getline(lines, line)) {
    if (line.find("\"pass\":true") != std::string::npos) ++passes;
  }
  CHECK(passes == 4);
}
