#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "orbitfisher/cli.hpp"
#include "support.hpp"

using namespace orbitfisher;
using namespace orbitfisher::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "orbitfisher_cli_XXXXXX").string();
    path = mkdtemp(tmpl.data());
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    const fs::path p = path / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string at(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string state_json(const ComplexMatrix& m) { return matrix_to_json(m).dump(); }

std::vector<std::string> csv_rows(const std::string& text) {
  std::vector<std::string> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  return rows;
}

}  // namespace

TEST_CASE("classify report") {
  TempDir d;
  const auto rho = d.file("rho.json", state_json(tst::diagm({0.5, 0.3, 0.2})));
  const Result r = call({"classify", "--input", rho});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["command"] == "classify");
  CHECK(j["payload"]["partition"] == Json({1, 1, 1}));
  CHECK(j["payload"]["orbit_dim"] == 6);
  CHECK(j["input_digest"] == sha256_hex(slurp(rho)));
  CHECK(j["input_digest"].get<std::string>().size() == 64);
}

TEST_CASE("digest") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("validation errors exit 2") {
  TempDir d;
  const std::string missing = d.at("absent.json");
  const Result r = call({"classify", "--input", missing});
  CHECK(r.code == 2);
  CHECK(r.err.find(missing) != std::string::npos);

  CHECK(call({"classify", "--input", d.file("bad.json", "{\"n\": 2, \"re\": [[1, 0]")}).code == 2);
  CHECK(call({"classify", "--input", d.file("ragged.json", R"({"n": 2, "re": [[1, 0], [0]], "im": [[0, 0], [0, 0]]})")}).code == 2);
  CHECK(call({"classify", "--input", d.file("nums.json", R"({"n": 2, "re": [[1, "x"], [0, 0]], "im": [[0, 0], [0, 0]]})")}).code == 2);
  // Not Hermitian: rejected, never symmetrized.
  const Result nh = call({"classify", "--input", d.file("nh.json", R"({"n": 2, "re": [[0.5, 0.1], [0, 0.5]], "im": [[0, 0], [0, 0]]})")});
  CHECK(nh.code == 2);
  CHECK(nh.err.find("Hermitian") != std::string::npos);
  CHECK(call({"classify", "--input", d.file("trace.json", state_json(tst::diagm({0.5, 0.3})))}).code == 2);
  CHECK(call({"classify", "--input", d.file("array.json", "[1, 2, 3]")}).code == 2);
  CHECK(call({"u3-closed-form", "--kappa", "0.4,0.4,0.2"}).code == 2);
}

TEST_CASE("usage errors exit 64") {
  CHECK(call({}).code == 64);
  CHECK(call({"nonsense"}).code == 64);
  CHECK(call({"classify"}).code == 64);
  CHECK(call({"classify", "--input", "x", "--format", "xml"}).code == 64);
  CHECK(call({"u3-closed-form", "--kappa", "a,b,c"}).code == 64);
  CHECK(call({"u3-closed-form", "--kappa", "0.5,0.3,0.2", "--tol", "-1"}).code == 64);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("u3 closed form command") {
  const Result r = call({"u3-closed-form", "--kappa", "0.5,0.3,0.2"});
  REQUIRE(r.code == 0);
  const Json p = Json::parse(r.out)["payload"]["pairs"];
  const double sym[] = {0.2, 0.5142857143, 0.08};
  for (int i = 0; i < 3; ++i) CHECK(p[i]["sym"].get<double>() == doctest::Approx(sym[i]).epsilon(1e-9));
  CHECK(p[0]["i"] == 1);
  CHECK(p[0]["j"] == 2);
}

TEST_CASE("sld, kks, fisher and bures commands") {
  TempDir d;
  const auto rho = d.file("rho.json", state_json(tst::diagm({0.5, 0.3, 0.2})));
  const auto tan = d.file("v.json", state_json(tst::unit(3, 0, 2) + tst::unit(3, 2, 0)));
  const Result s = call({"sld", "--input", rho, "--tangent", tan});
  REQUIRE(s.code == 0);
  const ComplexMatrix l = matrix_from_json(Json::parse(s.out)["payload"]["sld"], "sld");
  CHECK(tst::dist(l, (2.0 / 0.7) * (tst::unit(3, 0, 2) + tst::unit(3, 2, 0))) < 1e-14);

  const auto bad = d.file("w.json", state_json(tst::unit(3, 1, 1)));
  CHECK(call({"sld", "--input", rho, "--tangent", bad}).code == 2);

  const Result k = call({"kks", "--input", rho});
  REQUIRE(k.code == 0);
  CHECK(Json::parse(k.out)["payload"]["kks"].size() == 6);

  const Result f = call({"fisher", "--input", rho});
  REQUIRE(f.code == 0);
  const Json fp = Json::parse(f.out)["payload"];
  CHECK(fp["pullback"]["pass"] == true);
  CHECK(fp["dim"] == 6);

  const Result b = call({"bures", "--input", rho});
  REQUIRE(b.code == 0);
  const Json bp = Json::parse(b.out)["payload"];
  CHECK(bp["bures"][0][0].get<double>() == doctest::Approx(fp["fisher_sym"][0][0].get<double>() / 4.0));
}

TEST_CASE("curve commands") {
  TempDir d;
  const Json bern{{"kind", "eigenvalue_path"},
                  {"kappa0", {0.0, 1.0}},
                  {"dkappa", {1.0, -1.0}},
                  {"unitary", matrix_to_json(ComplexMatrix::Identity(2, 2))}};
  const auto path = d.file("bern.json", bern.dump());
  const Result f = call({"curve-fisher", "--input", path, "--theta", "0.75"});
  REQUIRE(f.code == 0);
  CHECK(Json::parse(f.out)["payload"]["fisher_index"].get<double>() == doctest::Approx(16.0 / 3.0).epsilon(1e-8));
  const Result b = call({"bures", "--input", path, "--theta", "0.75"});
  REQUIRE(b.code == 0);
  CHECK(Json::parse(b.out)["payload"]["bures_full"].get<double>() == doctest::Approx(4.0 / 3.0).epsilon(1e-8));

  const Json rot{{"kind", "unitary_rotation"},
                 {"generator", matrix_to_json(0.5 * tst::sy())},
                 {"base", matrix_to_json(tst::diagm({0.75, 0.25}))}};
  const Result q = call({"curve-fisher", "--input", d.file("rot.json", rot.dump())});
  REQUIRE(q.code == 0);
  CHECK(Json::parse(q.out)["payload"]["fisher_index"].get<double>() == doctest::Approx(0.25).epsilon(1e-8));

  CHECK(call({"curve-fisher", "--input", path, "--theta", "0.99999"}).code == 2);  // leaves the stratum
  CHECK(call({"curve-fisher", "--input", d.file("k.json", R"({"kind": "spiral"})")}).code == 2);
  CHECK(call({"curve-fisher", "--input", path, "--h", "0"}).code == 64);
}

TEST_CASE("fibration check command") {
  TempDir d;
  const Json nest{{"n", 3}, {"pairs", {{{1, 1, 1}, {1, 2}}, {{1, 2}, {2, 1}}}}};
  const auto out = d.at("nest.json");
  const Result r = call({"fibration-check", "--input", d.file("nest_in.json", nest.dump()), "--output", out});
  CHECK(r.code == 2);  // second pair violates refinement; report still written
  const Json j = Json::parse(slurp(out));
  CHECK(j["payload"]["nesting"][0]["total_dim"] == 6);
  CHECK(j["payload"]["nesting"][0]["base_dim"] == 4);
  CHECK(j["payload"]["nesting"][0]["fibre_dim"] == 2);
  CHECK(j["payload"]["nesting"][1]["ok"] == false);

  const Json split{{"eta0", matrix_to_json(tst::diagm({0.5, 0.3, 0.2}))}, {"xi0", matrix_to_json(tst::diagm({1, 0, 0}))}};
  const Result s = call({"fibration-check", "--input", d.file("split.json", split.dump())});
  REQUIRE(s.code == 0);
  CHECK(Json::parse(s.out)["payload"]["split"]["dim_vertical"] == 2);

  const Json wrong{{"eta0", matrix_to_json(tst::diagm({1, 0, 0}))}, {"xi0", matrix_to_json(tst::diagm({0.5, 0.3, 0.2}))}};
  const Result w = call({"fibration-check", "--input", d.file("wrong.json", wrong.dump())});
  CHECK(w.code == 2);
  CHECK(w.err.find("inclusion") != std::string::npos);
}

TEST_CASE("selftest") {
  const Result a = call({"selftest", "--seed", "7"});
  CHECK(a.code == 0);
  CHECK(a.out.find("FAIL") == std::string::npos);
  const Result b = call({"selftest", "--seed", "7"});
  CHECK(a.out == b.out);
  const Result forced = call({"selftest", "--tol", "1e-20"});
  CHECK(forced.code == 3);
  CHECK(forced.out.find("FAIL [1]") != std::string::npos);
  CHECK(forced.out == call({"selftest", "--tol", "1e-20"}).out);
}

TEST_CASE("tolerance from the environment, flag wins") {
  TempDir d;
  // Eigenvalues 0.5 ± 2e-9 are one cluster at tol 1e-8 and two at 1e-10.
  const auto near = d.file("near.json", state_json(tst::diagm({0.5 + 2e-9, 0.5 - 2e-9})));
  CHECK(Json::parse(call({"classify", "--input", near}).out)["payload"]["orbit_dim"] == 2);
  setenv("ORBITFISHER_TOL", "1e-8", 1);
  CHECK(Json::parse(call({"classify", "--input", near}).out)["payload"]["orbit_dim"] == 0);
  CHECK(Json::parse(call({"classify", "--input", near, "--tol", "1e-10"}).out)["payload"]["orbit_dim"] == 2);
  setenv("ORBITFISHER_TOL", "1e-20", 1);
  CHECK(call({"selftest", "--seed", "3"}).code == 3);
  CHECK(call({"selftest", "--seed", "3", "--tol", "1e-3"}).code == 0);
  setenv("ORBITFISHER_TOL", "junk", 1);
  CHECK(call({"classify", "--input", near}).code == 64);
  unsetenv("ORBITFISHER_TOL");
}

TEST_CASE("plot data") {
  const Result r = call({"plot-data", "--from", "0.55", "--to", "0.95", "--steps", "9"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0] == "kappa1,F_sym,F_antisym,closed_form");
  double prev = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::stringstream ss(rows[i]);
    std::string a, b, c, e;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    std::getline(ss, c, ',');
    std::getline(ss, e, ',');
    const double k1 = std::stod(a), fs = std::stod(b);
    CHECK(fs == doctest::Approx(4.0 * (2 * k1 - 1) * (2 * k1 - 1)).epsilon(1e-12));
    CHECK(fs > prev);
    prev = fs;
  }
  const Result empty = call({"plot-data", "--steps", "0"});
  CHECK(empty.code == 0);
  CHECK(csv_rows(empty.out).size() == 1);
  CHECK(csv_rows(call({"plot-data", "--from", "0.9", "--to", "0.6"}).out).size() == 1);

  const Result lam = call({"plot-data", "--sweep", "lambda12", "--from", "0.6", "--to", "0.9", "--steps", "4"});
  for (std::size_t i = 1; i < csv_rows(lam.out).size(); ++i) {
    const std::string row = csv_rows(lam.out)[i];
    const double k1 = std::stod(row.substr(0, row.find(',')));
    const double val = std::stod(row.substr(row.find(',') + 1));
    CHECK(val == doctest::Approx((2 * k1 - 1) * (2 * k1 - 1)).epsilon(1e-12));
  }
  CHECK(csv_number(0.1) == "0.10000000000000001");
  CHECK(call({"plot-data", "--sweep", "nope"}).code == 64);
  CHECK(call({"plot-data", "--from", "0.4", "--to", "0.6", "--steps", "3"}).code == 2);
}

TEST_CASE("JSON round trip") {
  std::mt19937_64 g(91);
  for (int t = 0; t < 50; ++t) {
    const int n = 1 + t % 6;
    ComplexMatrix m = tst::gaussian(n, g);
    m(0, 0) *= 1e-300;
    const ComplexMatrix back = matrix_from_json(Json::parse(matrix_to_json(m).dump()), "m");
    CHECK((back - m).norm() == 0.0);
  }
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> ex(-300, 300);
  for (int t = 0; t < 50; ++t) {
    Json payload{{"values", Json::array()}, {"nested", {{"x", u(g) * std::pow(10.0, ex(g))}}}};
    for (int i = 0; i < 20; ++i) payload["values"].push_back(u(g) * std::pow(10.0, ex(g)));
    const Json report{{"command", "fisher"}, {"input_digest", sha256_hex(std::to_string(t))}, {"payload", payload}};
    const Json back = Json::parse(report.dump(2));
    CHECK(back == report);
    for (int i = 0; i < 20; ++i) CHECK(back["payload"]["values"][i].get<double>() == payload["values"][i].get<double>());
  }

  TempDir d;
  const auto rho = d.file("rho.json", state_json(tst::diagm({0.6, 0.25, 0.15})));
  const auto out = d.at("f.json");
  REQUIRE(call({"fisher", "--input", rho, "--output", out}).code == 0);
  const std::string text = slurp(out);
  const Json j = Json::parse(text);
  CHECK(j.dump(2) + "\n" == text);
  CHECK(call({"fisher", "--input", rho}).out == text);

  const CurveSpec c = CurveSpec::composite(0.5 * tst::sx(), tst::vec({0.7, 0.3}), tst::vec({0.1, -0.1}),
                                           ComplexMatrix::Identity(2, 2));
  const CurveSpec c2 = curve_from_json(Json::parse(curve_to_json(c).dump()));
  CHECK((c2.evaluate(0.4).matrix() - c.evaluate(0.4).matrix()).norm() == 0.0);
}

TEST_CASE("atomic output leaves no temporaries") {
  TempDir d;
  const auto out = d.at("report.json");
  REQUIRE(call({"u3-closed-form", "--kappa", "0.5,0.3,0.2", "--output", out}).code == 0);
  REQUIRE(call({"u3-closed-form", "--kappa", "0.6,0.3,0.1", "--output", out}).code == 0);
  int files = 0;
  for (const auto& e : fs::directory_iterator(d.path)) {
    (void)e;
    ++files;
  }
  CHECK(files == 1);
  CHECK(Json::parse(slurp(out))["payload"]["kappa"][0] == 0.6);
  CHECK(call({"u3-closed-form", "--kappa", "0.5,0.3,0.2", "--output", d.at("missing_dir/r.json")}).code == 2);
}
