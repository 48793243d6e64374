#include <doctest.h>

#include <set>

#include <json.hpp>

#include "twistlab/errors.hpp"
#include "twistlab/suite.hpp"

using namespace twistlab;

TEST_CASE("parse_complex") {
  CHECK(parse_complex("0.3") == cplx{0.3, 0.0});
  CHECK(parse_complex(" -2 ") == cplx{-2.0, 0.0});
  CHECK(parse_complex("1+2i") == cplx{1.0, 2.0});
  CHECK(parse_complex("1.5-0.25i") == cplx{1.5, -0.25});
  CHECK(parse_complex("2i") == cplx{0.0, 2.0});
  CHECK(parse_complex("-i") == cplx{0.0, -1.0});
  CHECK(parse_complex("i") == cplx{0.0, 1.0});
  CHECK(parse_complex("1e-3+2e+1i") == cplx{1e-3, 20.0});
  for (const char* bad : {"", "abc", "1+", "1+2j", "1..2", "nan", "1+2i3"}) {
    CHECK_THROWS_AS(parse_complex(bad), DomainError);
  }
}

TEST_CASE("suite names") {
  for (const Suite s : concrete_suites()) CHECK(parse_suite(to_string(s)) == s);
  CHECK(parse_suite("all") == Suite::all);
  CHECK_FALSE(parse_suite("everything").has_value());
}

TEST_CASE("config parsing and tolerance lookup") {
  const RunConfig c = parse_config(
      "# comment\n"
      "seed = 42\n"
      "n_sites = 3   # trailing\n"
      "xi = 0.2-0.1i\n"
      "eta = 2\n"
      "boundary = open\n"
      "samples = 7\n"
      "complex_xi = true\n"
      "tol.chain = 1e-3\n"
      "tol.chain.rtt = 1e-5\n",
      RunConfig{});
  CHECK(c.seed == 42);
  CHECK(c.n_sites == 3);
  CHECK(*c.xi == cplx{0.2, -0.1});
  CHECK(c.eta == cplx{2.0});
  CHECK(c.boundary == Boundary::open);
  CHECK(c.samples == 7);
  CHECK(c.complex_xi);
  CHECK(c.tolerance("chain.rtt", 1.0) == 1e-5);
  CHECK(c.tolerance("chain.transfer_commute", 1.0) == 1e-3);
  CHECK(c.tolerance("rmatrix.ybe", 1.0) == 1.0);
  CHECK_THROWS_AS(parse_config("seed 4\n", RunConfig{}), DomainError);
  CHECK_THROWS_AS(parse_config("colour = red\n", RunConfig{}), DomainError);
  CHECK_THROWS_AS(parse_config("boundary = twisted\n", RunConfig{}), DomainError);
  CHECK_THROWS_AS(parse_config("tol.x = -1\n", RunConfig{}), DomainError);
  RunConfig bad;
  bad.eta = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = RunConfig{};
  bad.n_sites = 13;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("sampler is seeded and respects exclusions") {
  Sampler a(9), b(9);
  for (int i = 0; i < 50; ++i) {
    const cplx z = a.spectral({0.0, 1.0});
    CHECK(z == b.spectral({0.0, 1.0}));
    CHECK(std::abs(z) >= 0.5);
    CHECK(std::abs(z) <= 5.0);
    CHECK(std::abs(z - 1.0) >= 0.1);
    const cplx x = a.xi(false);
    b.xi(false);
    CHECK(x.imag() == 0.0);
    CHECK(std::abs(x.real()) <= 1.0);
    CHECK(std::abs(a.xi(true)) <= 1.0);
    b.xi(true);
  }
}

TEST_CASE("ybe suite emits one report per sample") {
  RunConfig c;
  const auto reports = run_suite(c, Suite::ybe);
  CHECK(reports.size() == 100);
  CHECK_FALSE(any_gating_failure(reports));
}

TEST_CASE("JSON output round-trips and is deterministic") {
  RunConfig c;
  c.samples = 2;
  c.n_sites = 3;
  c.tolerances["chain"] = 1e-9;
  const auto reports = run_suite(c, Suite::all);
  const std::string text = to_json(c, reports);
  CHECK(text == to_json(c, run_suite(c, Suite::all)));

  const auto j = nlohmann::json::parse(text);
  CHECK(j["version"] == kReportVersion);
  CHECK(j["seed"] == c.seed);
  CHECK(j["config"]["n_sites"] == 3);
  CHECK(j["config"]["xi"].is_null());
  CHECK(j["config"]["tolerances"]["chain"] == 1e-9);
  REQUIRE(j["reports"].size() == reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = j["reports"][i];
    CHECK(r["check_id"] == reports[i].check_id);
    CHECK(r["pass"] == reports[i].pass);
    if (std::isfinite(reports[i].residual)) CHECK(r["residual"].get<double>() == reports[i].residual);
    CHECK(r["params"].size() == reports[i].params.size());
  }
}

TEST_CASE("JSON escapes strings and writes non-finite numbers as null") {
  VerificationReport r = make_report("x.y", {{"u", cplx{1.0, -2.0}}},
                                     std::numeric_limits<double>::infinity(), 1e-3);
  r.notes = "quote \" backslash \\ newline \n tab \t bell \x07";
  const auto j = nlohmann::json::parse(to_json(RunConfig{}, {r}));
  CHECK(j["reports"][0]["residual"].is_null());
  CHECK(j["reports"][0]["notes"] == r.notes);
  CHECK(j["reports"][0]["params"]["u"]["im"] == -2.0);
}

TEST_CASE("CSV layout") {
  const VerificationReport r = make_report("a.b", {{"u", cplx{0.5, 0.0}}}, 0.25, 1.0);
  const std::string csv = to_csv({r});
  CHECK(csv.rfind("check_id,param_summary,residual,tolerance,pass\n", 0) == 0);
  CHECK(csv.find("a.b,u=0.5,0.25,1,true\n") != std::string::npos);
}

TEST_CASE("catalog covers every emitted id and each id belongs to one suite") {
  std::map<std::string, Suite> owner;
  for (const CatalogEntry& e : check_catalog()) {
    CHECK_MESSAGE(owner.count(e.check_id) == 0, "duplicate " << e.check_id);
    owner[e.check_id] = e.suite;
  }
  RunConfig c;
  c.samples = 2;
  for (const Suite s : concrete_suites()) {
    std::set<std::string> seen;
    for (const auto& r : run_suite(c, s)) seen.insert(r.check_id);
    for (const std::string& id : seen) {
      REQUIRE_MESSAGE(owner.count(id) == 1, "uncatalogued " << id);
      CHECK_MESSAGE(owner[id] == s, id << " emitted by " << to_string(s));
    }
  }
}

TEST_CASE("library errors become failed reports instead of aborting the run") {
  RunConfig c;
  c.samples = 1;
  c.n_sites = 1;
  const auto reports = run_suite(c, Suite::all);
  CHECK_FALSE(reports.empty());
}

TEST_CASE("misprint flagging happens inside the suites") {
  RunConfig c;
  c.samples = 3;
  c.n_sites = 3;
  bool cr13_flagged = false;
  for (const auto& r : run_suite(c, Suite::cr)) {
    if (r.check_id == "chain.cr.cr13") cr13_flagged = r.kind == CheckKind::suspected_misprint;
    else CHECK_MESSAGE(r.kind != CheckKind::suspected_misprint, r.check_id);
  }
  CHECK(cr13_flagged);
}
