#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "froblab/cli.hpp"
#include "froblab/errors.hpp"
#include "froblab/poly.hpp"

using namespace froblab;
using namespace froblab::cli;

namespace {

JobResult run_text(const std::string& text, const Overrides& o = {}) {
  return execute(parse_job(parse_json_text(text, "job"), o));
}

std::string csv_of(const std::string& text, const Overrides& o = {}) {
  Job job = parse_job(parse_json_text(text, "job"), o);
  return render(job, execute(job), Format::csv);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("froblab_test_" + name)).string();
}

std::vector<std::vector<std::string>> data_rows(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(csv);
  std::string line;
  bool header = true;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    rows.push_back(csv_split(line));
  }
  return rows;
}

const char* kTwisted =
    R"({"command":"twisted","p": 5, "q": "5^1", "vars": ["x"], "X": [], "C": ["x - y^2"], "m_list": [1,2,3,6], "U": ["x"], "assert_irreducible": true})";

}  // namespace

TEST_CASE("twisted job reproduces the example family count") {
  JobResult r = run_text(kTwisted);
  CHECK(r.result["stabilized_count"] == 10);
  CHECK(r.result["stabilized"] == true);
  CHECK(r.result["exact_count"] == 10);
  CHECK(r.result["open_nonempty"] == true);
  CHECK(r.table.columns == std::vector<std::string>{"p", "q", "m", "count", "stabilized"});
  REQUIRE(r.table.rows.size() == 4);
  CHECK(r.table.rows[3] == std::vector<std::string>{"5", "5", "6", "10", "true"});
  // Partner names: y, y_x, x' and an explicit positional block all mean the same variable.
  for (const char* c : {"x - y_x^2", "x - x'^2"}) {
    std::string job = R"({"command":"twisted","p":5,"q":5,"vars":["x"],"C":[")" + std::string(c) + R"("],"m_list":[1,2,3,6]})";
    CHECK(run_text(job).result["stabilized_count"] == 10);
  }
  CHECK(run_text(R"({"command":"twisted","p":5,"q":5,"vars":["x"],"twisted_vars":["z"],"C":["x - z^2"],"m_list":[1,2,3,6]})")
            .result["stabilized_count"] == 10);
  CHECK_THROWS_AS(run_text(R"({"command":"twisted","p":5,"q":5,"vars":["x"],"twisted_vars":["x"],"C":["x"],"m_list":[1]})"),
                  ValidationError);
}

TEST_CASE("bezout and jacobi jobs") {
  JobResult r = run_text(R"({"command":"bezout","matrix":[[1,2],[3,4]]})");
  CHECK(r.result["permanent"] == 10);
  Job job = parse_job(parse_json_text(R"({"command":"bezout","matrix":[[1,2],[3,4]]})", "job"));
  Json out = Json::parse(render(job, r, Format::json));
  CHECK(out["permanent"] == 10);
  CHECK(out["froblab"] == kVersion);

  r = run_text(R"({"command":"bezout","p":7,"vars":["x","y"],"equations":["x^2*y + 1","x*y^3 - y"]})");
  CHECK(r.result["degree_matrix"] == Json::parse("[[2,1],[1,3]]"));
  CHECK(r.result["permanent"] == 7);

  r = run_text(R"J({"command":"jacobi","p":5,"vars":["x","y"],"equations":["s^2(x) + s(y)","x*s^3(y)"]})J");
  CHECK(r.result["order_matrix"] == Json::parse("[[2,0],[1,3]]"));
  CHECK(r.result["jacobi_bound"] == 5);
  r = run_text(R"J({"command":"jacobi","p":5,"vars":["x","y"],"equations":["s(x)","s^2(x)"]})J");
  CHECK(r.result["jacobi_bound"] == "-inf");
}

TEST_CASE("periodic and chebotarev jobs") {
  JobResult r = run_text(R"({"p":3, "q":"3^1", "map":["x^2 + 1"], "n_max":4, "m_max":6, "command":"periodic"})");
  CHECK(r.table.columns == std::vector<std::string>{"n", "m", "twisted_count", "all_periodic_verified"});
  CHECK(r.table.rows.size() == 24);
  CHECK(r.result["all_periodic_verified"] == true);
  CHECK(r.result["dominance"] == "unverified");
  CHECK_FALSE(r.property_failure);

  std::string csv = csv_of(R"({"command":"chebotarev","poly": "x^3 - 2", "P_max": 100000, "classes": {"1,1,1": "1/6", "1,2": "1/2", "3": "1/3"}})");
  auto rows = data_rows(csv);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][0] == "1,1,1");
  CHECK(csv.find("\"1,1,1\",") != std::string::npos);
  CHECK(std::stod(rows[0][4]) <= 0.03);

  r = run_text(R"({"command":"chebotarev","poly":"x^2 + 1","P_max":1000,"classes":{"1,1":1}})");
  CHECK(r.result["unexpected_types"] == Json::parse(R"(["2"])"));
  CHECK(r.result["max_deviation"].get<double>() == doctest::Approx(0.5).epsilon(0.1));
  CHECK_THROWS_AS(run_text(R"({"command":"chebotarev","poly":"x^2 + 1","P_max":1000,"classes":{"1,1":"1/3","2":"1/3"}})"),
                  ValidationError);
  CHECK_THROWS_AS(run_text(R"({"command":"chebotarev","poly":"x^2 + 1","P_max":1000,"classes":{"1,2":1}})"), ValidationError);
}

TEST_CASE("fit and recurrence jobs") {
  // Counts of y^2 = x^3 - x written by the count command, then fitted from the file.
  std::string series = temp_path("series.csv");
  {
    std::ofstream out(series);
    out << "p,q,count\n";
    for (int p : {5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
      JobResult r = run_text(R"({"command":"count","field":")" + std::to_string(p) +
                             R"(^1","vars":["x","y"],"equations":["y^2 - x^3 + x"]})");
      out << p << "," << p << "," << r.table.rows[0][3] << "\n";
    }
  }
  JobResult fit = run_text(R"({"command":"fit","csv":")" + series + R"(","C_band":3})");
  CHECK(std::abs(fit.result["d_hat"].get<double>() - 1) <= 0.1);
  CHECK(std::abs(fit.result["c_hat"].get<double>() - 1) <= 0.2);
  CHECK(fit.result["band_pass"] == true);
  std::filesystem::remove(series);

  JobResult exact = run_text(R"({"command":"fit","series":[[5,10],[7,14],[11,22]],"d":1,"c":2,"C_band":0})");
  CHECK(exact.result["band_pass"] == true);
  CHECK(exact.result["worst_ratio"] == 0.0);

  JobResult rec = run_text(R"({"command":"recurrence","twisted":{"p":5,"q":5,"vars":["x"],"C":["x - y^2"]},"m_max":30,"holdout":6})");
  CHECK(rec.result["found"] == true);
  CHECK(rec.result["recurrence"]["L"].get<int>() <= 6);
  CHECK(rec.result["holdout_match"] == true);
  rec = run_text(R"({"command":"recurrence","sequence":[1,2,6,24,120,720,5040,40320,362880,3628800,39916800,479001600]})");
  CHECK(rec.result["found"] == false);
  CHECK_THROWS_AS(run_text(R"({"command":"recurrence","sequence":[1,2,3]})"), ValidationError);
}

TEST_CASE("strict schema and error mapping") {
  CHECK_THROWS_AS(parse_json_text("", "job"), ValidationError);
  CHECK_THROWS_AS(parse_json_text("  \n", "job"), ValidationError);
  CHECK_THROWS_AS(parse_json_text("{", "job"), ValidationError);
  CHECK_THROWS_AS(parse_job(Json::parse("{}")), ValidationError);
  CHECK_THROWS_AS(parse_job(Json::parse(R"({"command":"nope"})")), ValidationError);
  CHECK_THROWS_AS(parse_job(Json::parse(R"({"command":"bezout","params":{},"extra":1})")), ValidationError);
  CHECK_THROWS_AS(run_text(R"({"command":"bezout","params":{"matrix":[[1]],"p":3,"equations":[]}})"), ValidationError);
  CHECK_THROWS_AS(run_text(R"({"command":"count","field":"4^1","vars":["x"],"equations":[]})"), ValidationError);
  CHECK_THROWS_AS(run_text(R"({"command":"count","field":"5^1","vars":["x","y"],"equations":["x - y"],"budget":10})"), BudgetExceeded);

  Job j = parse_job(Json::parse(R"({"command":"bezout","budget":5,"workers":2,"seed":9,"matrix":[[1]]})"), Overrides{7, std::nullopt, std::nullopt});
  CHECK(j.budget == 7);
  CHECK(j.workers == 2);
  CHECK(j.seed == 9);
  CHECK(j.params == Json::parse(R"({"matrix":[[1]]})"));
  CHECK_FALSE(j.echo().contains("workers"));

  CHECK(exit_code_for(ValidationError("x")) == 2);
  CHECK(exit_code_for(NotSquarefree("x")) == 2);
  CHECK(exit_code_for(BudgetExceeded("x")) == 3);
  CHECK(exit_code_for(PropertyViolation("x")) == 4);
  Json e = Json::parse(error_json(BudgetExceeded("too big")));
  CHECK(e["error"] == "budget_exceeded");
  CHECK(e["exit_code"] == 3);
  CHECK(e["message"] == "too big");
}

TEST_CASE("output does not depend on the worker count") {
  for (std::string job : {std::string(kTwisted),
                          std::string(R"({"command":"chebotarev","poly":"x^4 + x^3 + x^2 + x + 1","P_max":20000,"classes":{"1,1,1,1":"1/4","2,2":"1/4","4":"1/2"}})"),
                          std::string(R"({"command":"periodic","p":2,"q":2,"map":["x^3 + x + 1"],"n_max":3,"m_max":4})"),
                          std::string(R"({"command":"count","field":"3^2","vars":["x","y"],"equations":["x*y - 1"],"m_list":[1,2]})")}) {
    std::string a = csv_of(job, Overrides{std::nullopt, 1u, std::nullopt});
    std::string b = csv_of(job, Overrides{std::nullopt, 4u, std::nullopt});
    CHECK(a == b);
    Job ja = parse_job(parse_json_text(job, "job"), Overrides{std::nullopt, 1u, std::nullopt});
    Job jb = parse_job(parse_json_text(job, "job"), Overrides{std::nullopt, 3u, std::nullopt});
    CHECK(render(ja, execute(ja), Format::json) == render(jb, execute(jb), Format::json));
  }
}

TEST_CASE("csv quoting round trip") {
  CHECK(csv_escape("1,1") == "\"1,1\"");
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a\"b") == "\"a\"\"b\"");
  CHECK(csv_split("\"1,1\",3,\"a\"\"b\",") == std::vector<std::string>{"1,1", "3", "a\"b", ""});
}

TEST_CASE("grid over the example family") {
  // C: x^3 - y^2, m = 3 = p^r s. Closed form (n / p^r) q - s + 1; here n q / p^r - s is
  // prime to p on every row, so the substituted polynomial has no hidden repeated roots.
  Json spec = Json::parse(R"({
    "template": {"command": "twisted", "p": "{p}", "q": "{p}^{e}", "vars": ["x"], "C": ["x^3 - y^2"], "m_list": [1]},
    "ranges": {"p": [2, 3, 5, 7], "e": [1, 2, 3]}})");
  std::ostringstream os;
  GridReport rep = run_grid(spec, {}, std::nullopt, os);
  CHECK(rep.computed == 12);
  CHECK(rep.failed == 0);
  auto rows = data_rows(os.str());
  REQUIRE(rows.size() == 12);
  // p, e, status, then the twisted digest: p, q, count, stabilized, confirmed, exact_count, ...
  for (const auto& row : rows) {
    const long p = std::stol(row[0]);
    long q = 1;
    for (long i = 0; i < std::stol(row[1]); ++i) q *= p;
    const long pr = p == 3 ? 3 : 1, s = p == 3 ? 1 : 3;
    CHECK(row[2] == "ok");
    CHECK(std::stol(row[8]) == 2 * q / pr - s + 1);
  }

  // single-point grid equals a plain run
  Json one = Json::parse(R"({"template": {"command": "bezout", "matrix": "{m}"}, "ranges": {"m": [[[1,2],[3,4]]]}})");
  std::ostringstream os1;
  run_grid(one, {}, std::nullopt, os1);
  CHECK(data_rows(os1.str())[0].back() == "10");
}

TEST_CASE("grid files resume without recomputation") {
  Json spec = Json::parse(R"({
    "template": {"command": "count", "field": "{p}^1", "vars": ["x", "y"], "equations": ["y^2 - x^3 + x"]},
    "ranges": {"p": [5, 7, 11, 13, 17]}})");
  std::string path = temp_path("grid.csv");
  std::filesystem::remove(path);
  std::ostringstream unused;
  GridReport first = run_grid(spec, {}, path, unused);
  CHECK(first.computed == 5);
  const std::string full = slurp(path);
  GridReport again = run_grid(spec, {}, path, unused);
  CHECK(again.computed == 0);
  CHECK(again.skipped == 5);
  CHECK(slurp(path) == full);

  // Interrupted after two rows, then resumed.
  std::string partial = full.substr(0, full.find("\n11,") + 1);
  {
    std::ofstream out(path, std::ios::trunc);
    out << partial;
  }
  GridReport resumed = run_grid(spec, {}, path, unused);
  CHECK(resumed.computed == 3);
  CHECK(resumed.skipped == 2);
  CHECK(slurp(path) == full);

  // A file from a different grid is refused.
  Json other = spec;
  other["ranges"]["p"] = Json::parse("[5, 7]");
  CHECK_THROWS_AS(run_grid(other, {}, path, unused), ValidationError);
  std::filesystem::remove(path);

  // Budget is enforced per row and recorded.
  std::ostringstream os;
  GridReport capped = run_grid(spec, Overrides{20, std::nullopt, std::nullopt}, std::nullopt, os);
  CHECK(capped.failed == 5);
  CHECK(capped.exit_code == 3);
  CHECK(data_rows(os.str())[0][1] == "budget_exceeded");
}
