#include "froblab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "froblab/asymptotics.hpp"
#include "froblab/chebotarev.hpp"
#include "froblab/diffpoly.hpp"
#include "froblab/dynamics.hpp"
#include "froblab/errors.hpp"
#include "froblab/geometry.hpp"

namespace froblab::cli {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw ValidationError(msg); }

const std::vector<std::string> kCommands = {"count", "twisted", "fit", "jacobi", "bezout", "periodic", "chebotarev", "recurrence"};

void check_keys(const Json& obj, const std::vector<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) bad(where + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      bad("unknown field '" + it.key() + "' in " + where);
}

const Json& require(const Json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) bad("missing field '" + key + "' in " + where);
  return *it;
}

const Json* optional_field(const Json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::uint64_t as_uint(const Json& v, const std::string& what) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) bad(what + " must be nonnegative");
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (!s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }) && s.size() < 20)
      return std::stoull(s);
  }
  bad(what + " must be a nonnegative integer");
}

unsigned as_unsigned(const Json& v, const std::string& what) {
  std::uint64_t x = as_uint(v, what);
  if (x > 1'000'000'000ull) bad(what + " is too large");
  return static_cast<unsigned>(x);
}

bool as_bool(const Json& v, const std::string& what) {
  if (!v.is_boolean()) bad(what + " must be true or false");
  return v.get<bool>();
}

std::string as_string(const Json& v, const std::string& what) {
  if (!v.is_string()) bad(what + " must be a string");
  return v.get<std::string>();
}

std::vector<std::string> as_strings(const Json& v, const std::string& what) {
  if (!v.is_array()) bad(what + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(as_string(e, what));
  return out;
}

BigInt as_bigint(const Json& v, const std::string& what) {
  if (v.is_number_unsigned()) return BigInt(v.get<std::uint64_t>());
  if (v.is_number_integer()) return BigInt(v.get<std::int64_t>());
  if (v.is_string()) {
    static const std::regex re("-?[0-9]+");
    const std::string s = v.get<std::string>();
    if (std::regex_match(s, re)) return BigInt(s);
  }
  bad(what + " must be an integer");
}

Rational as_rational(const Json& v, const std::string& what) {
  if (v.is_number_integer()) return Rational(as_bigint(v, what));
  if (v.is_string()) {
    static const std::regex re(" *(-?[0-9]+) *(/ *([0-9]+))? *");
    std::smatch m;
    const std::string s = v.get<std::string>();
    if (std::regex_match(s, m, re)) {
      BigInt num(m[1].str());
      BigInt den = m[3].matched ? BigInt(m[3].str()) : BigInt(1);
      if (den == 0) bad(what + " has a zero denominator");
      return Rational(num, den);
    }
  }
  bad(what + " must be an integer or a fraction string like \"1/6\"");
}

std::uint64_t as_prime(const Json& v, const std::string& what) {
  std::uint64_t p = as_uint(v, what);
  if (!is_prime(p)) bad(what + " = " + std::to_string(p) + " is not prime");
  return p;
}

/// q as an integer or a "p^e" label.
PrimePower as_prime_power(const Json& v, const std::string& what) {
  if (v.is_string()) return parse_prime_power(v.get<std::string>());
  return to_prime_power(as_uint(v, what));
}

FieldCtx as_field(const Json& v, const std::string& what) {
  if (v.is_string()) return parse_field(v.get<std::string>());
  return make_field(as_prime(v, what), 1);
}

std::vector<unsigned> as_m_list(const Json& v, const std::string& what) {
  if (!v.is_array() || v.empty()) bad(what + " must be a nonempty array of positive integers");
  std::vector<unsigned> out;
  for (const auto& e : v) {
    unsigned m = as_unsigned(e, what);
    if (m == 0) bad(what + " entries must be positive");
    out.push_back(m);
  }
  return out;
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

Json big_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return Json(static_cast<std::int64_t>(v));
  return Json(v.str());
}

Json ext_json(ExtInt v) { return v.is_finite() ? Json(v.value()) : Json("-inf"); }

CountOptions count_options(const Job& job) { return CountOptions{job.budget, job.workers}; }

// ---------------------------------------------------------------------------
// correspondences

struct TwistedSetup {
  std::uint64_t p = 0;
  PrimePower q;
  std::vector<std::string> xs;
  VariableNames cvars;
  FieldCtx field;
};

// Partner of v is y_v or v'; x-style names also get the matching y name
// (x -> y, x1 -> y1) when that is free.
VariableNames partner_names(const std::vector<std::string>& xs, const std::vector<std::string>* ys) {
  VariableNames v;
  v.names = xs;
  const std::size_t n = xs.size();
  std::set<std::string> used(xs.begin(), xs.end());
  for (std::size_t i = 0; i < n; ++i) {
    std::string y = ys ? (*ys)[i] : "y_" + xs[i];
    if (!used.insert(y).second) bad("twisted variable name '" + y + "' clashes with another variable");
    v.names.push_back(y);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned idx = static_cast<unsigned>(n + i);
    v.aliases[xs[i] + "'"] = idx;
    if (ys && !used.count("y_" + xs[i])) v.aliases["y_" + xs[i]] = idx;
    if (!xs[i].empty() && xs[i][0] == 'x') {
      std::string y = "y" + xs[i].substr(1);
      if (!used.count(y) && !v.aliases.count(y)) v.aliases[y] = idx;
    }
  }
  return v;
}

TwistedSetup twisted_setup(const Json& params, const std::string& where) {
  TwistedSetup s;
  s.p = as_prime(require(params, "p", where), where + ".p");
  s.q = as_prime_power(require(params, "q", where), where + ".q");
  if (s.q.p != s.p) bad(where + ": q = " + s.q.label() + " is not a power of p = " + std::to_string(s.p));
  s.xs = as_strings(require(params, "vars", where), where + ".vars");
  if (s.xs.empty()) bad(where + ".vars must name at least one variable");
  std::vector<std::string> ys;
  const Json* tv = optional_field(params, "twisted_vars");
  if (tv) {
    ys = as_strings(*tv, where + ".twisted_vars");
    if (ys.size() != s.xs.size()) bad(where + ".twisted_vars must have one name per variable");
  }
  s.cvars = partner_names(s.xs, tv ? &ys : nullptr);
  s.field = make_field(s.p, 1);
  return s;
}

Correspondence build_correspondence(const TwistedSetup& s, const Json& params, const std::string& where) {
  std::vector<MultiPoly> X, C;
  if (const Json* x = optional_field(params, "X"))
    for (const auto& e : as_strings(*x, where + ".X")) X.push_back(parse_poly(e, s.xs, s.field));
  for (const auto& e : as_strings(require(params, "C", where), where + ".C")) C.push_back(parse_poly(e, s.cvars, s.field));
  return Correspondence(AffineSystem(s.field, s.xs, X), C, s.q.value());
}

bool univariate_curve(const Correspondence& corr) {
  return corr.n() == 1 && corr.X().equations().empty() && corr.C().size() == 1;
}

// ---------------------------------------------------------------------------
// commands

JobResult run_count(const Job& job) {
  const Json& P = job.params;
  check_keys(P, {"field", "vars", "equations", "m_list"}, "count params");
  FieldCtx field = as_field(require(P, "field", "count params"), "count.field");
  auto vars = as_strings(require(P, "vars", "count params"), "count.vars");
  std::vector<MultiPoly> eqs;
  for (const auto& e : as_strings(require(P, "equations", "count params"), "count.equations"))
    eqs.push_back(parse_poly(e, vars, field));
  AffineSystem X(field, vars, eqs);
  std::vector<unsigned> ms = {1};
  if (const Json* m = optional_field(P, "m_list")) ms = as_m_list(*m, "count.m_list");

  JobResult r;
  r.table.columns = {"p", "q", "m", "count"};
  Json rows = Json::array();
  std::uint64_t last = 0;
  for (unsigned m : ms) {
    FieldCtx F = make_field(field.characteristic(), static_cast<int>(field.degree() * m));
    last = count_points(X, F, count_options(job));
    r.table.rows.push_back({std::to_string(field.characteristic()), field.size().str(), std::to_string(m), std::to_string(last)});
    rows.push_back(Json{{"m", m}, {"count", last}});
  }
  r.result["p"] = field.characteristic();
  r.result["q"] = big_json(field.size());
  r.result["counts"] = rows;
  r.summary = Json{{"p", field.characteristic()}, {"q", big_json(field.size())}, {"m", ms.back()}, {"count", last}};
  return r;
}

JobResult run_twisted(const Job& job) {
  const Json& P = job.params;
  check_keys(P, {"p", "q", "vars", "twisted_vars", "X", "C", "m_list", "U", "assert_irreducible", "dominance_samples"},
             "twisted params");
  TwistedSetup s = twisted_setup(P, "twisted params");
  Correspondence corr = build_correspondence(s, P, "twisted params");
  auto ms = as_m_list(require(P, "m_list", "twisted params"), "twisted.m_list");
  const bool irreducible = optional_field(P, "assert_irreducible") && as_bool(P["assert_irreducible"], "assert_irreducible");

  StabilizedCount sc = stabilized_twisted_count(corr, ms, count_options(job));
  JobResult r;
  r.table.columns = {"p", "q", "m", "count", "stabilized"};
  Json table = Json::array();
  for (const auto& [m, c] : sc.table) {
    r.table.rows.push_back({std::to_string(s.p), std::to_string(s.q.value()), std::to_string(m), std::to_string(c),
                            bool_str(sc.stabilized)});
    table.push_back(Json{{"m", m}, {"count", c}});
  }
  r.result["p"] = s.p;
  r.result["q"] = s.q.value();
  r.result["table"] = table;
  r.result["stabilized_count"] = sc.count;
  r.result["stabilized"] = sc.stabilized;
  r.result["confirmed"] = sc.confirmed;
  r.result["irreducible"] = irreducible ? "asserted" : "unverified";
  r.notes = {{"stabilized_count", std::to_string(sc.count)},
             {"stabilized", bool_str(sc.stabilized)},
             {"confirmed", bool_str(sc.confirmed)},
             {"irreducible", irreducible ? "asserted" : "unverified"}};
  r.summary = Json{{"p", s.p}, {"q", s.q.value()}, {"count", sc.count}, {"stabilized", sc.stabilized},
                   {"confirmed", sc.confirmed}};

  if (univariate_curve(corr)) {
    try {
      std::uint64_t exact = exact_twisted_count_univariate(corr);
      r.result["exact_count"] = exact;
      r.notes.emplace_back("exact_count", std::to_string(exact));
      r.summary["exact_count"] = exact;
    } catch (const ValidationError&) {
      // C(x, x^q) vanishes identically: no finite count to report.
    }
    try {
      CurveDegrees cd = curve_degrees(corr.C()[0]);
      r.result["deg_p1"] = cd.deg_p1;
      r.result["degins_p2_upper"] = cd.degins_p2_upper;
      r.notes.emplace_back("deg_p1", std::to_string(cd.deg_p1));
      r.notes.emplace_back("degins_p2_upper", std::to_string(cd.degins_p2_upper));
      r.summary["deg_p1"] = cd.deg_p1;
      r.summary["degins_p2_upper"] = cd.degins_p2_upper;
    } catch (const ValidationError&) {
      // constant in x or y: no projection degrees
    }
  }
  if (const Json* u = optional_field(P, "U")) {
    std::vector<MultiPoly> U;
    for (const auto& e : as_strings(*u, "twisted.U")) U.push_back(parse_poly(e, s.cvars, s.field));
    bool ne = nonempty_open_check(corr, U, ms, count_options(job));
    r.result["open_nonempty"] = ne;
    r.notes.emplace_back("open_nonempty", bool_str(ne));
  }
  if (const Json* d = optional_field(P, "dominance_samples")) {
    unsigned samples = as_unsigned(*d, "dominance_samples");
    DominanceSample ds = sample_dominance(corr, *std::max_element(ms.begin(), ms.end()), samples, job.seed);
    r.result["dominance"] = Json{{"samples", ds.samples}, {"p1_hit_rate", ds.p1_hit_rate}, {"p2_hit_rate", ds.p2_hit_rate},
                                 {"heuristic", true}};
    r.notes.emplace_back("dominance", "p1_hit_rate=" + fmt_double(ds.p1_hit_rate) + " p2_hit_rate=" +
                                          fmt_double(ds.p2_hit_rate) + " (heuristic)");
  }
  return r;
}

CountSeries read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read series file '" + path + "'");
  std::string line;
  std::vector<std::string> header;
  CountSeries s;
  s.meta = path;
  int qcol = -1, ccol = -1, mcol = -1, scol = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto fields = csv_split(line);
    if (header.empty()) {
      header = fields;
      for (int i = 0; i < static_cast<int>(header.size()); ++i) {
        if (header[i] == "q") qcol = i;
        if (header[i] == "count") ccol = i;
        if (header[i] == "m") mcol = i;
        if (header[i] == "scale") scol = i;
      }
      if (ccol < 0 || (qcol < 0 && scol < 0)) bad("series file needs a count column and a q or scale column");
      continue;
    }
    if (fields.size() != header.size()) bad("ragged row in series file '" + path + "'");
    BigInt scale;
    if (scol >= 0) {
      scale = as_bigint(Json(fields[scol]), "scale");
    } else {
      scale = as_bigint(Json(fields[qcol]), "q");
      if (mcol >= 0) scale = boost::multiprecision::pow(scale, as_unsigned(Json(fields[mcol]), "m"));
    }
    s.entries.emplace_back(scale, as_bigint(Json(fields[ccol]), "count"));
  }
  return s;
}

Json recurrence_json(const Recurrence& rec) {
  Json coeffs = Json::array();
  for (const auto& c : rec.coeffs) coeffs.push_back(c.str());
  return Json{{"L", rec.order()}, {"coeffs", coeffs}, {"transient", rec.transient}};
}

JobResult run_fit(const Job& job) {
  const Json& P = job.params;
  check_keys(P, {"series", "csv", "d", "c", "C_band", "recurrence"}, "fit params");
  CountSeries series;
  if (const Json* sj = optional_field(P, "series")) {
    if (optional_field(P, "csv")) bad("fit takes either series or csv, not both");
    if (!sj->is_array()) bad("fit.series must be an array of [scale, count] pairs");
    for (const auto& e : *sj) {
      if (!e.is_array() || e.size() != 2) bad("fit.series entries must be [scale, count] pairs");
      series.entries.emplace_back(as_bigint(e[0], "scale"), as_bigint(e[1], "count"));
    }
  } else {
    series = read_series_csv(as_string(require(P, "csv", "fit params"), "fit.csv"));
  }
  series.validate();
  LeadingFit fit = fit_leading(series);
  const int d = optional_field(P, "d") ? static_cast<int>(as_unsigned(P["d"], "fit.d"))
                                       : static_cast<int>(std::llround(fit.d_used));
  const double c = optional_field(P, "c") ? static_cast<double>(as_rational(P["c"], "fit.c")) : fit.c_hat;
  const double C_band = optional_field(P, "C_band") ? static_cast<double>(as_rational(P["C_band"], "fit.C_band")) : 3.0;
  BandCheck band = langweil_band_check(series, d, c, C_band);

  JobResult r;
  r.result["d_hat"] = fit.d_hat;
  r.result["c_hat"] = fit.c_hat;
  r.result["d_used"] = fit.d_used;
  r.result["band_pass"] = band.pass;
  r.result["worst_ratio"] = band.worst_ratio;
  std::string order = "";
  bool want_rec = !optional_field(P, "recurrence") || as_bool(P["recurrence"], "fit.recurrence");
  r.result["recurrence"] = nullptr;
  if (want_rec && series.entries.size() >= 8) {
    std::vector<BigInt> a;
    for (const auto& [sc, cnt] : series.entries) a.push_back(cnt);
    if (auto rec = detect_recurrence(a)) {
      r.result["recurrence"] = recurrence_json(*rec);
      order = std::to_string(rec->order());
    }
  }
  r.table.columns = {"d_hat", "c_hat", "band_pass", "worst_ratio", "recurrence_order"};
  r.table.rows.push_back({fmt_double(fit.d_hat), fmt_double(fit.c_hat), bool_str(band.pass), fmt_double(band.worst_ratio), order});
  r.summary = Json{{"d_hat", fit.d_hat}, {"c_hat", fit.c_hat}, {"band_pass", band.pass}, {"worst_ratio", band.worst_ratio}};
  return r;
}

std::vector<DiffPoly> diff_system(const Json& P, const std::string& where, VariableNames& vars) {
  FieldCtx F = make_field(as_prime(require(P, "p", where), where + ".p"), 1);
  vars = VariableNames(as_strings(require(P, "vars", where), where + ".vars"));
  std::vector<DiffPoly> eqs;
  for (const auto& e : as_strings(require(P, "equations", where), where + ".equations")) eqs.push_back(parse_diffpoly(e, vars, F));
  return eqs;
}

JobResult run_jacobi(const Job& job) {
  const Json& P = job.params;
  check_keys(P, {"p", "vars", "equations"}, "jacobi params");
  VariableNames vars;
  auto eqs = diff_system(P, "jacobi params", vars);
  OrderMatrix h = order_matrix(eqs);
  ExtInt J = jacobi_bound(h);
  Json hm = Json::array();
  for (const auto& row : h) {
    Json jr = Json::array();
    for (auto v : row) jr.push_back(ext_json(v));
    hm.push_back(jr);
  }
  JobResult r;
  r.result["order_matrix"] = hm;
  r.result["jacobi_bound"] = ext_json(J);
  r.table.columns = {"jacobi_bound"};
  r.table.rows.push_back({J.to_string()});
  r.summary = Json{{"jacobi_bound", ext_json(J)}};
  return r;
}

JobResult run_bezout(const Job& job) {
  const Json& P = job.params;
  check_keys(P, {"matrix", "p", "vars", "equations"}, "bezout params");
  std::vector<std::vector<BigInt>> d;
  JobResult r;
  if (const Json* m = optional_field(P, "matrix")) {
    if (optional_field(P, "equations")) bad("bezout takes either matrix or equations, not both");
    if (!m->is_array()) bad("bezout.matrix must be an array of rows");
    for (const auto& row : *m) {
      if (!row.is_array()) bad("bezout.matrix rows must be arrays");
      std::vector<BigInt> out;
      for (const auto& e : row) {
        BigInt v = as_bigint(e, "bezout.matrix entry");
        if (v < 0) bad("bezout.matrix entries must be nonnegative");
        out.push_back(v);
      }
      d.push_back(out);
    }
  } else {
    FieldCtx F = make_field(as_prime(require(P, "p", "bezout params"), "bezout.p"), 1);
    auto vars = as_strings(require(P, "vars", "bezout params"), "bezout.vars");
    Json dm = Json::array();
    for (const auto& e : as_strings(require(P, "equations", "bezout params"), "bezout.equations")) {
      MultiPoly f = parse_poly(e, vars, F);
      std::vector<BigInt> row;
      Json jr = Json::array();
      for (std::size_t i = 0; i < vars.size(); ++i) {
        ExtInt deg = f.degree_in(i);
        row.push_back(deg.is_finite() ? deg.value() : 0);
        jr.push_back(deg.is_finite() ? deg.value() : 0);
      }
      d.push_back(row);
      dm.push_back(jr);
    }
    r.result["degree_matrix"] = dm;
  }
  for (const auto& row : d)
    if (row.size() != d.size()) bad("bezout needs a square matrix");
  BigInt perm = bezout_permanent(d);
  r.result["permanent"] = big_json(perm);
  r.table.columns = {"permanent"};
  r.table.rows.push_back({perm.str()});
  r.summary = Json{{"permanent", big_json(perm)}};
  return r;
}

JobResult run_periodic(const Job& job) {
  const Json& P = job.params;
  check_keys(P, {"p", "q", "map", "vars", "n_max", "m_max", "nm_max"}, "periodic params");
  const std::uint64_t p = as_prime(require(P, "p", "periodic params"), "periodic.p");
  const PrimePower q = as_prime_power(require(P, "q", "periodic params"), "periodic.q");
  if (q.p != p) bad("periodic: q = " + q.label() + " is not a power of p");
  auto comps = as_strings(require(P, "map", "periodic params"), "periodic.map");
  if (comps.empty()) bad("periodic.map needs at least one component");
  std::vector<std::string> vars;
  if (const Json* v = optional_field(P, "vars")) {
    vars = as_strings(*v, "periodic.vars");
  } else if (comps.size() == 1) {
    vars = {"x"};
  } else {
    for (std::size_t i = 0; i < comps.size(); ++i) vars.push_back("x" + std::to_string(i + 1));
  }
  FieldCtx Fq = make_field(p, static_cast<int>(q.e));
  std::vector<MultiPoly> ps;
  for (const auto& c : comps) ps.push_back(parse_poly(c, vars, Fq));
  PolyMap f(Fq, ps);
  const unsigned n_max = as_unsigned(require(P, "n_max", "periodic params"), "periodic.n_max");
  const unsigned m_max = as_unsigned(require(P, "m_max", "periodic params"), "periodic.m_max");
  const unsigned nm_max = optional_field(P, "nm_max") ? as_unsigned(P["nm_max"], "periodic.nm_max") : n_max * m_max;
  if (n_max == 0 || m_max == 0) bad("periodic: n_max and m_max must be positive");

  JobResult r;
  r.table.columns = {"n", "m", "twisted_count", "all_periodic_verified"};
  Json rows = Json::array();
  bool all = true;
  std::uint64_t nrows = 0;
  for (unsigned n = 1; n <= n_max; ++n)
    for (unsigned m = 1; m <= m_max; ++m) {
      if (n * m > nm_max) continue;
      PeriodicityReport rep = periodicity_report(f, q.value(), n, m, job.budget, job.workers);
      all = all && rep.all_verified();
      ++nrows;
      r.table.rows.push_back({std::to_string(n), std::to_string(m), std::to_string(rep.solutions), bool_str(rep.all_verified())});
      rows.push_back(Json{{"n", n}, {"m", m}, {"twisted_count", rep.solutions}, {"all_periodic_verified", rep.all_verified()}});
    }
  r.result["rows"] = rows;
  r.result["all_periodic_verified"] = all;
  r.result["dominance"] = "unverified";
  r.notes = {{"all_periodic_verified", bool_str(all)}, {"dominance", "unverified"}};
  r.summary = Json{{"rows", nrows}, {"all_periodic_verified", all}};
  if (!all) r.property_failure = "a twisted fixed point failed the periodicity identity";
  return r;
}

JobResult run_chebotarev(const Job& job) {
  const Json& P = job.params;
  check_keys(P, {"poly", "var", "P_max", "classes"}, "chebotarev params");
  const std::string var = optional_field(P, "var") ? as_string(P["var"], "chebotarev.var") : "x";
  IntUniPoly g = parse_int_unipoly(as_string(require(P, "poly", "chebotarev params"), "chebotarev.poly"), var);
  const std::uint64_t P_max = as_uint(require(P, "P_max", "chebotarev params"), "chebotarev.P_max");
  DensityScan scan = density_scan(g, P_max, job.workers);
  const BigInt disc = discriminant(g);
  for (auto p : scan.ramified)
    if (disc % p != 0)
      throw PropertyViolation("ramified prime " + std::to_string(p) + " does not divide the discriminant " + disc.str());

  JobResult r;
  r.table.columns = {"cycle_type", "count", "frequency", "predicted", "deviation"};
  Json rows = Json::array();
  Json ram = Json::array();
  for (auto p : scan.ramified) ram.push_back(p);
  r.result["poly"] = g.to_string(var);
  r.result["P_max"] = P_max;
  r.result["discriminant"] = big_json(disc);
  r.result["unramified_primes"] = scan.unramified;
  r.result["ramified"] = ram;
  std::string ram_text;
  for (auto p : scan.ramified) ram_text += (ram_text.empty() ? "" : " ") + std::to_string(p);
  r.notes = {{"unramified_primes", std::to_string(scan.unramified)}, {"ramified", ram_text}, {"discriminant", disc.str()}};
  if (const Json* cj = optional_field(P, "classes")) {
    if (!cj->is_object()) bad("chebotarev.classes must map cycle types to densities");
    std::map<CycleType, Rational> table;
    for (auto it = cj->begin(); it != cj->end(); ++it) {
      CycleType t = parse_cycle_type(it.key());
      unsigned total = 0;
      for (auto d : t) total += d;
      if (total != static_cast<unsigned>(g.degree())) bad("cycle type " + it.key() + " is not a partition of the degree");
      if (!table.emplace(t, as_rational(it.value(), "density of " + it.key())).second) bad("cycle type " + it.key() + " listed twice");
    }
    ClassComparison cmp = compare_to_classes(scan, table);
    Json unexpected = Json::array();
    for (const auto& row : cmp.rows) {
      r.table.rows.push_back({cycle_type_label(row.type), std::to_string(row.count), fmt_double(row.frequency),
                              fmt_double(static_cast<double>(row.predicted)), fmt_double(row.deviation)});
      rows.push_back(Json{{"cycle_type", cycle_type_label(row.type)}, {"count", row.count}, {"frequency", row.frequency},
                          {"predicted", row.predicted.str()}, {"deviation", row.deviation}});
      if (row.unexpected) unexpected.push_back(cycle_type_label(row.type));
    }
    r.result["types"] = rows;
    r.result["max_deviation"] = cmp.max_deviation;
    r.result["unexpected_types"] = unexpected;
    r.notes.emplace_back("max_deviation", fmt_double(cmp.max_deviation));
    if (!unexpected.empty()) {
      std::string u;
      for (const auto& t : unexpected) u += (u.empty() ? "" : " ") + t.get<std::string>();
      r.notes.emplace_back("unexpected_types", u);
    }
    r.summary = Json{{"unramified_primes", scan.unramified}, {"max_deviation", cmp.max_deviation}};
  } else {
    for (const auto& [t, n] : scan.counts) {
      r.table.rows.push_back({cycle_type_label(t), std::to_string(n), fmt_double(scan.frequency(t)), "", ""});
      rows.push_back(Json{{"cycle_type", cycle_type_label(t)}, {"count", n}, {"frequency", scan.frequency(t)}});
    }
    r.result["types"] = rows;
    r.summary = Json{{"unramified_primes", scan.unramified}, {"max_deviation", nullptr}};
  }
  return r;
}

JobResult run_recurrence(const Job& job) {
  const Json& P = job.params;
  check_keys(P, {"sequence", "twisted", "m_max", "holdout"}, "recurrence params");
  std::vector<BigInt> a;
  if (const Json* sj = optional_field(P, "sequence")) {
    if (optional_field(P, "twisted")) bad("recurrence takes either sequence or twisted, not both");
    if (!sj->is_array()) bad("recurrence.sequence must be an array of integers");
    for (const auto& e : *sj) a.push_back(as_bigint(e, "recurrence.sequence entry"));
  } else {
    const Json& tj = require(P, "twisted", "recurrence params");
    check_keys(tj, {"p", "q", "vars", "twisted_vars", "X", "C"}, "recurrence.twisted");
    TwistedSetup s = twisted_setup(tj, "recurrence.twisted");
    Correspondence corr = build_correspondence(s, tj, "recurrence.twisted");
    const unsigned m_max = as_unsigned(require(P, "m_max", "recurrence params"), "recurrence.m_max");
    for (unsigned m = 1; m <= m_max; ++m) a.push_back(twisted_count(corr, m, count_options(job)));
  }
  const std::size_t holdout = optional_field(P, "holdout") ? as_unsigned(P["holdout"], "recurrence.holdout") : 0;
  if (holdout >= a.size()) bad("recurrence.holdout leaves no terms to fit");
  std::vector<BigInt> train(a.begin(), a.end() - static_cast<long>(holdout));
  if (train.size() < 8) bad("recurrence needs at least 8 fitted terms, got " + std::to_string(train.size()));

  JobResult r;
  Json seq = Json::array();
  for (const auto& v : a) seq.push_back(big_json(v));
  r.result["sequence"] = seq;
  auto rec = detect_recurrence(train);
  r.table.columns = {"found", "L", "transient", "coeffs", "holdout", "holdout_match"};
  if (!rec) {
    r.result["found"] = false;
    r.table.rows.push_back({"false", "", "", "", std::to_string(holdout), ""});
    r.summary = Json{{"found", false}, {"L", nullptr}, {"holdout_match", nullptr}};
    return r;
  }
  r.result["found"] = true;
  r.result["recurrence"] = recurrence_json(*rec);
  std::vector<BigInt> hist = train;
  Json preds = Json::array();
  bool match = true;
  for (std::size_t i = 0; i < holdout; ++i) {
    Rational next = predict_next(*rec, std::vector<Rational>(hist.begin(), hist.end()));
    preds.push_back(next.str());
    const BigInt& actual = a[train.size() + i];
    match = match && next == Rational(actual);
    hist.push_back(actual);
  }
  r.result["predictions"] = preds;
  r.result["holdout_match"] = match;
  std::string coeffs;
  for (const auto& c : rec->coeffs) coeffs += (coeffs.empty() ? "" : " ") + c.str();
  r.table.rows.push_back({"true", std::to_string(rec->order()), std::to_string(rec->transient), coeffs, std::to_string(holdout),
                          holdout ? bool_str(match) : ""});
  r.summary = Json{{"found", true}, {"L", rec->order()}, {"holdout_match", holdout ? Json(match) : Json(nullptr)}};
  if (!match) r.property_failure = "detected recurrence mispredicts held-out terms";
  return r;
}

// ---------------------------------------------------------------------------
// grid

std::string json_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return bool_str(v.get<bool>());
  if (v.is_number_float()) return fmt_double(v.get<double>());
  return v.dump();
}

std::string value_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

Json substitute(const Json& t, const std::vector<std::pair<std::string, Json>>& binding) {
  if (t.is_object()) {
    Json out = Json::object();
    for (auto it = t.begin(); it != t.end(); ++it) out[it.key()] = substitute(it.value(), binding);
    return out;
  }
  if (t.is_array()) {
    Json out = Json::array();
    for (const auto& e : t) out.push_back(substitute(e, binding));
    return out;
  }
  if (!t.is_string()) return t;
  const std::string s = t.get<std::string>();
  for (const auto& [k, v] : binding)
    if (s == "{" + k + "}") return v;
  std::string out = s;
  for (const auto& [k, v] : binding) {
    const std::string pat = "{" + k + "}", rep = value_text(v);
    for (std::size_t pos = out.find(pat); pos != std::string::npos; pos = out.find(pat, pos + rep.size()))
      out.replace(pos, pat.size(), rep);
  }
  return out;
}

}  // namespace

Json Job::echo() const { return Json{{"command", command}, {"budget", budget}, {"seed", seed}, {"params", params}}; }

Json parse_json_text(const std::string& text, const std::string& what) {
  if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); }))
    bad(what + " is empty");
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad(what + " is not valid JSON: " + e.what());
  }
}

Job parse_job(const Json& j, const Overrides& o) {
  if (!j.is_object()) bad("job must be a JSON object");
  Job job;
  job.command = as_string(require(j, "command", "job"), "command");
  if (std::find(kCommands.begin(), kCommands.end(), job.command) == kCommands.end()) bad("unknown command '" + job.command + "'");
  const std::vector<std::string> reserved = {"command", "params", "budget", "workers", "seed"};
  if (const Json* p = optional_field(j, "params")) {
    check_keys(j, reserved, "job");
    if (!p->is_object()) bad("params must be a JSON object");
    job.params = *p;
  } else {
    job.params = Json::object();
    for (auto it = j.begin(); it != j.end(); ++it)
      if (std::find(reserved.begin(), reserved.end(), it.key()) == reserved.end()) job.params[it.key()] = it.value();
  }
  job.budget = o.budget ? *o.budget : optional_field(j, "budget") ? as_uint(j["budget"], "budget") : kDefaultBudget;
  job.workers = o.workers ? *o.workers : optional_field(j, "workers") ? as_unsigned(j["workers"], "workers") : 1;
  job.seed = o.seed ? *o.seed : optional_field(j, "seed") ? as_uint(j["seed"], "seed") : 1;
  if (job.budget == 0) bad("budget must be positive");
  if (job.workers == 0 || job.workers > 256) bad("workers must be between 1 and 256");
  return job;
}

Job load_job(const std::string& path, const Overrides& o) {
  std::ifstream in(path);
  if (!in) bad("cannot read job file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_job(parse_json_text(ss.str(), "job file '" + path + "'"), o);
}

JobResult execute(const Job& job) {
  if (job.command == "count") return run_count(job);
  if (job.command == "twisted") return run_twisted(job);
  if (job.command == "fit") return run_fit(job);
  if (job.command == "jacobi") return run_jacobi(job);
  if (job.command == "bezout") return run_bezout(job);
  if (job.command == "periodic") return run_periodic(job);
  if (job.command == "chebotarev") return run_chebotarev(job);
  if (job.command == "recurrence") return run_recurrence(job);
  bad("unknown command '" + job.command + "'");
}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  bad("format must be csv or json, got '" + s + "'");
}

std::string render(const Job& job, const JobResult& r, Format f) {
  if (f == Format::json) {
    Json out = Json::object();
    out["froblab"] = kVersion;
    out["job"] = job.echo();
    for (auto it = r.result.begin(); it != r.result.end(); ++it) out[it.key()] = it.value();
    return out.dump(2) + "\n";
  }
  std::string out = std::string("# froblab ") + kVersion + "\n# job: " + job.echo().dump() + "\n";
  for (const auto& [k, v] : r.notes) out += "# " + k + ": " + v + "\n";
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + csv_escape(cells[i]);
    out += "\n";
  };
  line(r.table.columns);
  for (const auto& row : r.table.rows) line(row);
  return out;
}

std::vector<std::string> summary_columns(const std::string& command) {
  if (command == "count") return {"p", "q", "m", "count"};
  if (command == "twisted") return {"p", "q", "count", "stabilized", "confirmed", "exact_count", "deg_p1", "degins_p2_upper"};
  if (command == "fit") return {"d_hat", "c_hat", "band_pass", "worst_ratio"};
  if (command == "jacobi") return {"jacobi_bound"};
  if (command == "bezout") return {"permanent"};
  if (command == "periodic") return {"rows", "all_periodic_verified"};
  if (command == "chebotarev") return {"unramified_primes", "max_deviation"};
  if (command == "recurrence") return {"found", "L", "holdout_match"};
  bad("unknown command '" + command + "'");
}

GridReport run_grid(const Json& spec, const Overrides& o, const std::optional<std::string>& out_path, std::ostream& fallback) {
  check_keys(spec, {"template", "ranges"}, "grid");
  const Json& tmpl = require(spec, "template", "grid");
  const Json& ranges = require(spec, "ranges", "grid");
  if (!ranges.is_object() || ranges.empty()) bad("grid.ranges must map parameter names to value lists");
  std::vector<std::string> names;
  std::vector<std::vector<Json>> values;
  for (auto it = ranges.begin(); it != ranges.end(); ++it) {
    if (!it.value().is_array() || it.value().empty()) bad("grid range '" + it.key() + "' must be a nonempty array");
    names.push_back(it.key());
    values.emplace_back(it.value().begin(), it.value().end());
  }
  // Validate the template once with the first binding, for command and header.
  std::vector<std::pair<std::string, Json>> first;
  for (std::size_t i = 0; i < names.size(); ++i) first.emplace_back(names[i], values[i][0]);
  const Job probe = parse_job(substitute(tmpl, first), o);
  const auto cols = summary_columns(probe.command);

  Json resolved = Json{{"template", tmpl}, {"ranges", ranges}, {"budget", probe.budget}, {"seed", probe.seed}};
  std::vector<std::string> header_lines = {std::string("# froblab ") + kVersion, "# grid: " + resolved.dump()};
  std::vector<std::string> header = names;
  header.push_back("status");
  header.insert(header.end(), cols.begin(), cols.end());
  std::string header_row;
  for (std::size_t i = 0; i < header.size(); ++i) header_row += (i ? "," : "") + csv_escape(header[i]);
  header_lines.push_back(header_row);

  std::set<std::vector<std::string>> done;
  std::ofstream file;
  std::ostream* out = &fallback;
  if (out_path) {
    bool fresh = true;
    if (std::filesystem::exists(*out_path) && std::filesystem::file_size(*out_path) > 0) {
      std::ifstream in(*out_path);
      std::string line;
      std::size_t k = 0;
      while (std::getline(in, line)) {
        if (k < header_lines.size()) {
          if (line != header_lines[k])
            bad("existing grid file '" + *out_path + "' was written for a different grid");
        } else if (!line.empty()) {
          auto cells = csv_split(line);
          if (cells.size() != header.size()) bad("existing grid file '" + *out_path + "' has a malformed row");
          done.emplace(cells.begin(), cells.begin() + static_cast<long>(names.size()));
        }
        ++k;
      }
      if (k < header_lines.size()) bad("existing grid file '" + *out_path + "' has a truncated header");
      fresh = false;
    }
    file.open(*out_path, fresh ? std::ios::trunc : std::ios::app);
    if (!file) bad("cannot write grid file '" + *out_path + "'");
    out = &file;
    if (fresh)
      for (const auto& l : header_lines) *out << l << "\n";
  } else {
    for (const auto& l : header_lines) *out << l << "\n";
  }
  out->flush();

  GridReport rep;
  std::vector<std::size_t> idx(names.size(), 0);
  while (true) {
    std::vector<std::pair<std::string, Json>> binding;
    std::vector<std::string> key;
    for (std::size_t i = 0; i < names.size(); ++i) {
      binding.emplace_back(names[i], values[i][idx[i]]);
      key.push_back(json_cell(values[i][idx[i]]));
    }
    if (done.count(key)) {
      ++rep.skipped;
    } else {
      std::vector<std::string> cells = key;
      std::string status = "ok";
      Json summary = Json::object();
      try {
        Job job = parse_job(substitute(tmpl, binding), o);
        JobResult r = execute(job);
        summary = r.summary;
        if (r.property_failure) {
          status = "property_violation";
          if (!rep.exit_code) rep.exit_code = 4;
        }
      } catch (const std::exception& e) {
        const int code = exit_code_for(e);
        status = code == 2 ? "validation_error" : code == 3 ? "budget_exceeded" : code == 4 ? "property_violation" : "error";
        if (!rep.exit_code) rep.exit_code = code;
      }
      if (status != "ok") ++rep.failed;
      cells.push_back(status);
      for (const auto& c : cols) cells.push_back(summary.contains(c) ? json_cell(summary[c]) : "");
      for (std::size_t i = 0; i < cells.size(); ++i) *out << (i ? "," : "") << csv_escape(cells[i]);
      *out << "\n";
      out->flush();
      ++rep.computed;
    }
    // Last range varies fastest.
    std::size_t d = names.size();
    while (d > 0) {
      --d;
      if (++idx[d] < values[d].size()) break;
      idx[d] = 0;
      if (d == 0) return rep;
    }
    if (names.empty()) return rep;
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e)) return 2;
  if (dynamic_cast<const BudgetExceeded*>(&e)) return 3;
  if (dynamic_cast<const PropertyViolation*>(&e)) return 4;
  return 1;
}

std::string error_json(const std::exception& e) {
  const int code = exit_code_for(e);
  const char* kind = code == 2 ? "validation_error" : code == 3 ? "budget_exceeded" : code == 4 ? "property_violation" : "internal_error";
  return Json{{"error", kind}, {"exit_code", code}, {"message", e.what()}}.dump();
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace froblab::cli
