#include "froblab/dynamics.hpp"

#include <algorithm>
#include <thread>
#include <unordered_map>

#include "evaluator.hpp"

namespace froblab {

namespace {

std::uint64_t state_count(const FieldCtx& field, std::size_t n) {
  BigInt total = boost::multiprecision::pow(field.size(), static_cast<unsigned>(n));
  if (total > kMaxGraphStates)
    throw BudgetExceeded("functional graph of " + field.label() + "^" + std::to_string(n) + " has " + total.str() +
                         " states; the cap is " + std::to_string(kMaxGraphStates));
  return static_cast<std::uint64_t>(total);
}

// Successor table of the functional graph, computed with the compiled evaluator.
std::vector<std::uint32_t> successors(const PolyMap& g, const FieldCtx& field) {
  const std::size_t n = g.nvars();
  const std::uint64_t N = state_count(field, n);
  const std::uint64_t Q = field.size_u64();
  detail::PointEvaluator ev(field, g.components(), n);
  detail::PointEvaluator::Scratch s;
  std::vector<std::uint32_t> next(N);
  std::vector<std::uint64_t> idx(n, 0);
  for (std::uint64_t state = 0; state < N; ++state) {
    std::uint64_t rest = state;
    for (std::size_t i = 0; i < n; ++i) {
      idx[i] = rest % Q;
      rest /= Q;
    }
    ev.load(idx, s);
    std::uint64_t packed = 0;
    for (std::size_t i = n; i-- > 0;) packed = packed * Q + ev.value_index(i, s);
    next[state] = static_cast<std::uint32_t>(packed);
  }
  return next;
}

FieldCtx field_of_degree(std::uint64_t p, std::uint64_t k) {
  if (k > kMaxExtensionDegree) throw ValidationError("extension degree " + std::to_string(k) + " exceeds the limit");
  return make_field(p, static_cast<int>(k));
}

void require_coefficients_fixed(const PolyMap& f, std::uint64_t q) {
  const PrimePower qq = to_prime_power(q);
  if (qq.p != f.ctx().characteristic())
    throw ValidationError("q = " + std::to_string(q) + " is not a power of the characteristic of " + f.ctx().label());
  for (const auto& c : f.components())
    for (const auto& [e, coef] : c.terms())
      if (frobenius(coef, q) != coef)
        throw ValidationError("coefficient " + coef.to_string() + " of the map is not in F_" + std::to_string(q));
}

}  // namespace

PolyMap::PolyMap(FieldCtx ctx, std::vector<MultiPoly> components) : ctx_(ctx), components_(std::move(components)) {
  if (components_.empty()) throw ValidationError("a map needs at least one component");
  for (const auto& c : components_) {
    if (c.ctx() != ctx_) throw ValidationError("map component over " + c.ctx().label() + ", map over " + ctx_.label());
    if (c.nvars() != components_.size())
      throw ValidationError("map with " + std::to_string(components_.size()) + " components has a component in " +
                            std::to_string(c.nvars()) + " variables");
  }
}

PolyMap PolyMap::rebase(const FieldCtx& field) const {
  std::vector<MultiPoly> out;
  for (const auto& c : components_) out.push_back(c.rebase(field));
  return PolyMap(field, std::move(out));
}

std::vector<FieldElement> PolyMap::operator()(std::span<const FieldElement> x) const {
  std::vector<FieldElement> out;
  out.reserve(components_.size());
  for (const auto& c : components_) out.push_back(eval(c, x));
  return out;
}

std::uint64_t pack_point(const FieldCtx& field, std::span<const FieldElement> x) {
  const std::uint64_t Q = field.size_u64();
  std::uint64_t packed = 0;
  for (std::size_t i = x.size(); i-- > 0;) packed = packed * Q + field.index_of(x[i]);
  return packed;
}

std::vector<FieldElement> unpack_point(const FieldCtx& field, std::size_t n, std::uint64_t packed) {
  const std::uint64_t Q = field.size_u64();
  std::vector<FieldElement> x;
  for (std::size_t i = 0; i < n; ++i) {
    x.push_back(field.element_at(packed % Q));
    packed /= Q;
  }
  return x;
}

std::vector<FieldElement> PointSet::point(std::size_t i) const { return unpack_point(field, n, packed.at(i)); }

bool PointSet::contains(std::span<const FieldElement> x) const {
  return std::binary_search(packed.begin(), packed.end(), pack_point(field, x));
}

Orbit orbit(const PolyMap& f, std::span<const FieldElement> x, std::uint64_t max_steps) {
  if (x.size() != f.nvars()) throw ValidationError("point has the wrong number of coordinates");
  for (const auto& c : x)
    if (c.ctx() != f.ctx()) throw ValidationError("point and map live in different fields");
  std::unordered_map<std::uint64_t, std::uint64_t> seen;
  std::vector<FieldElement> cur(x.begin(), x.end());
  for (std::uint64_t step = 0; step <= max_steps; ++step) {
    auto [it, inserted] = seen.emplace(pack_point(f.ctx(), cur), step);
    if (!inserted) return {it->second, step - it->second};
    cur = f(cur);
  }
  throw BudgetExceeded("orbit not closed within " + std::to_string(max_steps) + " steps");
}

PointSet periodic_points(const PolyMap& f, const FieldCtx& field) {
  const PolyMap g = f.rebase(field);
  const auto next = successors(g, field);
  const std::uint64_t N = next.size();
  // 0 = unvisited, 1 = on the current walk, 2 = finished.
  std::vector<std::uint8_t> color(N, 0);
  std::vector<bool> periodic(N, false);
  std::vector<std::uint32_t> path;
  for (std::uint64_t start = 0; start < N; ++start) {
    if (color[start]) continue;
    path.clear();
    std::uint32_t v = static_cast<std::uint32_t>(start);
    while (color[v] == 0) {
      color[v] = 1;
      path.push_back(v);
      v = next[v];
    }
    if (color[v] == 1) {
      // v closes a new cycle.
      std::uint32_t w = v;
      do {
        periodic[w] = true;
        w = next[w];
      } while (w != v);
    }
    for (auto u : path) color[u] = 2;
  }
  PointSet out{field, f.nvars(), {}};
  for (std::uint64_t s = 0; s < N; ++s)
    if (periodic[s]) out.packed.push_back(s);
  return out;
}

namespace detail {

PointSet periodic_points_by_orbits(const PolyMap& f, const FieldCtx& field) {
  const PolyMap g = f.rebase(field);
  const std::uint64_t N = state_count(field, f.nvars());
  PointSet out{field, f.nvars(), {}};
  for (std::uint64_t s = 0; s < N; ++s) {
    auto x = unpack_point(field, f.nvars(), s);
    if (orbit(g, x, N).tail == 0) out.packed.push_back(s);
  }
  return out;
}

}  // namespace detail

PointSet twisted_fixed_points(const PolyMap& f, std::uint64_t q, unsigned n, unsigned m, std::uint64_t budget,
                              unsigned workers) {
  if (n == 0 || m == 0) throw ValidationError("n and m must be positive");
  require_coefficients_fixed(f, q);
  const PrimePower qq = to_prime_power(q);
  const FieldCtx field = field_of_degree(qq.p, static_cast<std::uint64_t>(qq.e) * m);
  const std::size_t d = f.nvars();
  const BigInt total = boost::multiprecision::pow(field.size(), static_cast<unsigned>(d));
  if (total > budget)
    throw BudgetExceeded("twisted fixed points over " + field.label() + "^" + std::to_string(d) + " need " + total.str() +
                         " evaluations, budget is " + std::to_string(budget));
  // f_i(x) - y_i with y_i read as x_i^{q^n}.
  std::vector<std::string> vars;
  for (std::size_t i = 0; i < 2 * d; ++i) vars.push_back((i < d ? "x" : "y") + std::to_string(i % d));
  std::vector<MultiPoly> eqs;
  for (std::size_t i = 0; i < d; ++i) {
    MultiPoly e(field, vars);
    const MultiPoly fi = f.components()[i].rebase(field);
    for (const auto& [ex, c] : fi.terms()) {
      Exponents ex2 = ex;
      ex2.resize(2 * d, 0);
      e.add_term(ex2, c);
    }
    Exponents yi(2 * d, 0);
    yi[d + i] = 1;
    e.add_term(yi, -field.one());
    eqs.push_back(std::move(e));
  }
  const BigInt qn = boost::multiprecision::pow(BigInt(q), n);
  // The evaluator reduces exponents mod Q - 1, so q^n only matters modulo it.
  const BigInt order = field.size() - 1;
  std::uint64_t twist = static_cast<std::uint64_t>(qn % order);
  if (twist == 0) twist = static_cast<std::uint64_t>(order);
  detail::PointEvaluator ev(field, eqs, d, twist);
  const std::uint64_t Q = field.size_u64();
  const std::uint64_t N = static_cast<std::uint64_t>(total);
  const std::uint64_t chunks = std::clamp<std::uint64_t>(workers, 1, N);
  std::vector<std::vector<std::uint64_t>> found(chunks);
  auto scan = [&](std::uint64_t c) {
    detail::PointEvaluator::Scratch s;
    std::vector<std::uint64_t> idx(d, 0);
    const std::uint64_t lo = N * c / chunks, hi = N * (c + 1) / chunks;
    for (std::uint64_t state = lo; state < hi; ++state) {
      std::uint64_t rest = state;
      for (std::size_t i = 0; i < d; ++i) {
        idx[i] = rest % Q;
        rest /= Q;
      }
      ev.load(idx, s);
      if (ev.all_vanish(s)) found[c].push_back(state);
    }
  };
  if (chunks == 1) {
    scan(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::uint64_t c = 0; c < chunks; ++c) pool.emplace_back(scan, c);
  }
  PointSet out{field, d, {}};
  for (auto& part : found) out.packed.insert(out.packed.end(), part.begin(), part.end());
  return out;
}

PeriodicityReport periodicity_report(const PolyMap& f, std::uint64_t q, unsigned n, unsigned m, std::uint64_t budget,
                                     unsigned workers) {
  PointSet sols = twisted_fixed_points(f, q, n, m, budget, workers);
  const PolyMap g = f.rebase(sols.field);
  PeriodicityReport rep;
  rep.solutions = sols.size();
  for (std::size_t i = 0; i < sols.size(); ++i) {
    const auto x = sols.point(i);
    unsigned md = 0;
    for (unsigned d = 1; d <= m && md == 0; ++d) {
      if (m % d) continue;
      BigInt qd = boost::multiprecision::pow(BigInt(q), d);
      bool fixed = true;
      for (const auto& c : x) fixed = fixed && c.pow(qd) == c;
      if (fixed) md = d;
    }
    if (md == 0) throw PropertyViolation("point over F_{q^m} not fixed by phi_{q^m}");
    std::vector<FieldElement> y = x;
    for (unsigned k = 0; k < md; ++k) y = g(y);
    if (y == x) ++rep.verified;
  }
  return rep;
}

bool verify_periodicity_theorem(const PolyMap& f, std::uint64_t q, unsigned n, unsigned m, std::uint64_t budget) {
  return periodicity_report(f, q, n, m, budget).all_verified();
}

}  // namespace froblab
