#include "evaluator.hpp"

#include <map>

namespace froblab::detail {

PointEvaluator::PointEvaluator(const FieldCtx& field, std::span<const MultiPoly> polys, std::size_t ncoords,
                               std::uint64_t twist_q)
    : field_(field), log_(field.log_field()), ncoords_(ncoords) {
  const std::uint64_t order = field.size_u64() - 1;
  const std::size_t expected = twist_q ? 2 * ncoords : ncoords;
  for (const auto& poly : polys) {
    if (poly.ctx() != field) throw ValidationError("evaluator: polynomial over " + poly.ctx().label() + ", field " + field.label());
    if (poly.nvars() != expected)
      throw ValidationError("evaluator: expected " + std::to_string(expected) + " variables, got " +
                            std::to_string(poly.nvars()));
    // Merge terms whose effective exponents agree.
    std::map<std::vector<BigInt>, FieldElement> merged;
    for (const auto& [e, c] : poly.terms()) {
      std::vector<BigInt> eff(ncoords, 0);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (i < ncoords) {
          eff[i] += e[i];
        } else {
          eff[i - ncoords] += BigInt(e[i]) * twist_q;
        }
      }
      auto [it, inserted] = merged.emplace(std::move(eff), c);
      if (!inserted) it->second += c;
    }
    Compiled comp;
    for (const auto& [eff, c] : merged) {
      if (c.is_zero()) continue;
      Term t{log_ ? log_->from_element(c) : LogField::kZero, c, {}};
      for (std::size_t i = 0; i < ncoords; ++i) {
        if (eff[i] == 0) continue;
        t.factors.push_back({static_cast<std::uint32_t>(i), order ? static_cast<std::uint64_t>(eff[i] % order) : 0});
      }
      comp.terms.push_back(std::move(t));
    }
    polys_.push_back(std::move(comp));
  }
}

void PointEvaluator::load(std::span<const std::uint64_t> idx, Scratch& s) const {
  if (log_) {
    s.logs.resize(ncoords_);
    for (std::size_t i = 0; i < ncoords_; ++i) s.logs[i] = log_->from_index(static_cast<std::uint32_t>(idx[i]));
  } else {
    s.elems.resize(ncoords_);
    for (std::size_t i = 0; i < ncoords_; ++i) s.elems[i] = field_.element_at(idx[i]);
  }
}

LogField::Log PointEvaluator::eval_log(const Compiled& p, const Scratch& s) const {
  const std::uint64_t order = log_->order();
  LogField::Log acc = LogField::kZero;
  for (const auto& t : p.terms) {
    std::uint64_t sum = t.clog;
    bool zero = false;
    for (const auto& f : t.factors) {
      const LogField::Log l = s.logs[f.coord];
      if (l == LogField::kZero) {
        zero = true;
        break;
      }
      sum += f.e_mod * l;
    }
    if (zero) continue;
    acc = log_->add(acc, static_cast<LogField::Log>(order ? sum % order : 0));
  }
  return acc;
}

FieldElement PointEvaluator::eval_generic(const Compiled& p, const Scratch& s) const {
  FieldElement acc = field_.zero();
  for (const auto& t : p.terms) {
    FieldElement v = t.c;
    for (const auto& f : t.factors) {
      const FieldElement& x = s.elems[f.coord];
      if (x.is_zero()) {
        v = field_.zero();
        break;
      }
      v *= x.pow(f.e_mod);
    }
    acc += v;
  }
  return acc;
}

bool PointEvaluator::vanishes(std::size_t j, const Scratch& s) const {
  if (log_) return eval_log(polys_[j], s) == LogField::kZero;
  return eval_generic(polys_[j], s).is_zero();
}

bool PointEvaluator::all_vanish(const Scratch& s) const {
  for (std::size_t j = 0; j < polys_.size(); ++j)
    if (!vanishes(j, s)) return false;
  return true;
}

std::uint64_t PointEvaluator::value_index(std::size_t j, const Scratch& s) const {
  if (log_) return log_->to_index(eval_log(polys_[j], s));
  return field_.index_of(eval_generic(polys_[j], s));
}

}  // namespace froblab::detail
