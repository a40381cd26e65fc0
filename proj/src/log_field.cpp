#include "froblab/log_field.hpp"

#include <numeric>

namespace froblab {

namespace {

std::vector<std::uint32_t> prime_factors(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

LogField::LogField(const FieldCtx& ctx) : ctx_(ctx) {
  if (ctx.size() > kMaxSize) throw ValidationError("field " + ctx.label() + " too large for log tables");
  size_ = static_cast<std::uint32_t>(ctx.size_u64());
  order_ = size_ - 1;
  p_ = static_cast<std::uint32_t>(ctx.characteristic());

  // Smallest index whose element generates the multiplicative group.
  const auto factors = prime_factors(order_);
  FieldElement g;
  for (std::uint32_t idx = 1; idx < size_; ++idx) {
    FieldElement cand = ctx.element_at(idx);
    bool primitive = true;
    for (std::uint32_t r : factors) {
      if (cand.pow(static_cast<std::uint64_t>(order_ / r)).is_one()) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      g = cand;
      break;
    }
  }

  exp_.resize(order_);
  log_.assign(size_, kZero);
  FieldElement cur = ctx.one();
  for (std::uint32_t l = 0; l < order_; ++l) {
    const auto idx = static_cast<std::uint32_t>(ctx.index_of(cur));
    exp_[l] = idx;
    log_[idx] = l;
    cur *= g;
  }

  zech_.resize(order_);
  for (std::uint32_t n = 0; n < order_; ++n) {
    std::uint32_t idx = exp_[n];
    std::uint32_t d0 = idx % p_;
    std::uint32_t plus_one = idx - d0 + (d0 + 1 == p_ ? 0 : d0 + 1);
    zech_[n] = log_[plus_one];
  }
  neg_one_ = (p_ == 2) ? 0 : order_ / 2;
}

LogField::Log LogField::from_element(const FieldElement& e) const {
  return log_[static_cast<std::uint32_t>(ctx_.index_of(e))];
}

FieldElement LogField::to_element(Log a) const { return ctx_.element_at(to_index(a)); }

LogField::Log LogField::from_int(std::int64_t v) const {
  auto p = static_cast<std::int64_t>(p_);
  std::int64_t r = v % p;
  if (r < 0) r += p;
  return log_[static_cast<std::uint32_t>(r)];
}

}  // namespace froblab
