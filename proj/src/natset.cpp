#include "idealcalc/natset.hpp"

#include <algorithm>
#include <numeric>

#include "idealcalc/error.hpp"

namespace idealcalc {

namespace {

constexpr std::uint64_t kMaxPeriod = 1u << 20;

std::vector<std::uint64_t> sorted_unique(std::vector<std::uint64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

NatSet NatSet::finite(std::vector<std::uint64_t> members) {
  NatSet s;
  s.exceptions_ = sorted_unique(std::move(members));
  return s;
}

NatSet NatSet::cofinite(std::vector<std::uint64_t> excluded) {
  NatSet s;
  s.cycle_ = {1};
  s.exceptions_ = sorted_unique(std::move(excluded));
  return s;
}

NatSet NatSet::progression(std::uint64_t offset, std::uint64_t stride) {
  if (stride == 0) fail(ErrorKind::ValidationError, "progression stride must be >= 1");
  if (stride > kMaxPeriod) fail(ErrorKind::NotClosed, "progression stride too large");
  NatSet s;
  s.period_ = stride;
  s.cycle_.assign(stride, 0);
  s.cycle_[offset % stride] = 1;
  for (std::uint64_t n = offset % stride; n < offset; n += stride) s.exceptions_.push_back(n);
  s.canonicalize();
  return s;
}

NatSet NatSet::range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> v;
  for (std::uint64_t n = lo; n < hi; ++n) v.push_back(n);
  return finite(std::move(v));
}

bool NatSet::contains(std::uint64_t n) const {
  const bool in_exceptions = std::binary_search(exceptions_.begin(), exceptions_.end(), n);
  return pattern(n) != in_exceptions;
}

bool NatSet::is_finite() const {
  return std::all_of(cycle_.begin(), cycle_.end(), [](char c) { return c == 0; });
}

bool NatSet::is_cofinite() const {
  return std::all_of(cycle_.begin(), cycle_.end(), [](char c) { return c != 0; });
}

const std::vector<std::uint64_t>& NatSet::finite_members() const {
  if (!is_finite()) fail(ErrorKind::ValidationError, "finite_members() of an infinite set");
  return exceptions_;
}

std::optional<std::uint64_t> NatSet::min() const {
  const std::uint64_t bound = threshold() + period_;
  for (std::uint64_t n = 0; n < bound; ++n)
    if (contains(n)) return n;
  return std::nullopt;
}

void NatSet::canonicalize() {
  for (std::uint64_t d = 1; d < period_; ++d) {
    if (period_ % d != 0) continue;
    bool ok = true;
    for (std::uint64_t i = d; i < period_ && ok; ++i) ok = cycle_[i] == cycle_[i % d];
    if (ok) {
      cycle_.resize(d);
      period_ = d;
      break;
    }
  }
}

template <class Op>
NatSet NatSet::combine(const NatSet& other, Op op) const {
  const std::uint64_t p = std::lcm(period_, other.period_);
  if (p > kMaxPeriod) fail(ErrorKind::NotClosed, "combined period exceeds the supported bound");
  NatSet out;
  out.period_ = p;
  out.cycle_.resize(p);
  for (std::uint64_t r = 0; r < p; ++r) out.cycle_[r] = op(pattern(r), other.pattern(r)) ? 1 : 0;
  std::vector<std::uint64_t> candidates;
  std::merge(exceptions_.begin(), exceptions_.end(), other.exceptions_.begin(), other.exceptions_.end(),
             std::back_inserter(candidates));
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (std::uint64_t n : candidates)
    if (op(contains(n), other.contains(n)) != out.pattern(n)) out.exceptions_.push_back(n);
  out.canonicalize();
  return out;
}

NatSet NatSet::unite(const NatSet& other) const {
  return combine(other, [](bool a, bool b) { return a || b; });
}
NatSet NatSet::intersect(const NatSet& other) const {
  return combine(other, [](bool a, bool b) { return a && b; });
}
NatSet NatSet::minus(const NatSet& other) const {
  return combine(other, [](bool a, bool b) { return a && !b; });
}

NatSet NatSet::complement() const {
  NatSet out = *this;
  for (char& c : out.cycle_) c = c ? 0 : 1;
  return out;
}

NatSet NatSet::affine_preimage(std::uint64_t slope, std::uint64_t offset) const {
  if (slope == 0) return contains(offset) ? all() : empty();
  NatSet out;
  out.period_ = period_;
  out.cycle_.resize(period_);
  for (std::uint64_t r = 0; r < period_; ++r) {
    const auto image = static_cast<std::uint64_t>((static_cast<unsigned __int128>(slope) * r + offset) % period_);
    out.cycle_[r] = cycle_[image];
  }
  for (std::uint64_t e : exceptions_) {
    if (e < offset || (e - offset) % slope != 0) continue;
    const std::uint64_t n = (e - offset) / slope;
    if (contains(e) != out.pattern(n)) out.exceptions_.push_back(n);
  }
  out.exceptions_ = sorted_unique(std::move(out.exceptions_));
  out.canonicalize();
  return out;
}

NatSet::Parts NatSet::parts() const {
  Parts parts;
  if (is_finite()) {
    parts.finite = exceptions_;
    return parts;
  }
  if (is_cofinite()) {
    parts.cofinite = exceptions_;
    return parts;
  }
  // Cover the periodic pattern greedily by the coarsest progressions.
  std::vector<char> covered(period_, 0);
  for (std::uint64_t d = 1; d <= period_; ++d) {
    if (period_ % d != 0) continue;
    for (std::uint64_t s = 0; s < d; ++s) {
      bool full = true, fresh = false;
      for (std::uint64_t r = s; r < period_; r += d) {
        full = full && cycle_[r];
        fresh = fresh || !covered[r];
      }
      if (!full || !fresh) continue;
      // start past every excluded point of this residue class
      std::uint64_t start = s;
      for (std::uint64_t e : exceptions_)
        if (e % d == s && pattern(e) && e + d > start) start = e + d;
      parts.progressions.emplace_back(start, d);
      for (std::uint64_t r = s; r < period_; r += d) covered[r] = 1;
    }
  }
  auto in_progression = [&](std::uint64_t n) {
    for (auto [off, stride] : parts.progressions)
      if (n >= off && (n - off) % stride == 0) return true;
    return false;
  };
  const std::uint64_t bound = threshold() + period_;
  for (std::uint64_t n = 0; n < bound; ++n)
    if (contains(n) && !in_progression(n)) parts.finite.push_back(n);
  std::sort(parts.progressions.begin(), parts.progressions.end(),
            [](auto a, auto b) { return std::pair(a.second, a.first) < std::pair(b.second, b.first); });
  return parts;
}

std::strong_ordering operator<=>(const NatSet& a, const NatSet& b) {
  if (auto c = a.period_ <=> b.period_; c != 0) return c;
  if (auto c = a.cycle_ <=> b.cycle_; c != 0) return c;
  return a.exceptions_ <=> b.exceptions_;
}

namespace {

std::string list(const std::vector<std::uint64_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

std::string to_string(const NatSet& s) {
  auto parts = s.parts();
  if (parts.cofinite) return "cofin{" + list(*parts.cofinite) + "}";
  std::vector<std::string> items;
  if (!parts.finite.empty() || parts.progressions.empty()) items.push_back("fin{" + list(parts.finite) + "}");
  for (auto [off, stride] : parts.progressions)
    items.push_back("ap(" + std::to_string(off) + "," + std::to_string(stride) + ")");
  if (items.size() == 1) return items.front();
  std::string out = "U[";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out + "]";
}

}  // namespace idealcalc
