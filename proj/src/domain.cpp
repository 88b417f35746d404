#include "idealcalc/domain.hpp"

#include <limits>
#include <map>
#include <mutex>

#include "idealcalc/error.hpp"

namespace idealcalc {

struct Domain::Node {
  Kind kind;
  std::optional<Domain> inner;
  Ordinal limit;
};

Domain Domain::nat() {
  static const Domain d(std::make_shared<const Node>(Node{Kind::Nat, std::nullopt, {}}));
  return d;
}

Domain Domain::rat() {
  static const Domain d(std::make_shared<const Node>(Node{Kind::Rat, std::nullopt, {}}));
  return d;
}

Domain Domain::prod(const Domain& inner) { return Domain(std::make_shared<const Node>(Node{Kind::Prod, inner, {}})); }

Domain Domain::blocks(const Ordinal& limit) {
  if (!limit.is_limit()) fail(ErrorKind::ValidationError, "block domains are indexed by limit ordinals");
  return Domain(std::make_shared<const Node>(Node{Kind::Blocks, std::nullopt, limit}));
}

Domain::Kind Domain::kind() const { return node_->kind; }

const Domain& Domain::inner() const {
  if (kind() != Kind::Prod) fail(ErrorKind::DomainMismatch, "inner() of non-product domain " + to_string(*this));
  return *node_->inner;
}

const Ordinal& Domain::limit() const {
  if (kind() != Kind::Blocks) fail(ErrorKind::DomainMismatch, "limit() of non-block domain " + to_string(*this));
  return node_->limit;
}

Domain Domain::block(std::uint64_t n) const {
  if (kind() == Kind::Prod) return inner();
  return catalog_domain(limit().fundamental(n));
}

std::size_t Domain::depth() const {
  switch (kind()) {
    case Kind::Nat:
    case Kind::Rat: return 1;
    case Kind::Prod: return 1 + inner().depth();
    case Kind::Blocks: return 2;
  }
  return 1;
}

bool operator==(const Domain& a, const Domain& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Domain::Kind::Nat:
    case Domain::Kind::Rat: return true;
    case Domain::Kind::Prod: return a.inner() == b.inner();
    case Domain::Kind::Blocks: return a.limit() == b.limit();
  }
  return false;
}

std::string to_string(const Domain& d) {
  switch (d.kind()) {
    case Domain::Kind::Nat: return "N";
    case Domain::Kind::Rat: return "Q";
    case Domain::Kind::Prod: return "N*" + to_string(d.inner());
    case Domain::Kind::Blocks: return "B[" + to_string(d.limit()) + "]";
  }
  return "?";
}

Domain catalog_domain(const Ordinal& alpha) {
  static std::mutex mu;
  static std::map<Ordinal, Domain> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(alpha); it != cache.end()) return it->second;
  }
  Domain d = alpha.is_zero()       ? Domain::nat()
             : alpha.is_successor() ? Domain::prod(catalog_domain(alpha.predecessor()))
                                    : Domain::blocks(alpha);
  std::lock_guard lock(mu);
  return cache.emplace(alpha, d).first->second;
}

std::string to_string(const Point& p, const Domain& d) {
  switch (d.kind()) {
    case Domain::Kind::Nat: return std::to_string(p.index);
    case Domain::Kind::Rat: return to_string(p.value);
    case Domain::Kind::Prod:
    case Domain::Kind::Blocks:
      return "(" + std::to_string(p.index) + "," + to_string(p.second(), d.block(p.index)) + ")";
  }
  return "?";
}

void check_point(const Point& p, const Domain& d) {
  const bool pair_shape = p.inner.size() == 1;
  switch (d.kind()) {
    case Domain::Kind::Nat:
    case Domain::Kind::Rat:
      if (pair_shape) fail(ErrorKind::DomainMismatch, "pair point given for domain " + to_string(d));
      return;
    case Domain::Kind::Prod:
    case Domain::Kind::Blocks:
      if (!pair_shape) fail(ErrorKind::DomainMismatch, "scalar point given for domain " + to_string(d));
      check_point(p.second(), d.block(p.index));
      return;
  }
}

std::optional<std::uint64_t> cantor_pair(std::uint64_t n, std::uint64_t m) {
  const unsigned __int128 s = static_cast<unsigned __int128>(n) + m;
  const unsigned __int128 v = s * (s + 1) / 2 + m;
  if (v > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return static_cast<std::uint64_t>(v);
}

std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t z) {
  // largest w with w(w+1)/2 <= z
  std::uint64_t lo = 0, hi = 6074000999ULL;  // hi(hi+1)/2 > 2^64
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo + 1) / 2;
    unsigned __int128 t = static_cast<unsigned __int128>(mid) * (mid + 1) / 2;
    if (t <= z) lo = mid;
    else hi = mid - 1;
  }
  const std::uint64_t w = lo;
  const std::uint64_t t = static_cast<std::uint64_t>(static_cast<unsigned __int128>(w) * (w + 1) / 2);
  const std::uint64_t m = z - t;
  return {w - m, m};
}

namespace {

// k-th Calkin-Wilf rational, k >= 1.
Rational calkin_wilf(std::uint64_t k) {
  int top = 63;
  while (top > 0 && !((k >> top) & 1)) --top;
  mpz_class a = 1, b = 1;
  for (int bit = top - 1; bit >= 0; --bit) {
    if ((k >> bit) & 1) a = a + b;
    else b = a + b;
  }
  return Rational(a, b);
}

std::optional<std::uint64_t> calkin_wilf_index(const Rational& q) {
  mpz_class a = q.get_num(), b = q.get_den();
  std::vector<bool> bits;
  while (!(a == 1 && b == 1)) {
    if (bits.size() > 62) return std::nullopt;
    if (a < b) {
      bits.push_back(false);
      b -= a;
    } else {
      bits.push_back(true);
      a -= b;
    }
  }
  std::uint64_t k = 1;
  for (auto it = bits.rbegin(); it != bits.rend(); ++it) k = (k << 1) | (*it ? 1 : 0);
  return k;
}

}  // namespace

Point point_at(const Domain& d, std::uint64_t index) {
  switch (d.kind()) {
    case Domain::Kind::Nat: return Point::nat(index);
    case Domain::Kind::Rat: {
      if (index == 0) return Point::rat(0);
      const std::uint64_t k = (index + 1) / 2;
      Rational q = calkin_wilf(k);
      return Point::rat(index % 2 == 1 ? q : Rational(-q));
    }
    case Domain::Kind::Prod:
    case Domain::Kind::Blocks: {
      auto [n, m] = cantor_unpair(index);
      return Point::pair(n, point_at(d.block(n), m));
    }
  }
  return {};
}

std::optional<std::uint64_t> index_of(const Domain& d, const Point& p) {
  switch (d.kind()) {
    case Domain::Kind::Nat: return p.index;
    case Domain::Kind::Rat: {
      if (p.value == 0) return 0;
      auto k = calkin_wilf_index(abs(p.value));
      if (!k || *k > (std::uint64_t{1} << 62)) return std::nullopt;
      return p.value > 0 ? 2 * *k - 1 : 2 * *k;
    }
    case Domain::Kind::Prod:
    case Domain::Kind::Blocks: {
      auto m = index_of(d.block(p.index), p.second());
      if (!m) return std::nullopt;
      return cantor_pair(p.index, *m);
    }
  }
  return std::nullopt;
}

}  // namespace idealcalc
