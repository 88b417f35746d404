#include "idealcalc/corpus.hpp"

#include <cstdlib>
#include <map>
#include <mutex>
#include <string>

namespace idealcalc {

std::uint64_t default_seed() {
  if (const char* s = std::getenv("IDEALCALC_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s && *end == '\0') return v;
  }
  return kDefaultSeed;
}

namespace {

using Rng = std::mt19937_64;

std::size_t draw(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

std::vector<SetExpr> seeded_unions(const Domain& d, const std::vector<SetExpr>& basics, std::size_t count, Rng& rng) {
  std::vector<SetExpr> out;
  for (std::size_t k = 0; k < count; ++k) {
    SetExpr u = SetExpr::empty(d);
    const std::size_t parts = 2 + draw(rng, 2);
    for (std::size_t p = 0; p < parts; ++p) u = unite(u, basics[draw(rng, basics.size())]);
    out.push_back(u);
  }
  return out;
}

SetExpr ap(std::uint64_t a, std::uint64_t b) { return SetExpr::nat(NatSet::progression(a, b)); }
SetExpr mono(int dir, Rational q, Rational r, std::uint64_t start = 0) {
  return SetExpr::mono(MonoSeq{dir, std::move(q), std::move(r), start});
}

// A spread-out sample of the inner corpus, small enough to nest.
std::vector<SetExpr> sample(const std::vector<SetExpr>& all, std::size_t n) {
  if (all.size() <= n) return all;
  std::vector<SetExpr> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(all[k * all.size() / n]);
  return out;
}

// Small sets separating the catalog ideals at each nesting level: one full
// column, every column with a landmark trace, and a graph.
std::vector<SetExpr> landmarks(const Domain& d) {
  switch (d.kind()) {
    case Domain::Kind::Nat:
      return {SetExpr::nat(NatSet::singleton(0)), SetExpr::nat(NatSet::all()), ap(0, 2)};
    case Domain::Kind::Rat: return {SetExpr::rat_points({0}), mono(1, 0, 1), mono(-1, 0, 1)};
    case Domain::Kind::Prod: {
      std::vector<SetExpr> out;
      for (const SetExpr& l : landmarks(d.inner())) {
        out.push_back(SetExpr::cols(d, NatSet::singleton(0), l));
        out.push_back(SetExpr::cols(d, NatSet::all(), l));
      }
      if (d.inner().is_nat()) out.push_back(SetExpr::graph(1, 0, NatSet::all()));
      return out;
    }
    case Domain::Kind::Blocks: {
      std::vector<SetExpr> out;
      for (std::uint64_t n = 0; n < 2; ++n)
        for (const SetExpr& l : landmarks(d.block(n))) out.push_back(SetExpr::patch(d, {{n, l}}));
      return out;
    }
  }
  return {};
}

std::vector<SetExpr> build_corpus(const Domain& d, std::uint64_t seed);
std::vector<SetExpr> build_pool(const Domain& d, std::uint64_t seed);

template <class Build>
const std::vector<SetExpr>& cached(const Domain& d, std::uint64_t seed, Build build, std::map<std::string, std::vector<SetExpr>>& cache,
                                   std::mutex& mu) {
  const std::string key = to_string(d) + "#" + std::to_string(seed);
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  std::vector<SetExpr> built = build(d, seed);
  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(built)).first->second;
}

std::vector<SetExpr> nat_corpus(Rng& rng) {
  std::vector<SetExpr> basics{SetExpr::nat(NatSet::empty()), SetExpr::nat(NatSet::all())};
  for (std::uint64_t k = 0; k <= 8; ++k) basics.push_back(SetExpr::nat(NatSet::singleton(k)));
  for (std::uint64_t k = 2; k <= 8; ++k) basics.push_back(SetExpr::nat(NatSet::range(0, k)));
  for (std::uint64_t k = 0; k <= 8; ++k) basics.push_back(SetExpr::nat(NatSet::cofinite({k})));
  for (std::uint64_t k = 2; k <= 8; ++k) basics.push_back(SetExpr::nat(NatSet::all().minus(NatSet::range(0, k))));
  for (std::uint64_t b = 2; b <= 8; ++b)
    for (std::uint64_t a = 0; a <= 8; ++a) basics.push_back(ap(a, b));
  auto unions = seeded_unions(Domain::nat(), basics, 24, rng);
  basics.insert(basics.end(), unions.begin(), unions.end());
  return basics;
}

std::vector<SetExpr> rat_corpus(Rng& rng) {
  const Domain q = Domain::rat();
  std::vector<SetExpr> basics{SetExpr::empty(q),
                              SetExpr::rat_points({0}),
                              SetExpr::rat_points({Rational(1, 2)}),
                              SetExpr::rat_points({-1, 3}),
                              SetExpr::rat_points({0, 1, 2, 3, 4, 5, 6, 7, 8})};
  for (int dir : {1, -1})
    for (int qv : {0, 1, -2})
      for (int r : {1, 2})
        for (std::uint64_t start : {0u, 3u}) basics.push_back(mono(dir, qv, r, start));
  basics.push_back(SetExpr::ordsum({{0, 1, mono(1, 1, 1, 1)}, {2, 3, mono(-1, 2, 1, 1)}}));
  basics.push_back(SetExpr::ordsum({{-1, 0, SetExpr::rat_points({Rational(-1, 2)})}, {0, 1, mono(1, 1, 1, 1)}}));
  auto unions = seeded_unions(q, basics, 20, rng);
  basics.insert(basics.end(), unions.begin(), unions.end());
  return basics;
}

std::vector<SetExpr> prod_corpus(const Domain& d, std::uint64_t seed, Rng& rng) {
  const Domain& inner = d.inner();
  std::vector<SetExpr> traces = landmarks(inner);
  for (const SetExpr& t : sample(standard_corpus(inner, seed), inner.is_nat() ? 10 : 7)) traces.push_back(t);
  const std::vector<NatSet> regions{NatSet::singleton(0), NatSet::finite({1, 3}), NatSet::range(0, 5),
                                    NatSet::progression(0, 2), NatSet::progression(1, 3), NatSet::all(),
                                    NatSet::cofinite({0, 1})};
  std::vector<SetExpr> basics{SetExpr::empty(d)};
  for (const NatSet& s : regions)
    for (const SetExpr& t : traces) basics.push_back(SetExpr::cols(d, s, t));
  if (inner.is_nat())
    for (std::uint64_t a : {1u, 2u})
      for (std::uint64_t b : {0u, 1u})
        for (const NatSet& s : {NatSet::all(), NatSet::progression(0, 2), NatSet::range(0, 4)})
          basics.push_back(SetExpr::graph(a, b, s));
  for (std::size_t k = 0; k + 1 < traces.size(); k += 2)
    basics.push_back(SetExpr::patch(d, {{0, traces[k]}, {2, traces[k + 1]}}));
  auto unions = seeded_unions(d, basics, 30, rng);
  basics.insert(basics.end(), unions.begin(), unions.end());
  return basics;
}

std::vector<SetExpr> blocks_corpus(const Domain& d, std::uint64_t seed, Rng& rng) {
  std::vector<SetExpr> basics{SetExpr::empty(d)};
  std::vector<std::vector<SetExpr>> per_block;
  for (std::uint64_t n = 0; n < 3; ++n) {
    per_block.push_back(landmarks(d.block(n)));
    for (const SetExpr& t : sample(standard_corpus(d.block(n), seed), 6)) per_block.back().push_back(t);
    for (const SetExpr& t : per_block.back()) basics.push_back(SetExpr::patch(d, {{n, t}}));
  }
  for (std::size_t k = 0; k < per_block[0].size() && k < per_block[1].size(); ++k)
    basics.push_back(SetExpr::patch(d, {{0, per_block[0][k]}, {1, per_block[1][per_block[1].size() - 1 - k]}}));
  auto unions = seeded_unions(d, basics, 16, rng);
  basics.insert(basics.end(), unions.begin(), unions.end());
  return basics;
}

std::vector<SetExpr> build_corpus(const Domain& d, std::uint64_t seed) {
  Rng rng(seed ^ (0x9e3779b97f4a7c15ull * (d.depth() + 1)));
  switch (d.kind()) {
    case Domain::Kind::Nat: return nat_corpus(rng);
    case Domain::Kind::Rat: return rat_corpus(rng);
    case Domain::Kind::Prod: return prod_corpus(d, seed, rng);
    case Domain::Kind::Blocks: return blocks_corpus(d, seed, rng);
  }
  return {};
}

std::vector<SetExpr> build_pool(const Domain& d, std::uint64_t seed) {
  Rng rng(seed + 0x5851f42d4c957f2dull * (d.depth() + 7));
  std::vector<SetExpr> pool;
  switch (d.kind()) {
    case Domain::Kind::Nat: {
      const std::uint64_t m = 2 + draw(rng, 3), h = draw(rng, 4);
      for (std::uint64_t k = 0; k < h; ++k) pool.push_back(SetExpr::nat(NatSet::singleton(k)));
      for (std::uint64_t r = 0; r < m; ++r) pool.push_back(ap(h + r, m));
      break;
    }
    case Domain::Kind::Rat:
      pool = {SetExpr::rat_points({1}),  SetExpr::rat_points({Rational(3, 2), 5}),
              mono(1, 0, 1),             mono(-1, 2, 1),
              mono(1, 10, 2),            mono(-1, -5, 1)};
      break;
    case Domain::Kind::Prod: {
      const std::vector<SetExpr>& inner = atom_pool(d.inner(), seed);
      const NatSet odd_tail = NatSet::progression(3, 2), even_tail = NatSet::progression(4, 2);
      for (const NatSet& g : {NatSet::singleton(0), NatSet::finite({1, 2}), even_tail})
        for (const SetExpr& t : inner) pool.push_back(SetExpr::cols(d, g, t));
      if (d.inner().is_nat()) {
        pool.push_back(SetExpr::graph(1, 0, odd_tail));
        pool.push_back(SetExpr::graph(2, 1, odd_tail));
      } else {
        for (const SetExpr& t : inner) pool.push_back(SetExpr::cols(d, odd_tail, t));
      }
      break;
    }
    case Domain::Kind::Blocks:
      for (std::uint64_t n = 0; n < 3; ++n) {
        const auto& inner = atom_pool(d.block(n), seed);
        for (std::size_t k = 0; k < inner.size() && k < 4; ++k) pool.push_back(SetExpr::patch(d, {{n, inner[k]}}));
      }
      break;
  }
  return pool;
}

}  // namespace

const std::vector<SetExpr>& standard_corpus(const Domain& d, std::uint64_t seed) {
  static std::mutex mu;
  static std::map<std::string, std::vector<SetExpr>> cache;
  return cached(d, seed, build_corpus, cache, mu);
}

const std::vector<SetExpr>& atom_pool(const Domain& d, std::uint64_t seed) {
  static std::mutex mu;
  static std::map<std::string, std::vector<SetExpr>> cache;
  return cached(d, seed, build_pool, cache, mu);
}

SimpleSeq random_seq(const Domain& d, const std::vector<SetExpr>& pool, Rng& rng, bool allow_negative) {
  static const std::vector<Rational> coeffs{1, Rational(1, 2), 2, Rational(1, 3), Rational(3, 4), 3};
  std::vector<Term> terms;
  for (const SetExpr& atom : pool) {
    if (draw(rng, 2) == 0) continue;
    Rational c = coeffs[draw(rng, coeffs.size())];
    if (allow_negative && draw(rng, 3) == 0) c = -c;
    terms.push_back({c, atom});
  }
  return SimpleSeq::make(d, std::move(terms));
}

std::vector<SimpleSeq> seq_corpus(const Domain& d, std::size_t count, std::uint64_t seed, bool allow_negative) {
  Rng rng(seed ^ 0xd1b54a32d192ed03ull);
  const auto& pool = atom_pool(d, seed);
  std::vector<SimpleSeq> out{SimpleSeq(d)};
  for (const SetExpr& atom : pool) out.push_back(char_fn(atom));
  while (out.size() < count) out.push_back(random_seq(d, pool, rng, allow_negative));
  out.resize(count);
  return out;
}

std::vector<IdealExpr> ideal_corpus(const Domain& d) {
  using I = IdealExpr;
  std::vector<IdealExpr> out{I::fin(d), I::pow(d), I::perp(I::fin(d))};
  switch (d.kind()) {
    case Domain::Kind::Nat: {
      const SetExpr evens = ap(0, 2);
      out.push_back(I::catalog_p(Ordinal()));
      out.push_back(I::catalog_q(Ordinal()));
      out.push_back(I::restrict(I::fin(), evens));
      out.push_back(I::join(I::restrict(I::fin(), evens), I::restrict(I::pow(), evens)));
      out.push_back(I::perp(I::perp(I::fin())));
      break;
    }
    case Domain::Kind::Rat:
      out.push_back(I::wo());
      out.push_back(I::worev());
      out.push_back(I::perp(I::wo()));
      out.push_back(I::join(I::wo(), I::worev()));
      out.push_back(I::join(I::wo(), I::fin(d)));
      break;
    case Domain::Kind::Prod: {
      const Domain& inner = d.inner();
      const I sum = I::omega_sum(I::fin(inner));
      out.push_back(sum);
      out.push_back(I::perp(sum));
      out.push_back(I::join(sum, I::perp(sum)));
      out.push_back(I::direct_sum({I::pow(inner), I::fin(inner)}, I::fin(inner)));
      out.push_back(I::perp(I::direct_sum({I::pow(inner)}, I::fin(inner))));
      out.push_back(I::fubini(I::fin(), I::fin(inner)));
      out.push_back(I::fubini(I::pow(), I::fin(inner)));
      out.push_back(I::join(I::fubini(I::fin(), I::fin(inner)), sum));
      if (auto u = SetExpr::universe(inner)) out.push_back(I::restrict(sum, SetExpr::cols(d, NatSet::progression(0, 2), *u)));
      if (inner.is_nat()) {
        out.push_back(I::catalog_p(Ordinal::finite(1)));
        out.push_back(I::catalog_q(Ordinal::finite(1)));
      }
      if (inner.is_prod() && inner.inner().is_nat()) {
        out.push_back(I::catalog_p(Ordinal::finite(2)));
        out.push_back(I::catalog_q(Ordinal::finite(2)));
        out.push_back(I::omega_sum(I::perp(I::omega_sum(I::fin()))));
        out.push_back(I::fubini(I::fin(), I::omega_sum(I::fin())));
      }
      break;
    }
    case Domain::Kind::Blocks:
      out.push_back(I::block_sum(d.limit()));
      out.push_back(I::catalog_p(d.limit()));
      out.push_back(I::catalog_q(d.limit()));
      out.push_back(I::perp(I::block_sum(d.limit())));
      break;
  }
  return out;
}

std::vector<Domain> corpus_domains() {
  const Domain n = Domain::nat();
  return {n, Domain::rat(), Domain::prod(n), Domain::prod(Domain::prod(n)), Domain::blocks(Ordinal::omega_power(1))};
}

}  // namespace idealcalc
