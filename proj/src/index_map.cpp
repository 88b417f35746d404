#include "idealcalc/index_map.hpp"

#include <algorithm>

#include "idealcalc/error.hpp"

namespace idealcalc {

namespace {

const Domain& nat_pairs() {
  static const Domain d = Domain::prod(Domain::nat());
  return d;
}

std::vector<std::uint64_t> pair_codes(const std::vector<Point>& points) {
  std::vector<std::uint64_t> codes;
  for (const Point& p : points) {
    auto code = cantor_pair(p.index, p.second().index);
    if (!code) fail(ErrorKind::NotClosed, "pairing code exceeds 64 bits");
    codes.push_back(*code);
  }
  return codes;
}

std::vector<Point> unpaired(const std::vector<std::uint64_t>& codes) {
  std::vector<Point> out;
  for (std::uint64_t z : codes) {
    auto [n, m] = cantor_unpair(z);
    out.push_back(Point::pair(n, Point::nat(m)));
  }
  return out;
}

}  // namespace

IndexMap IndexMap::identity(const Domain& d) { return IndexMap(Kind::Identity, d, d); }

IndexMap IndexMap::fin_perm(std::vector<std::pair<std::uint64_t, std::uint64_t>> table) {
  std::erase_if(table, [](const auto& e) { return e.first == e.second; });
  std::sort(table.begin(), table.end());
  std::vector<std::uint64_t> from, to;
  for (auto [a, b] : table) {
    from.push_back(a);
    to.push_back(b);
  }
  std::sort(to.begin(), to.end());
  if (std::adjacent_find(from.begin(), from.end()) != from.end())
    fail(ErrorKind::ValidationError, "permutation table lists a point twice");
  if (from != to) fail(ErrorKind::ValidationError, "permutation table is not a bijection of its support");
  IndexMap h(Kind::FinPerm, Domain::nat(), Domain::nat());
  h.table_ = std::move(table);
  return h;
}

IndexMap IndexMap::pair_encode() { return IndexMap(Kind::PairEncode, nat_pairs(), Domain::nat()); }
IndexMap IndexMap::pair_decode() { return IndexMap(Kind::PairDecode, Domain::nat(), nat_pairs()); }

IndexMap IndexMap::block_embed(std::uint64_t n0, const Domain& target) {
  if (!target.is_prod() && !target.is_blocks())
    fail(ErrorKind::DomainMismatch, "embed needs a product or block target, got " + to_string(target));
  IndexMap h(Kind::BlockEmbed, target.block(n0), target);
  h.block_ = n0;
  return h;
}

IndexMap IndexMap::negate_rat() { return IndexMap(Kind::NegateRat, Domain::rat(), Domain::rat()); }

IndexMap IndexMap::compose(std::vector<IndexMap> maps) {
  if (maps.empty()) fail(ErrorKind::ValidationError, "compose needs at least one map");
  for (std::size_t i = 0; i + 1 < maps.size(); ++i)
    if (maps[i].source() != maps[i + 1].target())
      fail(ErrorKind::DomainMismatch, "compose: " + to_string(maps[i + 1]) + " lands in " +
                                          to_string(maps[i + 1].target()) + " but " + to_string(maps[i]) +
                                          " starts at " + to_string(maps[i].source()));
  if (maps.size() == 1) return maps.front();
  IndexMap h(Kind::Compose, maps.back().source(), maps.front().target());
  h.parts_ = std::move(maps);
  return h;
}

bool IndexMap::bijective() const {
  switch (kind_) {
    case Kind::BlockEmbed: return false;
    case Kind::Compose:
      return std::all_of(parts_.begin(), parts_.end(), [](const IndexMap& h) { return h.bijective(); });
    default: return true;
  }
}

Point IndexMap::apply(const Point& p) const {
  check_point(p, source_);
  switch (kind_) {
    case Kind::Identity: return p;
    case Kind::FinPerm: {
      auto it = std::lower_bound(table_.begin(), table_.end(), std::pair(p.index, std::uint64_t{0}));
      if (it != table_.end() && it->first == p.index) return Point::nat(it->second);
      return p;
    }
    case Kind::PairEncode: {
      auto code = cantor_pair(p.index, p.second().index);
      if (!code) fail(ErrorKind::NotClosed, "pairing code exceeds 64 bits");
      return Point::nat(*code);
    }
    case Kind::PairDecode: return unpaired({p.index}).front();
    case Kind::BlockEmbed: return Point::pair(block_, p);
    case Kind::NegateRat: return Point::rat(-p.value);
    case Kind::Compose: {
      Point x = p;
      for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) x = it->apply(x);
      return x;
    }
  }
  return p;
}

SetExpr preimage(const IndexMap& h, const SetExpr& a) {
  if (a.domain() != h.target())
    fail(ErrorKind::DomainMismatch, "preimage under " + to_string(h) + " needs a set over " + to_string(h.target()) +
                                        ", got " + to_string(a.domain()));
  switch (h.kind()) {
    case IndexMap::Kind::Identity: return a;
    case IndexMap::Kind::FinPerm: {
      std::vector<std::uint64_t> support, hits;
      for (auto [n, image] : h.table()) {
        support.push_back(n);
        if (a.nat_set().contains(image)) hits.push_back(n);
      }
      return SetExpr::nat(a.nat_set().minus(NatSet::finite(support)).unite(NatSet::finite(hits)));
    }
    case IndexMap::Kind::PairEncode: {
      const NatSet& s = a.nat_set();
      if (s.is_finite()) return SetExpr::from_points(nat_pairs(), unpaired(s.finite_members()));
      if (s.is_cofinite())
        return difference(*SetExpr::universe(nat_pairs()), SetExpr::from_points(nat_pairs(), unpaired(s.excluded())));
      fail(ErrorKind::NotClosed, "pair preimage of " + to_string(a) + " is not a finite union of cells and graphs");
    }
    case IndexMap::Kind::PairDecode: {
      if (is_finite(a)) return SetExpr::nat(NatSet::finite(pair_codes(finite_points(a))));
      SetExpr rest = difference(*SetExpr::universe(nat_pairs()), a);
      if (is_finite(rest)) return SetExpr::nat(NatSet::cofinite(pair_codes(finite_points(rest))));
      fail(ErrorKind::NotClosed, "unpair preimage of " + to_string(a) + " is neither finite nor cofinite");
    }
    case IndexMap::Kind::BlockEmbed: return column_trace(a, h.block());
    case IndexMap::Kind::NegateRat: return reverse_rationals(a);
    case IndexMap::Kind::Compose: {
      SetExpr out = a;
      for (const IndexMap& part : h.parts()) out = preimage(part, out);
      return out;
    }
  }
  return a;
}

std::string to_string(const IndexMap& h) {
  switch (h.kind()) {
    case IndexMap::Kind::Identity: return "id";
    case IndexMap::Kind::FinPerm: {
      std::string out = "perm{";
      for (std::size_t i = 0; i < h.table().size(); ++i)
        out += (i ? "," : "") + std::to_string(h.table()[i].first) + ":" + std::to_string(h.table()[i].second);
      return out + "}";
    }
    case IndexMap::Kind::PairEncode: return "pair";
    case IndexMap::Kind::PairDecode: return "unpair";
    case IndexMap::Kind::BlockEmbed: {
      std::string out = "embed(" + std::to_string(h.block());
      if (h.target() != Domain::prod(Domain::nat())) out += ", " + to_string(h.target());
      return out + ")";
    }
    case IndexMap::Kind::NegateRat: return "neg";
    case IndexMap::Kind::Compose: {
      std::string out = "compose(";
      for (std::size_t i = 0; i < h.parts().size(); ++i) out += (i ? ", " : "") + to_string(h.parts()[i]);
      return out + ")";
    }
  }
  return "?";
}

}  // namespace idealcalc
