#include "idealcalc/ideal.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "idealcalc/error.hpp"

namespace idealcalc {

struct IdealExpr::Node {
  Kind kind;
  Domain domain;
  std::vector<IdealExpr> children;
  std::optional<SetExpr> carrier;
  Ordinal ordinal;
};

namespace {

using Kind = IdealExpr::Kind;

bool is_sum_like(Kind k) { return k == Kind::OmegaSum || k == Kind::DirectSum || k == Kind::BlockSum; }

void no_restrict_inside(const IdealExpr& i, const char* where) {
  if (i.kind() == Kind::Restrict)
    fail(ErrorKind::ValidationError, std::string("RESTRICT cannot be nested inside ") + where);
}

}  // namespace

// ---- construction -----------------------------------------------------------

namespace {

IdealExpr::Kind kind_of(const IdealExpr& i) { return i.kind(); }

}  // namespace

IdealExpr IdealExpr::fin(const Domain& d) { return IdealExpr(std::make_shared<const Node>(Node{Kind::Fin, d, {}, {}, {}})); }
IdealExpr IdealExpr::pow(const Domain& d) { return IdealExpr(std::make_shared<const Node>(Node{Kind::Pow, d, {}, {}, {}})); }

IdealExpr IdealExpr::restrict(const IdealExpr& i, const SetExpr& carrier) {
  if (carrier.domain() != i.domain())
    fail(ErrorKind::DomainMismatch, "RESTRICT carrier over " + to_string(carrier.domain()) + " for an ideal over " +
                                        to_string(i.domain()));
  return IdealExpr(std::make_shared<const Node>(Node{Kind::Restrict, i.domain(), {i}, carrier, {}}));
}

IdealExpr IdealExpr::join(const IdealExpr& i, const IdealExpr& j) {
  if (i.domain() != j.domain())
    fail(ErrorKind::DomainMismatch, "JOIN of ideals over " + to_string(i.domain()) + " and " + to_string(j.domain()));
  const bool ri = kind_of(i) == Kind::Restrict, rj = kind_of(j) == Kind::Restrict;
  if (ri != rj || (ri && !equals(i.carrier(), j.carrier())))
    fail(ErrorKind::ValidationError, "JOIN of restrictions needs equal carriers on both sides");
  return IdealExpr(std::make_shared<const Node>(Node{Kind::Join, i.domain(), {i, j}, {}, {}}));
}

IdealExpr IdealExpr::omega_sum(const IdealExpr& i) {
  no_restrict_inside(i, "SUM");
  return IdealExpr(std::make_shared<const Node>(Node{Kind::OmegaSum, Domain::prod(i.domain()), {i}, {}, {}}));
}

IdealExpr IdealExpr::direct_sum(std::vector<IdealExpr> list, const IdealExpr& tail) {
  no_restrict_inside(tail, "DSUM");
  for (const IdealExpr& i : list) {
    no_restrict_inside(i, "DSUM");
    if (i.domain() != tail.domain()) fail(ErrorKind::DomainMismatch, "DSUM blocks must share one domain");
  }
  list.push_back(tail);
  return IdealExpr(std::make_shared<const Node>(Node{Kind::DirectSum, Domain::prod(tail.domain()), std::move(list), {}, {}}));
}

IdealExpr IdealExpr::fubini(const IdealExpr& i, const IdealExpr& j) {
  no_restrict_inside(i, "FUBINI");
  no_restrict_inside(j, "FUBINI");
  if (!i.domain().is_nat()) fail(ErrorKind::DomainMismatch, "FUBINI needs its first ideal over N");
  return IdealExpr(std::make_shared<const Node>(Node{Kind::Fubini, Domain::prod(j.domain()), {i, j}, {}, {}}));
}

IdealExpr IdealExpr::perp(const IdealExpr& i) {
  return IdealExpr(std::make_shared<const Node>(Node{Kind::Perp, i.domain(), {i}, {}, {}}));
}

IdealExpr IdealExpr::wo() { return IdealExpr(std::make_shared<const Node>(Node{Kind::WO, Domain::rat(), {}, {}, {}})); }
IdealExpr IdealExpr::worev() { return IdealExpr(std::make_shared<const Node>(Node{Kind::WORev, Domain::rat(), {}, {}, {}})); }

IdealExpr IdealExpr::catalog_p(const Ordinal& alpha) {
  return IdealExpr(std::make_shared<const Node>(Node{Kind::CatalogP, catalog_domain(alpha), {}, {}, alpha}));
}
IdealExpr IdealExpr::catalog_q(const Ordinal& alpha) {
  return IdealExpr(std::make_shared<const Node>(Node{Kind::CatalogQ, catalog_domain(alpha), {}, {}, alpha}));
}
IdealExpr IdealExpr::block_sum(const Ordinal& limit) {
  return IdealExpr(std::make_shared<const Node>(Node{Kind::BlockSum, Domain::blocks(limit), {}, {}, limit}));
}

IdealExpr::Kind IdealExpr::kind() const { return node_->kind; }
const Domain& IdealExpr::domain() const { return node_->domain; }
const std::vector<IdealExpr>& IdealExpr::children() const { return node_->children; }
const SetExpr& IdealExpr::carrier() const {
  if (!node_->carrier) fail(ErrorKind::ValidationError, "carrier() of a non-RESTRICT ideal");
  return *node_->carrier;
}
const Ordinal& IdealExpr::ordinal() const { return node_->ordinal; }

// ---- printing ---------------------------------------------------------------

namespace {

std::string annotated(const char* name, const Domain& d) {
  return d.is_nat() ? name : std::string(name) + "[" + to_string(d) + "]";
}

}  // namespace

std::string to_string(const IdealExpr& i) {
  switch (i.kind()) {
    case Kind::Fin: return annotated("FIN", i.domain());
    case Kind::Pow: return annotated("POW", i.domain());
    case Kind::Restrict: return "RESTRICT(" + to_string(i.child()) + ", " + to_string(i.carrier()) + ")";
    case Kind::Join: return "JOIN(" + to_string(i.child(0)) + ", " + to_string(i.child(1)) + ")";
    case Kind::OmegaSum: return "SUM(" + to_string(i.child()) + ")";
    case Kind::DirectSum: {
      std::string out = "DSUM[";
      const auto& c = i.children();
      for (std::size_t k = 0; k + 1 < c.size(); ++k) out += (k ? ", " : "") + to_string(c[k]);
      return out + " | " + to_string(c.back()) + "]";
    }
    case Kind::Fubini: return "FUBINI(" + to_string(i.child(0)) + ", " + to_string(i.child(1)) + ")";
    case Kind::Perp: return "PERP(" + to_string(i.child()) + ")";
    case Kind::WO: return "WO";
    case Kind::WORev: return "WOREV";
    case Kind::CatalogP: return "P[" + to_string(i.ordinal()) + "]";
    case Kind::CatalogQ: return "Q[" + to_string(i.ordinal()) + "]";
    case Kind::BlockSum: return "BSUM[" + to_string(i.ordinal()) + "]";
  }
  return "?";
}

bool operator==(const IdealExpr& a, const IdealExpr& b) {
  if (a.kind() != b.kind() || a.domain() != b.domain() || a.ordinal() != b.ordinal()) return false;
  if (a.kind() == Kind::Restrict && !(a.carrier() == b.carrier())) return false;
  return a.children() == b.children();
}

// ---- catalog ----------------------------------------------------------------

CatalogEntry catalog(const Ordinal& alpha) {
  static std::mutex mu;
  static std::map<Ordinal, CatalogEntry> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(alpha); it != cache.end()) return it->second;
  }
  const Domain d = catalog_domain(alpha);
  // Q[0] is spelled FIN so that P[1] expands to SUM(FIN)
  const auto below = [](const Ordinal& beta) { return beta.is_zero() ? IdealExpr::fin() : IdealExpr::catalog_q(beta); };
  IdealExpr p = alpha.is_zero()         ? IdealExpr::pow(d)
                : alpha.is_successor()  ? IdealExpr::omega_sum(below(alpha.predecessor()))
                                        : IdealExpr::block_sum(alpha);
  IdealExpr q = alpha.is_zero() ? IdealExpr::fin(d) : IdealExpr::perp(p);
  CatalogEntry entry{p, q};
  std::lock_guard lock(mu);
  return cache.emplace(alpha, entry).first->second;
}

IdealExpr expand(const IdealExpr& i) {
  if (i.kind() == Kind::CatalogP) return catalog(i.ordinal()).p;
  if (i.kind() == Kind::CatalogQ) return catalog(i.ordinal()).q;
  return i;
}

// ---- orthogonal normalization and canonical forms ---------------------------

namespace {

bool fin_like(const IdealExpr& c) {
  return c.kind() == Kind::Fin || (c.kind() == Kind::CatalogQ && c.ordinal().is_zero());
}
bool pow_like(const IdealExpr& c) {
  return c.kind() == Kind::Pow || (c.kind() == Kind::CatalogP && c.ordinal().is_zero());
}

std::optional<IdealExpr> perp_rule(const IdealExpr& c) {
  switch (c.kind()) {
    case Kind::Fin: return IdealExpr::pow(c.domain());
    case Kind::Pow: return IdealExpr::fin(c.domain());
    case Kind::WO: return IdealExpr::worev();
    case Kind::WORev: return IdealExpr::wo();
    case Kind::CatalogP: return IdealExpr::catalog_q(c.ordinal());
    case Kind::CatalogQ: return IdealExpr::catalog_p(c.ordinal());
    default: return std::nullopt;
  }
}

IdealExpr rebuild(const IdealExpr& i, std::vector<IdealExpr> kids) {
  switch (i.kind()) {
    case Kind::Restrict: return IdealExpr::restrict(kids[0], i.carrier());
    case Kind::Join: return IdealExpr::join(kids[0], kids[1]);
    case Kind::OmegaSum: return IdealExpr::omega_sum(kids[0]);
    case Kind::DirectSum: {
      IdealExpr tail = kids.back();
      kids.pop_back();
      return IdealExpr::direct_sum(std::move(kids), tail);
    }
    case Kind::Fubini: return IdealExpr::fubini(kids[0], kids[1]);
    case Kind::Perp: return IdealExpr::perp(kids[0]);
    default: return i;
  }
}

void join_operands(const IdealExpr& c, std::vector<IdealExpr>& out) {
  if (c.kind() == Kind::Join) {
    join_operands(c.child(0), out);
    join_operands(c.child(1), out);
  } else {
    out.push_back(c);
  }
}

}  // namespace

bool in_frechet_catalog(const IdealExpr& i) {
  switch (canonical(i).kind()) {
    case Kind::Fin:
    case Kind::Pow:
    case Kind::WO:
    case Kind::WORev:
    case Kind::CatalogP:
    case Kind::CatalogQ: return true;
    default: return false;
  }
}

IdealExpr perp_normalize(const IdealExpr& i) {
  std::vector<IdealExpr> kids;
  for (const IdealExpr& k : i.children()) kids.push_back(perp_normalize(k));
  if (i.kind() != Kind::Perp) return kids.empty() ? i : rebuild(i, std::move(kids));
  const IdealExpr& c = kids[0];
  if (auto r = perp_rule(c)) return *r;
  if (c.kind() == Kind::Perp && in_frechet_catalog(c.child())) return c.child();
  return IdealExpr::perp(c);
}

IdealExpr canonical(const IdealExpr& i) {
  switch (i.kind()) {
    case Kind::Fin: return i.domain().is_nat() ? IdealExpr::catalog_q(Ordinal()) : i;
    case Kind::Pow: return i.domain().is_nat() ? IdealExpr::catalog_p(Ordinal()) : i;
    case Kind::WO:
    case Kind::WORev:
    case Kind::CatalogP:
    case Kind::CatalogQ: return i;
    case Kind::BlockSum: return IdealExpr::catalog_p(i.ordinal());
    case Kind::OmegaSum: {
      IdealExpr c = canonical(i.child());
      if (c.kind() == Kind::CatalogQ) {
        try {
          return IdealExpr::catalog_p(c.ordinal().successor());
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::OrdinalOutOfRange) throw;
        }
      }
      return IdealExpr::omega_sum(c);
    }
    case Kind::DirectSum: {
      std::vector<IdealExpr> kids;
      for (const IdealExpr& k : i.children()) kids.push_back(canonical(k));
      const std::string tail = to_string(kids.back());
      if (std::all_of(kids.begin(), kids.end(), [&](const IdealExpr& k) { return to_string(k) == tail; }))
        return canonical(IdealExpr::omega_sum(i.children().back()));
      return rebuild(i, std::move(kids));
    }
    case Kind::Perp: {
      IdealExpr c = canonical(i.child());
      if (auto r = perp_rule(c)) return *r;
      if (c.kind() == Kind::Perp && in_frechet_catalog(c.child())) return c.child();
      return IdealExpr::perp(c);
    }
    case Kind::Fubini: {
      if (fin_like(canonical(i.child(0)))) {
        const IdealExpr& j = i.child(1);
        return canonical(IdealExpr::join(IdealExpr::omega_sum(j),
                                         IdealExpr::perp(IdealExpr::omega_sum(IdealExpr::fin(j.domain())))));
      }
      return IdealExpr::fubini(canonical(i.child(0)), canonical(i.child(1)));
    }
    case Kind::Join: {
      std::vector<IdealExpr> ops;
      join_operands(canonical(i.child(0)), ops);
      join_operands(canonical(i.child(1)), ops);
      for (const IdealExpr& o : ops)
        if (pow_like(o)) return o;
      if (ops.size() > 1) std::erase_if(ops, fin_like);
      if (ops.empty()) return canonical(IdealExpr::fin(i.domain()));
      std::map<std::string, IdealExpr> unique;
      for (const IdealExpr& o : ops) unique.emplace(to_string(o), o);
      auto it = unique.begin();
      IdealExpr out = it->second;
      for (++it; it != unique.end(); ++it) out = IdealExpr::join(out, it->second);
      return out;
    }
    case Kind::Restrict: return IdealExpr::restrict(canonical(i.child()), i.carrier());
  }
  return i;
}

// ---- membership -------------------------------------------------------------

std::optional<IdealExpr> column_ideal(const IdealExpr& i, std::uint64_t n) {
  const Domain& d = i.domain();
  if (!d.is_prod() && !d.is_blocks()) return std::nullopt;
  switch (i.kind()) {
    case Kind::Fin: return IdealExpr::fin(d.block(n));
    case Kind::Pow: return IdealExpr::pow(d.block(n));
    case Kind::OmegaSum: return i.child();
    case Kind::DirectSum: return n + 1 < i.children().size() ? i.child(n) : i.children().back();
    case Kind::BlockSum: return IdealExpr::catalog_q(i.ordinal().fundamental(n));
    case Kind::Fubini: return IdealExpr::pow(d.block(n));
    case Kind::CatalogP:
    case Kind::CatalogQ: return column_ideal(expand(i), n);
    case Kind::Join: {
      auto a = column_ideal(i.child(0), n), b = column_ideal(i.child(1), n);
      if (!a || !b) return std::nullopt;
      return IdealExpr::join(*a, *b);
    }
    case Kind::Restrict: {
      auto a = column_ideal(i.child(), n);
      if (!a) return std::nullopt;
      return IdealExpr::restrict(*a, column_trace(i.carrier(), n));
    }
    case Kind::Perp: {
      IdealExpr z = perp_normalize(i);
      if (z.kind() != Kind::Perp) return column_ideal(z, n);
      const IdealExpr& inner = z.child();
      if (inner.kind() == Kind::Fubini) return IdealExpr::fin(d.block(n));
      IdealExpr e = expand(inner);
      if (!is_sum_like(e.kind())) return std::nullopt;
      auto c = column_ideal(e, n);
      if (!c) return std::nullopt;
      return perp_normalize(IdealExpr::perp(*c));
    }
    default: return std::nullopt;
  }
}

namespace {

Verdict yes() { return Verdict{true, std::nullopt, {}}; }
Verdict no(std::string why) { return Verdict{false, std::nullopt, std::move(why)}; }

// Columns below this index are handled one at a time by the join split.
std::uint64_t column_cutoff(const IdealExpr& i) {
  switch (i.kind()) {
    case Kind::DirectSum: return i.children().size() - 1;
    case Kind::Join: return std::max(column_cutoff(i.child(0)), column_cutoff(i.child(1)));
    case Kind::Perp: return column_cutoff(i.child());
    default: return 0;
  }
}

struct Tail {
  enum class Kind { Zero, Ideal, Unsupported } kind = Kind::Unsupported;
  std::optional<IdealExpr> ideal;
};

// Ideal Y with cols(R', T) in i iff T in Y, for every infinite R' ⊆ rest.
Tail tail_ideal(const IdealExpr& i, const NatSet& rest) {
  const Domain inner = i.domain().inner();
  auto ideal = [](IdealExpr y) { return Tail{Tail::Kind::Ideal, std::move(y)}; };
  switch (i.kind()) {
    case Kind::Fin: return Tail{Tail::Kind::Zero, {}};
    case Kind::Pow: return ideal(IdealExpr::pow(inner));
    case Kind::OmegaSum: return ideal(i.child());
    case Kind::DirectSum: return ideal(i.children().back());
    case Kind::Fubini:
      return member(i.child(0), SetExpr::nat(rest)).holds ? ideal(IdealExpr::pow(inner)) : ideal(i.child(1));
    case Kind::CatalogP:
    case Kind::CatalogQ: return tail_ideal(expand(i), rest);
    case Kind::Perp: {
      IdealExpr z = perp_normalize(i);
      if (z.kind() != Kind::Perp) return tail_ideal(z, rest);
      IdealExpr e = expand(z.child());
      if (is_sum_like(e.kind()) || e.kind() == Kind::Fubini) return Tail{Tail::Kind::Zero, {}};
      return {};
    }
    default: return {};
  }
}

// Ideals in which no infinite subset of a graph is a member.
bool graph_rejecting(const IdealExpr& i) {
  switch (i.kind()) {
    case Kind::Fin: return true;
    case Kind::CatalogQ: return !i.ordinal().is_zero();
    case Kind::Join: return graph_rejecting(i.child(0)) && graph_rejecting(i.child(1));
    case Kind::Restrict: return graph_rejecting(i.child());
    case Kind::Perp: {
      IdealExpr z = perp_normalize(i);
      if (z.kind() != Kind::Perp) return graph_rejecting(z);
      IdealExpr e = expand(z.child());
      return is_sum_like(e.kind()) || e.kind() == Kind::Fubini;
    }
    default: return false;
  }
}

std::vector<SetExpr> atoms_of(const SetExpr& a) {
  std::vector<SetExpr> out;
  const Domain& d = a.domain();
  switch (d.kind()) {
    case Domain::Kind::Nat: {
      auto parts = a.nat_set().parts();
      if (parts.cofinite) return {a};
      if (!parts.finite.empty()) out.push_back(SetExpr::nat(NatSet::finite(parts.finite)));
      for (auto [off, stride] : parts.progressions) out.push_back(SetExpr::nat(NatSet::progression(off, stride)));
      break;
    }
    case Domain::Kind::Rat:
      if (!a.points().empty()) out.push_back(SetExpr::rat_points(a.points()));
      for (const MonoSeq& s : a.sequences()) out.push_back(SetExpr::mono(s));
      break;
    case Domain::Kind::Prod:
      for (const Cell& c : a.cells()) out.push_back(SetExpr::cols(d, c.region, c.trace));
      for (const Graph& g : a.graphs()) out.push_back(SetExpr::graph(g.slope, g.offset, g.support));
      break;
    case Domain::Kind::Blocks:
      for (const auto& [n, t] : a.patches()) out.push_back(SetExpr::patch(d, {{n, t}}));
      break;
  }
  return out;
}

struct Split {
  SetExpr first, second;
};

std::optional<Split> split_atom(const IdealExpr& i, const IdealExpr& j, const SetExpr& atom) {
  const Domain& d = atom.domain();
  if (member(i, atom).holds) return Split{atom, SetExpr::empty(d)};
  if (member(j, atom).holds) return Split{SetExpr::empty(d), atom};
  if (d.is_nat() || d.is_rat()) return std::nullopt;  // no member contains an infinite part of the atom
  Split out{SetExpr::empty(d), SetExpr::empty(d)};
  auto per_column = [&](std::uint64_t n, const SetExpr& trace) -> bool {
    auto ci = column_ideal(i, n), cj = column_ideal(j, n);
    if (!ci || !cj)
      fail(ErrorKind::Undecidable, "JOIN split needs column rules for " + to_string(i) + " and " + to_string(j));
    auto s = split_join(*ci, *cj, trace);
    if (!s) return false;
    out.first = unite(out.first, SetExpr::patch(d, {{n, s->first}}));
    out.second = unite(out.second, SetExpr::patch(d, {{n, s->second}}));
    return true;
  };
  if (d.is_blocks()) {
    const auto& [n, t] = atom.patches().front();
    if (!per_column(n, t)) return std::nullopt;
    return out;
  }
  if (!atom.graphs().empty()) {
    if (graph_rejecting(i) && graph_rejecting(j)) return std::nullopt;
    fail(ErrorKind::Undecidable, "JOIN split of a graph between " + to_string(i) + " and " + to_string(j));
  }
  const Cell& cell = atom.cells().front();
  const std::uint64_t cut = std::max(column_cutoff(i), column_cutoff(j));
  NatSet head = cell.region.is_finite() ? cell.region : cell.region.intersect(NatSet::range(0, cut));
  for (std::uint64_t n : head.finite_members())
    if (!per_column(n, cell.trace)) return std::nullopt;
  NatSet rest = cell.region.minus(head);
  if (rest.is_empty()) return out;
  Tail ti = tail_ideal(i, rest), tj = tail_ideal(j, rest);
  if (ti.kind == Tail::Kind::Unsupported || tj.kind == Tail::Kind::Unsupported)
    fail(ErrorKind::Undecidable, "JOIN split over infinitely many columns of " + to_string(i) + " and " + to_string(j));
  const SetExpr whole = SetExpr::cols(d, rest, cell.trace);
  if (ti.kind == Tail::Kind::Zero && tj.kind == Tail::Kind::Zero) return std::nullopt;
  if (ti.kind == Tail::Kind::Zero) {
    if (!member(*tj.ideal, cell.trace).holds) return std::nullopt;
    out.second = unite(out.second, whole);
    return out;
  }
  if (tj.kind == Tail::Kind::Zero) {
    if (!member(*ti.ideal, cell.trace).holds) return std::nullopt;
    out.first = unite(out.first, whole);
    return out;
  }
  auto s = split_join(*ti.ideal, *tj.ideal, cell.trace);
  if (!s) return std::nullopt;
  out.first = unite(out.first, SetExpr::cols(d, rest, s->first));
  out.second = unite(out.second, SetExpr::cols(d, rest, s->second));
  return out;
}

Verdict member_perp_sum(const IdealExpr& sum, const SetExpr& a) {
  Witness w;
  w.kind = Witness::Kind::PerpBound;
  std::vector<std::pair<std::uint64_t, SetExpr>> traces;
  if (a.domain().is_blocks()) {
    traces = a.patches();
  } else {
    if (!a.graphs().empty()) return no("the set meets infinitely many columns (graph part)");
    NatSet used;
    for (const Cell& c : a.cells()) used = used.unite(c.region);
    if (!used.is_finite()) return no("the set meets infinitely many columns");
    for (std::uint64_t n : used.finite_members()) traces.emplace_back(n, column_trace(a, n));
  }
  for (const auto& [n, t] : traces) {
    auto col = column_ideal(sum, n);
    if (!col) fail(ErrorKind::Undecidable, "no column rule for " + to_string(sum));
    if (!member(IdealExpr::perp(*col), t).holds)
      return no("column " + std::to_string(n) + " trace " + to_string(t) + " is not orthogonal to " + to_string(*col));
    w.bound = std::max(w.bound, n);
  }
  w.blocks = std::move(traces);
  return Verdict{true, std::move(w), {}};
}

}  // namespace

std::optional<JoinSplit> split_join(const IdealExpr& i, const IdealExpr& j, const SetExpr& a) {
  const Domain& d = a.domain();
  if (member(i, a).holds) return JoinSplit{a, SetExpr::empty(d)};
  if (member(j, a).holds) return JoinSplit{SetExpr::empty(d), a};
  SetExpr first = SetExpr::empty(d), second = SetExpr::empty(d);
  for (const SetExpr& atom : atoms_of(a)) {
    auto s = split_atom(i, j, atom);
    if (!s) return std::nullopt;
    first = unite(first, s->first);
    second = unite(second, s->second);
  }
  if (!member(i, first).holds || !member(j, second).holds || !is_subset(a, unite(first, second)))
    fail(ErrorKind::Undecidable, "JOIN split failed verification for " + to_string(a));
  try {
    second = difference(second, first);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotClosed) throw;
  }
  return JoinSplit{first, second};
}

Verdict member(const IdealExpr& i, const SetExpr& a) {
  if (a.domain() != i.domain())
    fail(ErrorKind::DomainMismatch, "set over " + to_string(a.domain()) + " tested against an ideal over " +
                                        to_string(i.domain()));
  switch (i.kind()) {
    case Kind::Fin: return is_finite(a) ? yes() : no("infinite set");
    case Kind::Pow: return yes();
    case Kind::Restrict:
      if (!is_subset(a, i.carrier()))
        fail(ErrorKind::DomainMismatch, "set " + to_string(a) + " is not inside the carrier " + to_string(i.carrier()));
      return member(i.child(), a);
    case Kind::Join: {
      auto s = split_join(i.child(0), i.child(1), a);
      if (!s) return no("no decomposition into the two joined ideals");
      Witness w;
      w.kind = Witness::Kind::Join;
      w.first = s->first;
      w.second = s->second;
      return Verdict{true, std::move(w), {}};
    }
    case Kind::OmegaSum:
      for (const Cell& c : a.cells())
        if (!member(i.child(), c.trace).holds)
          return no("columns " + to_string(c.region) + " have trace " + to_string(c.trace) + " outside " +
                    to_string(i.child()));
      return yes();
    case Kind::DirectSum: {
      const std::uint64_t listed = i.children().size() - 1;
      for (const Cell& c : a.cells()) {
        NatSet head = c.region.intersect(NatSet::range(0, listed));
        for (std::uint64_t n : head.finite_members())
          if (!member(i.child(n), c.trace).holds)
            return no("column " + std::to_string(n) + " trace outside " + to_string(i.child(n)));
        if (!c.region.minus(head).is_empty() && !member(i.children().back(), c.trace).holds)
          return no("columns " + to_string(c.region.minus(head)) + " trace outside " + to_string(i.children().back()));
      }
      return yes();
    }
    case Kind::Fubini: {
      NatSet exceptional;
      for (const Cell& c : a.cells())
        if (!member(i.child(1), c.trace).holds) exceptional = exceptional.unite(c.region);
      SetExpr e = SetExpr::nat(exceptional);
      if (!member(i.child(0), e).holds)
        return no("exceptional columns " + to_string(e) + " are not in " + to_string(i.child(0)));
      Witness w;
      w.kind = Witness::Kind::Exceptional;
      w.exceptional = e;
      return Verdict{true, std::move(w), {}};
    }
    case Kind::BlockSum:
      for (const auto& [n, t] : a.patches()) {
        IdealExpr q = IdealExpr::catalog_q(i.ordinal().fundamental(n));
        if (!member(q, t).holds) return no("block " + std::to_string(n) + " trace outside " + to_string(q));
      }
      return yes();
    case Kind::Perp: {
      IdealExpr z = perp_normalize(i);
      if (z.kind() != Kind::Perp) return member(z, a);
      IdealExpr inner = expand(z.child());
      if (is_sum_like(inner.kind())) return member_perp_sum(inner, a);
      fail(ErrorKind::Undecidable, "no finite rule for " + to_string(z));
    }
    case Kind::WO:
      return a.sequences().empty() || std::all_of(a.sequences().begin(), a.sequences().end(),
                                                  [](const MonoSeq& s) { return s.dir > 0; })
                 ? yes()
                 : no("contains a descending sequence");
    case Kind::WORev:
      return std::all_of(a.sequences().begin(), a.sequences().end(), [](const MonoSeq& s) { return s.dir < 0; })
                 ? yes()
                 : no("contains an ascending sequence");
    case Kind::CatalogP:
    case Kind::CatalogQ: return member(expand(i), a);
  }
  return no("unknown constructor");
}

bool verify_witness(const IdealExpr& i, const SetExpr& a, const Verdict& v) {
  if (!v.holds || !v.witness) return true;
  const Witness& w = *v.witness;
  switch (w.kind) {
    case Witness::Kind::Join:
      return i.kind() == Kind::Join && member(i.child(0), *w.first).holds && member(i.child(1), *w.second).holds &&
             is_subset(a, unite(*w.first, *w.second));
    case Witness::Kind::Exceptional: {
      if (i.kind() != Kind::Fubini || !member(i.child(0), *w.exceptional).holds) return false;
      const NatSet& e = w.exceptional->nat_set();
      for (const Cell& c : a.cells())
        if (!c.region.subset_of(e) && !member(i.child(1), c.trace).holds) return false;
      return true;
    }
    case Witness::Kind::PerpBound: {
      // same unfolding as member(): Q[a] becomes PERP(P[a])
      IdealExpr z = perp_normalize(i.kind() == Kind::CatalogQ ? expand(i) : i);
      if (z.kind() != Kind::Perp) return false;
      IdealExpr sum = expand(z.child());
      SetExpr rebuilt = SetExpr::empty(a.domain());
      for (const auto& [n, t] : w.blocks) {
        if (n > w.bound) return false;
        auto col = column_ideal(sum, n);
        if (!col || !member(IdealExpr::perp(*col), t).holds) return false;
        rebuilt = unite(rebuilt, SetExpr::patch(a.domain(), {{n, t}}));
      }
      return equals(rebuilt, a);
    }
  }
  return false;
}

bool is_proper(const IdealExpr& i) {
  // a restriction lives on its carrier, which is its top element
  if (i.kind() == Kind::Restrict) return !member(i.child(), i.carrier()).holds;
  if (auto u = SetExpr::universe(i.domain())) return !member(i, *u).holds;
  switch (i.kind()) {
    case Kind::Fin:
    case Kind::WO:
    case Kind::WORev:
    case Kind::CatalogQ:
    case Kind::BlockSum: return true;
    case Kind::Pow: return false;
    case Kind::CatalogP: return !i.ordinal().is_zero();
    case Kind::OmegaSum: return is_proper(i.child());
    case Kind::DirectSum:
      return std::any_of(i.children().begin(), i.children().end(), [](const IdealExpr& c) { return is_proper(c); });
    case Kind::Fubini: return is_proper(i.child(0)) && is_proper(i.child(1));
    case Kind::Join: return is_proper(i.child(0)) && is_proper(i.child(1));
    case Kind::Restrict: break;
    case Kind::Perp: {
      IdealExpr z = perp_normalize(i);
      if (z.kind() != Kind::Perp) return is_proper(z);
      IdealExpr e = expand(z.child());
      if (is_sum_like(e.kind()) || e.kind() == Kind::Fubini) return true;
      fail(ErrorKind::Undecidable, "properness of " + to_string(z));
    }
  }
  return true;
}

}  // namespace idealcalc
