#include "idealcalc/operators.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <random>

#include "idealcalc/corpus.hpp"
#include "idealcalc/error.hpp"

namespace idealcalc {

IndexOp::IndexOp(IndexMap h) : IndexOp(h, SetExpr::empty(h.source())) {}

IndexOp::IndexOp(IndexMap h, SetExpr negative) : h_(std::move(h)), negative_(std::move(negative)) {
  if (negative_.domain() != h_.source())
    fail(ErrorKind::DomainMismatch, "sign set over " + to_string(negative_.domain()) + " for outputs over " +
                                        to_string(h_.source()));
}

Rational IndexOp::sign(const Point& p) const { return contains(negative_, p) ? -1 : 1; }

IndexOp restriction_embed(const IdealExpr& i, const SetExpr& a) {
  if (a.domain() != i.domain())
    fail(ErrorKind::DomainMismatch, "restriction set over " + to_string(a.domain()) + " for " + to_string(i));
  IndexOp t(IndexMap::identity(i.domain()));
  t.mask_ = a;
  return t;
}

std::string to_string(const IndexOp& t) {
  if (t.mask()) return "ext(" + to_string(*t.mask()) + ")";
  if (is_empty(t.negative())) return to_string(t.map());
  return "T(" + to_string(t.map()) + ", " + to_string(t.negative()) + ")";
}

SimpleSeq apply(const IndexOp& t, const SimpleSeq& x) {
  if (x.domain() != t.input_domain())
    fail(ErrorKind::DomainMismatch, "operator on " + to_string(t.input_domain()) + " applied to a sequence over " +
                                        to_string(x.domain()));
  const bool signed_part = !is_empty(t.negative());
  std::vector<Term> terms;
  for (const Term& term : x.terms()) {
    SetExpr p = preimage(t.map(), term.region);
    if (t.mask()) p = intersect(p, *t.mask());
    if (!signed_part) {
      terms.push_back({term.coeff, p});
      continue;
    }
    terms.push_back({-term.coeff, intersect(p, t.negative())});
    terms.push_back({term.coeff, difference(p, t.negative())});
  }
  return SimpleSeq::make(t.output_domain(), std::move(terms));
}

// ---- harness helpers --------------------------------------------------------

namespace {

bool not_closed(const Error& e) { return e.kind() == ErrorKind::NotClosed || e.kind() == ErrorKind::RefinementNotClosed; }

// Atoms whose images under t stay in the grammar: the standard pool when it
// works, else small finite sets plus their complement.
std::vector<SetExpr> harness_pool(const IndexOp& t, std::uint64_t seed) {
  const Domain& d = t.input_domain();
  const auto& pool = atom_pool(d, seed);
  try {
    for (const SetExpr& a : pool) apply(t, char_fn(a));
    return pool;
  } catch (const Error& e) {
    if (!not_closed(e)) throw;
  }
  std::vector<SetExpr> out;
  std::uint64_t next = 0;
  for (std::uint64_t size : {1u, 2u, 3u, 1u, 4u}) {
    std::vector<Point> pts;
    for (std::uint64_t k = 0; k < size; ++k) pts.push_back(point_at(d, next++));
    out.push_back(SetExpr::from_points(d, pts));
  }
  if (auto u = SetExpr::universe(d)) {
    SetExpr rest = *u;
    for (const SetExpr& a : out) rest = difference(rest, a);
    out.push_back(rest);
  }
  return out;
}

std::string first_difference(const SimpleSeq& lhs, const SimpleSeq& rhs) {
  const SetExpr where = unite(lhs.support(), rhs.support());
  for (const Point& p : enumerate_prefix(where, 1000))
    if (lhs.at(p) != rhs.at(p))
      return "at " + to_string(p, where.domain()) + ": " + to_string(lhs.at(p)) + " vs " + to_string(rhs.at(p));
  return to_string(lhs) + " vs " + to_string(rhs);
}

enum class Law { Norm, Additivity, Meet, Transport };

const char* law_name(Law l) {
  switch (l) {
    case Law::Norm: return "norm preservation";
    case Law::Additivity: return "additivity";
    case Law::Meet: return "meet preservation";
    case Law::Transport: return "c0 transport";
  }
  return "?";
}

// Empty when the law holds on (x, y); otherwise a description.
std::optional<std::string> violation(Law law, const IndexOp& t, const IdealExpr& i, const IdealExpr& j,
                                     const SimpleSeq& x, const SimpleSeq& y) {
  switch (law) {
    case Law::Norm: {
      const Rational a = sup_norm(apply(t, x)), b = sup_norm(x);
      if (a == b) return std::nullopt;
      return "|Tx| = " + to_string(a) + " but |x| = " + to_string(b);
    }
    case Law::Additivity: {
      SimpleSeq lhs = apply(t, combine(CombineOp::Add, x, y)), rhs = combine(CombineOp::Add, apply(t, x), apply(t, y));
      if (equals(lhs, rhs)) return std::nullopt;
      return "T(x+y) != Tx+Ty " + first_difference(lhs, rhs);
    }
    case Law::Meet: {
      SimpleSeq lhs = apply(t, combine(CombineOp::Meet, x, y)), rhs = combine(CombineOp::Meet, apply(t, x), apply(t, y));
      if (equals(lhs, rhs)) return std::nullopt;
      return "T(x meet y) != Tx meet Ty " + first_difference(lhs, rhs);
    }
    case Law::Transport:
      if (!in_c0I(i, x).holds || in_c0I(j, apply(t, x)).holds) return std::nullopt;
      return "x in c0(" + to_string(i) + ") but Tx not in c0(" + to_string(j) + ")";
  }
  return std::nullopt;
}

SimpleSeq without_term(const SimpleSeq& x, std::size_t k) {
  std::vector<Term> terms = x.terms();
  terms.erase(terms.begin() + static_cast<std::ptrdiff_t>(k));
  return SimpleSeq::make(x.domain(), std::move(terms));
}

SimpleSeq with_region(const SimpleSeq& x, std::size_t k, const SetExpr& r) {
  std::vector<Term> terms = x.terms();
  terms[k].region = r;
  return SimpleSeq::make(x.domain(), std::move(terms));
}

std::pair<SimpleSeq, SimpleSeq> shrink(Law law, const IndexOp& t, const IdealExpr& i, const IdealExpr& j, SimpleSeq x,
                                       SimpleSeq y) {
  auto fails = [&](const SimpleSeq& a, const SimpleSeq& b) {
    try {
      return violation(law, t, i, j, a, b).has_value();
    } catch (const Error& e) {
      if (not_closed(e)) return false;
      throw;
    }
  };
  for (bool progress = true; progress;) {
    progress = false;
    for (SimpleSeq* s : {&x, &y})
      for (std::size_t k = 0; k < s->terms().size() && !progress; ++k) {
        SimpleSeq smaller = without_term(*s, k);
        if (fails(s == &x ? smaller : x, s == &y ? smaller : y)) {
          *s = smaller;
          progress = true;
        }
      }
  }
  for (SimpleSeq* s : {&x, &y})
    for (std::size_t k = 0; k < s->terms().size(); ++k) {
      const SetExpr& r = s->terms()[k].region;
      if (is_finite(r)) continue;
      const std::vector<Point> head = enumerate_prefix(r, 64);
      for (std::size_t len = 1; len <= head.size(); len *= 2) {
        SetExpr cut = SetExpr::from_points(r.domain(), {head.begin(), head.begin() + static_cast<std::ptrdiff_t>(len)});
        SimpleSeq smaller = with_region(*s, k, cut);
        if (fails(s == &x ? smaller : x, s == &y ? smaller : y)) {
          *s = smaller;
          break;
        }
      }
    }
  return {x, y};
}

}  // namespace

Report check_isometry_lattice(const IndexOp& t, const IdealExpr& i, const IdealExpr& j, std::size_t trials,
                              std::uint64_t seed) {
  if (i.domain() != t.input_domain() || j.domain() != t.output_domain())
    fail(ErrorKind::DomainMismatch, "ideals over " + to_string(i.domain()) + " and " + to_string(j.domain()) +
                                        " for an operator from " + to_string(t.input_domain()) + " to " +
                                        to_string(t.output_domain()));
  Report r;
  r.trials = trials;
  r.seed = seed;
  std::vector<Law> laws{Law::Additivity, Law::Meet, Law::Transport};
  if (t.map().bijective() && !t.mask()) laws.insert(laws.begin(), Law::Norm);
  else r.notes.push_back("norm preservation not checked: the index map is not a bijection");
  for (Law l : laws) r.laws.push_back(law_name(l));
  if (!is_empty(t.negative())) r.notes.push_back("negative sign part: meet preservation is expected to fail");

  std::mt19937_64 rng(seed);
  const std::vector<SetExpr> pool = harness_pool(t, seed);
  for (std::size_t k = 0; k < trials; ++k) {
    const SimpleSeq x = random_seq(t.input_domain(), pool, rng), y = random_seq(t.input_domain(), pool, rng);
    try {
      for (Law l : laws) {
        auto v = violation(l, t, i, j, x, y);
        if (!v) continue;
        r.pass = false;
        if (std::find(r.failed_laws.begin(), r.failed_laws.end(), law_name(l)) == r.failed_laws.end())
          r.failed_laws.push_back(law_name(l));
        if (!r.counterexample) {
          auto [sx, sy] = shrink(l, t, i, j, x, y);
          r.counterexample = std::string(law_name(l)) + " fails for x = " + to_string(sx) + ", y = " + to_string(sy) +
                             " (trial " + std::to_string(k) + "): " + *violation(l, t, i, j, sx, sy);
        }
      }
    } catch (const Error& e) {
      if (!not_closed(e)) throw;
      ++r.skipped;
    }
  }
  return r;
}

namespace {

std::optional<SetExpr> carrier_of(const IdealExpr& j) {
  if (j.kind() == IdealExpr::Kind::Restrict) return j.carrier();
  if (j.kind() != IdealExpr::Kind::Join) return std::nullopt;
  const auto a = carrier_of(j.child(0)), b = carrier_of(j.child(1));
  if (!a || !b) return std::nullopt;
  return unite(*a, *b);
}

}  // namespace

Report check_katetov(const IndexMap& h, const IdealExpr& i, const IdealExpr& j, const std::vector<SetExpr>& corpus) {
  if (h.target() != i.domain() || h.source() != j.domain())
    fail(ErrorKind::DomainMismatch, "Katetov map " + to_string(h) + " must go from " + to_string(j.domain()) + " to " +
                                        to_string(i.domain()));
  Report r;
  r.laws.push_back("preimages of members of " + to_string(i) + " are members of " + to_string(j));
  r.bijective = h.bijective();
  r.image_is_ideal = r.bijective;
  for (const SetExpr& a : corpus) {
    ++r.trials;
    if (!member(i, a).holds) continue;
    SetExpr pre;
    try {
      pre = preimage(h, a);
      // a restricted ideal lives on its carrier, so h is only read there
      if (const auto c = carrier_of(j)) pre = intersect(pre, *c);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotClosed) throw;
      ++r.skipped;
      continue;
    }
    if (!member(j, pre).holds) {
      r.pass = false;
      r.failed_laws.push_back(r.laws.front());
      r.counterexample = to_string(a);
      r.notes.push_back("preimage " + to_string(pre) + " is not in " + to_string(j));
      break;
    }
  }
  return r;
}

Report check_katetov(const IndexMap& h, const IdealExpr& i, const IdealExpr& j) {
  return check_katetov(h, i, j, standard_corpus(i.domain()));
}

Report check_ht_conditions(const IndexOp& t, const IdealExpr& i, const std::vector<Point>& sample,
                           const std::vector<std::vector<SetExpr>>& families, std::uint64_t prefix) {
  if (i.domain() != t.input_domain())
    fail(ErrorKind::DomainMismatch, "ideal over " + to_string(i.domain()) + " for an operator on " +
                                        to_string(t.input_domain()));
  Report r;
  r.laws = {"(1) every sampled point is hit by the image of some member", "(2) empty intersections have zero meet"};
  const Domain& in = t.input_domain();
  const Domain& out = t.output_domain();
  for (const Point& n : sample) {
    ++r.trials;
    check_point(n, out);
    // T chi(A)(n) = 1 needs h(n) in A, so {h(n)} is the least candidate.
    const SetExpr a = SetExpr::from_points(in, {t.map().apply(n)});
    if (member(i, a).holds && apply(t, char_fn(a)).at(n) == 1) continue;
    r.pass = false;
    if (r.failed_laws.empty() || r.failed_laws.front() != r.laws[0]) r.failed_laws.insert(r.failed_laws.begin(), r.laws[0]);
    if (!r.counterexample) r.counterexample = "condition (1) fails at " + to_string(n, out);
  }
  for (const auto& family : families) {
    ++r.trials;
    if (family.empty() ||
        std::any_of(family.begin(), family.end(), [&](const SetExpr& a) { return !member(i, a).holds; })) {
      ++r.skipped;
      continue;
    }
    SetExpr common = family.front();
    for (const SetExpr& a : family) common = intersect(common, a);
    if (!is_empty(common)) continue;
    std::vector<SimpleSeq> images;
    for (const SetExpr& a : family) images.push_back(apply(t, char_fn(a)));
    SimpleSeq meet = images.front();
    for (const SimpleSeq& s : images) meet = combine(CombineOp::Meet, meet, s);
    bool prefix_zero = true;
    for (std::uint64_t k = 0; k < prefix && prefix_zero; ++k) {
      const Point p = point_at(out, k);
      Rational m = images.front().at(p);
      for (const SimpleSeq& s : images) m = std::min(m, s.at(p));
      prefix_zero = m == 0;
    }
    if (meet.is_zero() && prefix_zero) continue;
    r.pass = false;
    if (std::find(r.failed_laws.begin(), r.failed_laws.end(), r.laws[1]) == r.failed_laws.end())
      r.failed_laws.push_back(r.laws[1]);
    if (!r.counterexample) {
      std::string fam;
      for (const SetExpr& a : family) fam += (fam.empty() ? "" : ", ") + to_string(a);
      r.counterexample = "condition (2) fails for {" + fam + "}: meet " + to_string(meet);
    }
  }
  return r;
}

// ---- block decompositions ---------------------------------------------------

namespace {

std::vector<NatSet> column_atoms(const SimpleSeq& x) {
  std::vector<NatSet> atoms{NatSet::all()};
  auto split = [&](const NatSet& s) {
    std::vector<NatSet> next;
    for (const NatSet& a : atoms) {
      NatSet in = a.intersect(s), out = a.minus(s);
      if (!in.is_empty()) next.push_back(in);
      if (!out.is_empty()) next.push_back(out);
    }
    atoms = std::move(next);
  };
  for (const Term& t : x.terms()) {
    for (const Cell& c : t.region.cells()) split(c.region);
    for (const Graph& g : t.region.graphs()) split(g.support);
  }
  return atoms;
}

BlockDecomposition decompose(const SimpleSeq& x) {
  const Domain& d = x.domain();
  BlockDecomposition b;
  b.norm = 0;
  if (d.is_blocks()) {
    std::map<std::uint64_t, std::vector<Term>> per_block;
    for (const Term& t : x.terms())
      for (const auto& [n, trace] : t.region.patches()) per_block[n].push_back({t.coeff, trace});
    for (auto& [n, terms] : per_block) {
      SimpleSeq cells = SimpleSeq::make(d.block(n), std::move(terms));
      b.groups.push_back({NatSet::singleton(n), cells, {}, sup_norm(cells)});
    }
  } else {
    if (!d.is_prod()) fail(ErrorKind::DomainMismatch, "block decomposition needs a product or block domain");
    for (const NatSet& g : column_atoms(x)) {
      std::vector<Term> terms;
      std::vector<GraphTerm> graphs;
      Rational norm = 0;
      for (const Term& t : x.terms()) {
        for (const Cell& c : t.region.cells())
          if (!g.intersect(c.region).is_empty()) terms.push_back({t.coeff, c.trace});
        for (const Graph& gr : t.region.graphs())
          if (!g.intersect(gr.support).is_empty()) {
            graphs.push_back({t.coeff, gr.slope, gr.offset});
            norm = std::max(norm, abs(t.coeff));
          }
      }
      if (terms.empty() && graphs.empty()) continue;
      SimpleSeq cells = SimpleSeq::make(d.inner(), std::move(terms));
      b.groups.push_back({g, cells, std::move(graphs), std::max(norm, sup_norm(cells))});
    }
  }
  for (const ColumnGroup& g : b.groups) b.norm = std::max(b.norm, g.norm);
  return b;
}

}  // namespace

BlockDecomposition directsum_iso(const SimpleSeq& x, const IdealExpr& sum) {
  BlockDecomposition b = decompose(x);
  b.in_space = in_c0I(sum, x).holds;
  return b;
}

BlockDecomposition omegaperp_iso(const SimpleSeq& x, const IdealExpr& sum) {
  const IdealExpr perp = IdealExpr::perp(sum);
  const Verdict v = member(perp, x.support());
  if (!v.holds) fail(ErrorKind::MembershipRequired, to_string(x) + " is not in c0(" + to_string(perp) + ")");
  if (!v.witness || v.witness->kind != Witness::Kind::PerpBound)
    fail(ErrorKind::WitnessUnavailable, "no column bound for " + to_string(perp));
  BlockDecomposition b = decompose(x);
  b.in_space = true;
  b.bound = v.witness->bound;
  return b;
}

SimpleSeq reassemble(const Domain& d, const BlockDecomposition& b) {
  std::vector<Term> terms;
  for (const ColumnGroup& g : b.groups) {
    for (const Term& t : g.cells.terms()) {
      if (d.is_blocks()) {
        for (std::uint64_t n : g.columns.finite_members()) terms.push_back({t.coeff, SetExpr::patch(d, {{n, t.region}})});
      } else {
        terms.push_back({t.coeff, SetExpr::cols(d, g.columns, t.region)});
      }
    }
    for (const GraphTerm& gr : g.graphs) terms.push_back({gr.coeff, SetExpr::graph(gr.slope, gr.offset, g.columns)});
  }
  return SimpleSeq::make(d, std::move(terms));
}

FubiniQuotient fubini_quotient(const SimpleSeq& x, const IdealExpr& i, const IdealExpr& j) {
  const IdealExpr fub = IdealExpr::fubini(i, j);
  if (!in_c0I(fub, x).holds) fail(ErrorKind::MembershipRequired, to_string(x) + " is not in c0(" + to_string(fub) + ")");
  std::vector<Term> terms;
  for (const ColumnGroup& g : decompose(x).groups) {
    // Graph points change each column in one place; the quotient norm
    // ignores finite changes since J contains FIN.
    const Rational q = quotient_norm(j, g.cells);
    if (q != 0) terms.push_back({q, SetExpr::nat(g.columns)});
  }
  FubiniQuotient out{SimpleSeq::make(Domain::nat(), std::move(terms)), false, false};
  out.kernel = out.q.is_zero();
  out.q_in_c0 = in_c0I(i, out.q).holds;
  return out;
}

// ---- tensor norm --------------------------------------------------------------

namespace {

const Domain& tensor_domain(const TensorInput& u) {
  if (u.empty()) fail(ErrorKind::ValidationError, "tensor input needs at least one term");
  const std::size_t dim = u.front().second.size();
  if (dim == 0) fail(ErrorKind::ValidationError, "tensor vectors need dimension >= 1");
  for (const auto& [x, y] : u) {
    if (x.domain() != u.front().first.domain()) fail(ErrorKind::DomainMismatch, "tensor terms over different domains");
    if (y.size() != dim) fail(ErrorKind::ValidationError, "tensor vectors of different dimensions");
  }
  return u.front().first.domain();
}

SetExpr refinement_difference(const SetExpr& a, const SetExpr& b) {
  try {
    return difference(a, b);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotClosed) fail(ErrorKind::RefinementNotClosed, e.what());
    throw;
  }
}

}  // namespace

Rational tensor_injective_norm(const TensorInput& u) {
  const Domain& d = tensor_domain(u);
  Rational best = 0;
  for (std::size_t i = 0; i < u.front().second.size(); ++i)
    for (int s : {1, -1}) {
      SimpleSeq acc(d);
      for (const auto& [x, y] : u) acc = combine(CombineOp::Add, acc, scale(x, s * y[i]));
      best = std::max(best, sup_norm(acc));
    }
  return best;
}

VecSimpleSeq tensor_embed(const TensorInput& u) {
  const Domain& d = tensor_domain(u);
  const std::size_t m = u.size(), dim = u.front().second.size();
  struct Piece {
    SetExpr region;
    std::vector<Rational> coeff;  // value of each x^j on the piece
  };
  std::vector<Piece> pieces;
  for (std::size_t j = 0; j < m; ++j) {
    const SimpleSeq& x = u[j].first;
    const SetExpr sx = x.support();
    SetExpr covered = SetExpr::empty(d);
    std::vector<Piece> next;
    for (const Piece& p : pieces) {
      covered = unite(covered, p.region);
      for (const Term& t : x.terms()) {
        SetExpr r = intersect(p.region, t.region);
        if (is_empty(r)) continue;
        Piece q{r, p.coeff};
        q.coeff[j] = t.coeff;
        next.push_back(std::move(q));
      }
      SetExpr rest = refinement_difference(p.region, sx);
      if (!is_empty(rest)) next.push_back({rest, p.coeff});
    }
    for (const Term& t : x.terms()) {
      SetExpr fresh = refinement_difference(t.region, covered);
      if (is_empty(fresh)) continue;
      Piece q{fresh, std::vector<Rational>(m, Rational(0))};
      q.coeff[j] = t.coeff;
      next.push_back(std::move(q));
    }
    pieces = std::move(next);
  }
  std::vector<VecTerm> terms;
  for (const Piece& p : pieces) {
    std::vector<Rational> v(dim, Rational(0));
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < dim; ++i) v[i] += p.coeff[j] * u[j].second[i];
    terms.push_back({std::move(v), p.region});
  }
  return VecSimpleSeq::make(d, dim, std::move(terms));
}

}  // namespace idealcalc
