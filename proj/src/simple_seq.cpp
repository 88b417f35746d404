#include "idealcalc/simple_seq.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "idealcalc/error.hpp"

namespace idealcalc {

namespace {

struct RationalLess {
  bool operator()(const Rational& a, const Rational& b) const { return cmp(a, b) < 0; }
};

SetExpr not_closed_as_refinement(const auto& build) {
  try {
    return build();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotClosed) fail(ErrorKind::RefinementNotClosed, e.what());
    throw;
  }
}

void check_domain(const Domain& a, const Domain& b, const char* op) {
  if (a != b) fail(ErrorKind::DomainMismatch, std::string(op) + " of sequences over " + to_string(a) + " and " + to_string(b));
}

}  // namespace

SimpleSeq SimpleSeq::make(const Domain& d, std::vector<Term> terms) {
  std::map<Rational, SetExpr, RationalLess> merged;
  SetExpr seen = SetExpr::empty(d);
  for (Term& t : terms) {
    if (t.region.domain() != d)
      fail(ErrorKind::ValidationError, "term region over " + to_string(t.region.domain()) + " in a sequence over " +
                                           to_string(d));
    if (t.coeff == 0 || is_empty(t.region)) continue;
    if (!is_empty(intersect(seen, t.region)))
      fail(ErrorKind::ValidationError, "overlapping regions in a simple sequence at " + to_string(t.region));
    seen = unite(seen, t.region);
    auto it = merged.find(t.coeff);
    if (it == merged.end()) merged.emplace(t.coeff, t.region);
    else it->second = unite(it->second, t.region);
  }
  SimpleSeq x(d);
  for (auto& [c, r] : merged) x.terms_.push_back({c, r});
  return x;
}

Rational SimpleSeq::at(const Point& p) const {
  for (const Term& t : terms_)
    if (contains(t.region, p)) return t.coeff;
  return 0;
}

SetExpr SimpleSeq::support() const {
  SetExpr out = SetExpr::empty(domain_);
  for (const Term& t : terms_) out = unite(out, t.region);
  return out;
}

bool equals(const SimpleSeq& x, const SimpleSeq& y) {
  if (x.domain() != y.domain() || x.terms().size() != y.terms().size()) return false;
  for (std::size_t k = 0; k < x.terms().size(); ++k)
    if (x.terms()[k].coeff != y.terms()[k].coeff || !equals(x.terms()[k].region, y.terms()[k].region)) return false;
  return true;
}

std::string to_string(const SimpleSeq& x) {
  std::string out = "seq[";
  for (std::size_t k = 0; k < x.terms().size(); ++k)
    out += (k ? " + " : "") + to_string(x.terms()[k].coeff) + "*chi(" + to_string(x.terms()[k].region) + ")";
  return out + "]";
}

SimpleSeq char_fn(const SetExpr& a) { return SimpleSeq::make(a.domain(), {{1, a}}); }

SetExpr level_set(const SimpleSeq& x, const Rational& eps) {
  if (eps <= 0) fail(ErrorKind::NonpositiveEpsilon, "level set needs eps > 0, got " + to_string(eps));
  SetExpr out = SetExpr::empty(x.domain());
  for (const Term& t : x.terms())
    if (abs(t.coeff) >= eps) out = unite(out, t.region);
  return out;
}

Rational sup_norm(const SimpleSeq& x) {
  Rational m = 0;
  for (const Term& t : x.terms()) m = std::max(m, abs(t.coeff));
  return m;
}

Verdict in_c0I(const IdealExpr& i, const SimpleSeq& x) {
  check_domain(i.domain(), x.domain(), "in_c0I");
  std::set<Rational, RationalLess> levels;
  for (const Term& t : x.terms()) levels.insert(abs(t.coeff));
  for (const Rational& l : levels) {
    SetExpr s = level_set(x, l);
    if (!member(i, s).holds) return Verdict{false, std::nullopt, "level set at " + to_string(l) + " = " + to_string(s) + " is not in " + to_string(i)};
  }
  return Verdict{true, std::nullopt, {}};
}

ExtRational ideal_limsup(const IdealExpr& i, const SimpleSeq& x) {
  check_domain(i.domain(), x.domain(), "ideal_limsup");
  std::set<Rational, RationalLess> values;
  for (const Term& t : x.terms()) values.insert(t.coeff);
  if (!is_universe(x.support())) values.insert(Rational(0));
  const Rational lowest = *values.begin();
  for (auto it = values.rbegin(); it != values.rend(); ++it) {
    const Rational& v = *it;
    bool in_ideal;
    if (v == lowest) {
      in_ideal = !is_proper(i);
    } else if (v > 0) {
      SetExpr s = SetExpr::empty(x.domain());
      for (const Term& t : x.terms())
        if (t.coeff >= v) s = unite(s, t.region);
      in_ideal = member(i, s).holds;
    } else {
      auto u = SetExpr::universe(x.domain());
      if (!u) fail(ErrorKind::Undecidable, "level {x >= " + to_string(v) + "} needs the complement over " + to_string(x.domain()));
      SetExpr below = SetExpr::empty(x.domain());
      for (const Term& t : x.terms())
        if (t.coeff < v) below = unite(below, t.region);
      in_ideal = member(i, difference(*u, below)).holds;
    }
    if (!in_ideal) return ExtRational::of(v);
  }
  return ExtRational::neg_inf();
}

Rational quotient_norm(const IdealExpr& i, const SimpleSeq& x) {
  ExtRational l = ideal_limsup(i, abs(x));
  return l.minus_infinity ? Rational(0) : l.value;
}

std::vector<RefinedCell> refine(const SimpleSeq& x, const SimpleSeq& y) {
  check_domain(x.domain(), y.domain(), "refine");
  std::vector<RefinedCell> out;
  const SetExpr sx = x.support(), sy = y.support();
  for (const Term& a : x.terms()) {
    for (const Term& b : y.terms()) {
      SetExpr r = intersect(a.region, b.region);
      if (!is_empty(r)) out.push_back({r, a.coeff, b.coeff});
    }
    SetExpr only = not_closed_as_refinement([&] { return difference(a.region, sy); });
    if (!is_empty(only)) out.push_back({only, a.coeff, 0});
  }
  for (const Term& b : y.terms()) {
    SetExpr only = not_closed_as_refinement([&] { return difference(b.region, sx); });
    if (!is_empty(only)) out.push_back({only, 0, b.coeff});
  }
  return out;
}

SimpleSeq combine(CombineOp op, const SimpleSeq& x, const SimpleSeq& y) {
  std::vector<Term> terms;
  for (const RefinedCell& c : refine(x, y)) {
    Rational v = op == CombineOp::Add ? Rational(c.x + c.y) : op == CombineOp::Meet ? std::min(c.x, c.y) : std::max(c.x, c.y);
    terms.push_back({v, c.region});
  }
  return SimpleSeq::make(x.domain(), std::move(terms));
}

SimpleSeq scale(const SimpleSeq& x, const Rational& c) {
  std::vector<Term> terms;
  for (const Term& t : x.terms()) terms.push_back({c * t.coeff, t.region});
  return SimpleSeq::make(x.domain(), std::move(terms));
}

SimpleSeq abs(const SimpleSeq& x) {
  std::vector<Term> terms;
  for (const Term& t : x.terms()) terms.push_back({abs(t.coeff), t.region});
  return SimpleSeq::make(x.domain(), std::move(terms));
}

SimpleSeq subtract(const SimpleSeq& x, const SimpleSeq& y) { return combine(CombineOp::Add, x, scale(y, -1)); }

SimpleSeq restrict_to(const SimpleSeq& x, const SetExpr& a) {
  check_domain(x.domain(), a.domain(), "restriction");
  std::vector<Term> terms;
  for (const Term& t : x.terms()) terms.push_back({t.coeff, intersect(t.region, a)});
  return SimpleSeq::make(x.domain(), std::move(terms));
}

std::pair<SimpleSeq, SimpleSeq> decompose_join(const IdealExpr& i, const IdealExpr& j, const SimpleSeq& x) {
  check_domain(i.domain(), x.domain(), "decompose_join");
  const SetExpr s = x.support();
  auto split = split_join(i, j, s);
  if (!split)
    fail(ErrorKind::MembershipRequired, "support " + to_string(s) + " is not in JOIN(" + to_string(i) + ", " + to_string(j) + ")");
  try {
    return {restrict_to(x, split->first), restrict_to(x, difference(s, split->first))};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotClosed) throw;
  }
  SetExpr first = not_closed_as_refinement([&] { return difference(split->first, split->second); });
  return {restrict_to(x, first), restrict_to(x, split->second)};
}

bool c0_disjoint(const SimpleSeq& x, const SimpleSeq& y) {
  if (x.domain() != y.domain()) fail(ErrorKind::DomainMismatch, "c0_disjoint of sequences over different domains");
  // |x| meet |y| vanishes off the pairwise intersections, so no complement is needed
  std::vector<Term> meet;
  for (const Term& s : x.terms())
    for (const Term& t : y.terms()) {
      SetExpr r = intersect(s.region, t.region);
      if (!is_empty(r)) meet.push_back({std::min(abs(s.coeff), abs(t.coeff)), std::move(r)});
    }
  return in_c0I(IdealExpr::fin(x.domain()), SimpleSeq::make(x.domain(), std::move(meet))).holds;
}

VecSimpleSeq VecSimpleSeq::make(const Domain& d, std::size_t dim, std::vector<VecTerm> terms) {
  VecSimpleSeq x(d, dim);
  SetExpr seen = SetExpr::empty(d);
  for (VecTerm& t : terms) {
    if (t.coeff.size() != dim) fail(ErrorKind::ValidationError, "vector coefficient of the wrong dimension");
    if (t.region.domain() != d) fail(ErrorKind::ValidationError, "vector term over the wrong domain");
    if (std::all_of(t.coeff.begin(), t.coeff.end(), [](const Rational& c) { return c == 0; }) || is_empty(t.region))
      continue;
    if (!is_empty(intersect(seen, t.region))) fail(ErrorKind::ValidationError, "overlapping regions in a vector sequence");
    seen = unite(seen, t.region);
    auto it = std::find_if(x.terms_.begin(), x.terms_.end(), [&](const VecTerm& o) { return o.coeff == t.coeff; });
    if (it == x.terms_.end()) x.terms_.push_back(std::move(t));
    else it->region = unite(it->region, t.region);
  }
  std::sort(x.terms_.begin(), x.terms_.end(), [](const VecTerm& a, const VecTerm& b) {
    return std::lexicographical_compare(a.coeff.begin(), a.coeff.end(), b.coeff.begin(), b.coeff.end(),
                                        [](const Rational& p, const Rational& q) { return cmp(p, q) < 0; });
  });
  return x;
}

std::vector<Rational> VecSimpleSeq::at(const Point& p) const {
  for (const VecTerm& t : terms_)
    if (contains(t.region, p)) return t.coeff;
  return std::vector<Rational>(dim_, Rational(0));
}

Rational sup_norm(const VecSimpleSeq& x) {
  Rational m = 0;
  for (const VecTerm& t : x.terms())
    for (const Rational& c : t.coeff) m = std::max(m, abs(c));
  return m;
}

std::string to_string(const VecSimpleSeq& x) {
  std::string out = "vseq[";
  for (std::size_t k = 0; k < x.terms().size(); ++k) {
    out += k ? " + (" : "(";
    for (std::size_t i = 0; i < x.dim(); ++i) out += (i ? "," : "") + to_string(x.terms()[k].coeff[i]);
    out += ")*chi(" + to_string(x.terms()[k].region) + ")";
  }
  return out + "]";
}

}  // namespace idealcalc
