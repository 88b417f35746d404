#include "idealcalc/set_expr.hpp"

#include <algorithm>
#include <map>

#include "idealcalc/error.hpp"

namespace idealcalc {

struct SetExpr::Body {
  Domain domain = Domain::nat();
  NatSet nat;
  std::vector<Cell> cells;
  std::vector<Graph> graphs;
  std::vector<Rational> points;
  std::vector<MonoSeq> seqs;
  std::vector<std::pair<std::uint64_t, SetExpr>> patches;
};

struct SetBuilder {
  static SetExpr make(SetExpr::Body body) { return SetExpr(std::make_shared<const SetExpr::Body>(std::move(body))); }
};

namespace {

// Bounded enumeration used where an overlap of two sequences is finite.
constexpr std::uint64_t kEnumerationCap = std::uint64_t{1} << 20;

std::strong_ordering cmp_q(const Rational& a, const Rational& b) {
  const int c = cmp(a, b);
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

void require_same(const SetExpr& a, const SetExpr& b, const char* op) {
  if (a.domain() != b.domain())
    fail(ErrorKind::DomainMismatch, std::string(op) + ": " + to_string(a.domain()) + " vs " + to_string(b.domain()));
}

std::uint64_t checked_affine(std::uint64_t a, std::uint64_t n, std::uint64_t b) {
  const unsigned __int128 v = static_cast<unsigned __int128>(a) * n + b;
  if (v > std::numeric_limits<std::uint64_t>::max()) fail(ErrorKind::ValidationError, "graph value overflows 64 bits");
  return static_cast<std::uint64_t>(v);
}

std::uint64_t to_u64(const mpz_class& z, const char* what) {
  if (z < 0 || !z.fits_ulong_p()) fail(ErrorKind::NotClosed, std::string(what) + " out of range");
  return z.get_ui();
}

mpz_class ceil_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

mpz_class floor_q(const Rational& x) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

// ---- Prod normalization -----------------------------------------------------

void add_cell(std::vector<Cell>& cells, NatSet region, const SetExpr& trace) {
  if (region.is_empty() || is_empty(trace)) return;
  std::vector<Cell> out;
  out.reserve(cells.size() + 2);
  for (const Cell& c : cells) {
    NatSet both = c.region.intersect(region);
    if (both.is_empty()) {
      out.push_back(c);
      continue;
    }
    NatSet keep = c.region.minus(region);
    if (!keep.is_empty()) out.push_back({keep, c.trace});
    out.push_back({both, unite(c.trace, trace)});
    region = region.minus(c.region);
  }
  if (!region.is_empty()) out.push_back({region, trace});
  cells = std::move(out);
}

std::optional<std::uint64_t> graph_crossing(const Graph& g, const Graph& h) {
  if (g.slope == h.slope) return std::nullopt;
  // g.slope*n + g.offset == h.slope*n + h.offset
  const __int128 num = static_cast<__int128>(h.offset) - static_cast<__int128>(g.offset);
  const __int128 den = static_cast<__int128>(g.slope) - static_cast<__int128>(h.slope);
  if (num % den != 0) return std::nullopt;
  const __int128 n = num / den;
  if (n < 0) return std::nullopt;
  return static_cast<std::uint64_t>(n);
}

NatSet covered_by_cells(const Graph& g, const std::vector<Cell>& cells) {
  NatSet hit;
  for (const Cell& c : cells)
    hit = hit.unite(c.region.intersect(c.trace.nat_set().affine_preimage(g.slope, g.offset)));
  return hit;
}

SetExpr normalize_prod(const Domain& d, std::vector<Cell> raw_cells, std::vector<Graph> raw_graphs) {
  std::vector<Cell> cells;
  std::vector<Graph> graphs;
  for (Cell& c : raw_cells) add_cell(cells, std::move(c.region), c.trace);
  for (Graph& g : raw_graphs) {
    if (g.support.is_empty()) continue;
    if (!d.inner().is_nat()) fail(ErrorKind::DomainMismatch, "graphs need the domain N*N, got " + to_string(d));
    if (g.slope == 0) add_cell(cells, g.support, SetExpr::nat(NatSet::singleton(g.offset)));
    else graphs.push_back(std::move(g));
  }
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(graphs.begin(), graphs.end(),
              [](const Graph& a, const Graph& b) { return std::pair(a.slope, a.offset) < std::pair(b.slope, b.offset); });
    std::vector<Graph> merged;
    for (Graph& g : graphs) {
      if (!merged.empty() && merged.back().slope == g.slope && merged.back().offset == g.offset)
        merged.back().support = merged.back().support.unite(g.support);
      else merged.push_back(std::move(g));
    }
    graphs = std::move(merged);
    for (Graph& g : graphs) g.support = g.support.minus(covered_by_cells(g, cells));
    for (std::size_t i = 0; i < graphs.size(); ++i)
      for (std::size_t j = i + 1; j < graphs.size(); ++j)
        if (auto n = graph_crossing(graphs[i], graphs[j]);
            n && graphs[i].support.contains(*n) && graphs[j].support.contains(*n))
          graphs[j].support = graphs[j].support.minus(NatSet::singleton(*n));
    std::vector<Graph> infinite;
    for (Graph& g : graphs) {
      if (g.support.is_empty()) continue;
      if (!g.support.is_finite()) {
        infinite.push_back(std::move(g));
        continue;
      }
      for (std::uint64_t n : g.support.finite_members())
        add_cell(cells, NatSet::singleton(n), SetExpr::nat(NatSet::singleton(checked_affine(g.slope, n, g.offset))));
      changed = true;
    }
    graphs = std::move(infinite);
  }
  // Merge cells carrying the same trace.
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.trace < b.trace; });
  std::vector<Cell> merged;
  for (Cell& c : cells) {
    if (!merged.empty() && merged.back().trace == c.trace) merged.back().region = merged.back().region.unite(c.region);
    else merged.push_back(std::move(c));
  }
  std::sort(merged.begin(), merged.end(), [](const Cell& a, const Cell& b) {
    const auto ma = a.region.min(), mb = b.region.min();
    if (ma != mb) return ma < mb;
    if (auto c = a.region <=> b.region; c != 0) return c < 0;
    return a.trace < b.trace;
  });
  SetExpr::Body body;
  body.domain = d;
  body.cells = std::move(merged);
  body.graphs = std::move(graphs);
  return SetBuilder::make(std::move(body));
}

// ---- Rat normalization ------------------------------------------------------

bool seq_less(const MonoSeq& a, const MonoSeq& b) {
  if (a.dir != b.dir) return a.dir < b.dir;
  if (auto c = cmp_q(a.q, b.q); c != 0) return c < 0;
  if (auto c = cmp_q(a.r, b.r); c != 0) return c < 0;
  return a.start < b.start;
}

bool seq_equal(const MonoSeq& a, const MonoSeq& b) {
  return a.dir == b.dir && a.q == b.q && a.r == b.r && a.start == b.start;
}

// inner ⊆ outer for two sequences with the same direction and limit.
bool seq_covers(const MonoSeq& outer, const MonoSeq& inner) {
  if (outer.dir != inner.dir || outer.q != inner.q) return false;
  const Rational ratio = outer.r / inner.r;
  if (ratio.get_den() != 1) return false;
  const mpz_class u = ratio.get_num();
  return u * (mpz_class(inner.start) + 1) >= mpz_class(outer.start) + 1;
}

SetExpr normalize_rat(std::vector<Rational> points, std::vector<MonoSeq> seqs) {
  for (const MonoSeq& s : seqs)
    if (s.r <= 0) fail(ErrorKind::ValidationError, "monotone sequence needs r > 0");
  std::sort(seqs.begin(), seqs.end(), seq_less);
  seqs.erase(std::unique(seqs.begin(), seqs.end(), seq_equal), seqs.end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  auto on_some_seq = [&](const Rational& p) {
    return std::any_of(seqs.begin(), seqs.end(), [&](const MonoSeq& s) { return s.index_of(p).has_value(); });
  };
  std::erase_if(points, on_some_seq);
  for (MonoSeq& s : seqs) {
    while (s.start > 0) {
      auto it = std::lower_bound(points.begin(), points.end(), s.at(s.start - 1));
      if (it == points.end() || *it != s.at(s.start - 1)) break;
      points.erase(it);
      --s.start;
    }
  }
  std::vector<MonoSeq> kept;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    bool covered = false;
    for (std::size_t j = 0; j < seqs.size() && !covered; ++j)
      if (i != j && seq_covers(seqs[j], seqs[i]) && !(seq_covers(seqs[i], seqs[j]) && j > i)) covered = true;
    if (!covered) kept.push_back(seqs[i]);
  }
  std::sort(kept.begin(), kept.end(), seq_less);
  SetExpr::Body body;
  body.domain = Domain::rat();
  body.points = std::move(points);
  body.seqs = std::move(kept);
  return SetBuilder::make(std::move(body));
}

bool rat_contains(const SetExpr& a, const Rational& p) {
  const auto& pts = a.points();
  if (std::binary_search(pts.begin(), pts.end(), p)) return true;
  return std::any_of(a.sequences().begin(), a.sequences().end(),
                     [&](const MonoSeq& s) { return s.index_of(p).has_value(); });
}

struct Overlap {
  std::vector<std::uint64_t> finite;                              // indices of s
  std::optional<std::pair<std::uint64_t, std::uint64_t>> progressive;  // (v, t0): n + 1 = v*t, t >= t0
};

std::uint64_t enumeration_bound(const Rational& x) {
  const mpz_class f = floor_q(x);
  if (f < 0) return 0;
  if (f > mpz_class(kEnumerationCap))
    fail(ErrorKind::NotClosed, "sequence overlap too large to enumerate");
  return f.get_ui();
}

// Indices n >= s.start such that s.at(n) lies on o.
Overlap overlap(const MonoSeq& s, const MonoSeq& o) {
  Overlap out;
  if (s.dir == o.dir && s.q == o.q) {
    const Rational ratio = o.r / s.r;  // (m+1)/(n+1)
    const mpz_class u = ratio.get_num(), v = ratio.get_den();
    mpz_class t0 = std::max(ceil_div(mpz_class(s.start) + 1, v), ceil_div(mpz_class(o.start) + 1, u));
    if (t0 < 1) t0 = 1;
    out.progressive = std::pair(to_u64(v, "sequence ratio"), to_u64(t0, "sequence index"));
    return out;
  }
  if (s.dir == o.dir) {
    // The sequence whose limit lies further along the direction has only
    // finitely many terms on the near side of the other limit.
    const bool s_runs_past = s.dir > 0 ? s.q > o.q : s.q < o.q;
    const MonoSeq& runner = s_runs_past ? s : o;
    const MonoSeq& other = s_runs_past ? o : s;
    const Rational gap = abs(Rational(s.q - o.q));
    const std::uint64_t bound = enumeration_bound(runner.r / gap);  // n + 1 < r / gap
    for (std::uint64_t n = runner.start; n + 1 <= bound; ++n) {
      auto hit = other.index_of(runner.at(n));
      if (!hit) continue;
      out.finite.push_back(s_runs_past ? n : *hit);
    }
  } else {
    const MonoSeq& asc = s.dir > 0 ? s : o;
    const MonoSeq& desc = s.dir > 0 ? o : s;
    if (desc.q >= asc.q) return out;
    const Rational delta = asc.q - desc.q;  // asc.r/x + desc.r/y = delta
    std::vector<std::pair<std::uint64_t, std::uint64_t>> sols;
    auto consider = [&](const Rational& x, const Rational& y) {
      if (x.get_den() != 1 || y.get_den() != 1 || x <= 0 || y <= 0) return;
      const mpz_class xn = x.get_num(), yn = y.get_num();
      if (xn < mpz_class(asc.start) + 1 || yn < mpz_class(desc.start) + 1) return;
      sols.emplace_back(to_u64(xn, "index") - 1, to_u64(yn, "index") - 1);
    };
    const std::uint64_t bx = enumeration_bound(2 * asc.r / delta);
    for (std::uint64_t x = 1; x <= bx; ++x) {
      const Rational rest = delta - asc.r / Rational(x);
      if (rest > 0) consider(Rational(x), desc.r / rest);
    }
    const std::uint64_t by = enumeration_bound(2 * desc.r / delta);
    for (std::uint64_t y = 1; y <= by; ++y) {
      const Rational rest = delta - desc.r / Rational(y);
      if (rest > 0) consider(asc.r / rest, Rational(y));
    }
    for (auto [na, nd] : sols) out.finite.push_back(s.dir > 0 ? na : nd);
  }
  std::sort(out.finite.begin(), out.finite.end());
  out.finite.erase(std::unique(out.finite.begin(), out.finite.end()), out.finite.end());
  return out;
}

SetExpr rat_intersect(const SetExpr& a, const SetExpr& b) {
  std::vector<Rational> points;
  std::vector<MonoSeq> seqs;
  for (const Rational& p : a.points())
    if (rat_contains(b, p)) points.push_back(p);
  for (const Rational& p : b.points())
    if (rat_contains(a, p)) points.push_back(p);
  for (const MonoSeq& s : a.sequences()) {
    for (const MonoSeq& o : b.sequences()) {
      Overlap ov = overlap(s, o);
      for (std::uint64_t n : ov.finite) points.push_back(s.at(n));
      if (ov.progressive) {
        auto [v, t0] = *ov.progressive;
        seqs.push_back(MonoSeq{s.dir, s.q, s.r / Rational(v), t0 - 1});
      }
    }
  }
  return normalize_rat(std::move(points), std::move(seqs));
}

SetExpr rat_difference(const SetExpr& a, const SetExpr& b) {
  std::vector<Rational> points;
  std::vector<MonoSeq> seqs;
  for (const Rational& p : a.points())
    if (!rat_contains(b, p)) points.push_back(p);
  for (const MonoSeq& s : a.sequences()) {
    std::vector<std::uint64_t> removed;
    std::optional<std::uint64_t> cut;  // every index >= cut is removed
    std::vector<std::pair<std::uint64_t, std::uint64_t>> sparse;
    for (const Rational& p : b.points())
      if (auto n = s.index_of(p)) removed.push_back(*n);
    for (const MonoSeq& o : b.sequences()) {
      Overlap ov = overlap(s, o);
      removed.insert(removed.end(), ov.finite.begin(), ov.finite.end());
      if (!ov.progressive) continue;
      auto [v, t0] = *ov.progressive;
      if (v == 1) cut = std::min(cut.value_or(t0 - 1), t0 - 1);
      else sparse.emplace_back(v, t0);
    }
    for (auto [v, t0] : sparse)
      if (!cut || v * t0 - 1 < *cut)
        fail(ErrorKind::NotClosed, "removing a sparse subsequence leaves the sequence grammar");
    std::sort(removed.begin(), removed.end());
    removed.erase(std::unique(removed.begin(), removed.end()), removed.end());
    auto gone = [&](std::uint64_t n) { return std::binary_search(removed.begin(), removed.end(), n); };
    std::uint64_t until = cut ? *cut : (removed.empty() ? s.start : std::max(s.start, removed.back() + 1));
    for (std::uint64_t n = s.start; n < until; ++n)
      if (!gone(n)) points.push_back(s.at(n));
    if (!cut) seqs.push_back(MonoSeq{s.dir, s.q, s.r, until});
  }
  return normalize_rat(std::move(points), std::move(seqs));
}

bool rat_subset(const SetExpr& a, const SetExpr& b) {
  for (const Rational& p : a.points())
    if (!rat_contains(b, p)) return false;
  for (const MonoSeq& s : a.sequences()) {
    // A tail is covered only by a same-limit sequence hitting every index.
    std::optional<std::uint64_t> cut;
    for (const MonoSeq& o : b.sequences()) {
      if (o.dir != s.dir || o.q != s.q) continue;
      const Rational ratio = o.r / s.r;
      if (ratio.get_den() != 1) continue;
      const mpz_class u = ratio.get_num();
      mpz_class t0 = std::max(mpz_class(mpz_class(s.start) + 1), ceil_div(mpz_class(o.start) + 1, u));
      const std::uint64_t c = to_u64(t0, "sequence index") - 1;
      cut = std::min(cut.value_or(c), c);
    }
    if (!cut) return false;
    for (std::uint64_t n = s.start; n < *cut; ++n)
      if (!rat_contains(b, s.at(n))) return false;
  }
  return true;
}

// ---- Blocks -----------------------------------------------------------------

SetExpr make_blocks(const Domain& d, std::map<std::uint64_t, SetExpr> parts) {
  SetExpr::Body body;
  body.domain = d;
  for (auto& [n, t] : parts)
    if (!is_empty(t)) body.patches.emplace_back(n, t);
  return SetBuilder::make(std::move(body));
}

const SetExpr* find_patch(const SetExpr& a, std::uint64_t n) {
  for (const auto& [m, t] : a.patches())
    if (m == n) return &t;
  return nullptr;
}

// ---- printing ---------------------------------------------------------------

std::string affine_text(std::uint64_t a, std::uint64_t b) {
  std::string out = a == 1 ? "n" : std::to_string(a) + "n";
  if (b > 0) out += "+" + std::to_string(b);
  return out;
}

std::string join_parts(const std::vector<std::string>& items) {
  if (items.empty()) return "fin{}";
  if (items.size() == 1) return items.front();
  std::string out = "U[";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out + "]";
}

}  // namespace

// ---- MonoSeq ----------------------------------------------------------------

Rational MonoSeq::at(std::uint64_t n) const {
  Rational step = r / Rational(mpz_class(n) + 1);
  return dir > 0 ? Rational(q - step) : Rational(q + step);
}

std::optional<std::uint64_t> MonoSeq::index_of(const Rational& p) const {
  const Rational gap = dir > 0 ? Rational(q - p) : Rational(p - q);
  if (gap <= 0) return std::nullopt;
  const Rational k = r / gap;
  if (k.get_den() != 1) return std::nullopt;
  const mpz_class n1 = k.get_num();
  if (n1 < mpz_class(start) + 1 || !n1.fits_ulong_p()) return std::nullopt;
  return n1.get_ui() - 1;
}

// ---- construction -----------------------------------------------------------

SetExpr::SetExpr() {
  static const std::shared_ptr<const Body> empty_nat = std::make_shared<const Body>();
  body_ = empty_nat;
}

SetExpr SetExpr::empty(const Domain& d) {
  Body body;
  body.domain = d;
  return SetBuilder::make(std::move(body));
}

SetExpr SetExpr::nat(NatSet s) {
  Body body;
  body.nat = std::move(s);
  return SetBuilder::make(std::move(body));
}

std::optional<SetExpr> SetExpr::universe(const Domain& d) {
  switch (d.kind()) {
    case Domain::Kind::Nat: return nat(NatSet::all());
    case Domain::Kind::Prod: {
      auto inner = universe(d.inner());
      if (!inner) return std::nullopt;
      return cols(d, NatSet::all(), *inner);
    }
    case Domain::Kind::Rat:
    case Domain::Kind::Blocks: return std::nullopt;
  }
  return std::nullopt;
}

SetExpr SetExpr::cols(const NatSet& s, const SetExpr& t) { return cols(Domain::prod(t.domain()), s, t); }

SetExpr SetExpr::cols(const Domain& prod, const NatSet& s, const SetExpr& t) {
  if (!prod.is_prod() || prod.inner() != t.domain())
    fail(ErrorKind::DomainMismatch, "cols trace over " + to_string(t.domain()) + " in domain " + to_string(prod));
  return normalize_prod(prod, {Cell{s, t}}, {});
}

SetExpr SetExpr::graph(std::uint64_t slope, std::uint64_t offset, const NatSet& s) {
  return normalize_prod(Domain::prod(Domain::nat()), {}, {Graph{slope, offset, s}});
}

SetExpr SetExpr::patch(const Domain& d, const std::vector<std::pair<std::uint64_t, SetExpr>>& parts) {
  for (const auto& [n, t] : parts)
    if (t.domain() != d.block(n))
      fail(ErrorKind::DomainMismatch, "patch trace over " + to_string(t.domain()) + " in block " + std::to_string(n) +
                                          " of " + to_string(d));
  if (d.is_prod()) {
    std::vector<Cell> cells;
    for (const auto& [n, t] : parts) cells.push_back({NatSet::singleton(n), t});
    return normalize_prod(d, std::move(cells), {});
  }
  if (!d.is_blocks()) fail(ErrorKind::DomainMismatch, "patch needs a product or block domain, got " + to_string(d));
  std::map<std::uint64_t, SetExpr> merged;
  for (const auto& [n, t] : parts) {
    auto it = merged.find(n);
    if (it == merged.end()) merged.emplace(n, t);
    else it->second = unite(it->second, t);
  }
  return make_blocks(d, std::move(merged));
}

SetExpr SetExpr::from_points(const Domain& d, const std::vector<Point>& points) {
  for (const Point& p : points) check_point(p, d);
  switch (d.kind()) {
    case Domain::Kind::Nat: {
      std::vector<std::uint64_t> v;
      for (const Point& p : points) v.push_back(p.index);
      return nat(NatSet::finite(std::move(v)));
    }
    case Domain::Kind::Rat: {
      std::vector<Rational> v;
      for (const Point& p : points) v.push_back(p.value);
      return rat_points(std::move(v));
    }
    case Domain::Kind::Prod:
    case Domain::Kind::Blocks: {
      std::map<std::uint64_t, std::vector<Point>> by_block;
      for (const Point& p : points) by_block[p.index].push_back(p.second());
      std::vector<std::pair<std::uint64_t, SetExpr>> parts;
      for (auto& [n, pts] : by_block) parts.emplace_back(n, from_points(d.block(n), pts));
      return patch(d, parts);
    }
  }
  return empty(d);
}

SetExpr SetExpr::rat_points(std::vector<Rational> points) { return normalize_rat(std::move(points), {}); }

SetExpr SetExpr::mono(const MonoSeq& seq) {
  if (seq.dir != 1 && seq.dir != -1) fail(ErrorKind::ValidationError, "sequence direction must be +1 or -1");
  return normalize_rat({}, {seq});
}

SetExpr SetExpr::ordsum(const std::vector<OrdPart>& parts) {
  std::vector<const OrdPart*> sorted;
  for (const OrdPart& p : parts) {
    if (!p.part.domain().is_rat()) fail(ErrorKind::DomainMismatch, "ordered sum parts must be rational sets");
    if (p.lo >= p.hi) fail(ErrorKind::ValidationError, "ordered sum interval needs lo < hi");
    for (const Rational& x : p.part.points())
      if (x <= p.lo || x >= p.hi)
        fail(ErrorKind::ValidationError, "point " + to_string(x) + " outside its ordered-sum interval");
    for (const MonoSeq& s : p.part.sequences()) {
      const bool inside = s.dir > 0 ? (s.at(s.start) > p.lo && s.q <= p.hi) : (s.at(s.start) < p.hi && s.q >= p.lo);
      if (!inside) fail(ErrorKind::ValidationError, "sequence outside its ordered-sum interval");
    }
    sorted.push_back(&p);
  }
  std::sort(sorted.begin(), sorted.end(), [](const OrdPart* a, const OrdPart* b) { return a->lo < b->lo; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i]->lo < sorted[i - 1]->hi) fail(ErrorKind::ValidationError, "ordered sum intervals overlap");
  SetExpr out = empty(Domain::rat());
  for (const OrdPart* p : sorted) out = unite(out, p->part);
  return out;
}

SetExpr SetExpr::union_of(const Domain& d, const std::vector<SetExpr>& parts) {
  SetExpr out = empty(d);
  for (const SetExpr& p : parts) out = unite(out, p);
  return out;
}

const Domain& SetExpr::domain() const { return body_->domain; }

const NatSet& SetExpr::nat_set() const {
  if (!domain().is_nat()) fail(ErrorKind::DomainMismatch, "nat_set() on " + to_string(domain()));
  return body_->nat;
}
const std::vector<Cell>& SetExpr::cells() const { return body_->cells; }
const std::vector<Graph>& SetExpr::graphs() const { return body_->graphs; }
const std::vector<Rational>& SetExpr::points() const { return body_->points; }
const std::vector<MonoSeq>& SetExpr::sequences() const { return body_->seqs; }
const std::vector<std::pair<std::uint64_t, SetExpr>>& SetExpr::patches() const { return body_->patches; }

// ---- queries ----------------------------------------------------------------

namespace {

bool contains_unchecked(const SetExpr& a, const Point& p) {
  switch (a.domain().kind()) {
    case Domain::Kind::Nat: return a.nat_set().contains(p.index);
    case Domain::Kind::Rat: return rat_contains(a, p.value);
    case Domain::Kind::Prod: {
      for (const Cell& c : a.cells())
        if (c.region.contains(p.index)) {
          if (contains_unchecked(c.trace, p.second())) return true;
          break;
        }
      for (const Graph& g : a.graphs()) {
        const unsigned __int128 v = static_cast<unsigned __int128>(g.slope) * p.index + g.offset;
        if (g.support.contains(p.index) && v == p.second().index) return true;
      }
      return false;
    }
    case Domain::Kind::Blocks: {
      const SetExpr* t = find_patch(a, p.index);
      return t && contains_unchecked(*t, p.second());
    }
  }
  return false;
}

}  // namespace

bool contains(const SetExpr& a, const Point& p) {
  check_point(p, a.domain());
  return contains_unchecked(a, p);
}

bool is_empty(const SetExpr& a) {
  switch (a.domain().kind()) {
    case Domain::Kind::Nat: return a.nat_set().is_empty();
    case Domain::Kind::Rat: return a.points().empty() && a.sequences().empty();
    case Domain::Kind::Prod: return a.cells().empty() && a.graphs().empty();
    case Domain::Kind::Blocks: return a.patches().empty();
  }
  return true;
}

bool is_finite(const SetExpr& a) {
  switch (a.domain().kind()) {
    case Domain::Kind::Nat: return a.nat_set().is_finite();
    case Domain::Kind::Rat: return a.sequences().empty();
    case Domain::Kind::Prod:
      return a.graphs().empty() && std::all_of(a.cells().begin(), a.cells().end(), [](const Cell& c) {
               return c.region.is_finite() && is_finite(c.trace);
             });
    case Domain::Kind::Blocks:
      return std::all_of(a.patches().begin(), a.patches().end(), [](const auto& p) { return is_finite(p.second); });
  }
  return true;
}

SetExpr unite(const SetExpr& a, const SetExpr& b) {
  require_same(a, b, "union");
  if (is_empty(b)) return a;
  if (is_empty(a)) return b;
  const Domain& d = a.domain();
  switch (d.kind()) {
    case Domain::Kind::Nat: return SetExpr::nat(a.nat_set().unite(b.nat_set()));
    case Domain::Kind::Rat: {
      std::vector<Rational> pts = a.points();
      pts.insert(pts.end(), b.points().begin(), b.points().end());
      std::vector<MonoSeq> seqs = a.sequences();
      seqs.insert(seqs.end(), b.sequences().begin(), b.sequences().end());
      return normalize_rat(std::move(pts), std::move(seqs));
    }
    case Domain::Kind::Prod: {
      std::vector<Cell> cells = a.cells();
      cells.insert(cells.end(), b.cells().begin(), b.cells().end());
      std::vector<Graph> graphs = a.graphs();
      graphs.insert(graphs.end(), b.graphs().begin(), b.graphs().end());
      return normalize_prod(d, std::move(cells), std::move(graphs));
    }
    case Domain::Kind::Blocks: {
      std::map<std::uint64_t, SetExpr> parts(a.patches().begin(), a.patches().end());
      for (const auto& [n, t] : b.patches()) {
        auto it = parts.find(n);
        if (it == parts.end()) parts.emplace(n, t);
        else it->second = unite(it->second, t);
      }
      return make_blocks(d, std::move(parts));
    }
  }
  return a;
}

SetExpr intersect(const SetExpr& a, const SetExpr& b) {
  require_same(a, b, "intersect");
  const Domain& d = a.domain();
  if (is_empty(a)) return a;
  if (is_empty(b)) return b;
  switch (d.kind()) {
    case Domain::Kind::Nat: return SetExpr::nat(a.nat_set().intersect(b.nat_set()));
    case Domain::Kind::Rat: return rat_intersect(a, b);
    case Domain::Kind::Prod: {
      std::vector<Cell> cells;
      std::vector<Graph> graphs;
      for (const Cell& x : a.cells())
        for (const Cell& y : b.cells()) {
          NatSet r = x.region.intersect(y.region);
          if (!r.is_empty()) cells.push_back({r, intersect(x.trace, y.trace)});
        }
      auto cut_graph = [&](const Graph& g, const Cell& c) {
        NatSet s = g.support.intersect(c.region).intersect(c.trace.nat_set().affine_preimage(g.slope, g.offset));
        if (!s.is_empty()) graphs.push_back({g.slope, g.offset, s});
      };
      for (const Graph& g : a.graphs())
        for (const Cell& c : b.cells()) cut_graph(g, c);
      for (const Graph& g : b.graphs())
        for (const Cell& c : a.cells()) cut_graph(g, c);
      for (const Graph& g : a.graphs())
        for (const Graph& h : b.graphs()) {
          if (g.slope == h.slope && g.offset == h.offset) {
            graphs.push_back({g.slope, g.offset, g.support.intersect(h.support)});
          } else if (auto n = graph_crossing(g, h); n && g.support.contains(*n) && h.support.contains(*n)) {
            graphs.push_back({g.slope, g.offset, NatSet::singleton(*n)});
          }
        }
      return normalize_prod(d, std::move(cells), std::move(graphs));
    }
    case Domain::Kind::Blocks: {
      std::map<std::uint64_t, SetExpr> parts;
      for (const auto& [n, t] : a.patches())
        if (const SetExpr* u = find_patch(b, n)) parts.emplace(n, intersect(t, *u));
      return make_blocks(d, std::move(parts));
    }
  }
  return a;
}

SetExpr difference(const SetExpr& a, const SetExpr& b) {
  require_same(a, b, "difference");
  const Domain& d = a.domain();
  if (is_empty(a) || is_empty(b)) return a;
  switch (d.kind()) {
    case Domain::Kind::Nat: return SetExpr::nat(a.nat_set().minus(b.nat_set()));
    case Domain::Kind::Rat: return rat_difference(a, b);
    case Domain::Kind::Prod: {
      std::vector<Cell> cells;
      for (const Cell& x : a.cells()) {
        NatSet rest = x.region;
        for (const Cell& y : b.cells()) {
          NatSet r = x.region.intersect(y.region);
          if (r.is_empty()) continue;
          SetExpr left = difference(x.trace, y.trace);
          if (!is_empty(left)) cells.push_back({r, left});
          rest = rest.minus(y.region);
        }
        if (!rest.is_empty()) cells.push_back({rest, x.trace});
      }
      for (const Graph& g : b.graphs()) {
        std::vector<Cell> next;
        for (Cell& c : cells) {
          NatSet hit = c.region.intersect(g.support).intersect(c.trace.nat_set().affine_preimage(g.slope, g.offset));
          if (hit.is_empty()) {
            next.push_back(std::move(c));
            continue;
          }
          if (!hit.is_finite())
            fail(ErrorKind::NotClosed, "removing a graph from a block of infinite columns leaves the grammar");
          NatSet rest = c.region.minus(hit);
          if (!rest.is_empty()) next.push_back({rest, c.trace});
          for (std::uint64_t n : hit.finite_members()) {
            SetExpr left = difference(c.trace, SetExpr::nat(NatSet::singleton(checked_affine(g.slope, n, g.offset))));
            if (!is_empty(left)) next.push_back({NatSet::singleton(n), left});
          }
        }
        cells = std::move(next);
      }
      std::vector<Graph> graphs;
      for (const Graph& g : a.graphs()) {
        Graph out = g;
        out.support = out.support.minus(covered_by_cells(g, b.cells()));
        for (const Graph& h : b.graphs()) {
          if (h.slope == g.slope && h.offset == g.offset) out.support = out.support.minus(h.support);
          else if (auto n = graph_crossing(g, h); n && h.support.contains(*n))
            out.support = out.support.minus(NatSet::singleton(*n));
        }
        graphs.push_back(std::move(out));
      }
      return normalize_prod(d, std::move(cells), std::move(graphs));
    }
    case Domain::Kind::Blocks: {
      std::map<std::uint64_t, SetExpr> parts;
      for (const auto& [n, t] : a.patches()) {
        const SetExpr* u = find_patch(b, n);
        parts.emplace(n, u ? difference(t, *u) : t);
      }
      return make_blocks(d, std::move(parts));
    }
  }
  return a;
}

bool is_subset(const SetExpr& a, const SetExpr& b) {
  require_same(a, b, "subset");
  if (is_empty(a)) return true;
  switch (a.domain().kind()) {
    case Domain::Kind::Nat: return a.nat_set().subset_of(b.nat_set());
    case Domain::Kind::Rat: return rat_subset(a, b);
    case Domain::Kind::Prod: {
      if (a.domain().inner().is_nat()) {
        // The only non-closed difference here removes a graph from infinitely
        // many infinite columns, which already witnesses a ⊄ b.
        try {
          return is_empty(difference(a, b));
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::NotClosed) return false;
          throw;
        }
      }
      for (const Cell& x : a.cells()) {
        NatSet rest = x.region;
        for (const Cell& y : b.cells()) {
          if (x.region.disjoint_from(y.region)) continue;
          if (!is_subset(x.trace, y.trace)) return false;
          rest = rest.minus(y.region);
        }
        if (!rest.is_empty()) return false;
      }
      return true;
    }
    case Domain::Kind::Blocks:
      for (const auto& [n, t] : a.patches()) {
        const SetExpr* u = find_patch(b, n);
        if (!u || !is_subset(t, *u)) return false;
      }
      return true;
  }
  return false;
}

bool equals(const SetExpr& a, const SetExpr& b) { return is_subset(a, b) && is_subset(b, a); }

bool is_universe(const SetExpr& a) {
  auto u = SetExpr::universe(a.domain());
  return u && is_subset(*u, a);
}

SetExpr column_trace(const SetExpr& a, std::uint64_t n) {
  const Domain& d = a.domain();
  if (d.is_blocks()) {
    const SetExpr* t = find_patch(a, n);
    return t ? *t : SetExpr::empty(d.block(n));
  }
  if (!d.is_prod()) fail(ErrorKind::DomainMismatch, "column_trace needs a product domain, got " + to_string(d));
  SetExpr out = SetExpr::empty(d.inner());
  for (const Cell& c : a.cells())
    if (c.region.contains(n)) out = c.trace;
  std::vector<std::uint64_t> extra;
  for (const Graph& g : a.graphs())
    if (g.support.contains(n)) extra.push_back(checked_affine(g.slope, n, g.offset));
  if (!extra.empty()) out = unite(out, SetExpr::nat(NatSet::finite(std::move(extra))));
  return out;
}

SetExpr reverse_rationals(const SetExpr& a) {
  if (!a.domain().is_rat()) fail(ErrorKind::DomainMismatch, "reverse_rationals needs Q, got " + to_string(a.domain()));
  std::vector<Rational> pts;
  for (const Rational& p : a.points()) pts.push_back(-p);
  std::vector<MonoSeq> seqs;
  for (const MonoSeq& s : a.sequences()) seqs.push_back(MonoSeq{-s.dir, -s.q, s.r, s.start});
  return normalize_rat(std::move(pts), std::move(seqs));
}

std::vector<Point> finite_points(const SetExpr& a) {
  if (!is_finite(a)) fail(ErrorKind::ValidationError, "finite_points() of an infinite set");
  std::vector<Point> out;
  switch (a.domain().kind()) {
    case Domain::Kind::Nat:
      for (std::uint64_t n : a.nat_set().finite_members()) out.push_back(Point::nat(n));
      break;
    case Domain::Kind::Rat:
      for (const Rational& q : a.points()) out.push_back(Point::rat(q));
      break;
    case Domain::Kind::Prod:
      for (const Cell& c : a.cells())
        for (std::uint64_t n : c.region.finite_members())
          for (Point& t : finite_points(c.trace)) out.push_back(Point::pair(n, std::move(t)));
      break;
    case Domain::Kind::Blocks:
      for (const auto& [n, t] : a.patches())
        for (Point& x : finite_points(t)) out.push_back(Point::pair(n, std::move(x)));
      break;
  }
  return out;
}

std::vector<Point> enumerate_prefix(const SetExpr& a, std::uint64_t n) {
  std::vector<Point> out;
  for (std::uint64_t i = 0; i < n; ++i) {
    Point p = point_at(a.domain(), i);
    if (contains_unchecked(a, p)) out.push_back(std::move(p));
  }
  return out;
}

std::strong_ordering compare(const SetExpr& a, const SetExpr& b) {
  if (a.domain() != b.domain()) return to_string(a.domain()) <=> to_string(b.domain());
  switch (a.domain().kind()) {
    case Domain::Kind::Nat: return a.nat_set() <=> b.nat_set();
    case Domain::Kind::Rat: {
      const auto& pa = a.points();
      const auto& pb = b.points();
      for (std::size_t i = 0; i < std::min(pa.size(), pb.size()); ++i)
        if (auto c = cmp_q(pa[i], pb[i]); c != 0) return c;
      if (auto c = pa.size() <=> pb.size(); c != 0) return c;
      const auto& sa = a.sequences();
      const auto& sb = b.sequences();
      for (std::size_t i = 0; i < std::min(sa.size(), sb.size()); ++i) {
        if (seq_less(sa[i], sb[i])) return std::strong_ordering::less;
        if (seq_less(sb[i], sa[i])) return std::strong_ordering::greater;
      }
      return sa.size() <=> sb.size();
    }
    case Domain::Kind::Prod: {
      const auto& ca = a.cells();
      const auto& cb = b.cells();
      for (std::size_t i = 0; i < std::min(ca.size(), cb.size()); ++i) {
        if (auto c = ca[i].region <=> cb[i].region; c != 0) return c;
        if (auto c = compare(ca[i].trace, cb[i].trace); c != 0) return c;
      }
      if (auto c = ca.size() <=> cb.size(); c != 0) return c;
      const auto& ga = a.graphs();
      const auto& gb = b.graphs();
      for (std::size_t i = 0; i < std::min(ga.size(), gb.size()); ++i) {
        if (auto c = std::pair(ga[i].slope, ga[i].offset) <=> std::pair(gb[i].slope, gb[i].offset); c != 0) return c;
        if (auto c = ga[i].support <=> gb[i].support; c != 0) return c;
      }
      return ga.size() <=> gb.size();
    }
    case Domain::Kind::Blocks: {
      const auto& pa = a.patches();
      const auto& pb = b.patches();
      for (std::size_t i = 0; i < std::min(pa.size(), pb.size()); ++i) {
        if (auto c = pa[i].first <=> pb[i].first; c != 0) return c;
        if (auto c = compare(pa[i].second, pb[i].second); c != 0) return c;
      }
      return pa.size() <=> pb.size();
    }
  }
  return std::strong_ordering::equal;
}

std::string to_string(const SetExpr& a) {
  switch (a.domain().kind()) {
    case Domain::Kind::Nat: return to_string(a.nat_set());
    case Domain::Kind::Rat: {
      std::vector<std::string> items;
      if (!a.points().empty()) {
        std::string pts = "rat{";
        for (std::size_t i = 0; i < a.points().size(); ++i) pts += (i ? "," : "") + to_string(a.points()[i]);
        items.push_back(pts + "}");
      }
      for (const MonoSeq& s : a.sequences()) {
        std::string t = (s.dir > 0 ? "asc(" : "desc(") + to_string(s.q) + "," + to_string(s.r);
        if (s.start > 0) t += "," + std::to_string(s.start);
        items.push_back(t + ")");
      }
      return join_parts(items);
    }
    case Domain::Kind::Prod: {
      std::vector<std::string> items;
      for (const Cell& c : a.cells()) items.push_back("cols(" + to_string(c.region) + ", " + to_string(c.trace) + ")");
      for (const Graph& g : a.graphs())
        items.push_back("graph(" + affine_text(g.slope, g.offset) + ", " + to_string(g.support) + ")");
      return join_parts(items);
    }
    case Domain::Kind::Blocks: {
      if (a.patches().empty()) return "fin{}";
      std::string out = "patch{";
      for (std::size_t i = 0; i < a.patches().size(); ++i)
        out += (i ? ", " : "") + std::to_string(a.patches()[i].first) + ": " + to_string(a.patches()[i].second);
      return out + "}";
    }
  }
  return "?";
}

}  // namespace idealcalc
