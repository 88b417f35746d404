#include "idealcalc/dsl.hpp"

#include <cctype>
#include <charconv>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "idealcalc/error.hpp"

namespace idealcalc {

namespace {

constexpr std::uint64_t kMaxRange = 1'000'000;

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  std::size_t pos() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return pos_;
  }
  void reset(std::size_t at) { pos_ = at; }

  std::string where(std::size_t at) const {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k < at && k < text_.size(); ++k) {
      if (text_[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return std::to_string(line) + ":" + std::to_string(col);
  }

  [[noreturn]] void error(std::initializer_list<std::string_view> expected) { error_at(pos(), expected); }

  [[noreturn]] void error_at(std::size_t at, std::initializer_list<std::string_view> expected) const {
    std::string msg = where(at) + ", expected " + (expected.size() > 1 ? "one of " : "");
    bool first = true;
    for (std::string_view e : expected) {
      msg += (first ? "'" : ", '") + std::string(e) + "'";
      first = false;
    }
    msg += at < text_.size() ? ", found '" + std::string(1, text_[at]) + "'" : ", found end of input";
    fail(ErrorKind::ParseError, msg);
  }

  bool peek(char c) { return pos() < text_.size() && text_[pos_] == c; }
  bool peek_digit() { return pos() < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])); }

  bool eat(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  bool eat(std::string_view s) {
    if (!text_.substr(pos()).starts_with(s)) return false;
    pos_ += s.size();
    return true;
  }

  void expect(char c) {
    if (eat(c)) return;
    const char buf[2] = {c, '\0'};
    error({std::string_view(buf, 1)});
  }

  std::string ident() {
    const std::size_t start = pos();
    while (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void keyword(std::string_view word) {
    const std::size_t at = pos();
    if (ident() != word) error_at(at, {word});
  }

  std::uint64_t natural() {
    const std::size_t start = pos();
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) error({"natural number"});
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc()) fail(ErrorKind::ParseError, where(start) + ", number out of range");
    return v;
  }

  /// `-p/q` as raw text; validated by parse_rational.
  std::string rational() {
    const std::size_t start = pos();
    auto digits = [&] {
      const std::size_t from = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return pos_ > from;
    };
    if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
    if (!digits()) {
      pos_ = start;
      error({"rational number"});
    }
    if (pos_ + 1 < text_.size() && text_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      ++pos_;
      digits();
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  /// Raw text up to (not including) `close`.
  std::string_view until(char close) {
    const std::size_t start = pos();
    while (pos_ < text_.size() && text_[pos_] != close) ++pos_;
    if (pos_ == text_.size()) error({std::string_view(&close, 1)});
    return text_.substr(start, pos_ - start);
  }

  void finish() {
    if (pos() != text_.size()) error({"end of input"});
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string strip_kind(const Error& e) {
  std::string_view what = e.what();
  auto colon = what.find(": ");
  return std::string(colon == std::string_view::npos ? what : what.substr(colon + 2));
}

Ordinal bracketed_ordinal(Scanner& sc) {
  sc.expect('[');
  const std::size_t at = sc.pos();
  std::string_view raw = sc.until(']');
  sc.expect(']');
  try {
    return parse_ordinal(raw);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ParseError) throw;
    fail(ErrorKind::ParseError, sc.where(at) + ", " + strip_kind(e));
  }
}

Domain domain_of(Scanner& sc) {
  const std::size_t at = sc.pos();
  const std::string id = sc.ident();
  if (id == "N") return sc.eat('*') ? Domain::prod(domain_of(sc)) : Domain::nat();
  if (id == "Q") return Domain::rat();
  if (id == "B") {
    Ordinal limit = bracketed_ordinal(sc);
    if (!limit.is_limit()) fail(ErrorKind::ValidationError, sc.where(at) + ", block domain needs a limit ordinal");
    return Domain::blocks(limit);
  }
  sc.error_at(at, {"N", "Q", "B["});
}

bool is_natural_text(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

// ---- sets ---------------------------------------------------------------------

struct PointNode {
  std::size_t pos = 0;
  std::string scalar;
  std::uint64_t index = 0;
  std::vector<PointNode> inner;  // one element for a pair
};

struct SetNode {
  std::string head;
  std::size_t pos = 0;
  std::vector<std::string> items;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
  std::vector<std::uint64_t> nums;
  std::vector<std::string> rats;
  std::vector<SetNode> kids;
  std::vector<PointNode> points;
};

PointNode point_node(Scanner& sc) {
  PointNode p;
  p.pos = sc.pos();
  if (sc.eat('(')) {
    p.index = sc.natural();
    sc.expect(',');
    p.inner.push_back(point_node(sc));
    sc.expect(')');
  } else {
    p.scalar = sc.rational();
  }
  return p;
}

SetNode set_node(Scanner& sc);

void affine(Scanner& sc, SetNode& n) {
  std::uint64_t slope = 1, offset = 0;
  if (sc.peek_digit()) {
    slope = sc.natural();
    sc.eat('*');
  }
  sc.keyword("n");
  if (sc.eat('+')) offset = sc.natural();
  n.nums = {slope, offset};
}

SetNode set_node(Scanner& sc) {
  SetNode n;
  n.pos = sc.pos();
  n.head = sc.ident();
  const std::string& h = n.head;
  if (h == "fin" || h == "cofin" || h == "rat") {
    sc.expect('{');
    if (!sc.eat('}')) {
      do {
        const std::size_t at = sc.pos();
        std::string item = sc.rational();
        if (h == "fin" && sc.eat("..")) {
          if (!is_natural_text(item)) sc.error_at(at, {"natural number"});
          n.ranges.emplace_back(std::stoull(item), sc.natural());
        } else {
          n.items.push_back(std::move(item));
        }
      } while (sc.eat(','));
      sc.expect('}');
    }
  } else if (h == "ap") {
    sc.expect('(');
    n.nums.push_back(sc.natural());
    sc.expect(',');
    n.nums.push_back(sc.natural());
    sc.expect(')');
  } else if (h == "cols") {
    sc.expect('(');
    n.kids.push_back(set_node(sc));
    sc.expect(',');
    n.kids.push_back(set_node(sc));
    sc.expect(')');
  } else if (h == "graph") {
    sc.expect('(');
    affine(sc, n);
    sc.expect(',');
    n.kids.push_back(set_node(sc));
    sc.expect(')');
  } else if (h == "U") {
    sc.expect('[');
    do n.kids.push_back(set_node(sc));
    while (sc.eat(','));
    sc.expect(']');
  } else if (h == "patch") {
    sc.expect('{');
    do {
      n.nums.push_back(sc.natural());
      sc.expect(':');
      n.kids.push_back(set_node(sc));
    } while (sc.eat(','));
    sc.expect('}');
  } else if (h == "pts") {
    sc.expect('{');
    if (!sc.eat('}')) {
      do n.points.push_back(point_node(sc));
      while (sc.eat(','));
      sc.expect('}');
    }
  } else if (h == "asc" || h == "desc") {
    sc.expect('(');
    n.rats.push_back(sc.rational());
    sc.expect(',');
    n.rats.push_back(sc.rational());
    if (sc.eat(',')) n.nums.push_back(sc.natural());
    sc.expect(')');
  } else if (h == "ordsum") {
    sc.expect('[');
    do {
      sc.expect('(');
      n.rats.push_back(sc.rational());
      sc.expect(',');
      n.rats.push_back(sc.rational());
      sc.expect(')');
      sc.expect(':');
      n.kids.push_back(set_node(sc));
    } while (sc.eat(','));
    sc.expect(']');
  } else {
    sc.error_at(n.pos, {"fin{", "cofin{", "ap(", "cols(", "graph(", "U[", "patch{", "pts{", "rat{", "asc(", "desc(",
                        "ordsum["});
  }
  return n;
}

std::optional<Domain> infer_point(const PointNode& p, bool weak) {
  if (!p.inner.empty()) {
    auto inner = infer_point(p.inner.front(), weak);
    return inner ? std::optional(Domain::prod(*inner)) : std::nullopt;
  }
  if (!is_natural_text(p.scalar)) return Domain::rat();
  return weak ? std::optional(Domain::nat()) : std::nullopt;
}

/// Domain fixed by the text alone; `weak` fills polymorphic forms with N.
std::optional<Domain> infer_set(const SetNode& n, bool weak) {
  const std::string& h = n.head;
  if (h == "rat" || h == "asc" || h == "desc" || h == "ordsum") return Domain::rat();
  if (h == "cofin" || h == "ap") return Domain::nat();
  if (h == "graph") return Domain::prod(Domain::nat());
  if (h == "fin") {
    for (const std::string& s : n.items)
      if (!is_natural_text(s)) return Domain::rat();
    return weak ? std::optional(Domain::nat()) : std::nullopt;
  }
  if (h == "cols" || h == "patch") {
    const std::size_t first = h == "cols" ? 1 : 0;
    for (std::size_t k = first; k < n.kids.size(); ++k)
      if (auto inner = infer_set(n.kids[k], false)) return Domain::prod(*inner);
    return weak ? std::optional(Domain::prod(*infer_set(n.kids[first], true))) : std::nullopt;
  }
  if (h == "pts") {
    for (const PointNode& p : n.points)
      if (auto d = infer_point(p, false)) return d;
    if (weak && !n.points.empty()) return infer_point(n.points.front(), true);
    return weak ? std::optional(Domain::nat()) : std::nullopt;
  }
  if (h == "U") {
    for (const SetNode& k : n.kids)
      if (auto d = infer_set(k, false)) return d;
    if (!weak) return std::nullopt;
    Domain deepest = *infer_set(n.kids.front(), true);
    for (const SetNode& k : n.kids)
      if (Domain d = *infer_set(k, true); d.depth() > deepest.depth()) deepest = d;
    return deepest;
  }
  return std::nullopt;
}

Domain resolve_set_domain(const SetNode& n, const std::optional<Domain>& expected) {
  if (expected) return *expected;
  return *infer_set(n, true);
}

std::uint64_t to_nat(const Scanner& sc, std::size_t at, const std::string& s) {
  if (!is_natural_text(s)) sc.error_at(at, {"natural number"});
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    fail(ErrorKind::ParseError, sc.where(at) + ", number out of range");
  }
}

Point to_point(const Scanner& sc, const PointNode& p, const Domain& d) {
  const bool pair = !p.inner.empty();
  if (pair != (d.is_prod() || d.is_blocks()))
    fail(ErrorKind::DomainMismatch, sc.where(p.pos) + ", point shape does not fit " + to_string(d));
  if (pair) return Point::pair(p.index, to_point(sc, p.inner.front(), d.block(p.index)));
  if (d.is_rat()) return Point::rat(parse_rational(p.scalar));
  return Point::nat(to_nat(sc, p.pos, p.scalar));
}

SetExpr elaborate_set(const Scanner& sc, const SetNode& n, const Domain& d) {
  const std::string& h = n.head;
  auto mismatch = [&]() -> SetExpr {
    fail(ErrorKind::DomainMismatch, sc.where(n.pos) + ", " + h + " does not denote a set over " + to_string(d));
  };
  auto nat_part = [&](const SetNode& k) { return elaborate_set(sc, k, Domain::nat()).nat_set(); };
  if (h == "fin") {
    if (d.is_nat()) {
      std::vector<std::uint64_t> members;
      for (const std::string& s : n.items) members.push_back(to_nat(sc, n.pos, s));
      for (auto [lo, hi] : n.ranges) {
        if (hi < lo || hi - lo >= kMaxRange)
          fail(ErrorKind::ValidationError, sc.where(n.pos) + ", range " + std::to_string(lo) + ".." + std::to_string(hi) +
                                               " is empty or longer than " + std::to_string(kMaxRange));
        for (std::uint64_t v = lo; v <= hi; ++v) members.push_back(v);
      }
      return SetExpr::nat(NatSet::finite(std::move(members)));
    }
    if (d.is_rat() && n.ranges.empty()) {
      std::vector<Rational> pts;
      for (const std::string& s : n.items) pts.push_back(parse_rational(s));
      return SetExpr::rat_points(std::move(pts));
    }
    if (n.items.empty() && n.ranges.empty()) return SetExpr::empty(d);
    return mismatch();
  }
  if (h == "cofin") {
    if (!d.is_nat()) return mismatch();
    std::vector<std::uint64_t> excluded;
    for (const std::string& s : n.items) excluded.push_back(to_nat(sc, n.pos, s));
    return SetExpr::nat(NatSet::cofinite(std::move(excluded)));
  }
  if (h == "ap") {
    if (!d.is_nat()) return mismatch();
    return SetExpr::nat(NatSet::progression(n.nums[0], n.nums[1]));
  }
  if (h == "cols") {
    if (!d.is_prod()) return mismatch();
    return SetExpr::cols(d, nat_part(n.kids[0]), elaborate_set(sc, n.kids[1], d.inner()));
  }
  if (h == "graph") {
    if (d != Domain::prod(Domain::nat())) return mismatch();
    return SetExpr::graph(n.nums[0], n.nums[1], nat_part(n.kids[0]));
  }
  if (h == "U") {
    std::vector<SetExpr> parts;
    for (const SetNode& k : n.kids) parts.push_back(elaborate_set(sc, k, d));
    return SetExpr::union_of(d, parts);
  }
  if (h == "patch") {
    if (!d.is_prod() && !d.is_blocks()) return mismatch();
    std::vector<std::pair<std::uint64_t, SetExpr>> parts;
    for (std::size_t k = 0; k < n.kids.size(); ++k)
      parts.emplace_back(n.nums[k], elaborate_set(sc, n.kids[k], d.block(n.nums[k])));
    return SetExpr::patch(d, parts);
  }
  if (h == "pts") {
    std::vector<Point> pts;
    for (const PointNode& p : n.points) pts.push_back(to_point(sc, p, d));
    return SetExpr::from_points(d, pts);
  }
  if (!d.is_rat()) return mismatch();
  if (h == "rat") {
    std::vector<Rational> pts;
    for (const std::string& s : n.items) pts.push_back(parse_rational(s));
    return SetExpr::rat_points(std::move(pts));
  }
  if (h == "asc" || h == "desc") {
    MonoSeq s;
    s.dir = h == "asc" ? 1 : -1;
    s.q = parse_rational(n.rats[0]);
    s.r = parse_rational(n.rats[1]);
    s.start = n.nums.empty() ? 0 : n.nums[0];
    return SetExpr::mono(s);
  }
  std::vector<OrdPart> parts;
  for (std::size_t k = 0; k < n.kids.size(); ++k)
    parts.push_back({parse_rational(n.rats[2 * k]), parse_rational(n.rats[2 * k + 1]),
                     elaborate_set(sc, n.kids[k], Domain::rat())});
  return SetExpr::ordsum(parts);
}

// ---- ideals -------------------------------------------------------------------

struct IdealNode {
  std::string head;
  std::size_t pos = 0;
  std::optional<Domain> annot;
  std::optional<Ordinal> ord;
  std::vector<IdealNode> kids;
  std::vector<SetNode> carrier;
};

IdealNode ideal_node(Scanner& sc) {
  IdealNode n;
  n.pos = sc.pos();
  n.head = sc.ident();
  const std::string& h = n.head;
  if (h == "FIN" || h == "POW") {
    if (sc.eat('[')) {
      n.annot = domain_of(sc);
      sc.expect(']');
    }
  } else if (h == "WO" || h == "WOREV") {
  } else if (h == "P" || h == "Q" || h == "BSUM") {
    n.ord = bracketed_ordinal(sc);
  } else if (h == "JOIN" || h == "FUBINI") {
    sc.expect('(');
    n.kids.push_back(ideal_node(sc));
    sc.expect(',');
    n.kids.push_back(ideal_node(sc));
    sc.expect(')');
  } else if (h == "SUM" || h == "PERP") {
    sc.expect('(');
    n.kids.push_back(ideal_node(sc));
    sc.expect(')');
  } else if (h == "RESTRICT") {
    sc.expect('(');
    n.kids.push_back(ideal_node(sc));
    sc.expect(',');
    n.carrier.push_back(set_node(sc));
    sc.expect(')');
  } else if (h == "DSUM") {
    sc.expect('[');
    if (!sc.eat('|')) {
      do n.kids.push_back(ideal_node(sc));
      while (sc.eat(','));
      sc.expect('|');
    }
    n.kids.push_back(ideal_node(sc));
    sc.expect(']');
  } else {
    sc.error_at(n.pos, {"FIN", "POW", "WO", "WOREV", "P[", "Q[", "BSUM[", "JOIN(", "SUM(", "DSUM[", "FUBINI(", "PERP(",
                        "RESTRICT("});
  }
  return n;
}

std::optional<Domain> infer_ideal(const IdealNode& n) {
  const std::string& h = n.head;
  if (h == "FIN" || h == "POW") return n.annot;
  if (h == "WO" || h == "WOREV") return Domain::rat();
  if (h == "P" || h == "Q") return catalog_domain(*n.ord);
  if (h == "BSUM") return Domain::blocks(*n.ord);
  if (h == "SUM" || h == "DSUM") {
    for (const IdealNode& k : n.kids)
      if (auto d = infer_ideal(k)) return Domain::prod(*d);
    return std::nullopt;
  }
  if (h == "FUBINI") {
    auto d = infer_ideal(n.kids[1]);
    return d ? std::optional(Domain::prod(*d)) : std::nullopt;
  }
  for (const IdealNode& k : n.kids)
    if (auto d = infer_ideal(k)) return d;
  if (h == "RESTRICT") return infer_set(n.carrier.front(), false);
  return std::nullopt;
}

IdealExpr elaborate_ideal(const Scanner& sc, const IdealNode& n, std::optional<Domain> expected) {
  const std::string& h = n.head;
  if (auto d = infer_ideal(n)) expected = d;
  const std::optional<Domain>& d = expected;
  const Domain leaf = expected.value_or(Domain::nat());
  auto inner = [&]() -> std::optional<Domain> {
    if (!expected) return std::nullopt;
    if (!expected->is_prod())
      fail(ErrorKind::DomainMismatch, sc.where(n.pos) + ", " + h + " builds an ideal over a product, not " +
                                          to_string(*expected));
    return expected->inner();
  };
  if (h == "FIN") return IdealExpr::fin(leaf);
  if (h == "POW") return IdealExpr::pow(leaf);
  if (h == "WO") return IdealExpr::wo();
  if (h == "WOREV") return IdealExpr::worev();
  if (h == "P") return IdealExpr::catalog_p(*n.ord);
  if (h == "Q") return IdealExpr::catalog_q(*n.ord);
  if (h == "BSUM") return IdealExpr::block_sum(*n.ord);
  if (h == "JOIN") return IdealExpr::join(elaborate_ideal(sc, n.kids[0], d), elaborate_ideal(sc, n.kids[1], d));
  if (h == "PERP") return IdealExpr::perp(elaborate_ideal(sc, n.kids[0], d));
  if (h == "SUM") return IdealExpr::omega_sum(elaborate_ideal(sc, n.kids[0], inner()));
  if (h == "FUBINI")
    return IdealExpr::fubini(elaborate_ideal(sc, n.kids[0], Domain::nat()), elaborate_ideal(sc, n.kids[1], inner()));
  if (h == "RESTRICT") {
    IdealExpr i = elaborate_ideal(sc, n.kids[0], d);
    return IdealExpr::restrict(i, elaborate_set(sc, n.carrier.front(), i.domain()));
  }
  const std::optional<Domain> block = inner();
  std::vector<IdealExpr> list;
  for (std::size_t k = 0; k + 1 < n.kids.size(); ++k) list.push_back(elaborate_ideal(sc, n.kids[k], block));
  return IdealExpr::direct_sum(std::move(list), elaborate_ideal(sc, n.kids.back(), block));
}

// ---- sequences, maps, operators -----------------------------------------------

struct SeqNode {
  std::size_t pos = 0;
  std::vector<std::pair<std::string, SetNode>> terms;
};

SeqNode seq_node(Scanner& sc) {
  SeqNode n;
  n.pos = sc.pos();
  sc.keyword("seq");
  sc.expect('[');
  if (sc.eat(']')) return n;
  bool negate = false;
  do {
    std::string c = sc.rational();
    if (negate) c = c.starts_with('-') ? c.substr(1) : "-" + c;
    sc.expect('*');
    sc.keyword("chi");
    sc.expect('(');
    n.terms.emplace_back(std::move(c), set_node(sc));
    sc.expect(')');
  } while (sc.eat('+') || (negate = sc.eat('-')));
  sc.expect(']');
  return n;
}

std::optional<Domain> infer_seq(const SeqNode& n, bool weak) {
  for (const auto& t : n.terms)
    if (auto d = infer_set(t.second, false)) return d;
  if (!weak) return std::nullopt;
  return n.terms.empty() ? Domain::nat() : *infer_set(n.terms.front().second, true);
}

SimpleSeq elaborate_seq(const Scanner& sc, const SeqNode& n, const std::optional<Domain>& expected) {
  const Domain d = expected ? *expected : *infer_seq(n, true);
  std::vector<Term> terms;
  for (const auto& [c, region] : n.terms) terms.push_back({parse_rational(c), elaborate_set(sc, region, d)});
  try {
    return SimpleSeq::make(d, std::move(terms));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ValidationError) throw;
    fail(ErrorKind::ValidationError, sc.where(n.pos) + ", " + strip_kind(e));
  }
}

struct MapNode {
  std::string head;
  std::size_t pos = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> table;
  std::uint64_t block = 0;
  std::optional<Domain> target;
  std::vector<MapNode> parts;
};

MapNode map_node(Scanner& sc) {
  MapNode n;
  n.pos = sc.pos();
  n.head = sc.ident();
  const std::string& h = n.head;
  if (h == "id" || h == "pair" || h == "unpair" || h == "neg") return n;
  if (h == "perm") {
    sc.expect('{');
    if (!sc.eat('}')) {
      do {
        const std::uint64_t a = sc.natural();
        sc.expect(':');
        n.table.emplace_back(a, sc.natural());
      } while (sc.eat(','));
      sc.expect('}');
    }
  } else if (h == "embed") {
    sc.expect('(');
    n.block = sc.natural();
    if (sc.eat(',')) n.target = domain_of(sc);
    sc.expect(')');
  } else if (h == "compose") {
    sc.expect('(');
    do n.parts.push_back(map_node(sc));
    while (sc.eat(','));
    sc.expect(')');
  } else {
    sc.error_at(n.pos, {"id", "perm{", "pair", "unpair", "embed(", "neg", "compose("});
  }
  return n;
}

IndexMap elaborate_map(const MapNode& n, const std::optional<Domain>& source, const std::optional<Domain>& target) {
  const std::string& h = n.head;
  if (h == "id") return IndexMap::identity(source ? *source : target.value_or(Domain::nat()));
  if (h == "perm") return IndexMap::fin_perm(n.table);
  if (h == "pair") return IndexMap::pair_encode();
  if (h == "unpair") return IndexMap::pair_decode();
  if (h == "neg") return IndexMap::negate_rat();
  if (h == "embed") {
    const Domain t = n.target ? *n.target : target ? *target : Domain::prod(source.value_or(Domain::nat()));
    return IndexMap::block_embed(n.block, t);
  }
  std::vector<IndexMap> built(n.parts.size(), IndexMap::identity(Domain::nat()));
  for (std::size_t k = n.parts.size(); k-- > 0;) {
    const std::optional<Domain> src = k + 1 == n.parts.size() ? source : std::optional(built[k + 1].target());
    built[k] = elaborate_map(n.parts[k], src, k == 0 ? target : std::nullopt);
  }
  return IndexMap::compose(std::move(built));
}

void check_domain(const Scanner& sc, std::size_t at, const char* what, const Domain& got,
                  const std::optional<Domain>& want) {
  if (want && got != *want)
    fail(ErrorKind::DomainMismatch,
         sc.where(at) + ", " + what + " is over " + to_string(got) + " but " + to_string(*want) + " was expected");
}

IndexMap finish_map(const Scanner& sc, const MapNode& n, const std::optional<Domain>& source,
                    const std::optional<Domain>& target) {
  IndexMap h = elaborate_map(n, source, target);
  check_domain(sc, n.pos, "map source", h.source(), source);
  check_domain(sc, n.pos, "map target", h.target(), target);
  return h;
}

}  // namespace

Domain parse_domain(std::string_view text) {
  Scanner sc(text);
  Domain d = domain_of(sc);
  sc.finish();
  return d;
}

SetExpr parse_set(std::string_view text, const std::optional<Domain>& expected) {
  Scanner sc(text);
  SetNode n = set_node(sc);
  sc.finish();
  return elaborate_set(sc, n, resolve_set_domain(n, expected));
}

IdealExpr parse_ideal(std::string_view text, const std::optional<Domain>& expected) {
  Scanner sc(text);
  IdealNode n = ideal_node(sc);
  sc.finish();
  IdealExpr i = elaborate_ideal(sc, n, expected);
  check_domain(sc, n.pos, "ideal", i.domain(), expected);
  return i;
}

SimpleSeq parse_seq(std::string_view text, const std::optional<Domain>& expected) {
  Scanner sc(text);
  SeqNode n = seq_node(sc);
  sc.finish();
  return elaborate_seq(sc, n, expected);
}

IndexMap parse_map(std::string_view text, const std::optional<Domain>& source, const std::optional<Domain>& target) {
  Scanner sc(text);
  MapNode n = map_node(sc);
  sc.finish();
  return finish_map(sc, n, source, target);
}

IndexOp parse_op(std::string_view text, const std::optional<Domain>& input, const std::optional<Domain>& output) {
  Scanner sc(text);
  const std::size_t at = sc.pos();
  const std::string head = sc.ident();
  if (head == "T") {
    sc.expect('(');
    MapNode m = map_node(sc);
    sc.expect(',');
    SetNode neg = set_node(sc);
    sc.expect(')');
    sc.finish();
    IndexMap h = finish_map(sc, m, output, input);
    return IndexOp(h, elaborate_set(sc, neg, h.source()));
  }
  if (head == "ext") {
    sc.expect('(');
    SetNode mask = set_node(sc);
    sc.expect(')');
    sc.finish();
    if (input && output && *input != *output)
      fail(ErrorKind::DomainMismatch, "ext(A) maps a domain to itself, got " + to_string(*input) + " and " +
                                          to_string(*output));
    const SetExpr a = elaborate_set(sc, mask, resolve_set_domain(mask, input ? input : output));
    return restriction_embed(IdealExpr::pow(a.domain()), a);
  }
  sc.reset(at);
  MapNode m = map_node(sc);
  sc.finish();
  return IndexOp(finish_map(sc, m, output, input));
}

Point parse_point(std::string_view text, const Domain& d) {
  Scanner sc(text);
  PointNode p = point_node(sc);
  sc.finish();
  Point out = to_point(sc, p, d);
  check_point(out, d);
  return out;
}

TensorInput parse_tensor(std::string_view text, const std::optional<Domain>& expected) {
  Scanner sc(text);
  std::vector<std::pair<SeqNode, std::vector<std::string>>> nodes;
  do {
    SeqNode s = seq_node(sc);
    sc.expect('@');
    sc.expect('(');
    std::vector<std::string> y;
    do y.push_back(sc.rational());
    while (sc.eat(','));
    sc.expect(')');
    nodes.emplace_back(std::move(s), std::move(y));
  } while (sc.eat(';'));
  sc.finish();

  std::optional<Domain> d = expected;
  for (const auto& n : nodes)
    if (!d) d = infer_seq(n.first, false);
  if (!d) d = infer_seq(nodes.front().first, true);

  TensorInput u;
  for (const auto& [s, y] : nodes) {
    if (y.size() != nodes.front().second.size())
      fail(ErrorKind::ValidationError, sc.where(s.pos) + ", tensor vectors must share one dimension");
    std::vector<Rational> vec;
    for (const std::string& c : y) vec.push_back(parse_rational(c));
    u.emplace_back(elaborate_seq(sc, s, d), std::move(vec));
  }
  return u;
}

}  // namespace idealcalc
