#include "idealcalc/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <functional>
#include <json.hpp>
#include <optional>

#include "idealcalc/classify.hpp"
#include "idealcalc/corpus.hpp"
#include "idealcalc/dsl.hpp"
#include "idealcalc/operators.hpp"

namespace idealcalc {

namespace {

using json = nlohmann::ordered_json;

struct Options {
  std::uint64_t seed = default_seed();
  std::size_t trials = 500;
  std::uint64_t prefix = 1000;
  std::string format = "text";
  std::string domain;
};

struct Outcome {
  int code = 0;
  json report;
};

using Args = std::vector<std::string>;

std::optional<Domain> domain_option(const Options& o) {
  if (o.domain.empty()) return std::nullopt;
  return parse_domain(o.domain);
}

json witness_json(const Witness& w) {
  json j;
  switch (w.kind) {
    case Witness::Kind::Join:
      j["kind"] = "join";
      j["first"] = to_string(*w.first);
      j["second"] = to_string(*w.second);
      break;
    case Witness::Kind::Exceptional:
      j["kind"] = "exceptional";
      j["exceptional"] = to_string(*w.exceptional);
      break;
    case Witness::Kind::PerpBound:
      j["kind"] = "perp-bound";
      j["bound"] = w.bound;
      j["blocks"] = json::array();
      for (const auto& [n, trace] : w.blocks) j["blocks"].push_back({{"column", n}, {"trace", to_string(trace)}});
      break;
  }
  return j;
}

json verdict_json(const Verdict& v) {
  json j;
  j["holds"] = v.holds;
  if (!v.reason.empty()) j["reason"] = v.reason;
  if (v.witness) j["witness"] = witness_json(*v.witness);
  return j;
}

json report_json(const Report& r) {
  json j;
  j["pass"] = r.pass;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["laws"] = r.laws;
  j["failed_laws"] = r.failed_laws;
  j["counterexample"] = r.counterexample ? json(*r.counterexample) : json(nullptr);
  j["skipped"] = r.skipped;
  if (r.bijective) j["bijective"] = *r.bijective;
  if (r.image_is_ideal) j["image_is_ideal"] = *r.image_is_ideal;
  j["notes"] = r.notes;
  return j;
}

json decomposition_json(const BlockDecomposition& b) {
  json groups = json::array();
  for (const ColumnGroup& g : b.groups) {
    json graphs = json::array();
    for (const GraphTerm& t : g.graphs)
      graphs.push_back({{"coeff", to_string(t.coeff)}, {"slope", t.slope}, {"offset", t.offset}});
    groups.push_back({{"columns", to_string(g.columns)},
                      {"cells", to_string(g.cells)},
                      {"graphs", graphs},
                      {"norm", to_string(g.norm)}});
  }
  json j;
  j["groups"] = groups;
  j["norm"] = to_string(b.norm);
  j["in_space"] = b.in_space;
  if (b.bound) j["bound"] = *b.bound;
  return j;
}

IdealExpr require_kind(const IdealExpr& i, IdealExpr::Kind kind, const char* name) {
  if (i.kind() != kind) fail(ErrorKind::ValidationError, "expected a " + std::string(name) + " ideal, got " + to_string(i));
  return i;
}

Outcome iso_report(const IdealExpr& i, const SimpleSeq& x, const BlockDecomposition& b) {
  const SimpleSeq back = reassemble(x.domain(), b);
  const bool round_trip = equals(back, x);
  const bool isometric = b.norm == sup_norm(x);
  json j = {{"ideal", to_string(i)}, {"seq", to_string(x)}};
  j.update(decomposition_json(b));
  j["sup_norm"] = to_string(sup_norm(x));
  j["round_trip"] = round_trip;
  j["isometric"] = isometric;
  return {round_trip && isometric ? 0 : 1, j};
}

Outcome do_member(const Args& a, const Options&) {
  const IdealExpr i = parse_ideal(a[0]);
  const SetExpr s = parse_set(a[1], i.domain());
  const Verdict v = member(i, s);
  json j = {{"ideal", to_string(i)}, {"set", to_string(s)}};
  j.update(verdict_json(v));
  if (v.witness) j["witness_verified"] = verify_witness(i, s, v);
  return {v.holds ? 0 : 1, j};
}

Outcome do_in_c0(const Args& a, const Options&) {
  const IdealExpr i = parse_ideal(a[0]);
  const SimpleSeq x = parse_seq(a[1], i.domain());
  const Verdict v = in_c0I(i, x);
  json j = {{"ideal", to_string(i)}, {"seq", to_string(x)}};
  j.update(verdict_json(v));
  return {v.holds ? 0 : 1, j};
}

Outcome do_limsup(const Args& a, const Options&) {
  const IdealExpr i = parse_ideal(a[0]);
  const SimpleSeq x = parse_seq(a[1], i.domain());
  return {0, {{"ideal", to_string(i)}, {"seq", to_string(x)}, {"limsup", to_string(ideal_limsup(i, x))}}};
}

Outcome do_qnorm(const Args& a, const Options&) {
  const IdealExpr i = parse_ideal(a[0]);
  const SimpleSeq x = parse_seq(a[1], i.domain());
  return {0, {{"ideal", to_string(i)}, {"seq", to_string(x)}, {"quotient_norm", to_string(quotient_norm(i, x))}}};
}

Outcome do_norm(const Args& a, const Options& o) {
  const SimpleSeq x = parse_seq(a[0], domain_option(o));
  return {0, {{"seq", to_string(x)}, {"domain", to_string(x.domain())}, {"sup_norm", to_string(sup_norm(x))}}};
}

Outcome do_equiv(const Args& a, const Options& o) {
  const IdealExpr i = parse_ideal(a[0]);
  const IdealExpr j = parse_ideal(a[1], i.domain());
  const Equivalence e = equivalent(i, j, standard_corpus(i.domain(), o.seed));
  json r = {{"left", to_string(i)}, {"right", to_string(j)}, {"result", to_string(e.kind)}};
  r["witness"] = e.witness ? json(to_string(*e.witness)) : json(nullptr);
  r["reason"] = e.reason;
  const int code = e.kind == Equivalence::Kind::Equal ? 0 : e.kind == Equivalence::Kind::Distinguished ? 1 : 2;
  return {code, r};
}

Outcome do_perp(const Args& a, const Options&) {
  const IdealExpr i = parse_ideal(a[0]);
  const IdealExpr p = perp_normalize(IdealExpr::perp(i));
  return {0, {{"ideal", to_string(i)}, {"perp", to_string(p)}, {"domain", to_string(p.domain())}}};
}

Outcome do_catalog(const Args& a, const Options&) {
  const Ordinal alpha = parse_ordinal(a[0]);
  const CatalogEntry e = catalog(alpha);
  return {0,
          {{"ordinal", to_string(alpha)},
           {"domain", to_string(catalog_domain(alpha))},
           {"P", to_string(IdealExpr::catalog_p(alpha))},
           {"P_expansion", to_string(e.p)},
           {"Q", to_string(IdealExpr::catalog_q(alpha))},
           {"Q_expansion", to_string(e.q)}}};
}

Outcome do_classify(const Args& a, const Options&) {
  const IdealExpr i = parse_ideal(a[0]);
  json j = {{"ideal", to_string(i)}, {"canonical", to_string(canonical(i))}};
  json notes = json::object();
  int decided = 0;
  auto decide = [&](const char* key, const std::function<Verdict()>& f) {
    try {
      const Verdict v = f();
      j[key] = v.holds;
      notes[key] = v.reason;
      ++decided;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Undecidable) throw;
      j[key] = "unknown";
      notes[key] = e.what();
    }
  };
  decide("frechet", [&] { return is_frechet(i); });
  decide("tall", [&] { return is_tall(i); });
  try {
    const Metadata m = metadata(i);
    j["catalog_entry"] = m.entry;
    for (auto [key, flag] : {std::pair{"meager", &m.meager}, {"borel", &m.borel}, {"contains_fin", &m.contains_fin}}) {
      j[key] = flag->value;
      notes[key] = flag->note;
    }
    ++decided;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoMetadata) throw;
    j["catalog_entry"] = nullptr;
    notes["metadata"] = e.what();
  }
  j["notes"] = notes;
  return {decided ? 0 : 2, j};
}

Outcome do_decompose(const Args& a, const Options&) {
  const IdealExpr i = require_kind(parse_ideal(a[0]), IdealExpr::Kind::Join, "JOIN");
  const SimpleSeq x = parse_seq(a[1], i.domain());
  const auto [y, z] = decompose_join(i.child(0), i.child(1), x);
  const bool sums = equals(combine(CombineOp::Add, y, z), x);
  const bool y_in = in_c0I(i.child(0), y).holds, z_in = in_c0I(i.child(1), z).holds;
  return {sums && y_in && z_in ? 0 : 1,
          {{"ideal", to_string(i)},
           {"seq", to_string(x)},
           {"y", to_string(y)},
           {"z", to_string(z)},
           {"recombines", sums},
           {"y_in_first", y_in},
           {"z_in_second", z_in}}};
}

Outcome do_verify_op(const Args& a, const Options& o) {
  const IdealExpr i = parse_ideal(a[1]);
  const IdealExpr j = parse_ideal(a[2]);
  const IndexOp t = parse_op(a[0], i.domain(), j.domain());
  const Report r = check_isometry_lattice(t, i, j, o.trials, o.seed);
  json rep = {{"operator", to_string(t)}, {"from", to_string(i)}, {"to", to_string(j)}};
  rep.update(report_json(r));
  return {r.pass ? 0 : 1, rep};
}

Outcome do_check_katetov(const Args& a, const Options& o) {
  const IdealExpr i = parse_ideal(a[1]);
  const IdealExpr j = parse_ideal(a[2]);
  const IndexMap h = parse_map(a[0], j.domain(), i.domain());
  const Report r = check_katetov(h, i, j, standard_corpus(i.domain(), o.seed));
  json rep = {{"map", to_string(h)}, {"from", to_string(i)}, {"to", to_string(j)}};
  rep.update(report_json(r));
  rep["seed"] = o.seed;
  return {r.pass ? 0 : 1, rep};
}

Outcome do_iso_directsum(const Args& a, const Options&) {
  const IdealExpr s = parse_ideal(a[0]);
  const SimpleSeq x = parse_seq(a[1], s.domain());
  return iso_report(s, x, directsum_iso(x, s));
}

Outcome do_iso_omegaperp(const Args& a, const Options&) {
  IdealExpr s = parse_ideal(a[0]);
  if (s.kind() == IdealExpr::Kind::Perp) s = s.child();
  const SimpleSeq x = parse_seq(a[1], s.domain());
  return iso_report(IdealExpr::perp(s), x, omegaperp_iso(x, s));
}

Outcome do_fubini_map(const Args& a, const Options&) {
  const IdealExpr f = require_kind(parse_ideal(a[0]), IdealExpr::Kind::Fubini, "FUBINI");
  const SimpleSeq x = parse_seq(a[1], f.domain());
  const FubiniQuotient q = fubini_quotient(x, f.child(0), f.child(1));
  return {q.q_in_c0 ? 0 : 1,
          {{"ideal", to_string(f)},
           {"seq", to_string(x)},
           {"quotient", to_string(q.q)},
           {"kernel", q.kernel},
           {"quotient_in_c0", q.q_in_c0}}};
}

Outcome do_tensor_norm(const Args& a, const Options& o) {
  const TensorInput u = parse_tensor(a[0], domain_option(o));
  const Rational injective = tensor_injective_norm(u);
  const VecSimpleSeq v = tensor_embed(u);
  const Rational embedded = sup_norm(v);
  return {injective == embedded ? 0 : 1,
          {{"injective_norm", to_string(injective)},
           {"embedded", to_string(v)},
           {"embedded_norm", to_string(embedded)},
           {"equal", injective == embedded}}};
}

Outcome do_corpus(const Args& a, const Options& o) {
  const Domain d = !a[0].empty() ? parse_domain(a[0]) : domain_option(o).value_or(Domain::nat());
  json sets = json::array();
  for (const SetExpr& s : standard_corpus(d, o.seed)) sets.push_back(to_string(s));
  return {0, {{"domain", to_string(d)}, {"seed", o.seed}, {"size", sets.size()}, {"sets", sets}}};
}

struct Verb {
  const char* name;
  const char* help;
  std::vector<const char*> params;  // a trailing '?' marks an optional parameter
  Outcome (*fn)(const Args&, const Options&);
};

const std::vector<Verb>& verbs() {
  static const std::vector<Verb> table = {
      {"member", "decide A in I", {"ideal", "set"}, do_member},
      {"in-c0", "decide x in c0,I", {"ideal", "seq"}, do_in_c0},
      {"limsup", "I-limsup of x", {"ideal", "seq"}, do_limsup},
      {"qnorm", "norm of x in l_inf / c0,I", {"ideal", "seq"}, do_qnorm},
      {"norm", "sup norm of x", {"seq"}, do_norm},
      {"equiv", "compare two ideals", {"ideal", "other"}, do_equiv},
      {"perp", "normalized orthogonal", {"ideal"}, do_perp},
      {"catalog", "P and Q at an ordinal", {"ordinal"}, do_catalog},
      {"classify", "Frechet, tall and recorded catalog facts", {"ideal"}, do_classify},
      {"decompose", "split x in c0 of JOIN(I, J)", {"join", "seq"}, do_decompose},
      {"verify-op", "isometry and lattice laws of T from c0,I to c0,J", {"op", "from", "to"}, do_verify_op},
      {"check-katetov", "preimages under h of members of I lie in J", {"map", "from", "to"}, do_check_katetov},
      {"iso-directsum", "column decomposition over a sum", {"sum", "seq"}, do_iso_directsum},
      {"iso-omegaperp", "column decomposition over an orthogonal sum", {"sum", "seq"}, do_iso_omegaperp},
      {"fubini-map", "column quotient norms for FUBINI(I, J)", {"fubini", "seq"}, do_fubini_map},
      {"tensor-norm", "injective tensor norm two ways", {"tensor"}, do_tensor_norm},
      {"corpus", "standard test sets over a domain", {"domain?"}, do_corpus},
  };
  return table;
}

void print_scalar(const json& v, std::ostream& out) {
  if (v.is_string())
    out << v.get<std::string>();
  else if (v.is_null())
    out << "none";
  else
    out << v.dump();
}

void print_text(const json& j, std::ostream& out, int indent) {
  const std::string pad(indent, ' ');
  for (const auto& [key, v] : j.items()) {
    if (v.is_object()) {
      out << pad << key << ":\n";
      print_text(v, out, indent + 2);
    } else if (v.is_array()) {
      out << pad << key << ":" << (v.empty() ? " []" : "") << "\n";
      for (const json& item : v) {
        if (item.is_object()) {
          out << pad << "  -\n";
          print_text(item, out, indent + 4);
        } else {
          out << pad << "  - ";
          print_scalar(item, out);
          out << "\n";
        }
      }
    } else {
      out << pad << key << ": ";
      print_scalar(v, out);
      out << "\n";
    }
  }
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Undecidable:
    case ErrorKind::NotClosed:
    case ErrorKind::RefinementNotClosed:
    case ErrorKind::WitnessUnavailable:
    case ErrorKind::MembershipRequired:
    case ErrorKind::NoMetadata: return 2;
    case ErrorKind::DomainMismatch:
    case ErrorKind::OrdinalOutOfRange:
    case ErrorKind::NonpositiveEpsilon:
    case ErrorKind::ParseError:
    case ErrorKind::ValidationError: return 3;
  }
  return 3;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ideals on countable sets and c0,I sequence spaces", "idealcalc"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--seed", opt.seed, "seed for corpora and random trials (IDEALCALC_SEED)");
  app.add_option("--trials", opt.trials, "random trials for verify-op")->capture_default_str();
  app.add_option("--prefix", opt.prefix, "enumeration prefix for brute-force checks")->capture_default_str();
  app.add_option("--format", opt.format, "report format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  app.add_option("--domain", opt.domain, "domain for inputs that do not fix one, e.g. N*N");

  std::vector<Args> values(verbs().size());
  for (std::size_t k = 0; k < verbs().size(); ++k) {
    const Verb& v = verbs()[k];
    CLI::App* sub = app.add_subcommand(v.name, v.help);
    values[k].resize(v.params.size());
    for (std::size_t p = 0; p < v.params.size(); ++p) {
      std::string name = v.params[p];
      const bool optional = name.ends_with('?');
      if (optional) name.pop_back();
      CLI::Option* o = sub->add_option(name, values[k][p], name);
      if (!optional) o->required();
    }
  }

  for (std::size_t k = 0; k < args.size(); ++k) {
    const std::string& a = args[k];
    if (a.starts_with("-")) {
      if (a.starts_with("--") && a.find('=') == std::string::npos && a != "--help") ++k;  // skip the option value
      continue;
    }
    const bool known = std::any_of(verbs().begin(), verbs().end(), [&](const Verb& v) { return a == v.name; });
    if (!known) {
      err << "idealcalc: unknown verb '" << a << "'\nRun with --help for more information.\n";
      return 3;
    }
    break;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 3;
  }

  std::size_t chosen = 0;
  while (!app.got_subcommand(verbs()[chosen].name)) ++chosen;
  const Verb& verb = verbs()[chosen];

  Outcome result;
  try {
    result = verb.fn(values[chosen], opt);
  } catch (const Error& e) {
    result.code = exit_code(e.kind());
    result.report = {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
    if (opt.format == "text") {
      err << "idealcalc " << verb.name << ": " << e.what() << "\n";
      return result.code;
    }
  } catch (const std::exception& e) {
    err << "idealcalc " << verb.name << ": " << e.what() << "\n";
    return 3;
  }

  json report = {{"verb", verb.name}};
  report.update(result.report);
  report["exit"] = result.code;
  if (opt.format == "json")
    out << report.dump(2) << "\n";
  else
    print_text(report, out, 0);
  return result.code;
}

}  // namespace idealcalc
