#include <doctest.h>

#include <sstream>

#include "idealcalc/cli.hpp"
#include "idealcalc/corpus.hpp"
#include "idealcalc/dsl.hpp"
#include "idealcalc/error.hpp"

using namespace idealcalc;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::ValidationError;
}

}  // namespace

TEST_SUITE("dsl_cli") {
  TEST_CASE("parse examples") {
    const IdealExpr fin = parse_ideal("FIN");
    CHECK(fin.kind() == IdealExpr::Kind::Fin);
    CHECK(fin.domain() == Domain::nat());
    const IdealExpr perp = parse_ideal("PERP(SUM(FIN))");
    CHECK(perp == IdealExpr::perp(IdealExpr::omega_sum(IdealExpr::fin())));
    CHECK(perp.domain() == Domain::prod(Domain::nat()));
    const IdealExpr p = parse_ideal("P[w+1]");
    CHECK(p.kind() == IdealExpr::Kind::CatalogP);
    CHECK(p.ordinal() == Ordinal::omega_power(1).successor());
    CHECK(parse_domain("N*N*N") == Domain::prod(Domain::prod(Domain::nat())));
    CHECK(parse_domain("B[w^2]") == Domain::blocks(Ordinal::omega_power(2)));
  }

  TEST_CASE("round trip over the corpus") {
    for (const Domain& d : corpus_domains()) {
      CAPTURE(to_string(d));
      for (const SetExpr& a : standard_corpus(d)) CHECK(parse_set(to_string(a), d) == a);
      for (const IdealExpr& i : ideal_corpus(d)) CHECK(parse_ideal(to_string(i), d) == i);
      for (const SimpleSeq& x : seq_corpus(d, 20)) CHECK(equals(parse_seq(to_string(x), d), x));
    }
    for (const char* m : {"id", "perm{0:1,1:0}", "pair", "unpair", "neg", "compose(perm{0:2,2:0}, pair)"}) {
      const IndexMap h = parse_map(m);
      CHECK(to_string(parse_map(to_string(h), h.source(), h.target())) == to_string(h));
    }
  }

  TEST_CASE("diagnostics") {
    try {
      parse_ideal("SUM(FIN");
      FAIL("expected ParseError");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ParseError);
      CHECK(std::string(e.what()).find("1:8") != std::string::npos);
    }
    CHECK(kind_of([] { parse_set("ap(0,"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse_ideal("P[1+w]"); }) == ErrorKind::ParseError);
    CHECK(kind_of([] { parse_seq("seq[1*chi(ap(0,2)) + 2*chi(fin{0})]"); }) == ErrorKind::ValidationError);
    CHECK(kind_of([] { parse_ideal("JOIN(SUM(FIN), WO)"); }) == ErrorKind::DomainMismatch);
    CHECK(kind_of([] { parse_set("fin{1,2} junk"); }) == ErrorKind::ParseError);
  }

  TEST_CASE("verbs and exit codes") {
    CHECK(cli({"member", "FIN", "fin{1,2,3}"}).code == 0);
    CHECK(cli({"member", "FIN", "ap(0,2)"}).code == 1);
    CHECK(cli({"in-c0", "FIN", "seq[1*chi(fin{4})]"}).code == 0);
    CHECK(cli({"limsup", "FIN", "seq[1*chi(ap(0,2))]"}).out.find("limsup: 1") != std::string::npos);
    CHECK(cli({"qnorm", "FIN", "seq[1/2*chi(ap(0,2))]"}).out.find("1/2") != std::string::npos);
    CHECK(cli({"norm", "seq[3*chi(fin{1}) - 5*chi(fin{2})]"}).out.find("5") != std::string::npos);
    CHECK(cli({"equiv", "FIN", "FIN"}).code == 0);
    CHECK(cli({"equiv", "FIN", "POW"}).code == 1);
    CHECK(cli({"perp", "FIN"}).out.find("POW") != std::string::npos);
    CHECK(cli({"catalog", "w+1"}).out.find("SUM(Q[w])") != std::string::npos);
    CHECK(cli({"catalog", "w^w"}).code == 3);
    CHECK(cli({"verify-op", "neg", "WO", "WOREV", "--trials", "40"}).code == 0);
    const Run k = cli({"check-katetov", "id", "POW", "FIN"});
    CHECK(k.code == 1);
    CHECK(k.out.find("counterexample: cofin{}") != std::string::npos);
    CHECK(cli({"iso-directsum", "SUM(FIN)", "seq[1*chi(cols(cofin{}, fin{0..5}))]"}).code == 0);
    CHECK(cli({"iso-omegaperp", "SUM(FIN)", "seq[1*chi(graph(n, cofin{}))]"}).code == 2);
    CHECK(cli({"fubini-map", "FUBINI(FIN, FIN)", "seq[1*chi(cols(fin{3}, cofin{}))]"}).code == 0);
    CHECK(cli({"tensor-norm", "seq[1*chi(ap(0,2))] @ (1,1); seq[1*chi(ap(0,2))] @ (1,-1)"}).out.find("2") !=
          std::string::npos);
    CHECK(cli({"decompose", "JOIN(PERP(SUM(FIN)), SUM(FIN))", "seq[1*chi(cols(fin{1}, cofin{}))]"}).code == 0);
    CHECK(parse_ideal("JOIN(FIN, WO)").domain() == Domain::rat());
    CHECK(cli({"corpus", "N"}).code == 0);
    CHECK(cli({"classify", "FUBINI(FIN, FIN)"}).code != 3);
  }

  TEST_CASE("usage errors") {
    const Run u = cli({"frobnicate", "FIN"});
    CHECK(u.code == 3);
    CHECK(u.err.find("unknown verb") != std::string::npos);
    CHECK(cli({"member", "FIN"}).code == 3);
    CHECK(cli({"member", "FIN", "fin{1"}).code == 3);
    CHECK(cli({}).code == 3);
    CHECK(cli({"--help"}).code == 0);
  }

  TEST_CASE("classify P[1] as JSON") {
    const Run r = cli({"--format", "json", "classify", "P[1]"});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"frechet\": true") != std::string::npos);
    CHECK(r.out.find("\"tall\": false") != std::string::npos);
    CHECK(r.out.find("\"meager\": true") != std::string::npos);
  }

  TEST_CASE("property: identical command and seed give identical JSON") {
    const std::vector<std::vector<std::string>> commands = {
        {"--format", "json", "--seed", "99", "verify-op", "T(id, fin{0})", "FIN", "FIN", "--trials", "50"},
        {"--format", "json", "check-katetov", "pair", "FIN", "SUM(FIN)"},
        {"--format", "json", "classify", "WO"},
        {"--format", "json", "--seed", "5", "corpus", "N*N"}};
    for (const auto& c : commands) {
      const Run a = cli(c), b = cli(c);
      CHECK(a.code == b.code);
      CHECK(a.out == b.out);
      CHECK_FALSE(a.out.empty());
    }
  }
}
