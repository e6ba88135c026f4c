// dgconn: command-line front end.
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or input error.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dgconn/dgconn.hpp"

using namespace dgc;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string catalog_name, complex_file;
  std::string connection_file;
  std::optional<std::uint64_t> seed;
  std::optional<double> max_phase;
  std::string field;
  double tol = kDefaultTolerance;
  std::string out, complex_out, invariants_file;
  std::string word, start;
  int seeds = 10;
  bool check = false;
  bool canonical = false;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw UsageError("cannot write " + cfg.out);
  f << text;
}

SimplicialComplex load_complex(const RunConfig& cfg) {
  if (cfg.catalog_name.empty() == cfg.complex_file.empty()) throw UsageError("give exactly one of --catalog, --complex");
  if (!cfg.catalog_name.empty()) return catalog(cfg.catalog_name);
  std::ifstream in(cfg.complex_file);
  if (!in) throw UsageError("cannot open " + cfg.complex_file);
  return read_complex(in);
}

FieldKind field_of(const RunConfig& cfg, FieldKind fallback) {
  if (!cfg.field.empty()) return parse_field(cfg.field);
  if (!cfg.connection_file.empty()) return peek_field(read_text(cfg.connection_file));
  return fallback;
}

template <class S>
Connection<S> load_connection(const SimplicialComplex& K, const RunConfig& cfg) {
  if (!cfg.connection_file.empty()) {
    if (cfg.seed || cfg.canonical) throw UsageError("give only one of --connection, --seed, --canonical");
    return read_connection<S>(K, read_text(cfg.connection_file));
  }
  if (cfg.canonical) return canonical_connection<S>(K);
  if (!cfg.seed) throw UsageError("give --connection, --seed or --canonical");
  return random_connection<S>(K, *cfg.seed, cfg.max_phase);
}

/// Complex connections also accept rational files (promoted exactly to double precision).
Connection<Complex> load_complex_connection(const SimplicialComplex& K, const RunConfig& cfg) {
  if (cfg.connection_file.empty() || peek_field(read_text(cfg.connection_file)) == FieldKind::complex)
    return load_connection<Complex>(K, cfg);
  auto q = load_connection<Rational>(K, cfg);
  std::vector<std::vector<Complex>> stored;
  for (const auto& row : q.stored()) {
    stored.emplace_back();
    for (const auto& v : row) stored.back().push_back(Complex(v.get_d(), 0.0));
  }
  return Connection<Complex>(K, std::move(stored));
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

// ---------------------------------------------------------------------------------------------

template <class S>
int cmd_generate(const RunConfig& cfg) {
  auto K = load_complex(cfg);
  if (!cfg.complex_out.empty()) {
    std::ofstream f(cfg.complex_out);
    if (!f) throw UsageError("cannot write " + cfg.complex_out);
    f << write_complex(K);
  }
  emit(cfg, write_connection(load_connection<S>(K, cfg)));
  return 0;
}

int cmd_stats(const RunConfig& cfg) {
  auto K = load_complex(cfg);
  auto H1 = homology_basis(K, 1);
  const long b = static_cast<long>(H1.rank() + H1.torsion_orders.size());
  auto s = stats(K, b);
  std::ostringstream os;
  os << "n=" << s.n << "\n";
  os << "f-vector (";
  for (std::size_t k = 0; k < s.f_vector.size(); ++k) os << (k ? "," : "") << s.f_vector[k];
  os << ")\n";
  os << "euler=" << s.euler << "\n";
  os << "mean incidence";
  for (const auto& m : s.mean_incidence) os << ' ' << m.get_str();
  os << "\n";
  os << "oriented=" << yes_no(K.oriented()) << "\n";
  os << "H1 rank=" << H1.rank() << " torsion=";
  if (H1.torsion_orders.empty()) os << "none";
  for (std::size_t i = 0; i < H1.torsion_orders.size(); ++i) os << (i ? "," : "") << "Z/" << H1.torsion_orders[i].get_str();
  os << "\n";
  os << "(mu)=" << s.parameter_count << "\n";
  os << "b=" << *s.b << " R=" << *s.remaining << "\n";
  emit(cfg, os.str());
  return 0;
}

template <class S>
int cmd_validate(const RunConfig& cfg) {
  auto K = load_complex(cfg);
  auto mu = load_connection<S>(K, cfg);
  auto bad = validate(mu, cfg.tol);
  std::ostringstream os;
  for (const auto& v : bad) os << "violation facet " << v.facet << ' ' << detail::vertex_list(v.vertices) << ' ' << v.what << "\n";
  auto H1 = homology_basis(K, 1);
  RelationOptions opt;
  opt.h1 = &H1;
  opt.tol = cfg.tol;
  auto rep = verify_relations(invariant_data(mu, H1), opt);
  for (const auto& c : rep.failures()) os << "relation " << c.relation << " fails at " << c.location << "\n";
  const bool ok = bad.empty() && rep.all_pass();
  os << (ok ? "valid" : "invalid") << ": " << bad.size() << " axiom violations, " << rep.failures().size() << "/"
     << rep.checks.size() << " relation failures\n";
  emit(cfg, os.str());
  return ok ? 0 : 1;
}

template <class S>
int cmd_invariants(const RunConfig& cfg) {
  auto K = load_complex(cfg);
  auto H1 = homology_basis(K, 1);
  auto inv = invariant_data(load_connection<S>(K, cfg), H1);
  emit(cfg, write_invariants(inv));
  if (!cfg.check) return 0;
  auto H2 = homology_basis(K, 2);
  RelationOptions opt;
  opt.h1 = &H1;
  opt.h2 = &H2;
  opt.tol = cfg.tol;
  auto rep = verify_relations(inv, opt);
  for (const auto& c : rep.checks)
    std::cerr << (c.pass ? "pass " : "FAIL ") << c.relation << ' ' << c.location << " residual=" << c.residual << "\n";
  std::cerr << rep.checks.size() - rep.failures().size() << "/" << rep.checks.size() << " relations hold\n";
  return rep.all_pass() ? 0 : 1;
}

template <class S>
int cmd_curvature(const RunConfig& cfg) {
  auto K = load_complex(cfg);
  auto mu = load_connection<S>(K, cfg);
  std::ostringstream os;
  bool all_flat = true;
  for (const auto& sigma : K.simplices(K.dim() - 2)) {
    auto op = curvature_operator(mu, sigma, 0, cfg.tol);
    all_flat = all_flat && op.flat;
    os << curvature_line(op) << "\n";
  }
  emit(cfg, os.str());
  return (cfg.check && !all_flat) ? 1 : 0;
}

template <class S>
int cmd_holonomy(const RunConfig& cfg) {
  auto K = load_complex(cfg);
  auto mu = load_connection<S>(K, cfg);
  Vertices slots;
  if (cfg.start.empty()) {
    slots = K.facet(0);
    slots.pop_back();
  } else {
    std::istringstream in(cfg.start);
    int v;
    while (in >> v) slots.push_back(v);
    if (static_cast<int>(slots.size()) != K.dim()) throw UsageError("--start needs " + std::to_string(K.dim()) + " vertices");
  }
  auto k = thick_path_from_word(K, slots, parse_word(cfg.word, K.dim()));
  auto h = holonomy(mu, k);
  std::ostringstream os;
  os << "word " << k.word().str() << "\n";
  os << "start";
  for (int v : k.initial()) os << ' ' << v;
  os << "\nend";
  for (int v : k.final()) os << ' ' << v;
  os << "\nlength " << k.length() << " closed=" << k.closed() << " composable=" << k.composable(K) << "\n";
  if (h.P) {
    os << "P";
    for (int p : h.P->map) os << ' ' << p;
    os << "\n";
  }
  const auto& M = h.full();
  for (std::size_t i = 0; i < M.rows(); ++i) {
    os << "K";
    for (std::size_t j = 0; j < M.cols(); ++j) os << ' ' << Field<S>::format(M(i, j));
    os << "\n";
  }
  os << "det " << Field<S>::format(M.determinant()) << "\n";
  emit(cfg, os.str());
  return 0;
}

int cmd_chern(const RunConfig& cfg) {
  auto K = load_complex(cfg);
  if (!cfg.field.empty() && parse_field(cfg.field) != FieldKind::complex) throw UsageError("chern needs --field complex");
  auto mu = load_complex_connection(K, cfg);
  auto H1 = homology_basis(K, 1), H2 = homology_basis(K, 2);
  auto inv = invariant_data(mu, H1);
  auto c = chern(inv.rho, &H1, &H2, &inv);
  std::ostringstream os;
  char buf[64];
  for (std::size_t t = 0; t < c.per_facet.size(); ++t) {
    std::snprintf(buf, sizeof buf, "%.17g", c.per_facet[t]);
    os << "c1 facet " << t << ' ' << buf << "\n";
  }
  for (std::size_t j = 0; j < c.cycle_pairings.size(); ++j) os << "pairing z" << j << ' ' << c.cycle_pairings[j] << "\n";
  for (std::size_t s = 0; s < c.torsion.size(); ++s)
    os << "pairing u" << s << ' ' << c.torsion[s].first << " mod " << c.torsion[s].second << "\n";
  if (K.dim() == 2) os << "total " << c.total << "\n";
  emit(cfg, os.str());
  return 0;
}

int cmd_reconstruct(const RunConfig& cfg) {
  auto K = load_complex(cfg);
  if (!cfg.field.empty() && parse_field(cfg.field) != FieldKind::complex) throw UsageError("reconstruct needs --field complex");
  auto H1 = homology_basis(K, 1), H2 = homology_basis(K, 2);
  std::optional<Connection<Complex>> original;
  InvariantData<Complex> inv;
  if (!cfg.invariants_file.empty()) {
    inv = read_invariants<Complex>(K, H1, read_text(cfg.invariants_file));
  } else {
    original = load_complex_connection(K, cfg);
    inv = invariant_data(*original, H1);
  }
  ReconstructOptions opt;
  opt.tol = cfg.tol;
  opt.h2 = &H2;
  auto r = reconstruct(K, inv, opt);
  bool ok = r.report.all_pass();
  std::cerr << r.report.jsonl();
  if (original) {
    auto g = gauge_equivalent(*original, r.mu, H1, cfg.tol);
    nlohmann::json j{{"step", "gauge_equivalent"}, {"pass", g.equivalent}, {"residual", g.max_rel_error}};
    if (!g.reason.empty()) j["detail"] = g.reason;
    std::cerr << j.dump() << "\n";
    ok = ok && g.equivalent;
  }
  emit(cfg, write_connection(r.mu));
  return ok ? 0 : 1;
}

int cmd_roundtrip(const RunConfig& cfg) {
  auto K = load_complex(cfg);
  if (!cfg.field.empty() && parse_field(cfg.field) != FieldKind::complex) throw UsageError("roundtrip needs --field complex");
  if (cfg.seeds < 1) throw UsageError("--seeds must be positive");
  auto H1 = homology_basis(K, 1), H2 = homology_basis(K, 2);
  const std::uint64_t first = cfg.seed.value_or(0);
  int good = 0;
  std::ostringstream os;
  char buf[160];
  for (int s = 0; s < cfg.seeds; ++s) {
    const std::uint64_t seed = first + static_cast<std::uint64_t>(s);
    auto mu = random_connection<Complex>(K, seed, cfg.max_phase);
    ReconstructOptions opt;
    opt.tol = cfg.tol;
    opt.h2 = &H2;
    bool eq = false;
    double err = 0.0;
    std::string why;
    try {
      auto r = reconstruct(K, invariant_data(mu, H1), opt);
      auto g = gauge_equivalent(mu, r.mu, H1, cfg.tol);
      eq = g.equivalent && r.report.all_pass();
      err = g.max_rel_error;
      why = g.reason;
    } catch (const Error& e) {
      why = e.what();
    }
    good += eq;
    std::snprintf(buf, sizeof buf, "seed %llu %s max_rel_error=%.3e", static_cast<unsigned long long>(seed),
                  eq ? "equivalent" : "FAILED", err);
    os << buf;
    if (!eq && !why.empty()) os << " (" << why << ")";
    os << "\n";
  }
  os << good << "/" << cfg.seeds << " gauge-equivalent\n";
  emit(cfg, os.str());
  return good == cfg.seeds ? 0 : 1;
}

template <template <class> class F>
int dispatch(const RunConfig& cfg, FieldKind fallback) {
  return field_of(cfg, fallback) == FieldKind::rational ? F<Rational>::run(cfg) : F<Complex>::run(cfg);
}

template <class S> struct Generate { static int run(const RunConfig& c) { return cmd_generate<S>(c); } };
template <class S> struct Validate { static int run(const RunConfig& c) { return cmd_validate<S>(c); } };
template <class S> struct Invariants { static int run(const RunConfig& c) { return cmd_invariants<S>(c); } };
template <class S> struct Curvature { static int run(const RunConfig& c) { return cmd_curvature<S>(c); } };
template <class S> struct Holonomy { static int run(const RunConfig& c) { return cmd_holonomy<S>(c); } };

bool is_input_error(ErrorCode c) {
  return c == ErrorCode::ParseError || c == ErrorCode::UnknownName || c == ErrorCode::MixedField ||
         c == ErrorCode::NotPure || c == ErrorCode::NonPseudomanifold || c == ErrorCode::MixedDimension ||
         c == ErrorCode::BadLink || c == ErrorCode::Disconnected;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete GL_n connections on triangulated manifolds"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub, bool connection) {
    auto* src = sub->add_option_group("complex source");
    src->add_option("--catalog", cfg.catalog_name, "catalog complex (sphere2, sphere3, torus7, rp2_6, genus2, torus3d)");
    src->add_option("--complex", cfg.complex_file, "complex file");
    src->require_option(1);
    sub->add_option("--tol", cfg.tol, "tolerance for the complex model")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    if (connection) {
      sub->add_option("--connection", cfg.connection_file, "connection file");
      sub->add_option("--seed", cfg.seed, "random connection seed");
      sub->add_flag("--canonical", cfg.canonical, "use the canonical connection");
      sub->add_option("--max-phase", cfg.max_phase, "phase bound for random complex coefficients");
      sub->add_option("--field", cfg.field, "rational or complex")->check(CLI::IsMember({"rational", "complex"}));
    }
  };

  auto* gen = app.add_subcommand("generate", "write a connection (and optionally the complex) to files");
  common(gen, true);
  gen->add_option("--complex-out", cfg.complex_out, "also write the complex here");
  auto* st = app.add_subcommand("stats", "simplex counts, homology and parameter balance");
  common(st, false);
  auto* val = app.add_subcommand("validate", "check connection axioms and invariant relations");
  common(val, true);
  auto* inv = app.add_subcommand("invariants", "compute rho and holonomy invariants");
  common(inv, true);
  inv->add_flag("--check", cfg.check, "verify all relations (report on stderr)");
  auto* cur = app.add_subcommand("curvature", "curvature operator on every (n-2)-simplex");
  common(cur, true);
  cur->add_flag("--check", cfg.check, "fail unless every K_sigma is the identity");
  auto* hol = app.add_subcommand("holonomy", "holonomy of a word-built thick path");
  common(hol, true);
  hol->add_option("--word", cfg.word, "word such as \"a0^3 a1\" (rightmost letter first)")->required();
  hol->add_option("--start", cfg.start, "initial face vertices in slot order, e.g. \"0 1 2\"");
  auto* ch = app.add_subcommand("chern", "first Chern number (complex field)");
  common(ch, true);
  auto* rec = app.add_subcommand("reconstruct", "rebuild a connection from its invariants");
  common(rec, true);
  rec->add_option("--invariants", cfg.invariants_file, "invariants file instead of a connection");
  auto* rt = app.add_subcommand("roundtrip", "reconstruct random connections and compare up to gauge");
  common(rt, true);
  rt->add_option("--seeds", cfg.seeds, "number of seeds (starting at --seed, default 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) return dispatch<Generate>(cfg, FieldKind::rational);
    if (*st) return cmd_stats(cfg);
    if (*val) return dispatch<Validate>(cfg, FieldKind::rational);
    if (*inv) return dispatch<Invariants>(cfg, FieldKind::rational);
    if (*cur) return dispatch<Curvature>(cfg, FieldKind::rational);
    if (*hol) return dispatch<Holonomy>(cfg, FieldKind::rational);
    if (*ch) return cmd_chern(cfg);
    if (*rec) return cmd_reconstruct(cfg);
    if (*rt) return cmd_roundtrip(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_input_error(e.code()) ? 2 : 1;
  }
  return 2;
}
