#include "orbitfisher/cli.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <unistd.h>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "orbitfisher/acceptance.hpp"
#include "orbitfisher/fibration.hpp"
#include "orbitfisher/geom_tensors.hpp"

namespace orbitfisher::cli {

namespace {

// Numerical contract violated after a successful computation.
struct ContractViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json(const std::string& text, const std::string& path) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError("malformed JSON in '" + path + "': " + e.what());
  }
}

const Json& field(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key))
    throw ValidationError(std::string(what) + ": missing field '" + key + "'");
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw ValidationError(std::string(what) + ": expected a number");
  return j.get<double>();
}

RealMatrix real_rows(const Json& j, int n, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw ValidationError(std::string(what) + ": expected " + std::to_string(n) + " rows");
  RealMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ValidationError(std::string(what) + ": row " + std::to_string(i) + " is not of length " +
                            std::to_string(n));
    for (int c = 0; c < n; ++c) m(i, c) = number(row[static_cast<std::size_t>(c)], what);
  }
  return m;
}

std::vector<int> parse_int_list(const Json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + ": expected an integer array");
  std::vector<int> out;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw ValidationError(std::string(what) + ": expected integers");
    out.push_back(x.get<int>());
  }
  return out;
}

std::vector<double> parse_csv_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size() || errno != 0)
      throw UsageError("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::optional<double> env_tolerance() {
  const char* env = std::getenv("ORBITFISHER_TOL");
  if (!env || !*env) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (*end != '\0' || !(v > 0.0)) throw UsageError(std::string("ORBITFISHER_TOL is not a positive number: ") + env);
  return v;
}

Json conventions_json(double tol) {
  const Conventions c;
  return Json{{"pairing_sign", c.pairing_sign},
              {"antisym_extraction", c.antisym_extraction},
              {"eigenvalue_order", "weakly decreasing"},
              {"phase_convention", "largest_component_real_positive"},
              {"indices", "1-based in reports"},
              {"tolerance", tol}};
}

Json basis_json(const BasisSet& b) {
  Json out = Json::array();
  for (std::size_t a = 0; a < b.size(); ++a) {
    Json e{{"matrix", matrix_to_json(b.elements[a])}};
    if (a < b.labels.size()) {
      const BasisLabel& l = b.labels[a];
      e["type"] = l.type == BasisLabel::Type::symmetric       ? "symmetric"
                  : l.type == BasisLabel::Type::antisymmetric ? "antisymmetric"
                                                              : "other";
      e["i"] = l.row + 1;
      e["j"] = l.col + 1;
    }
    out.push_back(e);
  }
  return out;
}

Json int_list(const std::vector<int>& v) { return Json(v); }

struct Common {
  std::string input;
  std::string output;
  std::string format = "json";
  std::optional<double> tol_flag;
  std::optional<std::uint64_t> seed;
};

struct Report {
  std::string command;
  std::string digest;
  double tol = 1e-10;
  Json payload;
};

std::string render_json(const Report& r) {
  Json j{{"command", r.command},
         {"input_digest", r.digest},
         {"conventions", conventions_json(r.tol)},
         {"payload", r.payload}};
  return j.dump(2) + "\n";
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.output.empty()) out << text;
  else write_atomic(c.output, text);
}

std::string csv_header(const Report& r, const std::string& extra) {
  std::ostringstream os;
  os << "# command: " << r.command << "\n# input_digest: " << r.digest << "\n";
  const Conventions conv;
  os << "# pairing_sign: " << conv.pairing_sign << "\n# antisym_extraction: "
     << conv.antisym_extraction << "\n";
  if (!extra.empty()) os << extra;
  return os.str();
}

// --- subcommands -----------------------------------------------------------

DensityMatrix load_state(const std::string& path, std::string& bytes) {
  bytes = read_file(path);
  const Json j = parse_json(bytes, path);
  return DensityMatrix::from_matrix(matrix_from_json(j, "state"));
}

Json tensor_payload(const TensorReport& r) {
  return Json{{"n", r.frame->n()},
              {"kappa", vector_to_json(r.frame->kappa())},
              {"dim", r.dim()},
              {"basis", basis_json(r.basis)},
              {"fisher_sym", real_matrix_to_json(r.fisher_sym)},
              {"fisher_antisym", real_matrix_to_json(r.fisher_antisym)},
              {"kks", real_matrix_to_json(r.kks)},
              {"bures", real_matrix_to_json(r.bures)},
              {"kks_metric", real_matrix_to_json(r.kks_metric)}};
}

void require_json(const Common& c, const char* cmd) {
  if (c.format != "json") throw UsageError(std::string(cmd) + ": only --format json is available");
}

int cmd_classify(const Common& c, double tol, std::ostream& out) {
  require_json(c, "classify");
  std::string bytes;
  const DensityMatrix rho = load_state(c.input, bytes);
  const OrbitDescriptor d = classify(rho, tol);
  const SpectralData s = spectral_decompose(rho, tol);
  Report r{"classify", sha256_hex(bytes), tol,
           Json{{"partition", int_list(d.partition)},
                {"rank", d.rank},
                {"orbit_dim", d.orbit_dim},
                {"stratum_dim", d.stratum_dim},
                {"stabilizer_blocks", int_list(d.stabilizer_blocks)},
                {"pure", is_pure(rho)},
                {"kappa", vector_to_json(s.kappa)},
                {"unitary", matrix_to_json(s.unitary)}}};
  emit(c, render_json(r), out);
  return kExitOk;
}

int cmd_sld(const Common& c, const std::string& tangent_path, double tol, std::ostream& out) {
  require_json(c, "sld");
  std::string bytes;
  const DensityMatrix rho = load_state(c.input, bytes);
  const std::string tbytes = read_file(tangent_path);
  const ComplexMatrix value = matrix_from_json(parse_json(tbytes, tangent_path), "tangent");
  const auto v = TangentVector::make(make_frame(rho, tol), value);
  const ComplexMatrix l = sld(v);
  const ComplexMatrix k = phi_inverse(v).value;
  const double vn = value.norm();
  const double residual = (value - 0.5 * (l * rho.matrix() + rho.matrix() * l)).norm();
  Report r{"sld", sha256_hex(bytes + tbytes), tol,
           Json{{"sld", matrix_to_json(l)},
                {"phi_inverse", matrix_to_json(k)},
                {"residual", residual}}};
  emit(c, render_json(r), out);
  if (residual > 1e-12 * vn) {
    std::ostringstream os;
    os << "SLD residual |v - {L, rho}/2| = " << residual << " exceeds 1e-12 |v| = " << 1e-12 * vn;
    throw ContractViolation(os.str());
  }
  return kExitOk;
}

int cmd_tensor(const Common& c, const std::string& name, double tol, std::ostream& out) {
  require_json(c, name.c_str());
  std::string bytes;
  const DensityMatrix rho = load_state(c.input, bytes);
  const TensorReport t = fisher_split(rho, tol);
  Json payload;
  if (name == "kks") {
    payload = Json{{"n", rho.n()},
                   {"kappa", vector_to_json(t.frame->kappa())},
                   {"dim", t.dim()},
                   {"basis", basis_json(t.basis)},
                   {"kks", real_matrix_to_json(t.kks)},
                   {"kks_metric", real_matrix_to_json(t.kks_metric)}};
  } else {
    payload = tensor_payload(t);
  }
  const PullbackCheck pc = pullback_identity_check(t);
  payload["pullback"] = Json{{"max_deviation", pc.max_deviation},
                             {"max_fisher", pc.max_fisher},
                             {"bound", tol * (1.0 + pc.max_fisher)},
                             {"pass", pc.within_contract(tol)}};
  if (name == "bures") {
    payload.erase("fisher_antisym");
    payload.erase("kks");
  }
  Report r{name, sha256_hex(bytes), tol, payload};
  emit(c, render_json(r), out);
  if (!pc.within_contract(tol)) {
    std::ostringstream os;
    os << "pullback identity: max deviation " << pc.max_deviation << " exceeds tol*(1+max|F|) = "
       << tol * (1.0 + pc.max_fisher);
    throw ContractViolation(os.str());
  }
  return kExitOk;
}

int cmd_curve(const Common& c, const std::string& name, double theta, double h, double tol,
              std::ostream& out) {
  require_json(c, name.c_str());
  const std::string bytes = read_file(c.input);
  const CurveSpec curve = curve_from_json(parse_json(bytes, c.input));
  const double fisher = fisher_index_along_curve(curve, theta, h);
  Json payload{{"curve", curve_to_json(curve)},
               {"theta", theta},
               {"h", h},
               {"fisher_index", fisher}};
  double gap = 0.0;
  if (name == "bures") {
    const MaurerCartan mc = maurer_cartan_coefficients(curve, theta, h);
    const double gb = bures_from_maurer_cartan(mc, tol);
    gap = std::abs(gb - 0.25 * fisher);
    payload["bures_full"] = gb;
    payload["maurer_cartan"] = Json{{"kappa", vector_to_json(mc.kappa)},
                                    {"dkappa", vector_to_json(mc.dkappa)},
                                    {"offdiag", matrix_to_json(mc.offdiag)}};
    payload["identity_gap"] = gap;
  }
  Report r{name, sha256_hex(bytes), tol, payload};
  emit(c, render_json(r), out);
  if (name == "bures" && gap > 1e-8 * (1.0 + fisher)) {
    std::ostringstream os;
    os << "bures_full vs fisher_index/4: deviation " << gap << " exceeds 1e-8";
    throw ContractViolation(os.str());
  }
  return kExitOk;
}

int cmd_fibration(const Common& c, double tol, std::ostream& out) {
  const std::string bytes = read_file(c.input);
  const Json j = parse_json(bytes, c.input);
  Report r{"fibration-check", sha256_hex(bytes), tol, Json::object()};
  bool rows_ok = true;
  std::vector<NestingRow> rows;
  if (j.contains("pairs")) {
    const int n = field(j, "n", "fibration-check").get<int>();
    std::vector<std::pair<std::vector<int>, std::vector<int>>> pairs;
    for (const auto& p : j.at("pairs")) {
      if (!p.is_array() || p.size() != 2) throw ValidationError("fibration-check: each pair is [fine, coarse]");
      pairs.emplace_back(parse_int_list(p[0], "fine partition"), parse_int_list(p[1], "coarse partition"));
    }
    rows = nesting_report(n, pairs);
    Json table = Json::array();
    for (const auto& row : rows) {
      Json e{{"fine", int_list(row.fine)}, {"coarse", int_list(row.coarse)}, {"ok", row.ok}};
      if (row.ok) {
        e["total_dim"] = row.total_dim;
        e["base_dim"] = row.base_dim;
        e["fibre_dim"] = row.fibre_dim;
      } else {
        e["error"] = row.error;
        rows_ok = false;
      }
      table.push_back(e);
    }
    r.payload["nesting"] = table;
  }
  if (j.contains("eta0") || j.contains("xi0")) {
    const auto eta = DensityMatrix::from_matrix(matrix_from_json(field(j, "eta0", "fibration-check"), "eta0"));
    const auto xi = DensityMatrix::from_matrix(matrix_from_json(field(j, "xi0", "fibration-check"), "xi0"));
    const FibrationSpec spec = FibrationSpec::make(eta, xi, tol);
    const ComplexMatrix id = ComplexMatrix::Identity(spec.n(), spec.n());
    const DimensionIdentity d = dimension_identity(spec);
    r.payload["split"] = Json{{"dim_normal_xi", d.normal_xi},
                              {"dim_vertical", d.vertical},
                              {"dim_normal_eta", d.normal_eta},
                              {"identity_holds", d.holds()},
                              {"vertical_basis", basis_json(vertical_basis(spec, id))},
                              {"horizontal_basis", basis_json(horizontal_basis(spec, id))}};
    if (!d.holds()) throw ContractViolation("dim n_xi + dim(h_xi ∩ n_eta) != dim n_eta");
  }
  if (r.payload.empty()) throw ValidationError("fibration-check: input needs 'pairs' or 'eta0'/'xi0'");

  if (c.format == "csv") {
    std::ostringstream os;
    os << csv_header(r, "");
    os << "fine,coarse,total_dim,base_dim,fibre_dim,ok\n";
    const auto join = [](const std::vector<int>& p) {
      std::string s;
      for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "-" : "") + std::to_string(p[i]);
      return s;
    };
    for (const auto& row : rows)
      os << join(row.fine) << ',' << join(row.coarse) << ',' << row.total_dim << ',' << row.base_dim
         << ',' << row.fibre_dim << ',' << (row.ok ? 1 : 0) << "\n";
    emit(c, os.str(), out);
  } else {
    emit(c, render_json(r), out);
  }
  if (!rows_ok) throw ValidationError("fibration-check: refinement violation in at least one pair (see report)");
  return kExitOk;
}

int cmd_u3(const Common& c, const std::string& kappa_text, double tol, std::ostream& out) {
  const std::vector<double> k = parse_csv_doubles(kappa_text);
  RealVector kappa(static_cast<Eigen::Index>(k.size()));
  for (std::size_t i = 0; i < k.size(); ++i) kappa(static_cast<Eigen::Index>(i)) = k[i];
  const auto pairs = fisher_u3_closed_form(kappa);
  Report r{"u3-closed-form", sha256_hex("--kappa " + kappa_text), tol, Json::object()};
  if (c.format == "csv") {
    std::ostringstream os;
    os << csv_header(r, "# kappa: " + kappa_text + "\n") << "i,j,sym,antisym\n";
    for (const auto& p : pairs)
      os << p.i + 1 << ',' << p.j + 1 << ',' << csv_number(p.sym) << ',' << csv_number(p.antisym) << "\n";
    emit(c, os.str(), out);
    return kExitOk;
  }
  Json list = Json::array();
  for (const auto& p : pairs) list.push_back(Json{{"i", p.i + 1}, {"j", p.j + 1}, {"sym", p.sym}, {"antisym", p.antisym}});
  r.payload = Json{{"kappa", vector_to_json(kappa)}, {"pairs", list}};
  emit(c, render_json(r), out);
  return kExitOk;
}

int cmd_selftest(const Common& c, std::optional<double> tol, std::ostream& out, std::ostream& err) {
  acceptance::Options opt;
  if (c.seed) opt.seed = *c.seed;
  opt.tol = tol;
  std::ostringstream text;
  Json results = Json::array();
  bool ok = true;
  for (const auto& res : acceptance::run_all(opt)) {
    text << acceptance::format_line(res) << "\n";
    ok = ok && res.pass();
    Json checks = Json::array();
    for (const auto& ch : res.checks) {
      Json e{{"label", ch.label}, {"bound", ch.bound}, {"pass", ch.pass()}};
      if (ch.show_value) e["measured"] = ch.measured;
      checks.push_back(e);
    }
    results.push_back(Json{{"id", res.id}, {"name", res.name}, {"pass", res.pass()}, {"checks", checks}, {"note", res.note}});
  }
  text << (ok ? "selftest: all criteria pass" : "selftest: FAILED") << "\n";
  out << text.str();
  if (!c.output.empty()) {
    Report r{"selftest", sha256_hex("seed " + std::to_string(opt.seed)), tol.value_or(0.0),
             Json{{"seed", opt.seed}, {"pass", ok}, {"criteria", results}}};
    write_atomic(c.output, render_json(r));
  }
  if (!ok) {
    err << "selftest: at least one acceptance criterion failed\n";
    return kExitContract;
  }
  return kExitOk;
}

int cmd_plot(const Common& c, const std::string& sweep, double from, double to, int steps, double tol,
             std::ostream& out) {
  if (c.format != "csv") throw UsageError("plot-data: only --format csv is available");
  if (steps < 0) throw UsageError("plot-data: --steps must be non-negative");
  std::vector<double> xs;
  if (steps > 0 && from <= to) {
    for (int s = 0; s < steps; ++s)
      xs.push_back(steps == 1 ? from : from + (to - from) * s / (steps - 1));
  }
  std::ostringstream meta;
  meta << "# sweep: " << sweep << "\n# from: " << csv_number(from) << "\n# to: " << csv_number(to)
       << "\n# steps: " << steps << "\n";
  Report r{"plot-data",
           sha256_hex("plot-data " + sweep + " " + csv_number(from) + " " + csv_number(to) + " " +
                      std::to_string(steps)),
           tol, Json()};
  std::ostringstream os;
  os << csv_header(r, meta.str());
  if (sweep == "u2-fisher") {
    os << "kappa1,F_sym,F_antisym,closed_form\n";
    for (double k1 : xs) {
      if (!(k1 > 0.5 && k1 <= 1.0)) throw ValidationError("plot-data: kappa1 must lie in (0.5, 1]");
      RealVector k(2);
      k << k1, 1.0 - k1;
      const auto rho = DensityMatrix::from_matrix(k.cast<cxd>().asDiagonal());
      const ChartReport chart = chart_coefficients(fisher_split(rho, tol));
      const double k2 = 1.0 - k1;
      const double closed = 4.0 * (k1 - k2) * (k1 - k2) / (k1 + k2);
      os << csv_number(k1) << ',' << csv_number(chart.pairs.at(0).sym_xx) << ','
         << csv_number(chart.pairs.at(0).antisym_xy) << ',' << csv_number(closed) << "\n";
    }
  } else if (sweep == "lambda12") {
    os << "kappa1,Lambda12\n";
    for (double k1 : xs) {
      if (!(k1 >= 0.0 && k1 <= 1.0)) throw ValidationError("plot-data: kappa1 must lie in [0, 1]");
      os << csv_number(k1) << ',' << csv_number(bures_lambda(k1, 1.0 - k1)) << "\n";
    }
  } else {
    throw UsageError("plot-data: unknown sweep '" + sweep + "' (expected u2-fisher or lambda12)");
  }
  emit(c, os.str(), out);
  return kExitOk;
}

void add_common(CLI::App* sub, Common& c, bool needs_input) {
  auto* in = sub->add_option("--input", c.input, "input JSON file");
  if (needs_input) in->required();
  sub->add_option("--output", c.output, "report path (stdout when omitted)");
  sub->add_option("--tol", c.tol_flag, "tolerance (default 1e-10, env ORBITFISHER_TOL)");
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"orbitfisher: geometry of quantum mixed states on unitary orbits", "orbitfisher"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  Common c;
  std::string tangent, kappa, sweep = "u2-fisher";
  double theta = 0.0, h = 1e-5, from = 0.55, to = 0.95;
  int steps = 9;

  auto* classify_cmd = app.add_subcommand("classify", "orbit type of a density matrix");
  add_common(classify_cmd, c, true);
  auto* sld_cmd = app.add_subcommand("sld", "symmetric logarithmic differential of a tangent vector");
  add_common(sld_cmd, c, true);
  sld_cmd->add_option("--tangent", tangent, "tangent value MatrixFile")->required();
  auto* kks_cmd = app.add_subcommand("kks", "KKS form in the normal basis");
  add_common(kks_cmd, c, true);
  auto* fisher_cmd = app.add_subcommand("fisher", "Fisher tensor report with pullback check");
  add_common(fisher_cmd, c, true);
  auto* bures_cmd = app.add_subcommand("bures", "Bures metric (state: tangent matrix, curve: full metric)");
  add_common(bures_cmd, c, true);
  bures_cmd->add_option("--theta", theta, "curve parameter");
  bures_cmd->add_option("--h", h, "finite-difference step");
  auto* curve_cmd = app.add_subcommand("curve-fisher", "Fisher information along a curve");
  add_common(curve_cmd, c, true);
  curve_cmd->add_option("--theta", theta, "curve parameter");
  curve_cmd->add_option("--h", h, "finite-difference step");
  auto* fib_cmd = app.add_subcommand("fibration-check", "nesting table and vertical/horizontal split");
  add_common(fib_cmd, c, true);
  auto* u3_cmd = app.add_subcommand("u3-closed-form", "U(3) Fisher coefficients");
  add_common(u3_cmd, c, false);
  u3_cmd->add_option("--kappa", kappa, "three eigenvalues, comma separated")->required();
  auto* self_cmd = app.add_subcommand("selftest", "run the acceptance suite");
  add_common(self_cmd, c, false);
  auto* plot_cmd = app.add_subcommand("plot-data", "CSV sweeps for plotting");
  add_common(plot_cmd, c, false);
  plot_cmd->add_option("--sweep", sweep, "u2-fisher or lambda12");
  plot_cmd->add_option("--from", from, "first kappa1");
  plot_cmd->add_option("--to", to, "last kappa1");
  plot_cmd->add_option("--steps", steps, "number of points (0 gives a header-only file)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (c.tol_flag && !(*c.tol_flag > 0.0)) throw UsageError("--tol must be positive");
  if (!(h > 0.0)) throw UsageError("--h must be positive");
  const std::optional<double> explicit_tol = c.tol_flag ? c.tol_flag : env_tolerance();
  const double tol = explicit_tol.value_or(kClusterTol);

  if (plot_cmd->parsed() && plot_cmd->get_option("--format")->count() == 0) c.format = "csv";
  if (classify_cmd->parsed()) return cmd_classify(c, tol, out);
  if (sld_cmd->parsed()) return cmd_sld(c, tangent, tol, out);
  if (kks_cmd->parsed()) return cmd_tensor(c, "kks", tol, out);
  if (fisher_cmd->parsed()) return cmd_tensor(c, "fisher", tol, out);
  if (bures_cmd->parsed()) {
    std::string bytes = read_file(c.input);
    const Json j = parse_json(bytes, c.input);
    if (j.is_object() && j.contains("kind")) return cmd_curve(c, "bures", theta, h, tol, out);
    return cmd_tensor(c, "bures", tol, out);
  }
  if (curve_cmd->parsed()) return cmd_curve(c, "curve-fisher", theta, h, tol, out);
  if (fib_cmd->parsed()) return cmd_fibration(c, tol, out);
  if (u3_cmd->parsed()) return cmd_u3(c, kappa, tol, out);
  if (self_cmd->parsed()) return cmd_selftest(c, explicit_tol, out, err);
  if (plot_cmd->parsed()) return cmd_plot(c, sweep, from, to, steps, tol, out);
  throw UsageError("no subcommand");
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  const auto n = static_cast<int>(m.rows());
  Json re = Json::array(), im = Json::array();
  for (int i = 0; i < n; ++i) {
    Json r = Json::array(), c = Json::array();
    for (int j = 0; j < n; ++j) {
      r.push_back(m(i, j).real());
      c.push_back(m(i, j).imag());
    }
    re.push_back(r);
    im.push_back(c);
  }
  return Json{{"n", n}, {"re", re}, {"im", im}};
}

ComplexMatrix matrix_from_json(const Json& j, const char* what) {
  const Json& nj = field(j, "n", what);
  if (!nj.is_number_integer() || nj.get<long long>() < 1 || nj.get<long long>() > 4096)
    throw ValidationError(std::string(what) + ": 'n' must be a positive integer");
  const int n = nj.get<int>();
  const RealMatrix re = real_rows(field(j, "re", what), n, what);
  const RealMatrix im = real_rows(field(j, "im", what), n, what);
  ComplexMatrix m(n, n);
  m.real() = re;
  m.imag() = im;
  return m;
}

Json real_matrix_to_json(const RealMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

Json vector_to_json(const RealVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

RealVector vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw ValidationError(std::string(what) + ": expected an array of numbers");
  RealVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], what);
  return v;
}

CurveSpec curve_from_json(const Json& j) {
  const Json& kind = field(j, "kind", "curve");
  if (!kind.is_string()) throw ValidationError("curve: 'kind' must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "unitary_rotation") {
    return CurveSpec::unitary_rotation(
        matrix_from_json(field(j, "generator", "curve"), "curve generator"),
        DensityMatrix::from_matrix(matrix_from_json(field(j, "base", "curve"), "curve base")));
  }
  if (k == "eigenvalue_path" || k == "composite") {
    const RealVector k0 = vector_from_json(field(j, "kappa0", "curve"), "kappa0");
    const RealVector dk = vector_from_json(field(j, "dkappa", "curve"), "dkappa");
    const ComplexMatrix u = matrix_from_json(field(j, "unitary", "curve"), "curve unitary");
    if (k == "eigenvalue_path") return CurveSpec::eigenvalue_path(k0, dk, u);
    return CurveSpec::composite(matrix_from_json(field(j, "generator", "curve"), "curve generator"), k0, dk, u);
  }
  throw ValidationError("curve: unknown kind '" + k + "'");
}

Json curve_to_json(const CurveSpec& c) {
  Json j{{"kind", to_string(c.kind())}};
  switch (c.kind()) {
    case CurveSpec::Kind::unitary_rotation:
      j["generator"] = matrix_to_json(c.generator());
      j["base"] = matrix_to_json(c.base());
      break;
    case CurveSpec::Kind::composite:
      j["generator"] = matrix_to_json(c.generator());
      [[fallthrough]];
    case CurveSpec::Kind::eigenvalue_path:
      j["kappa0"] = vector_to_json(c.kappa0());
      j["dkappa"] = vector_to_json(c.dkappa());
      j["unitary"] = matrix_to_json(c.unitary());
      break;
  }
  return j;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
  std::string tmpl = (dir / (target.filename().string() + ".tmp.XXXXXX")).string();
  const int fd = mkstemp(tmpl.data());
  if (fd < 0) throw ValidationError("cannot create temporary file next to '" + path + "'");
  std::size_t done = 0;
  while (done < content.size()) {
    const ssize_t w = ::write(fd, content.data() + done, content.size() - done);
    if (w <= 0) {
      ::close(fd);
      std::remove(tmpl.c_str());
      throw ValidationError("cannot write '" + path + "'");
    }
    done += static_cast<std::size_t>(w);
  }
  ::fsync(fd);
  ::close(fd);
  std::error_code ec;
  fs::rename(tmpl, target, ec);
  if (ec) {
    std::remove(tmpl.c_str());
    throw ValidationError("cannot move report into place at '" + path + "': " + ec.message());
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ContractViolation& e) {
    err << "contract violation: " << e.what() << "\n";
    return kExitContract;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what();
    if (e.deviation() != 0.0) err << " [deviation " << e.deviation() << "]";
    err << "\n";
    return kExitValidation;
  } catch (const Json::exception& e) {
    err << "error (validation): malformed input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitContract;
  }
}

}  // namespace orbitfisher::cli
