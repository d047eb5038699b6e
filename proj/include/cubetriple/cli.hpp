#pragma once

// Command-line front end. run_cli parses the arguments, runs one subcommand
// and returns the process exit status:
//   0 success, 1 verification failure, 2 usage error, 3 I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "cubetriple/cube.hpp"
#include "cubetriple/decomposition.hpp"
#include "cubetriple/hypergeometric.hpp"
#include "cubetriple/leonard.hpp"
#include "cubetriple/serialize.hpp"

namespace cubetriple {

inline constexpr int k_exit_ok = 0;
inline constexpr int k_exit_verification = 1;
inline constexpr int k_exit_usage = 2;
inline constexpr int k_exit_io = 3;

inline constexpr const char* k_d_limit_env = "CUBETRIPLE_D_LIMIT";

enum class OutputFormat { json, csv, pretty };

struct RunConfig {
  std::string command;
  unsigned D = 0;
  unsigned d_limit = k_default_d_limit;
  std::string output_path;
  OutputFormat format = OutputFormat::json;
  bool parallel = false;
  std::string op = "adjacency";
  int index = -1;
  int endpoint = -1;
  std::string suite = "all";
  std::string emit_seeds;
  std::string inject_fault;
};

namespace cli_detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline unsigned default_d_limit() {
  if (const char* env = std::getenv(k_d_limit_env)) {
    try {
      std::size_t used = 0;
      unsigned long v = std::stoul(env, &used);
      if (used == std::string(env).size() && v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw UsageError(std::string(k_d_limit_env) + " must be a positive integer");
  }
  return k_default_d_limit;
}

// Fault injection for mutation checks: "aeps:R,C" negates Ae(R,C),
// "phi:I,J" negates Phi_IJ (or sets it to 1 when it is zero).
struct Fault {
  std::string target;
  std::size_t a = 0;
  std::size_t b = 0;
};

inline std::optional<Fault> parse_fault(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto colon = text.find(':');
  auto comma = text.find(',');
  if (colon == std::string::npos || comma == std::string::npos || comma < colon)
    throw UsageError("fault must look like aeps:R,C or phi:I,J");
  Fault f;
  f.target = text.substr(0, colon);
  try {
    f.a = std::stoul(text.substr(colon + 1, comma - colon - 1));
    f.b = std::stoul(text.substr(comma + 1));
  } catch (const std::exception&) {
    throw UsageError("fault indices must be integers");
  }
  if (f.target != "aeps" && f.target != "phi") throw UsageError("unknown fault target " + f.target);
  return f;
}

inline void perturb(Rational& x) { x = x.is_zero() ? Rational(1) : -x; }
inline void perturb(GaussRat& x) { x = x.is_zero() ? GaussRat(Rational(1)) : -x; }

class Emitter {
 public:
  Emitter(std::ostream& out, OutputFormat format) : out_(out), format_(format) {}

  OutputFormat format() const { return format_; }
  std::ostream& stream() { return out_; }

  void csv_header(const std::string& header) {
    if (format_ == OutputFormat::csv && !header_done_) {
      out_ << header << '\n';
      header_done_ = true;
    }
  }

 private:
  std::ostream& out_;
  OutputFormat format_;
  bool header_done_ = false;
};

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void emit_matrix(Emitter& em, const ExactMatrix& m) {
  switch (em.format()) {
    case OutputFormat::json: em.stream() << matrix_to_json(m).dump() << '\n'; break;
    case OutputFormat::csv:
      em.csv_header("row,col,re,im");
      for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
          if (!m(r, c).is_zero())
            em.stream() << r << ',' << c << ',' << m(r, c).re().to_string() << ',' << m(r, c).im().to_string() << '\n';
      break;
    case OutputFormat::pretty:
      for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) em.stream() << (c ? " " : "") << m(r, c).to_string();
        em.stream() << '\n';
      }
      break;
  }
}

inline void emit_check(Emitter& em, const std::string& suite, const IdentityCheck& c) {
  switch (em.format()) {
    case OutputFormat::json: {
      auto j = to_json(c);
      j["suite"] = suite;
      em.stream() << j.dump() << '\n';
      break;
    }
    case OutputFormat::csv:
      em.csv_header("suite,identity,passed,row,col");
      em.stream() << suite << ',' << csv_escape(c.identity) << ',' << (c.passed ? "true" : "false") << ',';
      if (c.first_discrepancy) em.stream() << c.first_discrepancy->first << ',' << c.first_discrepancy->second;
      else em.stream() << ',';
      em.stream() << '\n';
      break;
    case OutputFormat::pretty:
      em.stream() << (c.passed ? "PASS " : "FAIL ") << suite << ": " << c.identity;
      if (c.first_discrepancy)
        em.stream() << " (first discrepancy at " << c.first_discrepancy->first << ", " << c.first_discrepancy->second
                    << ")";
      em.stream() << '\n';
      break;
  }
}

inline void emit_module(Emitter& em, const ModuleVerification& v) {
  switch (em.format()) {
    case OutputFormat::json: em.stream() << module_report_json(v).dump() << '\n'; break;
    case OutputFormat::csv: {
      em.csv_header("D,r,module_index,check,i,j,passed");
      auto row = [&](const std::string& check, const std::string& i, const std::string& j, bool ok) {
        em.stream() << v.D << ',' << v.r << ',' << v.index << ',' << csv_escape(check) << ',' << i << ',' << j << ','
                    << (ok ? "true" : "false") << '\n';
      };
      if (v.rep) {
        for (const auto& c : v.rep->cells)
          row(std::string("rep:") + to_string(c.basis) + ":" + to_string(c.op) + ":" + to_string(c.form), "", "",
              c.passed);
        for (const auto& e : v.rep->extras) row("rep:" + e.identity, "", "", e.passed);
      }
      if (v.inner)
        for (const auto& c : v.inner->cells) row(c.identity_id, std::to_string(c.i), std::to_string(c.j), c.passed);
      if (v.transitions) {
        for (const auto& c : v.transitions->cells)
          row(std::string("transition:") + to_string(c.from) + "->" + to_string(c.to), "", "", c.passed);
        row("transition:inverse coherence", "", "", v.transitions->inverse_coherent);
        row("transition:composition coherence", "", "", v.transitions->composition_coherent);
      }
      if (v.leonard) row(std::string("leonard_triple:") + to_string(*v.leonard), "", "", *v.leonard == LeonardVerdict::yes);
      break;
    }
    case OutputFormat::pretty: {
      em.stream() << (v.passed() ? "PASS" : "FAIL") << " module r=" << v.r << " index=" << v.index << '\n';
      if (v.rep) {
        std::size_t ok = 0;
        for (const auto& c : v.rep->cells) ok += c.passed;
        em.stream() << "  representation matrices: " << ok << "/" << v.rep->cells.size() << " match"
                    << (all_passed(v.rep->extras) ? "" : ", represented identities FAIL") << '\n';
      }
      if (v.inner)
        for (const auto& [id, ok] : v.inner->by_identity())
          em.stream() << "  " << (ok ? "pass " : "FAIL ") << id << '\n';
      if (v.transitions) {
        em.stream() << "  transitions: " << v.transitions->cells.size() << " cells";
        auto failures = v.transitions->failures();
        if (failures.empty()) em.stream() << ", all match\n";
        for (const auto& f : failures) em.stream() << "\n    FAIL " << f;
        if (!failures.empty()) em.stream() << '\n';
      }
      if (v.leonard) em.stream() << "  leonard triple: " << to_string(*v.leonard) << '\n';
      break;
    }
  }
}

inline void emit_decomposition(Emitter& em, const Decomposition& dec) {
  switch (em.format()) {
    case OutputFormat::json: em.stream() << decomposition_report(dec).dump() << '\n'; break;
    case OutputFormat::csv:
      em.csv_header("r,d,index,dim");
      for (const auto& m : dec.modules) em.stream() << m.r << ',' << m.d << ',' << m.index << ',' << m.dim() << '\n';
      break;
    case OutputFormat::pretty:
      em.stream() << "D = " << dec.D << ", " << dec.modules.size() << " irreducible modules\n";
      for (const auto& [r, count] : dec.multiplicities)
        em.stream() << "  endpoint " << r << ": " << count << " module(s) of dimension " << (dec.D - 2 * r + 1) << '\n';
      break;
  }
}

inline ContextOptions options_for(const RunConfig& cfg) {
  ContextOptions o;
  o.d_limit = cfg.d_limit;
  o.distances = false;
  o.primitive = o.dual = o.imaginary = false;
  if (cfg.command == "build") {
    if (cfg.op == "distance") o.distances = true;
    if (cfg.op == "E") o.primitive = true;
    if (cfg.op == "Estar") o.dual = true;
    if (cfg.op == "Eeps") o.imaginary = true;
    return o;
  }
  if (cfg.command == "verify" && (cfg.suite == "commutators" || cfg.suite == "conjugation")) return o;
  o.primitive = o.dual = o.imaginary = true;
  if (cfg.command == "verify" && (cfg.suite == "idempotents" || cfg.suite == "all")) o.distances = true;
  return o;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"commutators", "idempotents", "conjugation", "rep-matrices",
                                                 "inner-products", "transitions", "all"};
  return names;
}

inline const std::vector<std::string>& op_names() {
  static const std::vector<std::string> names = {"adjacency", "dual", "imaginary", "P", "Pinv",
                                                 "distance",  "E",    "Estar",     "Eeps"};
  return names;
}

// Runs the module-level suites over the selected modules and streams one
// record per module, in decomposition order.
inline bool run_module_suites(Emitter& em, std::ostream& err, const CubeContext& ctx,
                              const std::vector<const IrreducibleModule*>& modules, const ModuleSuites& suites,
                              const std::optional<Fault>& fault, bool parallel) {
  auto work = [&](const IrreducibleModule* m) {
    if (fault && fault->target == "phi") {
      PhiMatrix phi(static_cast<int>(m->d));
      if (fault->a <= m->d && fault->b <= m->d)
        perturb(phi.at(static_cast<int>(fault->a), static_cast<int>(fault->b)));
      return verify_module(ctx, *m, suites, &phi);
    }
    return verify_module(ctx, *m, suites);
  };
  bool ok = true;
  const std::size_t total = modules.size();
  if (parallel) {
    std::vector<std::future<ModuleVerification>> futures;
    for (const auto* m : modules) futures.push_back(std::async(std::launch::async, work, m));
    for (std::size_t k = 0; k < total; ++k) {
      ModuleVerification v = futures[k].get();
      err << "[" << (k + 1) << "/" << total << "] module r=" << v.r << " index=" << v.index << '\n';
      ok = ok && v.passed();
      emit_module(em, v);
    }
  } else {
    for (std::size_t k = 0; k < total; ++k) {
      err << "[" << (k + 1) << "/" << total << "] module r=" << modules[k]->r << " index=" << modules[k]->index
          << '\n';
      ModuleVerification v = work(modules[k]);
      ok = ok && v.passed();
      emit_module(em, v);
      em.stream().flush();
    }
  }
  return ok;
}

inline std::vector<const IrreducibleModule*> select_modules(const Decomposition& dec, const RunConfig& cfg) {
  std::vector<const IrreducibleModule*> out;
  for (const auto& m : dec.modules) {
    if (cfg.endpoint >= 0 && m.r != static_cast<unsigned>(cfg.endpoint)) continue;
    if (cfg.index >= 0 && m.index != static_cast<std::size_t>(cfg.index)) continue;
    out.push_back(&m);
  }
  if (out.empty()) throw UsageError("no module matches the requested endpoint/index");
  return out;
}

inline int cmd_build(const RunConfig& cfg, Emitter& em) {
  CubeContext ctx = build_context(cfg.D, options_for(cfg));
  auto indexed = [&](const std::vector<ExactMatrix>& family) -> const ExactMatrix& {
    if (cfg.index < 0 || static_cast<unsigned>(cfg.index) > cfg.D)
      throw UsageError("--index must lie in 0.." + std::to_string(cfg.D) + " for --op " + cfg.op);
    return family[static_cast<std::size_t>(cfg.index)];
  };
  if (cfg.op == "adjacency") emit_matrix(em, ctx.A);
  else if (cfg.op == "dual") emit_matrix(em, ctx.Astar);
  else if (cfg.op == "imaginary") emit_matrix(em, ctx.Aeps);
  else if (cfg.op == "P") emit_matrix(em, ctx.P);
  else if (cfg.op == "Pinv") emit_matrix(em, ctx.P_inv);
  else if (cfg.op == "distance") emit_matrix(em, indexed(ctx.dist_matrices));
  else if (cfg.op == "E") emit_matrix(em, indexed(ctx.E));
  else if (cfg.op == "Estar") emit_matrix(em, indexed(ctx.Estar));
  else if (cfg.op == "Eeps") emit_matrix(em, indexed(ctx.Eeps));
  return k_exit_ok;
}

inline int cmd_verify(const RunConfig& cfg, Emitter& em, std::ostream& err) {
  const auto fault = parse_fault(cfg.inject_fault);
  CubeContext ctx = build_context(cfg.D, options_for(cfg));
  if (fault && fault->target == "aeps") {
    if (fault->a >= ctx.size || fault->b >= ctx.size) throw UsageError("fault position outside the matrix");
    perturb(ctx.Aeps(fault->a, fault->b));
  }
  const bool all = cfg.suite == "all";
  bool ok = true;
  auto run = [&](const std::string& suite, const std::vector<IdentityCheck>& checks) {
    for (const auto& c : checks) {
      ok = ok && c.passed;
      emit_check(em, suite, c);
    }
    em.stream().flush();
  };
  if (all || cfg.suite == "commutators") {
    err << "suite commutators\n";
    run("commutators", verify_commutators(ctx));
  }
  if (all || cfg.suite == "conjugation") {
    err << "suite conjugation\n";
    run("conjugation", verify_conjugation(ctx));
  }
  if (all || cfg.suite == "idempotents") {
    err << "suite idempotents\n";
    run("idempotents", verify_idempotents(ctx));
    run("idempotents", verify_slice_structure(ctx));
  }
  ModuleSuites suites{all || cfg.suite == "rep-matrices", all || cfg.suite == "inner-products",
                      all || cfg.suite == "transitions", all};
  if (suites.rep || suites.inner || suites.transitions) {
    err << "decomposing\n";
    Decomposition dec = decompose(ctx);
    std::vector<const IrreducibleModule*> modules;
    for (const auto& m : dec.modules) modules.push_back(&m);
    ok = run_module_suites(em, err, ctx, modules, suites, fault, cfg.parallel) && ok;
  }
  if (em.format() == OutputFormat::json) em.stream() << nlohmann::json{{"summary", {{"passed", ok}}}}.dump() << '\n';
  else if (em.format() == OutputFormat::pretty) em.stream() << (ok ? "ALL PASSED" : "FAILURES PRESENT") << '\n';
  return ok ? k_exit_ok : k_exit_verification;
}

inline void write_seed_files(const Decomposition& dec, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
  for (const auto& m : dec.modules) {
    const auto path = std::filesystem::path(dir) /
                      ("seed_r" + std::to_string(m.r) + "_" + std::to_string(m.index) + ".json");
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path.string());
    nlohmann::json j{{"D", dec.D},
                     {"r", m.r},
                     {"d", m.d},
                     {"index", m.index},
                     {"u", vector_to_json(m.u)},
                     {"u_star", vector_to_json(m.u_star)},
                     {"u_eps", vector_to_json(m.u_eps)}};
    f << j.dump() << '\n';
    if (!f) throw IoError("cannot write " + path.string());
  }
}

inline int cmd_decompose(const RunConfig& cfg, Emitter& em) {
  CubeContext ctx = build_context(cfg.D, options_for(cfg));
  Decomposition dec = decompose(ctx);
  if (!cfg.emit_seeds.empty()) write_seed_files(dec, cfg.emit_seeds);
  emit_decomposition(em, dec);
  return k_exit_ok;
}

inline int cmd_module_report(const RunConfig& cfg, Emitter& em, std::ostream& err, bool leonard_only) {
  CubeContext ctx = build_context(cfg.D, options_for(cfg));
  Decomposition dec = decompose(ctx);
  auto modules = select_modules(dec, cfg);
  ModuleSuites suites = leonard_only ? ModuleSuites{false, false, false, true} : ModuleSuites{};
  bool ok = run_module_suites(em, err, ctx, modules, suites, std::nullopt, cfg.parallel);
  return ok ? k_exit_ok : k_exit_verification;
}

}  // namespace cli_detail

/// Entry point shared by the executable and the tests. args excludes the
/// program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  RunConfig cfg;
  CLI::App app{"Exact verification toolkit for the hypercube Leonard triple", "cubetriple"};
  app.require_subcommand(1);
  std::string format = "json";
  int d_arg = 0;
  int d_limit_arg = -1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--d", d_arg, "Dimension D of the cube")->required();
    sub->add_option("--output", cfg.output_path, "Write the report to this file instead of stdout");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "pretty"}));
    sub->add_option("--d-limit", d_limit_arg, "Largest accepted D (default 10, or $CUBETRIPLE_D_LIMIT)");
    sub->add_flag("--parallel", cfg.parallel, "Verify modules concurrently");
  };

  auto* build = app.add_subcommand("build", "Write an operator in the sparse matrix dump format");
  add_common(build);
  build->add_option("--op", cfg.op, "Operator to write")->check(CLI::IsMember(op_names()));
  build->add_option("--index", cfg.index, "Index i for distance and idempotent operators");

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  add_common(verify);
  verify->add_option("--suite", cfg.suite, "Suite to run")->check(CLI::IsMember(suite_names()));
  verify->add_option("--inject-fault", cfg.inject_fault)->group("");

  auto* decomp = app.add_subcommand("decompose", "Decompose the standard module into irreducible modules");
  add_common(decomp);
  decomp->add_option("--emit-seeds", cfg.emit_seeds, "Directory receiving one seed file per module");

  auto* report = app.add_subcommand("module-report", "Full verification report for irreducible modules");
  add_common(report);
  report->add_option("--r", cfg.endpoint, "Only modules with this endpoint");
  report->add_option("--index", cfg.index, "Only modules with this index within their endpoint");

  auto* leonard = app.add_subcommand("leonard-check", "Run the Leonard triple recognizer on each module");
  add_common(leonard);
  leonard->add_option("--r", cfg.endpoint, "Only modules with this endpoint");
  leonard->add_option("--index", cfg.index, "Only modules with this index within their endpoint");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return k_exit_ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return k_exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return k_exit_usage;
  }

  std::unique_ptr<std::ofstream> file;
  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.d_limit = d_limit_arg >= 0 ? static_cast<unsigned>(d_limit_arg) : default_d_limit();
    cfg.format = format == "csv" ? OutputFormat::csv : format == "pretty" ? OutputFormat::pretty : OutputFormat::json;
    if (d_arg < 1 || static_cast<unsigned>(d_arg) > cfg.d_limit)
      throw UsageError("D must lie in 1.." + std::to_string(cfg.d_limit) + ", got " + std::to_string(d_arg));
    cfg.D = static_cast<unsigned>(d_arg);
    if (!cfg.output_path.empty()) {
      file = std::make_unique<std::ofstream>(cfg.output_path);
      if (!*file) throw IoError("cannot open " + cfg.output_path);
    }
    Emitter em(file ? *file : out, cfg.format);
    int status = k_exit_ok;
    if (cfg.command == "build") status = cmd_build(cfg, em);
    else if (cfg.command == "verify") status = cmd_verify(cfg, em, err);
    else if (cfg.command == "decompose") status = cmd_decompose(cfg, em);
    else if (cfg.command == "module-report") status = cmd_module_report(cfg, em, err, false);
    else status = cmd_module_report(cfg, em, err, true);
    if (file) {
      file->flush();
      if (!*file) throw IoError("write to " + cfg.output_path + " failed");
    }
    return status;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return k_exit_usage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return k_exit_io;
  } catch (const Error& e) {
    err << to_string(e.code()) << ": " << e.what() << '\n';
    if (e.code() == ErrorCode::out_of_range) return k_exit_usage;
    return k_exit_verification;
  }
}

}  // namespace cubetriple
