// Command-line front end: check a file of definitions, normalize an
// expression in its scope, or run the built-in validation suites.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "chit/pretty.hpp"
#include "chit/selftest.hpp"
#include "chit/typecheck.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRejected = 1;
constexpr int kExitUsage = 2;

bool slurp(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

std::string render_parse_error(const chit::ParseError& e, const std::string& file) {
  return file + ":" + std::to_string(e.pos.line) + ":" + std::to_string(e.pos.col) +
         ": ParseError: " + e.msg;
}

int load_module(const std::string& path, chit::GlobalEnv& globals) {
  std::string src;
  if (!slurp(path, src)) {
    std::fprintf(stderr, "error: cannot read '%s'\n", path.c_str());
    return kExitUsage;
  }
  try {
    chit::check_module(chit::parse_module(src), globals);
  } catch (const chit::ParseError& e) {
    std::fprintf(stderr, "%s\n", render_parse_error(e, path).c_str());
    return kExitRejected;
  } catch (const chit::TypeError& e) {
    std::fprintf(stderr, "%s\n", chit::render_error(e, path).c_str());
    return kExitRejected;
  } catch (const chit::EvalError& e) {
    std::fprintf(stderr, "%s: EvalError: %s\n", path.c_str(), e.msg.c_str());
    return kExitRejected;
  }
  return kExitOk;
}

int cmd_check(const std::string& path) {
  chit::GlobalEnv globals;
  int rc = load_module(path, globals);
  if (rc != kExitOk) return rc;
  std::printf("%s: ok (%zu definitions)\n", path.c_str(), globals.all().size());
  return kExitOk;
}

int cmd_normalize(const std::string& path, const std::string& expr) {
  chit::GlobalEnv globals;
  int rc = load_module(path, globals);
  if (rc != kExitOk) return rc;

  std::set<std::string> names;
  for (const auto& [n, d] : globals.all()) names.insert(n);

  try {
    std::vector<std::pair<std::string, chit::DimName>> dims;
    chit::TermPtr t = chit::parse_expr(expr, names, dims);
    chit::Ctx ctx;
    ctx.env = chit::Env(&globals);
    for (const auto& [s, d] : dims) ctx = ctx.bind_dim(d);
    auto [te, tyv] = chit::infer(ctx, t);
    chit::TermPtr n = chit::readback(tyv, chit::eval(ctx.env, te));
    std::printf("%s\n", chit::pretty(n).c_str());
    std::printf("  : %s\n", chit::pretty(chit::readback_type(tyv)).c_str());
  } catch (const chit::ParseError& e) {
    std::fprintf(stderr, "%s\n", render_parse_error(e, "<expr>").c_str());
    return kExitRejected;
  } catch (const chit::TypeError& e) {
    std::fprintf(stderr, "%s\n", chit::render_error(e, "<expr>").c_str());
    return kExitRejected;
  } catch (const chit::EvalError& e) {
    std::fprintf(stderr, "<expr>: EvalError: %s\n", e.msg.c_str());
    return kExitRejected;
  }
  return kExitOk;
}

int cmd_selftest(const chit::SelftestOptions& opts) {
  auto results = chit::run_selftest(opts);
  bool all = true;
  for (const auto& r : results) {
    std::printf("%-24s %s  (%.0f ms)\n    %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL", r.ms,
                r.detail.c_str());
    all = all && r.pass;
  }
  std::printf("%s\n", all ? "selftest: all suites passed" : "selftest: FAILED");
  return all ? kExitOk : kExitRejected;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cubical proof-checker kernel"};
  app.require_subcommand(1);

  std::string check_file;
  CLI::App* check = app.add_subcommand("check", "typecheck a file of definitions");
  check->add_option("file", check_file, "path to a .chit file")->required();

  std::string norm_file, norm_expr;
  CLI::App* norm = app.add_subcommand("normalize", "normalize an expression in a file's scope");
  norm->add_option("file", norm_file, "path to a .chit file")->required();
  norm->add_option("-e,--expr", norm_expr, "expression to normalize")->required();

  chit::SelftestOptions opts;
  if (const char* seed = std::getenv("KERNEL_SEED"))
    opts.seed = std::strtoull(seed, nullptr, 10);
  CLI::App* self = app.add_subcommand("selftest", "run the built-in validation suites");
  self->add_option("--probe-depth", opts.probe_depth,
                   "extra context dimensions for semantic probing");
  self->add_flag("--generic-trans", opts.generic_trans,
                 "use schema-generic constructor transport throughout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (check->parsed()) return cmd_check(check_file);
  if (norm->parsed()) return cmd_normalize(norm_file, norm_expr);
  return cmd_selftest(opts);
}
