#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "nilcover/error.hpp"

namespace {

using nlohmann::json;
using namespace nilcover;

constexpr int schema_version = 1;

enum Exit { ok = 0, usage = 1, parse = 2, precondition = 3, cap = 4, internal = 5, check_failed = 6 };

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::parse:
    case ErrorKind::malformed_field:
      return parse;
    case ErrorKind::enumeration_too_large:
    case ErrorKind::budget_exceeded:
      return cap;
    case ErrorKind::internal_inconsistency:
      return internal;
    default:
      return precondition;
  }
}

void write_report(const std::string& path, const json& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::parse, "cannot write report to " + path);
  out << report.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Derivations, amalgams and covers of 2-nilpotent graded Lie algebras over F_p"};
  app.require_subcommand(1);
  app.fallthrough();
  cli::Options opts;
  std::string report_path;
  app.add_option("--p", opts.p, "field size used when a file omits p")->check(CLI::IsMember({3u, 5u, 7u, 11u}));
  app.add_option("--cap-enum", opts.cap_enum, "largest quotient dimension enumerated exhaustively");
  app.add_option("--cap-ambient", opts.cap_ambient, "workspace dimension budget");
  app.add_option("--seed", opts.seed, "sampling seed");
  app.add_option("--report", report_path, "write the full JSON report here");

  std::string input;
  std::optional<std::string> workspace;
  auto* check = app.add_subcommand("check", "class-K verdict and predimension table for an algebra file");
  check->add_option("algebra", input, "algebra file")->required();
  auto* extend = app.add_subcommand("extend", "extend a partial derivation to the target of a problem file");
  extend->add_option("problem", input, "problem file")->required();
  extend->add_option("--workspace", workspace, "replay script for the starting workspace");
  auto* cover = app.add_subcommand("cover", "run automorphism, orbit and stabilizer experiments");
  cover->add_option("experiments", input, "experiment file")->required();
  cover->add_option("--workspace", workspace, "replay script replacing the experiment's algebra");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : usage;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  json report{{"schema_version", schema_version},
              {"command", json{{"name", name}, {"input", input}}},
              {"options", json{{"p", opts.p}, {"cap_enum", opts.cap_enum}, {"cap_ambient", opts.cap_ambient}}},
              {"seed", opts.seed}};
  if (workspace) report["command"]["workspace"] = *workspace;

  const auto start = std::chrono::steady_clock::now();
  int rc = ok;
  try {
    cli::Outcome out = name == "check"    ? cli::run_check(input, opts)
                       : name == "extend" ? cli::run_extend(input, workspace, opts)
                                          : cli::run_cover(input, workspace, opts);
    report["inputs"] = out.result["inputs"];
    out.result.erase("inputs");
    report["result"] = std::move(out.result);
    report["ok"] = out.ok;
    for (const auto& line : out.summary) std::cout << line << "\n";
    rc = out.ok ? ok : check_failed;
  } catch (const Error& e) {
    report["error"] = json{{"kind", to_string(e.kind())}, {"message", e.what()}};
    report["ok"] = false;
    std::cerr << "error: " << e.what() << "\n";
    rc = exit_code(e.kind());
  } catch (const json::exception& e) {
    report["error"] = json{{"kind", "parse"}, {"message", e.what()}};
    report["ok"] = false;
    std::cerr << "error: " << e.what() << "\n";
    rc = parse;
  } catch (const std::exception& e) {
    report["error"] = json{{"kind", "internal-inconsistency"}, {"message", e.what()}};
    report["ok"] = false;
    std::cerr << "error: " << e.what() << "\n";
    rc = internal;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << name << ": " << (rc == ok ? "ok" : "failed") << " in " << secs << " s\n";

  if (!report_path.empty()) {
    try {
      write_report(report_path, report);
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return parse;
    }
  }
  return rc;
}
