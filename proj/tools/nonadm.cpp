// nonadm: verification driver.
//
//   nonadm verify-combinatorics [--config F] [--out DIR] [--seed N] [--json]
//   nonadm verify-finite ...
//   nonadm certify ...
//   nonadm audit ...
//   nonadm replay CERT ...

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "nonadm/error.hpp"
#include "nonadm/report.hpp"

namespace fs = std::filesystem;
using namespace nonadm;

namespace {

void write(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidConfig, "cannot write '" + path.string() + "'");
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Executable checks for an infinite nonadmissible diagram of GL_2"};
  app.require_subcommand(1);

  std::string config_path, out_dir, cert_path;
  std::optional<std::uint64_t> seed;
  bool as_json = false;

  const char* names[] = {"verify-combinatorics", "verify-finite", "certify", "audit", "replay"};
  const char* help[] = {"delta orbits, registry, involution, loop-shift and twist laws",
                        "finite GL_2(F_q) sweep for s(chi)", "irreducibility certificate for the diagram",
                        "growth of invariant dimensions", "independent replay of a certificate"};
  std::map<std::string, CLI::App*> subs;
  for (int i = 0; i < 5; ++i) {
    auto* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", config_path, "key=value configuration file");
    sub->add_option("--out", out_dir, "directory for report.json, report.txt, timings.json and artifacts");
    sub->add_option("--seed", seed, "overrides the config seed");
    sub->add_flag("--json", as_json, "print the canonical JSON report instead of text");
    subs[names[i]] = sub;
  }
  subs["replay"]->add_option("certificate", cert_path, "certificate.json")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    cli::RunConfig config = config_path.empty() ? cli::default_config() : cli::load_config(config_path);
    if (seed) config.seed = *seed;

    cli::CommandResult result;
    if (subs["verify-combinatorics"]->parsed()) {
      result = cli::cmd_verify_combinatorics(config);
    } else if (subs["verify-finite"]->parsed()) {
      result = cli::cmd_verify_finite(config);
    } else if (subs["certify"]->parsed()) {
      result = cli::cmd_certify(config);
    } else if (subs["audit"]->parsed()) {
      result = cli::cmd_audit(config);
    } else {
      std::ifstream in(cert_path);
      nlohmann::json cert;
      try {
        cert = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: certificate does not parse: " << e.what() << "\n";
        return cli::kCertificateFailure;
      }
      result = cli::cmd_replay(config, cert);
    }

    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      const fs::path dir(out_dir);
      write(dir / "report.json", cli::canonical_dump(result.report));
      write(dir / "report.txt", result.text);
      write(dir / "timings.json", result.timings.dump(2) + "\n");
      for (const auto& [name, doc] : result.artifacts) write(dir / name, cli::canonical_dump(doc));
    }
    std::cout << (as_json ? cli::canonical_dump(result.report) : result.text);
    return result.exit_code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kValidation;
  }
}
