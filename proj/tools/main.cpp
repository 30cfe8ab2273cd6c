#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "gpbog/errors.hpp"

namespace {

constexpr int kUsageError = 64;

void emit(const gpbog::cli::RunConfig& cfg, const gpbog::cli::Output& out) {
  using gpbog::cli::Format;
  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out, std::ios::binary);
    if (!file) throw gpbog::ValidationError("cannot open output file " + cfg.out);
  }
  std::ostream& os = cfg.out.empty() ? std::cout : file;
  if (cfg.format.value_or(out.preferred) == Format::json) {
    os << out.doc.dump(2) << '\n';
  } else {
    gpbog::CsvWriter w(os, out.header);
    for (const auto& r : out.rows) w.row(r);
  }
  os.flush();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gpbog::cli;
  CLI::App app{"gpbog: scattering, GP, Bogoliubov and many-body checks"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string config_path, format;
  std::uint64_t seed = 42;
  for (const auto& [name, entry] : commands()) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--seed", seed, "random seed")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();
    sub->add_option("--out", cfg.out, "output file (default: standard output)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("-v,--verbose", cfg.verbose, "progress on standard error");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg.seed = seed;
  if (format == "csv") cfg.format = Format::csv;
  if (format == "json") cfg.format = Format::json;
  try {
    if (!config_path.empty()) cfg.body = load_config(config_path);
    if (cfg.body.contains("seed") && app.get_subcommands().front()->count("--seed") == 0)
      cfg.seed = cfg.body.at("seed").get<std::uint64_t>();
    emit(cfg, commands().at(cfg.subcommand).second(cfg));
  } catch (const gpbog::Error& e) {
    std::cerr << "gpbog " << cfg.subcommand << ": " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "gpbog " << cfg.subcommand << ": " << e.what() << '\n';
    return 1;
  }
  return 0;
}
