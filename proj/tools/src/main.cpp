#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "iontopo/cli/run.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw iontopo::IoError("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phonon band topology of trapped-ion honeycomb lattices"};
  std::string config_path;
  std::string output_dir;
  int threads = 1;
  bool print_config = false;
  app.add_option("-c,--config", config_path, "JSON run configuration ('-' reads stdin)")->required();
  app.add_option("-o,--output-dir", output_dir, "Output directory (overrides IONTOPO_OUTPUT_DIR and the config)");
  app.add_option("-j,--threads", threads, "Worker threads")->check(CLI::Range(1, 1024));
  app.add_flag("--print-config", print_config, "Print the effective configuration and exit");
  CLI11_PARSE(app, argc, argv);

  try {
    const std::string text = config_path == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {})
                                                 : read_file(config_path);
    const iontopo::cli::RunConfig config = iontopo::cli::parse_config(text);
    if (print_config) {
      std::cout << iontopo::cli::effective_config(config) << '\n';
      return 0;
    }
    std::string dir = config.output.directory;
    if (const char* env = std::getenv("IONTOPO_OUTPUT_DIR"); env && *env) dir = env;
    if (!output_dir.empty()) dir = output_dir;
    iontopo::set_thread_count(threads);
    const auto report = iontopo::cli::run(config, dir);
    std::printf("%s: %zu files in %s, outputs %s, %.2f s\n", iontopo::cli::to_string(config.command),
                report.files.size(), report.directory.c_str(), report.outputs_digest.c_str(), report.wall_time_s);
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return iontopo::cli::exit_code_for(e);
  }
}
