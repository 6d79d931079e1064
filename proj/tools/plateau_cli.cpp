#include <cstdio>
#include <exception>
#include <iostream>

#include "plateau/app.hpp"

int main(int argc, char** argv) {
  try {
    auto config = plateau::parse_command_line(argc, argv);
    if (!config) return 0;
    if (config->betas.empty()) {
      std::cerr << "warning: empty beta list; writing a header-only results.csv\n";
    }
    auto report = plateau::run_sweep(*config, &std::cout);
    std::cout << "\n" << plateau::sweep_csv(report);
    std::cout << "wrote " << (config->out_dir / "results.csv").string() << "\n";
    return 0;
  } catch (const plateau::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
