// Regenerates the synthetic fixture directory.
#include <iostream>

#include <CLI11.hpp>

#include "streetlex/synth.hpp"

int main(int argc, char** argv) {
  CLI::App app{"write the synthetic fixture corpus"};
  std::string dir = "fixtures";
  streetlex::SynthOptions options;
  app.add_option("dir", dir, "output directory");
  app.add_option("--seed", options.seed);
  CLI11_PARSE(app, argc, argv);
  try {
    streetlex::write_fixtures(dir, options);
  } catch (const std::exception& e) {
    std::cerr << "make_fixtures: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
