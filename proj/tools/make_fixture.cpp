// Copyright 2026 The wavegenre Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>

#include "CLI11.hpp"
#include "wavegenre/errors.hpp"
#include "wavegenre/io/fixture.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write a synthetic <genre>/<track>.wav corpus"};
  std::string dir;
  wavegenre::io::FixtureSpec spec;
  double seconds = 30.0;
  app.add_option("dir", dir, "Output directory")->required();
  app.add_option("--genres", spec.genres, "Number of genres (1-10)");
  app.add_option("--tracks", spec.tracks_per_genre, "Tracks per genre");
  app.add_option("--seed", spec.seed, "Seed");
  app.add_option("--seconds", seconds, "Clip duration");
  CLI11_PARSE(app, argc, argv);
  if (!(seconds > 0)) {
    std::cerr << "usage error: --seconds must be positive\n";
    return 64;
  }
  spec.length = static_cast<std::size_t>(seconds * 22050.0 + 0.5);
  try {
    wavegenre::io::write_fixture(dir, spec);
  } catch (const wavegenre::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cout << "wrote " << spec.genres * spec.tracks_per_genre << " clips to " << dir << "\n";
  return 0;
}
