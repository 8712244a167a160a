// Regenerates tests/fixtures from the scene builders:
//   make_fixtures <fixtures-dir>

#include "fixture_scenes.hpp"

#include "holme/io.hpp"

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace holme;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <dir>\n";
    return 1;
  }
  const fs::path dir(argv[1]);
  fs::create_directories(dir / "batch" / "sketch");
  fs::create_directories(dir / "batch" / "truth");

  const Scene truth = testing::coffee_shop();
  write_file(dir / "coffee_shop.json", save_scene(truth));
  write_file(dir / "coffee_shop_sketch.json", save_scene(testing::distorted(truth, 0.15, 1.0, 7)));

  Scene sparse = testing::distorted(truth, 0.25, 1.1, 11);
  sparse.remove("s-stool-3");
  sparse.remove("s-chair-6");
  sparse.insert(testing::furniture("s-plant", "plant", 4.2, -4.2, 0.4, 1.2, 0.4));

  const std::pair<const char*, Scene> batch[] = {
      {"close", testing::distorted(truth, 0.05, 1.0, 3)},
      {"stretched", testing::distorted(truth, 0.1, 1.3, 5)},
      {"sparse", sparse},
  };
  for (const auto& [name, sketch] : batch) {
    write_file(dir / "batch" / "sketch" / (std::string(name) + ".json"), save_scene(sketch));
    write_file(dir / "batch" / "truth" / (std::string(name) + ".json"), save_scene(truth));
  }

  write_file(dir / "chair_sketch.json", save_sketch(testing::chair_sketch()));
  write_file(dir / "planar_sketch.json", save_sketch(testing::planar_sketch()));
  write_file(dir / "one_stroke.json", save_sketch(testing::one_stroke_sketch()));
  Sketch empty;
  empty.workspace = testing::one_stroke_sketch().workspace;
  write_file(dir / "empty_sketch.json", save_sketch(empty));

  write_file(dir / "ratings.csv",
             "rater_id,condition,SL,OP,SR,OD\n"
             "r1,vr_sketch,6,5,6,5\n"
             "r2,vr_sketch,7,6,5,6\n"
             "r3,vr_sketch,5,6,6,4\n"
             "r4,vr_sketch,6,7,5,5\n"
             "r1,desktop,4,4,5,3\n"
             "r2,desktop,5,3,4,4\n"
             "r3,desktop,3,4,4,3\n"
             "r4,desktop,4,5,3,4\n");
  return 0;
}
