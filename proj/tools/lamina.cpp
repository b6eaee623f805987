#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "lamina/cli.hpp"

namespace {

void common_options(CLI::App& app, lamina::RunConfig& c, std::string& out) {
  app.add_option("--map", c.maps, "Train-track map file (repeatable)");
  app.add_option("--horizon", c.horizon, "Leaf language horizon H")->capture_default_str();
  app.add_option("--delta", c.delta, "Hyperbolicity constant")->capture_default_str();
  app.add_option("--out", out, "Write the JSON document here instead of stdout");
  app.add_option("--cache-dir", c.cache_dir, "Leaf language cache directory")
      ->envname("LAMINA_CACHE_DIR")
      ->capture_default_str();
  app.add_option("--budget-memory", c.budget_memory, "Letters held by the factor index")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lamina: bounded-depth classification of rays against attracting laminations"};
  app.require_subcommand(1);
  lamina::RunConfig c;
  std::string out;
  std::size_t depth = 0;
  std::size_t rec_window = 0;
  std::size_t rec_k = 0;
  std::size_t radius = 0;

  auto* build = app.add_subcommand("build-language", "Build (or load from cache) the leaf language");
  common_options(*build, c, out);

  auto* classify = app.add_subcommand("classify", "Run the classifiers on a ray prefix");
  common_options(*classify, c, out);
  classify->add_option("--ray", c.ray, "Ray script, inline ('periodic: a b') or a file")->required();
  auto* depth_opt = classify->add_option("--depth", depth, "Prefix length examined");
  classify->add_option("--min-occurrences", c.min_occurrences, "Conical occurrences N")->capture_default_str();
  auto* rw_opt = classify->add_option("--recurrence-window", rec_window, "Recurrence window (default depth/4)");
  auto* rk_opt = classify->add_option("--recurrence-k", rec_k, "Recurrence factor length (default 50*delta)");
  classify->add_option("--target", c.target, "w-infinity length for winf rays")->capture_default_str();
  classify->add_option("--budget-search", c.budget_search, "Leaf prefix searched when building w-infinity")
      ->capture_default_str();

  auto* winf = app.add_subcommand("winf", "Build and certify the non-conical ray w-infinity");
  common_options(*winf, c, out);
  winf->add_option("--ray", c.ray, "winf ray script (default: first map, target from --target)");
  winf->add_option("--target", c.target, "Minimum length of the certified prefix")->capture_default_str();
  winf->add_option("--budget-search", c.budget_search, "Leaf prefix searched")->capture_default_str();

  auto* cayley = app.add_subcommand("cayley", "Cayley-graph balls and delta estimates for a presentation");
  cayley->add_option("--presentation", c.presentation, "Presentation file")->required();
  auto* radius_opt = cayley->add_option("--radius", radius, "Single radius");
  auto* radii_opt = cayley->add_option("--radii", c.radii, "Radii (default 1 2 3 4)")->excludes(radius_opt);
  (void)radii_opt;
  cayley->add_option("--seed", c.seed, "Seed for sampled delta estimates")->capture_default_str();
  cayley->add_option("--budget-vertices", c.budget_vertices, "Vertex budget per ball")->capture_default_str();
  cayley->add_option("--out", out, "Write the JSON document here instead of stdout");

  auto* replay = app.add_subcommand("replay-certificate", "Re-check a verdict or w-infinity document");
  replay->add_option("--certificate", c.certificate, "Document to replay")->required();
  replay->add_option("--map", c.maps, "Override the recorded map paths");
  replay->add_option("--cache-dir", c.cache_dir, "Leaf language cache directory")->envname("LAMINA_CACHE_DIR");
  replay->add_option("--out", out, "Write the replay report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  if (!out.empty()) c.out = out;
  if (*depth_opt) c.depth = depth;
  if (*rw_opt) c.recurrence_window = rec_window;
  if (*rk_opt) c.recurrence_k = rec_k;
  if (*radius_opt) c.radii = {radius};

  if (*build) return lamina::cmd_build_language(c, std::cout, std::cerr);
  if (*classify) return lamina::cmd_classify(c, std::cout, std::cerr);
  if (*winf) return lamina::cmd_winf(c, std::cout, std::cerr);
  if (*cayley) return lamina::cmd_cayley(c, std::cout, std::cerr);
  return lamina::cmd_replay_certificate(c, std::cout, std::cerr);
}
