// glassseg: stain removal and object segmentation for images taken through glass.
//
//   glassseg run --input scene.pgm --mask stain.pgm [--config cfg.ini] --out dir [--dump-stages]
//   glassseg synth [--spec scene.ini | --width W --height H --objects N --stains M --noise A]
//                  [--seed S] --out dir
//   glassseg metrics --result dir --truth dir
//
// Exit codes: 0 success, 1 I/O or format error, 2 config error, 3 numeric failure.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "glassseg/config.hpp"
#include "glassseg/metrics.hpp"
#include "glassseg/pipeline.hpp"
#include "glassseg/pnm.hpp"
#include "glassseg/scene.hpp"

namespace fs = std::filesystem;
using namespace glassseg;

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config:
      return 2;
    case ErrorKind::numeric:
      return 3;
    default:
      return 1;
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  write_file(path, Bytes(text.begin(), text.end()));
}

std::set<std::uint32_t> read_ids(const fs::path& path) {
  const Bytes bytes = read_file(path);
  std::istringstream in(std::string(bytes.begin(), bytes.end()));
  std::set<std::uint32_t> ids;
  for (std::string tok; in >> tok;) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      ids.insert(static_cast<std::uint32_t>(v));
    } catch (const std::exception&) {
      fail(ErrorKind::format, path.string() + ": bad object id '" + tok + "'");
    }
  }
  return ids;
}

struct RunArgs {
  std::string input;
  std::string mask;
  std::string config;
  std::string out;
  bool dump = false;
};

void cmd_run(const RunArgs& args) {
  PipelineConfig cfg = args.config.empty() ? PipelineConfig{} : load_pipeline_config(args.config);
  if (args.dump) cfg.dump_stages = true;
  if (!args.out.empty()) cfg.output_dir = args.out;
  if (cfg.output_dir.empty()) fail(ErrorKind::config, "no output directory given");
  ensure_dir(cfg.output_dir);

  const AnyImage input = decode_pnm(read_file(args.input));
  const Mask stain = decode_mask(read_file(args.mask));
  const PipelineResult result = run_pipeline(input, stain, cfg);

  const fs::path out = cfg.output_dir;
  write_file(out / "inpainted.pgm", encode_pgm(result.artifacts.inpaint.image));
  write_file(out / "final.pgm", encode_pgm(result.final_image));
  write_file(out / "labels.pgm", encode_label_pgm(result.regions));
  std::string ids;
  for (std::uint32_t id : result.artifacts.objects) ids += (ids.empty() ? "" : " ") + std::to_string(id);
  write_text(out / "objects.txt", ids + "\n");
  const std::string log = format_stage_log(result.log);
  write_text(out / "stage.log", log);
  std::cout << log;
  for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
}

struct SynthArgs {
  std::string spec;
  std::optional<int> width, height, objects, stains;
  std::optional<double> noise;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void cmd_synth(const SynthArgs& args) {
  SceneSpec spec;
  if (!args.spec.empty()) {
    const Bytes bytes = read_file(args.spec);
    spec = parse_scene_spec(std::string(bytes.begin(), bytes.end()));
  } else {
    spec.random_objects = 2;
    spec.random_stains = 6;
  }
  if (args.width) spec.width = *args.width;
  if (args.height) spec.height = *args.height;
  if (args.objects) spec.random_objects = *args.objects;
  if (args.stains) spec.random_stains = *args.stains;
  if (args.noise) spec.noise_amplitude = *args.noise;
  if (args.seed) spec.seed = *args.seed;
  spec.validate();

  const Scene scene = generate_synthetic_scene(spec);
  const fs::path out = args.out;
  ensure_dir(out);
  write_file(out / "image.pgm", encode_pgm(scene.image));
  write_file(out / "clean.pgm", encode_pgm(scene.clean));
  write_file(out / "objects.pgm", encode_mask_pgm(scene.objects));
  write_file(out / "stain.pgm", encode_mask_pgm(scene.stains));
  write_text(out / "scene.ini", serialize_scene_spec(spec));
}

void cmd_metrics(const std::string& result_dir, const std::string& truth_dir) {
  const fs::path r = result_dir;
  const fs::path t = truth_dir;
  const GrayImage inpainted = decode_gray(read_file(r / "inpainted.pgm"));
  const LabelMap labels = decode_label_pgm(read_file(r / "labels.pgm"));
  const std::set<std::uint32_t> ids = read_ids(r / "objects.txt");
  const GrayImage clean = decode_gray(read_file(t / "clean.pgm"));
  const Mask objects = decode_mask(read_file(t / "objects.pgm"));
  const Mask stain = decode_mask(read_file(t / "stain.pgm"));
  const Metrics m = compute_metrics(inpainted, labels, ids, clean, objects, stain);
  std::cout << "mse " << format_double(m.mse) << "\n"
            << "psnr " << format_double(m.psnr) << "\n"
            << "iou " << format_double(m.iou) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stain removal and object segmentation for images taken through glass"};
  app.require_subcommand(1);

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run the full pipeline on one image");
  run_cmd->add_option("--input", run.input, "Input PNM image")->required();
  run_cmd->add_option("--mask", run.mask, "Stain mask PGM, nonzero = stain")->required();
  run_cmd->add_option("--config", run.config, "Pipeline config (INI)");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_flag("--dump-stages", run.dump, "Write NN-stagename.pgm for every stage");

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic stained scene");
  synth_cmd->add_option("--spec", synth.spec, "Scene spec (INI)");
  synth_cmd->add_option("--width", synth.width);
  synth_cmd->add_option("--height", synth.height);
  synth_cmd->add_option("--objects", synth.objects, "Number of random objects");
  synth_cmd->add_option("--stains", synth.stains, "Number of random stains");
  synth_cmd->add_option("--noise", synth.noise, "Per-pixel noise amplitude");
  synth_cmd->add_option("--seed", synth.seed);
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();

  std::string result_dir;
  std::string truth_dir;
  CLI::App* metrics_cmd = app.add_subcommand("metrics", "Score a run against synthetic truth");
  metrics_cmd->add_option("--result", result_dir, "Output directory of a run")->required();
  metrics_cmd->add_option("--truth", truth_dir, "Output directory of synth")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) cmd_run(run);
    if (*synth_cmd) cmd_synth(synth);
    if (*metrics_cmd) cmd_metrics(result_dir, truth_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
