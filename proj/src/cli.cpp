// Copyright 2026 The cvxfit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvxfit/cli.h"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <memory>

#include <CLI11.hpp>

#include "cvxfit/config.h"
#include "cvxfit/cvx_io.h"
#include "cvxfit/error.h"
#include "cvxfit/image_io.h"
#include "cvxfit/mesh_io.h"
#include "cvxfit/metrics.h"
#include "cvxfit/render.h"
#include "cvxfit/views.h"

namespace cvxfit {
namespace {

constexpr int kLogEvery = 100;

std::string FormatReal(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<ConvexPolyhedron> LoadConvexes(const std::string& path,
                                           std::ostream& err) {
  std::vector<CvxWarning> warnings;
  CvxDocument doc;
  try {
    doc = ParseCvx(ReadFile(path), &warnings);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
  for (const CvxWarning& w : warnings) {
    err << "warning: " << path << ":" << w.line << ": " << w.message << "\n";
  }
  return ConvexesFromDocument(doc);
}

void ParseResolution(const std::string& text, int* width, int* height) {
  const size_t x = text.find('x');
  if (x == std::string::npos) {
    throw CLI::ValidationError("--res", "expected WxH");
  }
  const std::string w = text.substr(0, x);
  const std::string h = text.substr(x + 1);
  const auto [pw, ew] = std::from_chars(w.data(), w.data() + w.size(), *width);
  const auto [ph, eh] = std::from_chars(h.data(), h.data() + h.size(), *height);
  if (ew != std::errc() || eh != std::errc() || pw != w.data() + w.size() ||
      ph != h.data() + h.size() || *width < 1 || *height < 1) {
    throw CLI::ValidationError("--res", "expected WxH");
  }
}

struct GenViewsArgs {
  std::string mesh;
  int views = kDefaultViewCount;
  std::string res = "256x256";
  uint64_t seed = 0;
  std::string out = "views";
};

int GenViews(const GenViewsArgs& args, std::ostream& out, std::ostream& err) {
  int width = 0, height = 0;
  ParseResolution(args.res, &width, &height);
  const std::vector<Mesh> meshes = LoadMeshes(args.mesh, err);
  const std::vector<RenderTarget> views =
      GenerateViews(meshes, args.views, width, height, args.seed);
  WriteViews(args.out, views);
  out << "wrote " << views.size() << " views to " << args.out << "\n";
  return kExitOk;
}

struct FitArgs {
  std::string targets;
  int convexes = 0;
  int planes = 0;
  int steps = -1;
  uint64_t seed = 0;
  std::string config;
  std::string out = "scene.cvx";
  bool quiet = false;
  CLI::Option* seed_option = nullptr;
};

int FitCommand(const FitArgs& args, std::ostream& out) {
  FitConfig config;
  if (!args.config.empty()) ApplyConfig(ReadFile(args.config), config);
  if (args.convexes > 0) config.convexes = args.convexes;
  if (args.planes > 0) config.planes = args.planes;
  if (args.steps >= 0) config.total_steps = args.steps;
  if (args.seed_option->count() > 0) config.seed = args.seed;
  if (config.convexes < 1 || config.planes < 4) {
    throw Error(ErrorCode::kInvalidConfig,
                "need at least 1 convex and 4 planes");
  }
  const FitOptions options = config.Resolved();
  options.schedule.Validate();

  const std::vector<RenderTarget> targets = ReadViews(args.targets);
  InitOptions init;
  init.size_fraction = config.initial_size;
  Scene scene = InitScene(config.convexes, config.planes, config.seed,
                          RegionFromViews(targets), init);

  FitCallbacks callbacks;
  if (!args.quiet) {
    callbacks.on_step = [&out, total = config.total_steps](int step,
                                                           double loss) {
      if (step % kLogEvery == 0 || step + 1 == total) {
        out << "step " << step << " loss " << FormatReal(loss) << "\n";
      }
    };
    callbacks.on_event = [&out](int step, const std::string& message) {
      out << "step " << step << " " << message << "\n";
    };
  }
  const FitResult result = Fit(std::move(scene), targets, options, callbacks);
  WriteFile(args.out, WriteCvx(DocumentFromScene(result.scene)));
  out << "wrote " << result.scene.convexes.size() << " convexes to "
      << args.out << "\n";
  return kExitOk;
}

struct RenderArgs {
  std::string scene;
  std::string manifest;
  bool soft = false;
  double sigma = 1.0;
  std::string out = "renders";
};

int RenderCommand(const RenderArgs& args, std::ostream& out,
                  std::ostream& err) {
  std::vector<Mesh> meshes;
  for (const ConvexPolyhedron& c : LoadConvexes(args.scene, err)) {
    meshes.push_back(MeshConvex(c));
  }
  const std::vector<ManifestEntry> entries =
      ParseManifest(ReadFile(args.manifest));
  std::error_code ec;
  std::filesystem::create_directories(args.out, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create '" + args.out + "'");
  for (size_t i = 0; i < entries.size(); ++i) {
    const Camera& cam = entries[i].camera;
    const Image image = args.soft ? RasterSoft(meshes, cam, {args.sigma})
                                  : RasterHard(meshes, cam).silhouette;
    char name[32];
    std::snprintf(name, sizeof(name), "render_%03zu.pgm", i);
    WriteImage((std::filesystem::path(args.out) / name).string(), image);
  }
  out << "wrote " << entries.size() << " renders to " << args.out << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::string scene;
  std::string mesh;
  int samples = kDefaultSampleCount;
  uint64_t seed = 0;
};

int EvalCommand(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  std::vector<Mesh> predicted;
  for (const ConvexPolyhedron& c : LoadConvexes(args.scene, err)) {
    predicted.push_back(MeshConvex(c));
  }
  const std::vector<Mesh> reference = LoadMeshes(args.mesh, err);
  const SampledSurface a = SampleSurface(predicted, args.samples, args.seed);
  const SampledSurface b =
      SampleSurface(reference, args.samples, args.seed);
  out << "chamfer_l1 " << FormatReal(Chamfer(a, b, 1)) << "\n";
  out << "chamfer_l2_x1000 " << FormatReal(1000.0 * Chamfer(a, b, 2)) << "\n";
  out << "normal_consistency " << FormatReal(NormalConsistency(a, b)) << "\n";
  return kExitOk;
}

struct ConvertArgs {
  std::string scene;
  std::string obj;
};

int ConvertCommand(const ConvertArgs& args, std::ostream& out,
                   std::ostream& err) {
  std::vector<Mesh> meshes;
  for (const ConvexPolyhedron& c : LoadConvexes(args.scene, err)) {
    meshes.push_back(MeshConvex(c));
  }
  WriteFile(args.obj, WriteObj(meshes));
  out << "wrote " << meshes.size() << " meshes to " << args.obj << "\n";
  return kExitOk;
}

}  // namespace

std::vector<Mesh> LoadMeshes(const std::string& path, std::ostream& err) {
  if (EndsWith(path, ".cvx")) {
    std::vector<Mesh> meshes;
    for (const ConvexPolyhedron& c : LoadConvexes(path, err)) {
      meshes.push_back(MeshConvex(c));
    }
    return meshes;
  }
  Mesh mesh;
  try {
    mesh = ReadObj(ReadFile(path));
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
  if (mesh.triangles.empty()) {
    throw Error(ErrorCode::kEmptyMesh, path + ": no faces");
  }
  return {std::move(mesh)};
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Fit unions of convex polyhedra to multi-view silhouettes"};
  app.name("cvxfit");
  app.require_subcommand(1);

  GenViewsArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen-views", "Render target silhouettes");
  gen_cmd->add_option("mesh", gen.mesh, "Mesh (.obj or .cvx)")->required();
  gen_cmd->add_option("--views", gen.views, "Number of views")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--res", gen.res, "Resolution WxH");
  gen_cmd->add_option("--seed", gen.seed, "Viewpoint seed");
  gen_cmd->add_option("--out", gen.out, "Output directory");

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit convexes to target views");
  fit_cmd->add_option("targets", fit.targets, "Directory from gen-views")
      ->required();
  fit_cmd->add_option("--convexes", fit.convexes, "Convex count")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--planes", fit.planes, "Planes per convex")
      ->check(CLI::Range(4, 1 << 20));
  fit_cmd->add_option("--steps", fit.steps, "Optimization steps")
      ->check(CLI::NonNegativeNumber);
  fit.seed_option = fit_cmd->add_option("--seed", fit.seed, "Scene seed");
  fit_cmd->add_option("--config", fit.config, "key = value config file");
  fit_cmd->add_option("--out", fit.out, "Output .cvx file");
  fit_cmd->add_flag("--quiet", fit.quiet, "Suppress progress output");

  RenderArgs render;
  CLI::App* render_cmd = app.add_subcommand("render", "Render a .cvx scene");
  render_cmd->add_option("scene", render.scene, "Scene (.cvx)")->required();
  render_cmd->add_option("manifest", render.manifest, "Camera manifest")
      ->required();
  render_cmd->add_flag("--soft", render.soft, "Soft silhouettes");
  render_cmd->add_option("--sigma", render.sigma, "Soft falloff (px^2)")
      ->check(CLI::PositiveNumber);
  render_cmd->add_option("--out", render.out, "Output directory");

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Compare a scene to a mesh");
  eval_cmd->add_option("scene", eval.scene, "Scene (.cvx)")->required();
  eval_cmd->add_option("mesh", eval.mesh, "Reference (.obj or .cvx)")
      ->required();
  eval_cmd->add_option("--samples", eval.samples, "Samples per surface")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", eval.seed, "Sampling seed");

  ConvertArgs convert;
  CLI::App* convert_cmd = app.add_subcommand("convert", "Export a scene");
  convert_cmd->add_option("scene", convert.scene, "Scene (.cvx)")->required();
  convert_cmd->add_option("--obj", convert.obj, "Output OBJ")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) return GenViews(gen, out, err);
    if (*fit_cmd) return FitCommand(fit, out);
    if (*render_cmd) return RenderCommand(render, out, err);
    if (*eval_cmd) return EvalCommand(eval, out, err);
    if (*convert_cmd) return ConvertCommand(convert, out, err);
  } catch (const CLI::ValidationError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace cvxfit
