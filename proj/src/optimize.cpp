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

#include "cvxfit/optimize.h"

#include <algorithm>
#include <cmath>

#include "cvxfit/error.h"
#include "cvxfit/parallel.h"
#include "cvxfit/random.h"
#include "cvxfit/render.h"

namespace cvxfit {
namespace {

constexpr int kMaxDraws = 1000;

ConvexPolyhedron RandomConvex(Rng& rng, const Box& region,
                              const InitOptions& init, int id) {
  ConvexPolyhedron c;
  c.id = id;
  c.translation = rng.InBox(region);
  const double size = init.size_fraction * region.Diagonal();
  if (init.axis_aligned) {
    for (int k = 0; k < 3; ++k) {
      c.planes.push_back({Vec3::Unit(k), size});
      c.planes.push_back({-Vec3::Unit(k), size});
    }
    return c;
  }
  // Random normals only bound a polytope when they positively span R^3;
  // redraw until they do.
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    c.planes.clear();
    for (int i = 0; i < init.n_planes; ++i) {
      c.planes.push_back({rng.UnitVector(), size});
    }
    try {
      IntersectHalfspaces(c.planes);
      return c;
    } catch (const Error&) {
    }
  }
  throw Error(ErrorCode::kInvalidConfig, "could not draw a bounded convex");
}

void ValidateInit(int n_planes, const InitOptions& init, const Box& region) {
  if (n_planes < 4) {
    throw Error(ErrorCode::kInvalidConfig, "need at least 4 planes");
  }
  if (init.axis_aligned && n_planes != 6) {
    throw Error(ErrorCode::kInvalidConfig, "axis-aligned init needs 6 planes");
  }
  if (!(init.size_fraction > 0)) {
    throw Error(ErrorCode::kInvalidConfig, "initial size must be positive");
  }
  if (!((region.max - region.min).minCoeff() >= 0) ||
      !(region.Diagonal() > 0)) {
    throw Error(ErrorCode::kInvalidConfig, "empty region");
  }
}

ConvexPolyhedron DrawConvex(Scene& scene, uint64_t seed) {
  Rng rng(MixSeed(seed, scene.draws++));
  return RandomConvex(rng, scene.region, scene.init, scene.next_id++);
}

void AdamUpdate(double g, double& m, double& v, double& param, double lr,
                double bc1, double bc2, const AdamConfig& cfg) {
  m = cfg.beta1 * m + (1 - cfg.beta1) * g;
  v = cfg.beta2 * v + (1 - cfg.beta2) * g * g;
  param -= lr * (m / bc1) / (std::sqrt(v / bc2) + cfg.epsilon);
}

}  // namespace

OptimizerState OptimizerState::Fresh(const Scene& scene,
                                     const AdamConfig& config) {
  OptimizerState state;
  state.config = config;
  for (const ConvexPolyhedron& c : scene.convexes) {
    state.convexes.push_back(FreshMoments(c));
  }
  return state;
}

ConvexMoments OptimizerState::FreshMoments(const ConvexPolyhedron& convex) {
  ConvexMoments m;
  m.planes.resize(convex.planes.size());
  return m;
}

Schedule Schedule::Make(int total_steps, int num_events, double event_span) {
  Schedule s;
  s.total_steps = total_steps;
  if (num_events > 0 && total_steps > 0) {
    const double spacing = event_span * total_steps / num_events;
    for (int k = 1; k <= num_events; ++k) {
      const int step = static_cast<int>(std::lround(k * spacing));
      if (step <= 0 || step >= total_steps) continue;
      if (!s.event_steps.empty() && step <= s.event_steps.back()) continue;
      s.event_steps.push_back(step);
    }
  }
  return s;
}

double Schedule::SigmaAt(int step) const {
  if (total_steps <= 1) return sigma_start;
  const double frac =
      std::clamp(static_cast<double>(step) / (total_steps - 1), 0.0, 1.0);
  return sigma_start * std::pow(sigma_end / sigma_start, frac);
}

bool Schedule::IsEvent(int step) const {
  return std::binary_search(event_steps.begin(), event_steps.end(), step);
}

void Schedule::Validate() const {
  if (total_steps < 0) {
    throw Error(ErrorCode::kInvalidConfig, "negative step count");
  }
  for (size_t i = 0; i < event_steps.size(); ++i) {
    if (event_steps[i] >= total_steps || event_steps[i] < 0 ||
        (i > 0 && event_steps[i] <= event_steps[i - 1])) {
      throw Error(ErrorCode::kInvalidConfig,
                  "event steps must increase and stay below total_steps");
    }
  }
  if (!(sigma_start > 0 && sigma_end > 0)) {
    throw Error(ErrorCode::kInvalidConfig, "sigma must be positive");
  }
  if (purge_every < 0 || !(volume_threshold >= 0)) {
    throw Error(ErrorCode::kInvalidConfig, "bad purge settings");
  }
}

Scene InitScene(int n_convex, int n_planes, uint64_t seed, const Box& region,
                InitOptions options) {
  if (n_convex < 1) {
    throw Error(ErrorCode::kInvalidConfig, "need at least one convex");
  }
  options.n_planes = n_planes;
  ValidateInit(n_planes, options, region);
  Scene scene;
  scene.region = region;
  scene.seed = seed;
  scene.init = options;
  for (int i = 0; i < n_convex; ++i) {
    scene.convexes.push_back(DrawConvex(scene, seed));
  }
  return scene;
}

void OptimizerStep(Scene& scene, OptimizerState& state,
                   std::span<const ParamGradients> grads) {
  if (grads.size() != scene.convexes.size() ||
      state.convexes.size() != scene.convexes.size()) {
    throw Error(ErrorCode::kShapeMismatch, "gradients not aligned to scene");
  }
  const AdamConfig& cfg = state.config;
  const bool bounded = scene.region.Volume() > 0;
  for (size_t c = 0; c < scene.convexes.size(); ++c) {
    ConvexPolyhedron& convex = scene.convexes[c];
    ConvexMoments& mom = state.convexes[c];
    const ParamGradients& g = grads[c];
    if (g.planes.size() != convex.planes.size() ||
        mom.planes.size() != convex.planes.size()) {
      throw Error(ErrorCode::kShapeMismatch, "plane gradients not aligned");
    }

    ++mom.translation_steps;
    const double tb1 = 1 - std::pow(cfg.beta1, mom.translation_steps);
    const double tb2 = 1 - std::pow(cfg.beta2, mom.translation_steps);
    for (int k = 0; k < 3; ++k) {
      AdamUpdate(g.grad_t[k], mom.m_t[k], mom.v_t[k], convex.translation[k],
                 cfg.lr_translation, tb1, tb2, cfg);
    }
    // A convex outside every view would get no gradient and never return.
    if (bounded) {
      convex.translation = convex.translation.cwiseMax(scene.region.min)
                               .cwiseMin(scene.region.max);
    }

    ++mom.plane_steps;
    const double pb1 = 1 - std::pow(cfg.beta1, mom.plane_steps);
    const double pb2 = 1 - std::pow(cfg.beta2, mom.plane_steps);
    for (size_t i = 0; i < convex.planes.size(); ++i) {
      Hyperplane& plane = convex.planes[i];
      PlaneMoments& pm = mom.planes[i];
      for (int k = 0; k < 3; ++k) {
        AdamUpdate(g.planes[i].grad_a[k], pm.m_a[k], pm.v_a[k],
                   plane.normal[k], cfg.lr_plane, pb1, pb2, cfg);
      }
      AdamUpdate(g.planes[i].grad_b, pm.m_b, pm.v_b, plane.offset,
                 cfg.lr_plane, pb1, pb2, cfg);
      plane.offset = std::max(plane.offset, cfg.min_offset);
      const double norm = plane.normal.norm();
      if (norm > 0 &&
          (norm < cfg.min_normal_norm || norm > cfg.max_normal_norm)) {
        plane.normal /= norm;
        plane.offset /= norm;
      }
    }
  }
  ++state.step;
}

std::vector<int> PurgeConvexes(Scene& scene, OptimizerState& state,
                               double threshold) {
  std::vector<int> removed;
  for (size_t c = scene.convexes.size(); c-- > 0;) {
    double volume = 0;
    try {
      volume = SignedVolume(MeshConvex(scene.convexes[c]));
    } catch (const Error&) {
      volume = 0;
    }
    if (volume < threshold) {
      removed.push_back(scene.convexes[c].id);
      scene.convexes.erase(scene.convexes.begin() + static_cast<long>(c));
      state.convexes.erase(state.convexes.begin() + static_cast<long>(c));
    }
  }
  std::reverse(removed.begin(), removed.end());
  return removed;
}

int PurgePlanes(Scene& scene, OptimizerState& state) {
  int removed = 0;
  for (size_t c = 0; c < scene.convexes.size(); ++c) {
    ConvexPolyhedron& convex = scene.convexes[c];
    std::vector<int> redundant;
    try {
      redundant = RedundantPlanes(convex.planes);
    } catch (const Error&) {
      continue;
    }
    const size_t budget = convex.planes.size() > 4 ? convex.planes.size() - 4 : 0;
    if (redundant.size() > budget) redundant.resize(budget);
    if (redundant.empty()) continue;
    std::vector<char> drop(convex.planes.size(), 0);
    for (int i : redundant) drop[i] = 1;
    std::vector<Hyperplane> planes;
    std::vector<PlaneMoments> moments;
    for (size_t i = 0; i < convex.planes.size(); ++i) {
      if (drop[i]) continue;
      planes.push_back(convex.planes[i]);
      moments.push_back(state.convexes[c].planes[i]);
    }
    convex.planes = std::move(planes);
    state.convexes[c].planes = std::move(moments);
    removed += static_cast<int>(redundant.size());
  }
  return removed;
}

ConvexPolyhedron Densify(const ConvexPolyhedron& convex) {
  ConvexPolyhedron local = convex;
  local.translation = Vec3::Zero();
  const Mesh subdivided = LoopSubdivide(MeshConvex(local));
  std::vector<Vec3> points;
  points.reserve(subdivided.vertices.size());
  for (const MeshVertex& v : subdivided.vertices) points.push_back(v.position);
  const Hull hull = ConvexHull3d(points);

  ConvexPolyhedron out;
  out.id = convex.id;
  out.translation = convex.translation;
  for (const HullFacet& f : hull.facets) {
    if (!(f.offset > 0)) {
      throw Error(ErrorCode::kNonPositiveOffset,
                  "origin left the densified convex");
    }
    out.planes.push_back({f.normal, f.offset});
  }
  return out;
}

int DensifyAll(Scene& scene, OptimizerState& state, int max_planes) {
  int count = 0;
  for (size_t c = 0; c < scene.convexes.size(); ++c) {
    ConvexPolyhedron dense;
    try {
      dense = Densify(scene.convexes[c]);
    } catch (const Error&) {
      continue;
    }
    if (max_planes > 0 && static_cast<int>(dense.planes.size()) > max_planes) {
      continue;
    }
    scene.convexes[c] = std::move(dense);
    state.convexes[c].planes.assign(scene.convexes[c].planes.size(),
                                    PlaneMoments{});
    state.convexes[c].plane_steps = 0;
    ++count;
  }
  return count;
}

int Spawn(Scene& scene, OptimizerState& state, int target_count,
          uint64_t seed) {
  int spawned = 0;
  while (static_cast<int>(scene.convexes.size()) < target_count) {
    scene.convexes.push_back(DrawConvex(scene, seed));
    state.convexes.push_back(
        OptimizerState::FreshMoments(scene.convexes.back()));
    ++spawned;
  }
  return spawned;
}

void Respawn(Scene& scene, OptimizerState& state, size_t index,
             uint64_t seed) {
  scene.convexes[index] = DrawConvex(scene, seed);
  state.convexes[index] = OptimizerState::FreshMoments(scene.convexes[index]);
}

std::vector<Mesh> SceneMeshes(const Scene& scene) {
  std::vector<Mesh> meshes;
  meshes.reserve(scene.convexes.size());
  for (const ConvexPolyhedron& c : scene.convexes) {
    meshes.push_back(MeshConvex(c));
  }
  return meshes;
}

FitResult Fit(Scene scene, std::span<const RenderTarget> targets,
              const FitOptions& options, const FitCallbacks& callbacks) {
  if (targets.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "no target views");
  }
  const Schedule& schedule = options.schedule;
  schedule.Validate();
  for (const RenderTarget& t : targets) {
    t.camera.Validate();
    if (t.silhouette.width != t.camera.width ||
        t.silhouette.height != t.camera.height) {
      throw Error(ErrorCode::kShapeMismatch, "target image vs camera size");
    }
  }

  FitResult result;
  OptimizerState state = OptimizerState::Fresh(scene, options.adam);
  const int target_count = options.target_convex_count > 0
                               ? options.target_convex_count
                               : static_cast<int>(scene.convexes.size());
  const double threshold = schedule.volume_threshold * scene.region.Volume();
  auto log = [&](int step, const std::string& msg) {
    if (callbacks.on_event) callbacks.on_event(step, msg);
  };

  const size_t num_views = targets.size();
  const size_t batch =
      options.views_per_step > 0
          ? std::min<size_t>(options.views_per_step, num_views)
          : num_views;

  // Per-view buffers persist across steps.
  std::vector<SoftRasterizer> rasterizers;
  rasterizers.reserve(num_views);
  for (const RenderTarget& t : targets) {
    rasterizers.emplace_back(t.camera, SoftRasterConfig{});
  }
  std::vector<Image> pixel_grads(num_views);

  for (int step = 0; step < schedule.total_steps; ++step) {
    if (callbacks.on_snapshot && callbacks.snapshot_every > 0 &&
        step % callbacks.snapshot_every == 0) {
      callbacks.on_snapshot(step, scene);
    }
    const bool purge = schedule.purge_every > 0 && step > 0 &&
                       step % schedule.purge_every == 0;
    const bool event = schedule.IsEvent(step);
    if (purge || event) {
      const int planes = PurgePlanes(scene, state);
      const std::vector<int> gone = PurgeConvexes(scene, state, threshold);
      if (planes > 0) {
        log(step, "purged " + std::to_string(planes) + " planes");
      }
      if (!gone.empty()) {
        log(step, "purged " + std::to_string(gone.size()) + " convexes");
      }
    }
    if (event) {
      if (options.densify) {
        const int n = DensifyAll(scene, state, options.max_planes);
        log(step, "densified " + std::to_string(n) + " convexes");
      }
      const int n = Spawn(scene, state, target_count, MixSeed(scene.seed, step));
      if (n > 0) log(step, "spawned " + std::to_string(n) + " convexes");
    }

    // Geometry. A convex that cannot be built is replaced by a fresh one.
    const size_t nc = scene.convexes.size();
    std::vector<PolytopeTopology> topo(nc);
    std::vector<Mesh> meshes(nc);
    for (size_t c = 0; c < nc; ++c) {
      for (int attempt = 0;; ++attempt) {
        try {
          topo[c] = IntersectHalfspaces(scene.convexes[c].planes);
          meshes[c] = BuildMesh(scene.convexes[c], topo[c]);
          break;
        } catch (const Error& e) {
          if (attempt >= kMaxDraws) throw;
          log(step, "respawning convex " +
                        std::to_string(scene.convexes[c].id) + ": " + e.what());
          Respawn(scene, state, c, MixSeed(scene.seed, step));
          ++result.respawns;
        }
      }
    }

    // Rendering and backward pass, one view per task.
    std::vector<size_t> views(batch);
    for (size_t k = 0; k < batch; ++k) {
      views[k] = (static_cast<size_t>(step) * batch + k) % num_views;
    }
    const SoftRasterConfig raster{schedule.SigmaAt(step)};
    std::vector<double> losses(batch);
    std::vector<std::vector<std::vector<Vec3>>> view_grads(batch);
    ParallelFor(batch, [&](size_t k) {
      const size_t v = views[k];
      SoftRasterizer& rasterizer = rasterizers[v];
      rasterizer.set_config(raster);
      rasterizer.Render(meshes);
      losses[k] = ImageL1(rasterizer.silhouette(), targets[v].silhouette,
                          &pixel_grads[v]);
      view_grads[k] = rasterizer.Backward(pixel_grads[v]);
    });

    const double inv_batch = 1.0 / static_cast<double>(batch);
    double loss = 0;
    for (size_t k = 0; k < batch; ++k) loss += losses[k];
    loss *= inv_batch;

    std::vector<ParamGradients> grads(nc);
    for (size_t c = 0; c < nc; ++c) {
      std::vector<Vec3> vg(meshes[c].vertices.size(), Vec3::Zero());
      for (size_t k = 0; k < batch; ++k) {
        for (size_t v = 0; v < vg.size(); ++v) vg[v] += view_grads[k][c][v];
      }
      for (Vec3& g : vg) g *= inv_batch;
      grads[c] = BackpropVertices(topo[c], scene.convexes[c], vg);
    }
    OptimizerStep(scene, state, grads);

    result.loss_history.push_back(loss);
    if (callbacks.on_step) callbacks.on_step(step, loss);
  }
  if (callbacks.on_snapshot) {
    callbacks.on_snapshot(schedule.total_steps, scene);
  }
  result.scene = std::move(scene);
  return result;
}

}  // namespace cvxfit
