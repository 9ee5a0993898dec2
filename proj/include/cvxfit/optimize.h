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

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cvxfit/camera.h"
#include "cvxfit/diffgeom.h"
#include "cvxfit/image.h"
#include "cvxfit/polytope.h"

namespace cvxfit {

struct InitOptions {
  int n_planes = 16;
  /// Every initial plane offset is this fraction of the region diagonal.
  double size_fraction = 0.15;
  /// Test hook: use the six axis directions as normals (n_planes must be 6).
  bool axis_aligned = false;
};

struct Scene {
  std::vector<ConvexPolyhedron> convexes;
  Box region;
  uint64_t seed = 0;
  InitOptions init;
  int next_id = 0;
  /// Number of random convexes drawn so far; keys the spawn stream.
  uint64_t draws = 0;
};

struct AdamConfig {
  double lr_translation = 1e-2;
  double lr_plane = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Offsets are clamped to at least this after every step.
  double min_offset = 1e-4;
  /// (a, b) is rescaled by 1/|a| whenever |a| leaves this range.
  double min_normal_norm = 0.5;
  double max_normal_norm = 2.0;
};

struct PlaneMoments {
  Vec3 m_a = Vec3::Zero();
  Vec3 v_a = Vec3::Zero();
  double m_b = 0;
  double v_b = 0;
};

struct ConvexMoments {
  std::vector<PlaneMoments> planes;
  Vec3 m_t = Vec3::Zero();
  Vec3 v_t = Vec3::Zero();
  // Bias correction runs per group so that fresh moments after spawning or
  // densification start with a normal-sized step.
  int plane_steps = 0;
  int translation_steps = 0;
};

struct OptimizerState {
  AdamConfig config;
  std::vector<ConvexMoments> convexes;
  int step = 0;

  static OptimizerState Fresh(const Scene& scene, const AdamConfig& config);
  static ConvexMoments FreshMoments(const ConvexPolyhedron& convex);
};

struct Schedule {
  int total_steps = 20000;
  /// Steps at which densification and spawning run, strictly increasing.
  std::vector<int> event_steps;
  /// Plane and convex purging cadence; 0 disables.
  int purge_every = 250;
  /// Convex purge threshold as a fraction of the region volume.
  double volume_threshold = 1e-5;
  /// Soft rasterizer sigma decays geometrically between these (px^2).
  double sigma_start = 1.0;
  double sigma_end = 0.0625;

  /// `num_events` events evenly spaced over the first `event_span` of the
  /// run.
  static Schedule Make(int total_steps, int num_events = 10,
                       double event_span = 0.8);

  double SigmaAt(int step) const;
  bool IsEvent(int step) const;
  /// Throws Error(kInvalidConfig).
  void Validate() const;
};

/// Camera plus supervising silhouette.
struct RenderTarget {
  Camera camera;
  Image silhouette;
};

struct FitOptions {
  Schedule schedule;
  AdamConfig adam;
  /// Spawning refills the scene up to this count; 0 keeps the initial count.
  int target_convex_count = 0;
  bool densify = true;
  /// Densification is skipped for a convex when it would exceed this many
  /// planes; 0 means no cap.
  int max_planes = 256;
  /// Views rendered per step, cycling through the targets; 0 renders all.
  int views_per_step = 0;
};

struct FitCallbacks {
  std::function<void(int step, double loss)> on_step;
  /// Called before step s whenever s % snapshot_every == 0, and once more
  /// after the final step.
  std::function<void(int step, const Scene& scene)> on_snapshot;
  int snapshot_every = 0;
  std::function<void(int step, const std::string& message)> on_event;
};

struct FitResult {
  Scene scene;
  std::vector<double> loss_history;
  int respawns = 0;
};

/// Throws Error(kInvalidConfig) if n_convex < 1 or n_planes < 4.
Scene InitScene(int n_convex, int n_planes, uint64_t seed, const Box& region,
                InitOptions options = {});

/// Adam on every plane and translation, then offset clamping and gauge
/// renormalization. Translations are clamped to scene.region when it has
/// positive volume. `grads` is aligned with scene.convexes.
void OptimizerStep(Scene& scene, OptimizerState& state,
                   std::span<const ParamGradients> grads);

/// Removes convexes whose volume is below `threshold` (or that cannot be
/// meshed). Returns the removed ids.
std::vector<int> PurgeConvexes(Scene& scene, OptimizerState& state,
                               double threshold);

/// Removes planes that define no facet, never going below four planes per
/// convex. Returns the number of planes removed.
int PurgePlanes(Scene& scene, OptimizerState& state);

/// Loop-subdivides the convex's mesh and replaces its planes by the facets
/// of the subdivided hull. Throws Error(kNonPositiveOffset) if the origin is
/// not strictly inside the result.
ConvexPolyhedron Densify(const ConvexPolyhedron& convex);

/// Densifies every convex, resetting plane moments. Convexes that fail, or
/// that would exceed `max_planes` (when positive), are left unchanged.
/// Returns the number densified.
int DensifyAll(Scene& scene, OptimizerState& state, int max_planes = 0);

/// Draws new random convexes until the scene holds `target_count`; the
/// draws depend only on `seed` and the scene's draw counter. Returns the
/// number spawned.
int Spawn(Scene& scene, OptimizerState& state, int target_count,
          uint64_t seed);

/// Replaces scene.convexes[index] by a fresh random convex.
void Respawn(Scene& scene, OptimizerState& state, size_t index,
             uint64_t seed);

FitResult Fit(Scene scene, std::span<const RenderTarget> targets,
              const FitOptions& options, const FitCallbacks& callbacks = {});

/// Meshes of every convex in the scene.
std::vector<Mesh> SceneMeshes(const Scene& scene);

}  // namespace cvxfit
