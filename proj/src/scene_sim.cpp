// Copyright 2026 The dpm4d Authors.
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

#include "scene_sim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "error.hpp"
#include "rng.hpp"

namespace dpm4d {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNearPlane = 1e-3;

// Rest geometry plus a per-frame pose function for each vertex.
struct Part {
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
};

void append(Part& into, const Part& p) {
  const auto base = static_cast<std::uint32_t>(into.vertices.size());
  into.vertices.insert(into.vertices.end(), p.vertices.begin(), p.vertices.end());
  for (const Face& f : p.faces) into.faces.push_back({f[0] + base, f[1] + base, f[2] + base});
}

// Axis-aligned box with its minimum corner at `lo`.
Part box(const Vec3& lo, const Vec3& size) {
  Part p;
  for (int i = 0; i < 8; ++i) {
    p.vertices.push_back(lo + Vec3((i & 1) ? size.x() : 0.0, (i & 2) ? size.y() : 0.0,
                                   (i & 4) ? size.z() : 0.0));
  }
  p.faces = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
             {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
  return p;
}

Part uv_sphere(double radius, int rings, int segments) {
  Part p;
  p.vertices.push_back(Vec3(0, 0, radius));
  for (int r = 1; r < rings; ++r) {
    const double th = kPi * r / rings;
    for (int s = 0; s < segments; ++s) {
      const double ph = 2.0 * kPi * s / segments;
      p.vertices.push_back(radius * Vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)));
    }
  }
  p.vertices.push_back(Vec3(0, 0, -radius));
  const auto south = static_cast<std::uint32_t>(p.vertices.size() - 1);
  auto ring = [&](int r, int s) { return static_cast<std::uint32_t>(1 + (r - 1) * segments + (s % segments)); };
  for (int s = 0; s < segments; ++s) {
    p.faces.push_back({0, ring(1, s), ring(1, s + 1)});
    for (int r = 1; r + 1 < rings; ++r) {
      p.faces.push_back({ring(r, s), ring(r + 1, s), ring(r + 1, s + 1)});
      p.faces.push_back({ring(r, s), ring(r + 1, s + 1), ring(r, s + 1)});
    }
    p.faces.push_back({ring(rings - 1, s), south, ring(rings - 1, s + 1)});
  }
  return p;
}

Part grid(int nx, int ny, const std::function<Vec3(double, double)>& at) {
  Part p;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) p.vertices.push_back(at(static_cast<double>(i) / nx, static_cast<double>(j) / ny));
  auto id = [&](int i, int j) { return static_cast<std::uint32_t>(j * (nx + 1) + i); };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      p.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      p.faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return p;
}

Mat3 rot_z(double a) { return Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix(); }
Mat3 rot_y(double a) { return Eigen::AngleAxisd(a, Vec3::UnitY()).toRotationMatrix(); }

// A rigid piece whose vertices follow pose(t) applied to the rest positions.
struct RigidPiece {
  Part part;
  std::function<Eigen::Isometry3d(int)> pose;
};

AnimatedMesh bake(std::uint32_t id, const std::vector<RigidPiece>& pieces, int num_frames) {
  Part all;
  for (const auto& pc : pieces) append(all, pc.part);
  AnimatedMesh m;
  m.object_id = id;
  m.num_vertices = static_cast<int>(all.vertices.size());
  m.stored_frames = num_frames;
  m.faces = all.faces;
  m.positions.resize(static_cast<std::size_t>(m.num_vertices) * num_frames);
  for (int t = 0; t < num_frames; ++t) {
    int v = 0;
    for (const auto& pc : pieces) {
      const Eigen::Isometry3d T = pc.pose(t);
      for (const auto& x : pc.part.vertices) m.at(v++, t) = (T * x).cast<float>();
    }
  }
  return m;
}

Eigen::Isometry3d make_pose(const Mat3& R, const Vec3& t) {
  Eigen::Isometry3d iso = Eigen::Isometry3d::Identity();
  iso.linear() = R;
  iso.translation() = t;
  return iso;
}

}  // namespace

std::string to_string(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::kSphere: return "sphere";
    case ObjectKind::kArm: return "arm";
    case ObjectKind::kFlag: return "flag";
    case ObjectKind::kWalker: return "walker";
    case ObjectKind::kTeleporter: return "teleporter";
  }
  return "unknown";
}

ObjectKind object_kind_from_string(const std::string& name) {
  if (name == "sphere") return ObjectKind::kSphere;
  if (name == "arm") return ObjectKind::kArm;
  if (name == "flag") return ObjectKind::kFlag;
  if (name == "walker") return ObjectKind::kWalker;
  if (name == "teleporter") return ObjectKind::kTeleporter;
  fail(ErrorCode::kInvalidArgument, "unknown object kind '" + name + "'");
}

Footprint footprint_size(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::kSphere: return {0, 0, 2, 2};
    case ObjectKind::kArm: return {0, 0, 3, 3};
    case ObjectKind::kFlag: return {0, 0, 2, 2};
    case ObjectKind::kWalker: return {0, 0, 3, 2};
    case ObjectKind::kTeleporter: return {0, 0, 4, 2};
  }
  return {};
}

AnimatedMesh make_object(ObjectKind kind, std::uint32_t object_id, const Vec3& centre, double half_x,
                         double half_y, int num_frames, std::uint64_t seed) {
  Rng rng(seed);
  const double phase = rng.uniform(0.0, 2.0 * kPi);
  const double rate = rng.uniform(0.8, 1.2);
  switch (kind) {
    case ObjectKind::kSphere: {
      const double r = 0.2;
      const double a = std::max(0.0, std::min(half_x, half_y) - r - 0.05);
      RigidPiece ball{uv_sphere(r, 6, 10), [=](int t) {
                        const double ang = phase + 0.35 * rate * t;
                        const Vec3 c = centre + Vec3(a * std::cos(ang), a * std::sin(ang),
                                                     r + 0.15 * std::abs(std::sin(0.5 * t)));
                        return make_pose(rot_z(0.2 * t) * rot_y(0.1 * t), c);
                      }};
      return bake(object_id, {ball}, num_frames);
    }
    case ObjectKind::kTeleporter: {
      const double r = 0.2;
      const double a = std::max(0.0, half_x - r - 0.2);
      RigidPiece ball{uv_sphere(r, 6, 10), [=](int t) {
                        return make_pose(Mat3::Identity(), centre + Vec3((t % 2 ? a : -a), 0.0, r));
                      }};
      return bake(object_id, {ball}, num_frames);
    }
    case ObjectKind::kArm: {
      const double l1 = 0.35, l2 = 0.25, h = 0.4;
      RigidPiece post{box(Vec3(-0.06, -0.06, 0.0), Vec3(0.12, 0.12, h)),
                      [=](int) { return make_pose(Mat3::Identity(), centre); }};
      auto yaw1 = [=](int t) { return phase + 0.25 * rate * t; };
      RigidPiece link1{box(Vec3(0.0, -0.04, -0.04), Vec3(l1, 0.08, 0.08)), [=](int t) {
                         return make_pose(rot_z(yaw1(t)), centre + Vec3(0, 0, h + 0.04));
                       }};
      RigidPiece link2{box(Vec3(0.0, -0.03, -0.03), Vec3(l2, 0.06, 0.06)), [=](int t) {
                         const Mat3 R1 = rot_z(yaw1(t));
                         const Vec3 elbow = centre + Vec3(0, 0, h + 0.04) + R1 * Vec3(l1, 0, 0.07);
                         return make_pose(R1 * rot_z(0.8 * std::sin(0.3 * rate * t)), elbow);
                       }};
      return bake(object_id, {post, link1, link2}, num_frames);
    }
    case ObjectKind::kFlag: {
      const double yaw = rng.uniform(0.0, 2.0 * kPi);
      const double width = 0.7;
      const Mat3 R = rot_z(yaw);
      RigidPiece pole{box(Vec3(-0.37, -0.02, 0.0), Vec3(0.04, 0.04, 1.0)),
                      [=](int) { return make_pose(R, centre); }};
      // The cloth is not rigid: bake it directly.
      AnimatedMesh rigid = bake(object_id, {pole}, num_frames);
      const int nx = 8, ny = 5;
      Part rest = grid(nx, ny, [&](double s, double q) -> Vec3 { return Vec3(-0.33 + width * s, 0.0, 0.5 + 0.45 * q); });
      const int base = rigid.num_vertices;
      AnimatedMesh m;
      m.object_id = object_id;
      m.stored_frames = num_frames;
      m.num_vertices = base + static_cast<int>(rest.vertices.size());
      m.faces = rigid.faces;
      for (const Face& f : rest.faces)
        m.faces.push_back({f[0] + static_cast<std::uint32_t>(base), f[1] + static_cast<std::uint32_t>(base),
                           f[2] + static_cast<std::uint32_t>(base)});
      m.positions.resize(static_cast<std::size_t>(m.num_vertices) * num_frames);
      for (int t = 0; t < num_frames; ++t) {
        for (int v = 0; v < base; ++v) m.at(v, t) = rigid.at(v, t);
        for (std::size_t k = 0; k < rest.vertices.size(); ++k) {
          Vec3 p = rest.vertices[k];
          const double s = (p.x() + 0.33) / width;
          p.y() = 0.08 * s * std::sin(6.0 * s - 0.5 * rate * t + phase);
          m.at(base + static_cast<int>(k), t) = (centre + R * p).cast<float>();
        }
      }
      return m;
    }
    case ObjectKind::kWalker: {
      const double amp = std::max(0.0, half_x - 0.35);
      auto root_at = [=](int t) -> Vec3 { return centre + Vec3(amp * std::sin(phase + 0.15 * rate * t), 0.0, 0.0); };
      auto swing = [=](int t) { return 0.4 * std::sin(0.5 * rate * t + phase); };
      std::vector<RigidPiece> pieces;
      pieces.push_back({box(Vec3(-0.1, -0.15, 0.5), Vec3(0.2, 0.3, 0.5)),
                        [=](int t) { return make_pose(Mat3::Identity(), root_at(t)); }});
      pieces.push_back({box(Vec3(-0.09, -0.09, 1.02), Vec3(0.18, 0.18, 0.18)),
                        [=](int t) { return make_pose(rot_z(0.3 * std::sin(0.2 * t)), root_at(t)); }});
      for (int side = 0; side < 2; ++side) {
        const double y = side ? 0.08 : -0.08;
        const double sgn = side ? 1.0 : -1.0;
        pieces.push_back({box(Vec3(-0.05, -0.05, -0.48), Vec3(0.1, 0.1, 0.48)), [=](int t) {
                            return make_pose(rot_y(sgn * swing(t)), root_at(t) + Vec3(0, y, 0.5));
                          }});
        pieces.push_back({box(Vec3(-0.04, -0.04, -0.42), Vec3(0.08, 0.08, 0.42)), [=](int t) {
                            return make_pose(rot_y(-sgn * swing(t)), root_at(t) + Vec3(0, 1.8 * y + sgn * 0.06, 0.97));
                          }});
      }
      return bake(object_id, pieces, num_frames);
    }
  }
  fail(ErrorCode::kInternal, "unhandled object kind");
}

namespace {

AnimatedMesh make_environment(const SceneSpec& spec, Rng& rng) {
  Part env;
  const double e = spec.ground_half_extent;
  const int n = 16;
  append(env, grid(n, n, [&](double s, double q) -> Vec3 {
           return spec.root + Vec3(-e + 2.0 * e * s, -e + 2.0 * e * q, 0.0);
         }));
  if (spec.crates) {
    const double ring = spec.grid_cells * spec.cell_size * 0.5 + 0.8;
    const double start = rng.uniform(0.0, 2.0 * kPi);
    for (int k = 0; k < 3; ++k) {
      const double a = start + 2.0 * kPi * k / 3.0;
      const Vec3 c = spec.root + ring * Vec3(std::cos(a), std::sin(a), 0.0);
      append(env, box(c - Vec3(0.25, 0.25, 0.0), Vec3(0.5, 0.5, 0.5)));
    }
  }
  AnimatedMesh m;
  m.object_id = 0;
  m.is_static = true;
  m.stored_frames = 1;
  m.num_vertices = static_cast<int>(env.vertices.size());
  m.faces = env.faces;
  for (const auto& v : env.vertices) m.positions.push_back(v.cast<float>());
  return m;
}

}  // namespace

ComposedScene compose_scene(const SceneSpec& spec, int num_frames) {
  require(num_frames >= 1, ErrorCode::kInvalidArgument, "scene needs at least one frame");
  require(spec.grid_cells > 0 && spec.cell_size > 0.0, ErrorCode::kInvalidArgument,
          "occupancy grid must be non-empty");
  Rng rng(spec.seed);
  std::vector<ObjectKind> kinds = spec.objects;
  if (kinds.empty()) {
    int count = spec.num_objects;
    if (count == 0) count = 1 + static_cast<int>(rng.below(3));
    require(count >= 1 && count <= 3, ErrorCode::kInvalidArgument, "dynamic object count must lie in 1..3");
    const ObjectKind pool[3] = {ObjectKind::kSphere, ObjectKind::kArm, ObjectKind::kFlag};
    for (int i = 0; i < count; ++i) kinds.push_back(pool[rng.below(3)]);
  }
  if (spec.include_human) kinds.push_back(ObjectKind::kWalker);

  ComposedScene out;
  out.root = spec.root;
  std::vector<AnimatedMesh> meshes;
  meshes.push_back(make_environment(spec, rng));
  const double grid_half = spec.grid_cells * spec.cell_size * 0.5;
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    Footprint fp = footprint_size(kinds[k]);
    require(fp.w <= spec.grid_cells && fp.h <= spec.grid_cells, ErrorCode::kInvalidArgument,
            "object footprint larger than the occupancy grid");
    bool placed = false;
    for (int attempt = 0; attempt < spec.placement_retries && !placed; ++attempt) {
      fp.x0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.grid_cells - fp.w + 1)));
      fp.y0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.grid_cells - fp.h + 1)));
      placed = std::none_of(out.objects.begin(), out.objects.end(),
                            [&](const PlacedObject& o) { return o.footprint.overlaps(fp); });
    }
    if (!placed) {
      fail(ErrorCode::kInvalidArgument, "could not place " + to_string(kinds[k]) + " after " +
                                            std::to_string(spec.placement_retries) + " attempts");
    }
    PlacedObject obj;
    obj.object_id = static_cast<std::uint32_t>(k + 1);
    obj.kind = kinds[k];
    obj.footprint = fp;
    obj.centre = spec.root + Vec3((fp.x0 + 0.5 * fp.w) * spec.cell_size - grid_half,
                                  (fp.y0 + 0.5 * fp.h) * spec.cell_size - grid_half, 0.0);
    meshes.push_back(make_object(obj.kind, obj.object_id, obj.centre, 0.5 * fp.w * spec.cell_size,
                                 0.5 * fp.h * spec.cell_size, num_frames, rng.next()));
    out.objects.push_back(obj);
  }
  out.scene = Scene(std::move(meshes), num_frames);
  return out;
}

namespace {

// Sutherland-Hodgman clip of a camera-space triangle against z >= near.
std::vector<Vec3> clip_near(const std::array<Vec3, 3>& tri) {
  std::vector<Vec3> out;
  for (int i = 0; i < 3; ++i) {
    const Vec3& a = tri[i];
    const Vec3& b = tri[(i + 1) % 3];
    const bool ain = a.z() >= kNearPlane, bin = b.z() >= kNearPlane;
    if (ain) out.push_back(a);
    if (ain != bin) {
      const double s = (kNearPlane - a.z()) / (b.z() - a.z());
      out.push_back(a + s * (b - a));
    }
  }
  return out;
}

Eigen::Vector3<std::uint8_t> object_colour(std::uint32_t id) {
  const std::uint64_t h = mix_seed(id + 1);
  return {static_cast<std::uint8_t>(64 + (h & 0x7F)), static_cast<std::uint8_t>(64 + ((h >> 8) & 0x7F)),
          static_cast<std::uint8_t>(64 + ((h >> 16) & 0x7F))};
}

}  // namespace

RasterResult rasterize(const Scene& scene, const CameraParams& cam, int t, bool with_rgb) {
  cam.validate();
  require(t >= 0 && t < scene.num_frames(), ErrorCode::kOutOfRange, "raster time out of range");
  const int W = cam.width, H = cam.height;
  const std::size_t px = static_cast<std::size_t>(W) * H;
  RasterResult out;
  out.depth = DepthMap(W, H);
  out.seg.assign(px, 0);
  out.face.assign(px, -1);
  out.alpha.assign(px, Vec3::Zero());
  std::vector<double> zbuf(px, std::numeric_limits<double>::infinity());
  const Mat3 Kinv = cam.K.inverse();

  for (std::uint32_t f = 0; f < scene.num_faces(); ++f) {
    const auto world = scene.triangle(f, t);
    const std::array<Vec3, 3> tri{cam.to_camera(world[0]), cam.to_camera(world[1]), cam.to_camera(world[2])};
    if (tri[0].z() < kNearPlane && tri[1].z() < kNearPlane && tri[2].z() < kNearPlane) continue;
    const auto poly = clip_near(tri);
    if (poly.size() < 3) continue;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& p : poly) {
      const Vec3 h = cam.K * p;
      xmin = std::min(xmin, h.x() / h.z());
      xmax = std::max(xmax, h.x() / h.z());
      ymin = std::min(ymin, h.y() / h.z());
      ymax = std::max(ymax, h.y() / h.z());
    }
    const int u0 = std::max(0, static_cast<int>(std::ceil(xmin - 0.5 - 1e-9)));
    const int u1 = std::min(W - 1, static_cast<int>(std::floor(xmax - 0.5 + 1e-9)));
    const int v0 = std::max(0, static_cast<int>(std::ceil(ymin - 0.5 - 1e-9)));
    const int v1 = std::min(H - 1, static_cast<int>(std::floor(ymax - 0.5 + 1e-9)));
    if (u0 > u1 || v0 > v1) continue;

    const Vec3 e1 = tri[1] - tri[0];
    const Vec3 e2 = tri[2] - tri[0];
    const Vec3 tvec = -tri[0];
    const Vec3 qvec = tvec.cross(e1);
    for (int v = v0; v <= v1; ++v) {
      for (int u = u0; u <= u1; ++u) {
        // Moller-Trumbore from the camera centre through the pixel centre;
        // the ray has unit z so the hit parameter is the camera-frame depth.
        const Vec3 d = Kinv * Vec3(u + 0.5, v + 0.5, 1.0);
        const Vec3 pvec = d.cross(e2);
        const double det = e1.dot(pvec);
        if (std::abs(det) < 1e-300) continue;
        const double inv = 1.0 / det;
        const double b1 = tvec.dot(pvec) * inv;
        const double b2 = d.dot(qvec) * inv;
        constexpr double eps = 1e-12;
        if (b1 < -eps || b2 < -eps || b1 + b2 > 1.0 + eps) continue;
        const double z = e2.dot(qvec) * inv;
        const std::size_t i = static_cast<std::size_t>(v) * W + u;
        if (!(z >= kNearPlane) || !(z < zbuf[i])) continue;
        zbuf[i] = z;
        Vec3 a(1.0 - b1 - b2, b1, b2);
        a = a.cwiseMax(0.0);
        out.alpha[i] = a / a.sum();
        out.face[i] = f;
      }
    }
  }

  if (with_rgb) out.rgb.assign(3 * px, 0);
  for (std::size_t i = 0; i < px; ++i) {
    if (out.face[i] < 0) continue;
    const auto f = static_cast<std::uint32_t>(out.face[i]);
    out.depth.z[i] = static_cast<float>(zbuf[i]);
    if (!out.depth.valid(i)) {
      out.face[i] = -1;
      continue;
    }
    const auto& mesh = scene.meshes()[scene.locate(f).mesh];
    out.seg[i] = mesh.is_static ? 0u : mesh.object_id;
    if (with_rgb) {
      const auto tri = scene.triangle(f, t);
      const Vec3 n = (tri[1] - tri[0]).cross(tri[2] - tri[0]).normalized();
      const int u = static_cast<int>(i % W), v = static_cast<int>(i / W);
      const Vec3 ray = (unproject(cam, u, v, 1.0) - cam.o).normalized();
      const double shade = 0.3 + 0.7 * std::abs(n.dot(ray));
      const auto c = object_colour(out.seg[i]);
      for (int k = 0; k < 3; ++k) out.rgb[3 * i + k] = static_cast<std::uint8_t>(std::lround(c[k] * shade));
    }
  }
  return out;
}

std::vector<std::uint8_t> render_birdseye_mask(const AnimatedMesh& mesh, int t, const Vec3& centre,
                                               double half_extent, int resolution) {
  require(resolution > 0 && half_extent > 0.0, ErrorCode::kInvalidArgument, "bad bird's-eye grid");
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(resolution) * resolution, 0);
  const double cell = 2.0 * half_extent / resolution;
  const double x0 = centre.x() - half_extent, y0 = centre.y() - half_extent;
  for (const Face& f : mesh.faces) {
    const Vec3 a = mesh.position(f[0], t), b = mesh.position(f[1], t), c = mesh.position(f[2], t);
    const double area = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
    if (std::abs(area) < 1e-14) continue;
    const double minx = std::min({a.x(), b.x(), c.x()}), maxx = std::max({a.x(), b.x(), c.x()});
    const double miny = std::min({a.y(), b.y(), c.y()}), maxy = std::max({a.y(), b.y(), c.y()});
    const int i0 = std::max(0, static_cast<int>(std::ceil((minx - x0) / cell - 0.5)));
    const int i1 = std::min(resolution - 1, static_cast<int>(std::floor((maxx - x0) / cell - 0.5)));
    const int j0 = std::max(0, static_cast<int>(std::ceil((miny - y0) / cell - 0.5)));
    const int j1 = std::min(resolution - 1, static_cast<int>(std::floor((maxy - y0) / cell - 0.5)));
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        const double px = x0 + (i + 0.5) * cell, py = y0 + (j + 0.5) * cell;
        const double w0 = (b.x() - px) * (c.y() - py) - (c.x() - px) * (b.y() - py);
        const double w1 = (c.x() - px) * (a.y() - py) - (a.x() - px) * (c.y() - py);
        const double w2 = (a.x() - px) * (b.y() - py) - (b.x() - px) * (a.y() - py);
        const bool inside = (w0 >= 0 && w1 >= 0 && w2 >= 0) || (w0 <= 0 && w1 <= 0 && w2 <= 0);
        if (inside) mask[static_cast<std::size_t>(j) * resolution + i] = 1;
      }
    }
  }
  return mask;
}

}  // namespace dpm4d
