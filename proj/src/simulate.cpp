#include "scenecal/simulate.hpp"

#include <cmath>

#include "scenecal/rng.hpp"

namespace scenecal {

namespace {

bool inside_image(const PixelPoint& px, const SceneCamera& cam) {
  return px.u >= 0.0 && px.u < cam.image_width && px.v >= 0.0 &&
         px.v < cam.image_height;
}

// Cosmetic box around the two pixels: width 0.4x the pixel height. Only the
// bottom/top centers are ever consumed downstream. Callers guarantee
// head.v < foot.v.
BoundingBox synth_box(const PixelPoint& foot, const PixelPoint& head) {
  const double width = std::max(1.0, 0.4 * (foot.v - head.v));
  const double center_u = (foot.u + head.u) / 2.0;
  return BoundingBox{center_u - width / 2.0, head.v, center_u + width / 2.0,
                     foot.v};
}

}  // namespace

CameraIntrinsics SceneCamera::intrinsics() const {
  if (principal_point) {
    // Sanity band: a principal point far outside the sensor is a typo.
    if (principal_point->u < 0.0 || principal_point->u > 4.0 * image_width ||
        principal_point->v < 0.0 || principal_point->v > 4.0 * image_height)
      throw InputError("principal point outside the [0, 4 x image] band");
    return CameraIntrinsics(focal_px, principal_point->u, principal_point->v);
  }
  return CameraIntrinsics::with_image_center(focal_px, image_width,
                                             image_height);
}

CameraPose SceneCamera::pose() const {
  CameraPose pose;
  pose.tilt_deg = tilt_deg;
  pose.roll_deg = roll_deg;
  pose.camera_height_m = height_m;
  pose.validate();
  return pose;
}

void SceneSpec::validate() const {
  camera.pose();  // validates angles and height
  if (!(camera.image_width > 0.0) || !(camera.image_height > 0.0))
    throw InputError("image dimensions must be positive");
  if (persons.count < 0) throw InputError("person count must be non-negative");
  if (persons.count > 0) {
    if (!(persons.region.x_max > persons.region.x_min) ||
        !(persons.region.y_max > persons.region.y_min))
      throw InputError("person placement region must have positive extent");
    if (!(persons.height_mean_m > 0.0) || persons.height_std_m < 0.0)
      throw InputError("person height distribution is invalid");
    if (!(camera.height_m > persons.height_mean_m))
      throw InputError("camera must sit above the mean person height");
  }
  if (!(noise.pixel_std >= 0.0)) throw InputError("pixel noise must be >= 0");
  if (!(noise.outlier_fraction >= 0.0) || !(noise.outlier_fraction < 1.0))
    throw InputError("outlier fraction must lie in [0, 1)");
  if (vehicles.random_count < 0)
    throw InputError("vehicle count must be non-negative");
}

bool SyntheticScene::detection_is_outlier(std::size_t detection_index) const {
  return persons[detection_person[detection_index]].outlier;
}

SyntheticScene generate(const SceneSpec& spec) {
  spec.validate();
  Rng rng(spec.rng_seed);

  SyntheticScene scene;
  scene.camera = spec.camera;
  scene.foot_plane_m = spec.foot_plane_m;
  const CameraIntrinsics intrinsics = spec.camera.intrinsics();
  const RotationMatrix rotation =
      build_rotation(spec.camera.tilt_deg, spec.camera.roll_deg);
  scene.true_projection =
      compose_projection(intrinsics, rotation, spec.camera.height_m);

  for (int i = 0; i < spec.persons.count; ++i) {
    TruePerson person;
    const double x =
        rng.uniform(spec.persons.region.x_min, spec.persons.region.x_max);
    const double y =
        rng.uniform(spec.persons.region.y_min, spec.persons.region.y_max);
    person.height_m =
        rng.normal(spec.persons.height_mean_m, spec.persons.height_std_m);
    double foot_z = spec.foot_plane_m;
    person.outlier = rng.bernoulli(spec.noise.outlier_fraction);
    if (person.outlier) {
      // Off-model object: an odd height (child, pole) or a foot off the
      // ground plane (step, curb); half of the outliers get each.
      if (rng.bernoulli(0.5)) {
        person.height_m = rng.uniform(0.5, 3.0);
      } else {
        foot_z += rng.bernoulli(0.5) ? 0.5 : -0.5;
      }
    }
    person.height_m = std::max(0.3, person.height_m);
    person.foot = WorldPoint{x, y, foot_z};

    const WorldPoint head{x, y, foot_z + person.height_m};
    PixelPoint foot_px, head_px;
    try {
      foot_px = project(scene.true_projection, person.foot);
      head_px = project(scene.true_projection, head);
    } catch (const GeometryError&) {
      person.visible = false;
      scene.persons.push_back(person);
      continue;
    }
    if (!in_front_of_camera(scene.true_projection, person.foot) ||
        !inside_image(foot_px, spec.camera) ||
        !inside_image(head_px, spec.camera)) {
      person.visible = false;
      scene.persons.push_back(person);
      continue;
    }

    if (spec.noise.pixel_std > 0.0) {
      foot_px.u += rng.normal(0.0, spec.noise.pixel_std);
      foot_px.v += rng.normal(0.0, spec.noise.pixel_std);
      head_px.u += rng.normal(0.0, spec.noise.pixel_std);
      head_px.v += rng.normal(0.0, spec.noise.pixel_std);
    }
    if (head_px.v >= foot_px.v - 1.0) {
      // Noise collapsed the box; keep the pixels usable by flagging the
      // person invisible instead of emitting an inverted box.
      person.visible = false;
      scene.persons.push_back(person);
      continue;
    }

    person.detection_index = static_cast<int>(scene.detections.size());
    scene.detections.emplace_back(0, synth_box(foot_px, head_px), foot_px,
                                  head_px);
    scene.detection_person.push_back(static_cast<int>(scene.persons.size()));
    scene.persons.push_back(person);
  }

  if (spec.persons.count > 0 && scene.detections.empty())
    throw GeometryError("empty scene: no person projects into the image");

  auto add_vehicle = [&](const WorldPoint& pos) {
    TrueVehicle vehicle;
    vehicle.position = WorldPoint{pos.x, pos.y, 0.0};
    vehicle.pixel = project(scene.true_projection, vehicle.position);
    vehicle.box = BoundingBox{vehicle.pixel.u - 30.0, vehicle.pixel.v - 20.0,
                              vehicle.pixel.u + 30.0, vehicle.pixel.v + 20.0};
    scene.vehicles.push_back(vehicle);
  };
  for (const auto& pos : spec.vehicles.positions) add_vehicle(pos);
  const Region vr = spec.vehicles.region.value_or(spec.persons.region);
  for (int i = 0; i < spec.vehicles.random_count; ++i)
    add_vehicle(WorldPoint{rng.uniform(vr.x_min, vr.x_max),
                           rng.uniform(vr.y_min, vr.y_max), 0.0});

  return scene;
}

}  // namespace scenecal
