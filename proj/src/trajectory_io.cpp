#include "tapewrap/trajectory_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tapewrap/error.hpp"

namespace tapewrap {

namespace {

using nlohmann::json;

constexpr std::string_view kFormatName = "tapewrap-trajectory";
constexpr int kFormatVersion = 1;

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 to_vec(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::kFormatError, "expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json pose(const EndEffectorPose& p) {
  const Eigen::Vector4d q = rotation_to_quaternion(p.rotation);
  return {{"p", vec(p.position)}, {"q", json::array({q[0], q[1], q[2], q[3]})}};
}

EndEffectorPose to_pose(const json& j) {
  const json& q = j.at("q");
  if (!q.is_array() || q.size() != 4) throw Error(ErrorCode::kFormatError, "expected a quaternion [w, x, y, z]");
  return {to_vec(j.at("p")),
          quaternion_to_rotation({q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>()})};
}

}  // namespace

Eigen::Vector4d rotation_to_quaternion(const Rot3& rotation) {
  Eigen::Quaterniond q(rotation);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  return {q.w(), q.x(), q.y(), q.z()};
}

Rot3 quaternion_to_rotation(const Eigen::Vector4d& wxyz) {
  return Eigen::Quaterniond(wxyz[0], wxyz[1], wxyz[2], wxyz[3]).normalized().toRotationMatrix();
}

std::string plan_to_json(const PlacementPlan& plan, const TrajectoryMeta& meta) {
  const PlannerConfig& c = plan.config;
  const TapeState& s = plan.final_state;

  json records = json::array();
  for (const PlanRecord& r : plan.records) {
    records.push_back({{"i", r.iteration},
                       {"start", pose(r.start)},
                       {"end", pose(r.end)},
                       {"tension_start", vec(r.tension_start)},
                       {"tension_end", vec(r.tension_end)},
                       {"front_start", r.front_start},
                       {"front_end", r.front_end}});
  }
  json elements = json::array();
  for (const TapeElement& e : s.elements) elements.push_back({{"p", vec(e.position)}, {"attached", e.attached}});

  json meta_json = {{"generator", "tapewrap"}};
  if (meta.timestamp) meta_json["timestamp"] = *meta.timestamp;

  const json doc = {
      {"format", kFormatName},
      {"version", kFormatVersion},
      {"meta", meta_json},
      {"input",
       {{"anchor_point", vec(plan.anchor_point)},
        {"direction", vec(plan.direction)},
        {"anchor", plan.anchor == Anchor::kMiddle ? "middle" : "start"},
        {"anchor_index", s.mid},
        {"tape_length", s.tape_length},
        {"element_count", s.size()},
        {"config",
         {{"element_length", c.element_length},
          {"angle_step", c.angle_step},
          {"epsilon", c.epsilon},
          {"residual_distance", c.residual_distance},
          {"max_iterations", c.max_iterations},
          {"concave_mode", c.concave_mode},
          {"penetration_counts_as_contact", c.penetration_counts_as_contact},
          {"tape_width", c.tape_width}}}}},
      {"residual_applied", plan.residual_applied},
      {"status", std::string(plan_status_name(plan.status))},
      {"iterations", plan.iterations},
      {"records", records},
      {"final", {{"front_start", s.front_start}, {"front_end", s.front_end}, {"elements", elements}}},
  };
  return doc.dump(1) + "\n";
}

PlacementPlan plan_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.value("format", std::string()) != kFormatName) {
      throw Error(ErrorCode::kFormatError, "not a tapewrap trajectory file");
    }
    PlacementPlan plan;
    const json& input = doc.at("input");
    const json& cfg = input.at("config");
    PlannerConfig& c = plan.config;
    c.element_length = cfg.at("element_length").get<double>();
    c.angle_step = cfg.at("angle_step").get<double>();
    c.epsilon = cfg.at("epsilon").get<double>();
    c.residual_distance = cfg.at("residual_distance").get<double>();
    c.max_iterations = cfg.at("max_iterations").get<int>();
    c.concave_mode = cfg.at("concave_mode").get<bool>();
    c.penetration_counts_as_contact = cfg.at("penetration_counts_as_contact").get<bool>();
    c.tape_width = cfg.at("tape_width").get<double>();

    plan.anchor_point = to_vec(input.at("anchor_point"));
    plan.direction = to_vec(input.at("direction"));
    plan.anchor = input.at("anchor").get<std::string>() == "start" ? Anchor::kStart : Anchor::kMiddle;
    plan.residual_applied = doc.at("residual_applied").get<double>();
    plan.status = parse_plan_status(doc.at("status").get<std::string>());
    plan.iterations = doc.at("iterations").get<int>();

    for (const json& r : doc.at("records")) {
      PlanRecord record;
      record.iteration = r.at("i").get<int>();
      record.start = to_pose(r.at("start"));
      record.end = to_pose(r.at("end"));
      record.tension_start = to_vec(r.at("tension_start"));
      record.tension_end = to_vec(r.at("tension_end"));
      record.front_start = r.at("front_start").get<int>();
      record.front_end = r.at("front_end").get<int>();
      plan.records.push_back(record);
    }

    TapeState& s = plan.final_state;
    s.mid = input.at("anchor_index").get<int>();
    s.tape_length = input.at("tape_length").get<double>();
    s.element_length = c.element_length;
    s.tape_width = c.tape_width;
    s.direction = plan.direction;
    const json& final_json = doc.at("final");
    s.front_start = final_json.at("front_start").get<int>();
    s.front_end = final_json.at("front_end").get<int>();
    int j = 0;
    for (const json& e : final_json.at("elements")) {
      TapeElement element;
      element.position = to_vec(e.at("p"));
      element.attached = e.at("attached").get<bool>();
      element.initial_position = layout_position(plan.anchor_point, plan.direction, j++, s.mid, c.element_length);
      s.elements.push_back(element);
    }
    if (s.size() != input.at("element_count").get<int>()) {
      throw Error(ErrorCode::kFormatError, "element list does not match element_count");
    }
    if (!plan.records.empty()) {
      s.start_rotation = plan.records.back().start.rotation;
      s.end_rotation = plan.records.back().end.rotation;
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("trajectory: ") + e.what());
  }
}

void save_trajectory(const PlacementPlan& plan, const std::filesystem::path& path, const TrajectoryMeta& meta) {
  const std::string payload = plan_to_json(plan, meta);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  out << payload;
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

PlacementPlan load_trajectory(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::kFileNotFound, path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return plan_from_json(buffer.str());
}

}  // namespace tapewrap
