#include "homsim/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace homsim {

using nlohmann::json;

AberrationField AberrationSpec::build(const CameraSpec& cam) const {
  if (kind == Kind::Identity) return AberrationField();
  return AberrationField::radial(cam.width, cam.height, cam.center_x,
                                 cam.center_y, min_value, sigma_px);
}

void ExperimentConfig::validate() const {
  std::vector<std::string> problems;
  auto run = [&](auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      problems.emplace_back(e.what());
    }
  };
  run([&] { pump.validate(); });
  run([&] { filter.validate(); });
  run([&] { phase_matching.validate(); });
  run([&] { beamsplitter.validate(); });
  run([&] { overlap.validate(); });
  run([&] { joint.validate(); });
  run([&] { camera1.validate(); });
  run([&] { camera2.validate(); });
  run([&] { setting.validate(); });
  run([&] {
    if (camera1.height % 2 != 0 || camera2.height % 2 != 0)
      throw ConfigError("camera heights must be even (intra-image halves)");
  });
  run([&] {
    if (frames <= 0) throw ConfigError("frames must be positive");
    if (!(pairs_per_frame_mean >= 0.0))
      throw ConfigError("pairs_per_frame_mean must be >= 0");
  });
  run([&] {
    if (std::abs(filter.center_wavelength_nm - 2.0 * pump.wavelength_nm) >
        0.05 * filter.center_wavelength_nm)
      throw ConfigError(
          "filter.center_wavelength_nm should be ~2x pump wavelength "
          "(degenerate down-conversion)");
  });
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "invalid configuration:";
    for (const std::string& p : problems) msg << "\n  - " << p;
    throw ConfigError(msg.str());
  }
}

namespace {

// Applies `fn(key, value)` for each member and rejects keys it never asked
// for, so typos in config files fail loudly.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string scope)
      : object_(j), scope_(std::move(scope)) {
    if (!object_.is_object())
      throw ConfigError(scope_ + ": expected a JSON object");
  }

  template <typename T>
  void field(const char* key, T& out) {
    seen_.push_back(key);
    if (auto it = object_.find(key); it != object_.end()) {
      try {
        out = it->get<T>();
      } catch (const json::exception&) {
        throw ConfigError(scope_ + "." + key + ": wrong type");
      }
    }
  }

  const json* child(const char* key) {
    seen_.push_back(key);
    auto it = object_.find(key);
    return it != object_.end() ? &*it : nullptr;
  }

  void finish() const {
    for (auto it = object_.begin(); it != object_.end(); ++it) {
      bool known = false;
      for (const std::string& s : seen_)
        if (s == it.key()) known = true;
      if (!known) throw ConfigError(scope_ + ": unknown key '" + it.key() + "'");
    }
  }

 private:
  const json& object_;
  std::string scope_;
  std::vector<std::string> seen_;
};

void read_camera(const json& j, const std::string& scope, CameraSpec& cam) {
  ObjectReader r(j, scope);
  r.field("width", cam.width);
  r.field("height", cam.height);
  r.field("nu_per_pixel", cam.nu_per_pixel);
  r.field("qe", cam.qe);
  r.field("noise_prob", cam.noise_prob);
  r.field("center_x", cam.center_x);
  r.field("center_y", cam.center_y);
  r.finish();
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  ExperimentConfig cfg;
  bool blank = true;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
  if (!blank) {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config parse error: ") + e.what());
    }
    ObjectReader root(j, "config");
    if (const json* p = root.child("pump")) {
      ObjectReader r(*p, "pump");
      r.field("sigma_x_mm", cfg.pump.sigma_x_mm);
      r.field("sigma_y_mm", cfg.pump.sigma_y_mm);
      r.field("sigma_t_ps", cfg.pump.sigma_t_ps);
      r.field("wavelength_nm", cfg.pump.wavelength_nm);
      r.finish();
    }
    if (const json* p = root.child("filter")) {
      ObjectReader r(*p, "filter");
      r.field("center_wavelength_nm", cfg.filter.center_wavelength_nm);
      r.field("sigma_nu_t_THz", cfg.filter.sigma_nu_t_THz);
      r.finish();
    }
    if (const json* p = root.child("phase_matching")) {
      ObjectReader r(*p, "phase_matching");
      r.field("sigma_nu_x", cfg.phase_matching.sigma_nu_x);
      r.field("sigma_nu_y", cfg.phase_matching.sigma_nu_y);
      r.finish();
    }
    if (const json* p = root.child("beamsplitter")) {
      ObjectReader r(*p, "beamsplitter");
      r.field("reflectance", cfg.beamsplitter.reflectance);
      r.field("transmittance", cfg.beamsplitter.transmittance);
      r.field("loss", cfg.beamsplitter.loss);
      r.finish();
    }
    if (const json* p = root.child("overlap")) {
      ObjectReader r(*p, "overlap");
      r.field("sigma_q", cfg.overlap.sigma_q);
      r.field("sigma_spdc", cfg.overlap.sigma_spdc);
      r.field("sigma_t_fs", cfg.overlap.sigma_t_fs);
      r.field("defocus_factor", cfg.overlap.defocus_factor);
      r.finish();
    }
    if (const json* p = root.child("joint_momentum")) {
      ObjectReader r(*p, "joint_momentum");
      r.field("sigma_sum_x", cfg.joint.sigma_sum_x);
      r.field("sigma_sum_y", cfg.joint.sigma_sum_y);
      r.field("sigma_diff_x", cfg.joint.sigma_diff_x);
      r.field("sigma_diff_y", cfg.joint.sigma_diff_y);
      r.field("center_signal_x", cfg.joint.center_signal.x);
      r.field("center_signal_y", cfg.joint.center_signal.y);
      r.field("center_idler_x", cfg.joint.center_idler.x);
      r.field("center_idler_y", cfg.joint.center_idler.y);
      r.finish();
    }
    if (const json* p = root.child("camera1"))
      read_camera(*p, "camera1", cfg.camera1);
    if (const json* p = root.child("camera2"))
      read_camera(*p, "camera2", cfg.camera2);
    if (const json* p = root.child("aberration")) {
      ObjectReader r(*p, "aberration");
      std::string kind = "identity";
      r.field("kind", kind);
      r.field("min_value", cfg.aberration.min_value);
      r.field("sigma_px", cfg.aberration.sigma_px);
      r.finish();
      if (kind == "identity")
        cfg.aberration.kind = AberrationSpec::Kind::Identity;
      else if (kind == "radial")
        cfg.aberration.kind = AberrationSpec::Kind::Radial;
      else
        throw ConfigError("aberration.kind must be 'identity' or 'radial'");
    }
    if (const json* p = root.child("setting")) {
      ObjectReader r(*p, "setting");
      r.field("delta_t_fs", cfg.setting.delta_t_fs);
      r.field("delta_nu_x", cfg.setting.delta_nu_x);
      r.field("delta_nu_y", cfg.setting.delta_nu_y);
      r.field("pol_angle_deg", cfg.setting.pol_angle_deg);
      r.field("focal_mm", cfg.setting.focal_mm);
      r.field("theta_bs_rad", cfg.setting.theta_bs_rad);
      r.field("phi_bs_rad", cfg.setting.phi_bs_rad);
      r.finish();
    }
    root.field("frames", cfg.frames);
    root.field("pairs_per_frame_mean", cfg.pairs_per_frame_mean);
    root.field("master_seed", cfg.master_seed);
    root.finish();
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return config_from_json_text(buffer.str());
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
  auto camera_json = [](const CameraSpec& cam) {
    return json{{"width", cam.width},
                {"height", cam.height},
                {"nu_per_pixel", cam.nu_per_pixel},
                {"qe", cam.qe},
                {"noise_prob", cam.noise_prob},
                {"center_x", cam.center_x},
                {"center_y", cam.center_y}};
  };
  json j{
      {"pump",
       {{"sigma_x_mm", cfg.pump.sigma_x_mm},
        {"sigma_y_mm", cfg.pump.sigma_y_mm},
        {"sigma_t_ps", cfg.pump.sigma_t_ps},
        {"wavelength_nm", cfg.pump.wavelength_nm}}},
      {"filter",
       {{"center_wavelength_nm", cfg.filter.center_wavelength_nm},
        {"sigma_nu_t_THz", cfg.filter.sigma_nu_t_THz}}},
      {"phase_matching",
       {{"sigma_nu_x", cfg.phase_matching.sigma_nu_x},
        {"sigma_nu_y", cfg.phase_matching.sigma_nu_y}}},
      {"beamsplitter",
       {{"reflectance", cfg.beamsplitter.reflectance},
        {"transmittance", cfg.beamsplitter.transmittance},
        {"loss", cfg.beamsplitter.loss}}},
      {"overlap",
       {{"sigma_q", cfg.overlap.sigma_q},
        {"sigma_spdc", cfg.overlap.sigma_spdc},
        {"sigma_t_fs", cfg.overlap.sigma_t_fs},
        {"defocus_factor", cfg.overlap.defocus_factor}}},
      {"joint_momentum",
       {{"sigma_sum_x", cfg.joint.sigma_sum_x},
        {"sigma_sum_y", cfg.joint.sigma_sum_y},
        {"sigma_diff_x", cfg.joint.sigma_diff_x},
        {"sigma_diff_y", cfg.joint.sigma_diff_y},
        {"center_signal_x", cfg.joint.center_signal.x},
        {"center_signal_y", cfg.joint.center_signal.y},
        {"center_idler_x", cfg.joint.center_idler.x},
        {"center_idler_y", cfg.joint.center_idler.y}}},
      {"camera1", camera_json(cfg.camera1)},
      {"camera2", camera_json(cfg.camera2)},
      {"aberration",
       {{"kind", cfg.aberration.kind == AberrationSpec::Kind::Radial
                     ? "radial"
                     : "identity"},
        {"min_value", cfg.aberration.min_value},
        {"sigma_px", cfg.aberration.sigma_px}}},
      {"setting",
       {{"delta_t_fs", cfg.setting.delta_t_fs},
        {"delta_nu_x", cfg.setting.delta_nu_x},
        {"delta_nu_y", cfg.setting.delta_nu_y},
        {"pol_angle_deg", cfg.setting.pol_angle_deg},
        {"focal_mm", cfg.setting.focal_mm},
        {"theta_bs_rad", cfg.setting.theta_bs_rad},
        {"phi_bs_rad", cfg.setting.phi_bs_rad}}},
      {"frames", cfg.frames},
      {"pairs_per_frame_mean", cfg.pairs_per_frame_mean},
      {"master_seed", cfg.master_seed},
  };
  return j.dump(2) + "\n";
}

}  // namespace homsim
