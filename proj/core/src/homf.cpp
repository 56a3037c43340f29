#include "homsim/homf.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

namespace homsim {

namespace {

using nlohmann::json;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::uint64_t offset() const { return pos_; }

  const std::uint8_t* take(std::size_t n, const char* what) {
    if (pos_ + n > bytes_.size())
      throw FormatError(std::string("truncated while reading ") + what, pos_);
    const std::uint8_t* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }

  std::uint16_t u16(const char* what) {
    const std::uint8_t* p = take(2, what);
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
  }
  std::uint32_t u32(const char* what) {
    const std::uint8_t* p = take(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64(const char* what) {
    const std::uint8_t* p = take(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
  }

  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::uint64_t pos_ = 0;
};

json camera_to_json(const CameraSpec& cam) {
  return json{{"width", cam.width},
              {"height", cam.height},
              {"nu_per_pixel", cam.nu_per_pixel},
              {"qe", cam.qe},
              {"noise_prob", cam.noise_prob},
              {"center_x", cam.center_x},
              {"center_y", cam.center_y}};
}

CameraSpec camera_from_json(const json& j) {
  CameraSpec cam;
  cam.width = j.at("width").get<int>();
  cam.height = j.at("height").get<int>();
  cam.nu_per_pixel = j.at("nu_per_pixel").get<double>();
  cam.qe = j.at("qe").get<double>();
  cam.noise_prob = j.at("noise_prob").get<double>();
  cam.center_x = j.at("center_x").get<double>();
  cam.center_y = j.at("center_y").get<double>();
  return cam;
}

}  // namespace

std::vector<std::uint8_t> encode_stack(const FrameStack& stack) {
  const int w = stack.camera.width;
  const int h = stack.camera.height;
  for (const Frame& f : stack.frames)
    if (f.width() != w || f.height() != h)
      throw std::invalid_argument("encode_stack: frame dimension mismatch");

  const json settings = {{"camera", camera_to_json(stack.camera)},
                         {"meta", stack.settings_text}};
  const std::string settings_str = settings.dump();

  std::vector<std::uint8_t> out;
  out.push_back('H');
  out.push_back('O');
  out.push_back('M');
  out.push_back('F');
  put_u16(out, kHomfVersion);
  put_u16(out, static_cast<std::uint16_t>(w));
  put_u16(out, static_cast<std::uint16_t>(h));
  put_u32(out, static_cast<std::uint32_t>(stack.frames.size()));
  put_u64(out, stack.seed);
  put_u32(out, static_cast<std::uint32_t>(settings_str.size()));
  out.insert(out.end(), settings_str.begin(), settings_str.end());
  for (const Frame& f : stack.frames)
    out.insert(out.end(), f.bytes().begin(), f.bytes().end());
  return out;
}

FrameStack decode_stack(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  const std::uint8_t* magic = r.take(4, "magic");
  if (std::memcmp(magic, "HOMF", 4) != 0)
    throw FormatError("bad magic, expected 'HOMF'", 0);
  const std::uint16_t version = r.u16("version");
  if (version != kHomfVersion)
    throw FormatError("unsupported version " + std::to_string(version), 4);
  const int w = r.u16("width");
  const int h = r.u16("height");
  const std::uint32_t count = r.u32("frame count");
  const std::uint64_t seed = r.u64("seed");
  const std::uint32_t settings_len = r.u32("settings length");
  const std::uint64_t settings_at = r.offset();
  const std::uint8_t* settings_bytes = r.take(settings_len, "settings block");
  if (w <= 0 || h <= 0)
    throw FormatError("non-positive frame dimensions", 6);

  FrameStack stack;
  stack.seed = seed;
  std::string settings_str(reinterpret_cast<const char*>(settings_bytes),
                           settings_len);
  try {
    const json settings = json::parse(settings_str);
    stack.camera = camera_from_json(settings.at("camera"));
    stack.settings_text = settings.at("meta").get<std::string>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad settings block: ") + e.what(), settings_at);
  }
  if (stack.camera.width != w || stack.camera.height != h)
    throw FormatError("settings camera dimensions disagree with header", settings_at);

  const std::size_t frame_bytes = Frame::row_bytes(w) * static_cast<std::size_t>(h);
  stack.frames.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint8_t* p = r.take(frame_bytes, "frame data");
    Frame f(w, h);
    std::memcpy(f.bytes().data(), p, frame_bytes);
    stack.frames.push_back(std::move(f));
  }
  if (!r.at_end())
    throw FormatError("trailing bytes after last frame", r.offset());
  return stack;
}

void write_stack(const FrameStack& stack, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = encode_stack(stack);
  // Write-then-rename so a crash never leaves a half-written stack.
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

FrameStack read_stack(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::streamsize size = in.tellg();
  in.seekg(0);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
  in.read(reinterpret_cast<char*>(bytes.data()), size);
  if (!in) throw std::runtime_error("read failed: " + path.string());
  return decode_stack(bytes);
}

}  // namespace homsim
