#include "reconn/checkpoint.hpp"

#include <fstream>

namespace reconn {

using nlohmann::json;

namespace {

json level_sets_json(std::span<const LevelSet> ls) {
  json arr = json::array();
  for (const auto& l : ls) {
    json e{{"kind", LevelSet::kind_name(l.kind)}};
    if (l.kind == LevelSet::Kind::Circle) e["c"] = l.circle_c;
    if (l.kind == LevelSet::Kind::Point1D) {
      e["center"] = l.center;
      e["scale"] = l.scale;
    }
    arr.push_back(e);
  }
  return arr;
}

const Mlp* main_net(const Field& field) {
  if (const auto* f = dynamic_cast<const ClassicalField*>(&field)) return &f->net();
  if (const auto* f = dynamic_cast<const InterfaceField*>(&field)) return &f->net();
  if (const auto* f = dynamic_cast<const CornerField*>(&field)) return &f->net();
  if (const auto* f = dynamic_cast<const MaterialVertexField*>(&field))
    return &f->net();
  return nullptr;
}

}  // namespace

json field_descriptor(const Field& field) {
  json d;
  d["kind"] = field.kind();
  d["dim"] = field.dim();
  d["param_count"] = field.param_count();
  if (const Mlp* net = main_net(field)) {
    d["sizes"] = net->sizes();
    d["activation"] = net->activation() == Activation::Tanh ? "tanh" : "relu";
  }
  if (!field.level_sets().empty())
    d["level_sets"] = level_sets_json(field.level_sets());
  const auto units = field.singular_units();
  if (!units.empty()) {
    json ju = json::array();
    for (const auto& u : units) {
      json e;
      e["center"] = {u.center[0], u.center[1]};
      e["angular_sizes"] = u.angular.sizes();
      e["modes"] = u.modes;
      e["cutoff"] = {{"delta1", u.cutoff.delta1}, {"delta2", u.cutoff.delta2}};
      ju.push_back(e);
    }
    d["singular_units"] = ju;
    d["lambda"] = field.lambda_values();
  }
  return d;
}

void save_checkpoint(const Field& field, const std::string& prefix) {
  {
    std::ofstream js(prefix + ".json");
    js << field_descriptor(field).dump(2) << "\n";
  }
  std::ofstream bin(prefix + ".bin", std::ios::binary);
  const auto& p = field.params();
  bin.write(reinterpret_cast<const char*>(p.data()),
            static_cast<std::streamsize>(p.size() * sizeof(double)));
}

void load_checkpoint(Field& field, const std::string& prefix) {
  std::ifstream js(prefix + ".json");
  if (!js) throw std::runtime_error("cannot open " + prefix + ".json");
  json d = json::parse(js);
  if (d.at("kind").get<std::string>() != field.kind())
    throw std::runtime_error("checkpoint kind mismatch");
  if (d.at("param_count").get<std::size_t>() != field.param_count())
    throw std::runtime_error("checkpoint parameter count mismatch");
  std::ifstream bin(prefix + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open " + prefix + ".bin");
  auto& p = field.params();
  bin.read(reinterpret_cast<char*>(p.data()),
           static_cast<std::streamsize>(p.size() * sizeof(double)));
  if (bin.gcount() != static_cast<std::streamsize>(p.size() * sizeof(double)))
    throw std::runtime_error("checkpoint binary truncated");
}

}  // namespace reconn
