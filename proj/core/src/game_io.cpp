#include "blotto/game_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "blotto/errors.hpp"

namespace blotto {
namespace {

using nlohmann::json;

std::vector<double> read_vector(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw ValidationError(std::string("game file: missing array field ") + key);
  }
  std::vector<double> out;
  for (const auto& x : j[key]) {
    if (!x.is_number()) {
      throw ValidationError(std::string("game file: non-numeric entry in ") + key);
    }
    out.push_back(x.get<double>());
  }
  return out;
}

double read_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw ValidationError(std::string("game file: missing numeric field ") + key);
  }
  return j[key].get<double>();
}

}  // namespace

GameDatum parse_game(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("game file: malformed JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("game")) j = j["game"];
  if (!j.is_object()) throw ValidationError("game file: expected a JSON object");
  auto v_a = read_vector(j, "v_A");
  auto v_b = read_vector(j, "v_B");
  const double t_a = read_number(j, "T_A");
  const double t_b = read_number(j, "T_B");
  if (j.contains("n")) {
    if (!j["n"].is_number_integer() || j["n"].get<long long>() < 0 ||
        static_cast<std::size_t>(j["n"].get<long long>()) != v_a.size()) {
      throw DimensionMismatchError("game file: n does not match the value vectors");
    }
  }
  return validate_game(v_a, v_b, t_a, t_b);
}

GameDatum load_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open game file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read game file " + path);
  return parse_game(buf.str());
}

std::string game_to_json(const GameDatum& datum) {
  json j;
  j["n"] = datum.n;
  j["v_A"] = datum.v_a;
  j["v_B"] = datum.v_b;
  j["T_A"] = datum.t_a;
  j["T_B"] = datum.t_b;
  return j.dump();
}

std::uint64_t game_hash(const GameDatum& datum) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : game_to_json(datum)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace blotto
