#pragma once

#include <cstdint>
#include <string>

#include "blotto/game_model.hpp"

namespace blotto {

// Parses a game object {n, v_A, v_B, T_A, T_B}. An object with a "game"
// member (as written by `solve --format json`) is accepted as well.
GameDatum parse_game(const std::string& json_text);
GameDatum load_game_file(const std::string& path);

// Canonical datum as a game object that parse_game reads back unchanged.
std::string game_to_json(const GameDatum& datum);

// FNV-1a over the canonical JSON text.
std::uint64_t game_hash(const GameDatum& datum);

}  // namespace blotto
