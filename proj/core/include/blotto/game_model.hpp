#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace blotto {

enum class Player { A, B };

inline Player opponent(Player p) { return p == Player::A ? Player::B : Player::A; }
inline char player_name(Player p) { return p == Player::A ? 'A' : 'B'; }

struct PlayerRole {
  Player role = Player::A;
  // True when canonicalization exchanged the input labels.
  bool swapped = false;
};

// Canonical game: value vectors sum to one and T_A >= T_B.
struct GameDatum {
  std::size_t n = 0;
  std::vector<double> v_a;
  std::vector<double> v_b;
  double t_a = 0.0;
  double t_b = 0.0;
  bool swapped = false;

  const std::vector<double>& values(Player p) const {
    return p == Player::A ? v_a : v_b;
  }
  double budget(Player p) const { return p == Player::A ? t_a : t_b; }
  PlayerRole role(Player p) const { return {p, swapped}; }
  bool symmetric() const { return v_a == v_b; }
};

// Content equality, ignoring the swap flag.
bool same_game(const GameDatum& x, const GameDatum& y);

// Validates raw input, normalizes values and relabels players so T_A >= T_B.
GameDatum validate_game(std::span<const double> raw_values_a,
                        std::span<const double> raw_values_b, double budget_a,
                        double budget_b);

// Canonical player holding the given input label.
Player canonical_player(const GameDatum& datum, Player input_label);

// Sum of u_i^2 / v_i minus one.
double chi_squared(std::span<const double> u, std::span<const double> v);

}  // namespace blotto
