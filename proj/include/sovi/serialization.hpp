#pragma once

// JSON encodings of Mdp and QTable.
//
//   MDP:     {"num_states", "num_actions", "gamma",
//             "transitions": [i][a][j], "rewards": [i][a][j]}
//   Q-table: {"num_states", "num_actions", "values": [i][a]}
//
// Doubles are written in shortest round-trip form, so load(save(x)) == x.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "sovi/mdp.hpp"

namespace sovi {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string mdp_to_json(const Mdp& m);
/// Parses and validates. Throws FormatError on malformed JSON, wrong shapes
/// or a failed validate_mdp().
Mdp mdp_from_json(const std::string& text);

void save_mdp(const Mdp& m, std::ostream& out);
void save_mdp(const Mdp& m, const std::filesystem::path& path);
Mdp load_mdp(std::istream& in);
Mdp load_mdp(const std::filesystem::path& path);

std::string qtable_to_json(const QTable& q);
QTable qtable_from_json(const std::string& text);

void save_qtable(const QTable& q, const std::filesystem::path& path);
QTable load_qtable(const std::filesystem::path& path);

}  // namespace sovi
