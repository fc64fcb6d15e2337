#include "adtrans/level_scheme.hpp"

#include <algorithm>
#include <cctype>

#include "adtrans/errors.hpp"

namespace adtrans {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(Orientation o) { return o == Orientation::Up ? "Up" : "Down"; }

Orientation orientation_from_string(std::string_view s) {
  const auto l = lower(s);
  if (l == "up") return Orientation::Up;
  if (l == "down") return Orientation::Down;
  throw ContractViolation("orientation must be Up or Down, got '" + std::string(s) + "'");
}

LevelScheme::LevelScheme(int n_levels, std::vector<Orientation> orientation,
                         std::vector<std::vector<int>> degeneracy_groups)
    : n_levels_(n_levels), orientation_(std::move(orientation)) {
  if (n_levels < kMinLevels || n_levels > kMaxLevels) {
    throw ContractViolation("number of levels must be in [2, 8], got " + std::to_string(n_levels));
  }
  if (static_cast<int>(orientation_.size()) != n_levels - 1) {
    throw ContractViolation("need one orientation per transition (" + std::to_string(n_levels - 1) +
                            "), got " + std::to_string(orientation_.size()));
  }
  const int nt = n_levels - 1;
  group_index_.assign(nt, -1);
  for (auto& g : degeneracy_groups) {
    if (g.empty()) throw ContractViolation("empty degeneracy group");
    std::sort(g.begin(), g.end());
    for (int t : g) {
      if (t < 0 || t >= nt) {
        throw ContractViolation("degeneracy group refers to transition " + std::to_string(t + 1) +
                                " outside 1.." + std::to_string(nt));
      }
      if (group_index_[t] != -1) {
        throw ContractViolation("transition " + std::to_string(t + 1) +
                                " appears in more than one degeneracy group");
      }
      group_index_[t] = 0;
    }
    groups_.push_back(g);
  }
  for (int t = 0; t < nt; ++t) {
    if (group_index_[t] == -1) groups_.push_back({t});
  }
  std::sort(groups_.begin(), groups_.end());
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    for (int t : groups_[g]) group_index_[t] = static_cast<int>(g);
  }
}

int LevelScheme::group_leader(int transition) const {
  return groups_.at(group_of(transition)).front();
}

LevelScheme LevelScheme::with_degeneracy(std::vector<std::vector<int>> groups) const {
  return LevelScheme(n_levels_, orientation_, std::move(groups));
}

LevelScheme LevelScheme::lambda() { return {3, {Orientation::Up, Orientation::Down}}; }
LevelScheme LevelScheme::vee() { return {3, {Orientation::Down, Orientation::Up}}; }

LevelScheme LevelScheme::m_system() {
  using O = Orientation;
  return {5, {O::Up, O::Down, O::Up, O::Down}};
}

LevelScheme LevelScheme::w_system() {
  using O = Orientation;
  return {5, {O::Down, O::Up, O::Down, O::Up}};
}

LevelScheme LevelScheme::ladder(int n_levels) {
  return {n_levels, std::vector<Orientation>(std::max(n_levels - 1, 0), Orientation::Up)};
}

LevelScheme LevelScheme::named(std::string_view name) {
  const auto l = lower(name);
  if (l == "m" || l == "m-system") return m_system();
  if (l == "w" || l == "w-system") return w_system();
  if (l == "ladder") return ladder();
  if (l == "lambda") return lambda();
  if (l == "vee" || l == "v") return vee();
  throw ContractViolation("unknown scheme name '" + std::string(name) + "'");
}

}  // namespace adtrans
