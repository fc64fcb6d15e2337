#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace adtrans {

/// Energy ordering of a chain transition i -> i+1.
/// Up: level i+1 lies above level i.
enum class Orientation { Up, Down };

std::string_view to_string(Orientation o);
Orientation orientation_from_string(std::string_view s);

/// Chain-coupled level scheme.
///
/// Levels and transitions are 0-based in code; transition i couples
/// levels i and i+1. Degeneracy groups list transitions driven by one
/// physical field. The stored partition is normalized: every transition
/// appears exactly once, groups are sorted, singletons are explicit.
class LevelScheme {
 public:
  static constexpr int kMinLevels = 2;
  static constexpr int kMaxLevels = 8;

  LevelScheme(int n_levels, std::vector<Orientation> orientation,
              std::vector<std::vector<int>> degeneracy_groups = {});

  static LevelScheme lambda();   // 3 levels, Up Down
  static LevelScheme vee();      // 3 levels, Down Up
  static LevelScheme m_system(); // 5 levels, Up Down Up Down
  static LevelScheme w_system(); // 5 levels, Down Up Down Up
  static LevelScheme ladder(int n_levels = 5);

  /// Resolves "M", "W", "ladder", "lambda", "vee" (case-insensitive).
  static LevelScheme named(std::string_view name);

  int levels() const { return n_levels_; }
  int transitions() const { return n_levels_ - 1; }
  const std::vector<Orientation>& orientation() const { return orientation_; }
  const std::vector<std::vector<int>>& groups() const { return groups_; }

  int group_of(int transition) const { return group_index_.at(transition); }
  /// Lowest transition index in the group; its envelope drives the group.
  int group_leader(int transition) const;
  bool shares_field(int a, int b) const { return group_of(a) == group_of(b); }

  /// Same chain, different field sharing.
  LevelScheme with_degeneracy(std::vector<std::vector<int>> groups) const;
  LevelScheme independent() const { return with_degeneracy({}); }

  friend bool operator==(const LevelScheme&, const LevelScheme&) = default;

 private:
  int n_levels_;
  std::vector<Orientation> orientation_;
  std::vector<std::vector<int>> groups_;
  std::vector<int> group_index_;
};

}  // namespace adtrans
