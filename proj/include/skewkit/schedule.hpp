#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "skewkit/core.hpp"

namespace skewkit {

enum class Phase : std::uint8_t { AFirst, BFirst };
std::string_view to_string(Phase p);
std::optional<Phase> parse_phase(std::string_view text);

/// Alternation of split campaigns between cycles A and B.
/// Slot s belongs to A iff floor(s / period_slots) is even (AFirst) or odd
/// (BFirst). A slot is a whole day when slots_per_day == 1, else a half day.
struct CycleSchedule {
  std::uint32_t period_slots = 1;
  std::uint32_t slots_per_day = 1;
  std::uint32_t horizon_slots = 0;
  Phase phase = Phase::AFirst;

  Cycle cycle_at(std::uint64_t slot) const;
  std::uint32_t count(Cycle c) const;
  /// Both cycles get the same number of slots over the horizon.
  bool balanced() const { return count(Cycle::A) == count(Cycle::B); }
  std::uint32_t horizon_days() const;

  friend bool operator==(const CycleSchedule&, const CycleSchedule&) = default;
};

/// period and horizon are in slots; with the default one slot per day they
/// are days. slots_per_day must be 1 or 2.
CycleSchedule make_schedule(std::uint32_t period, std::uint32_t horizon, Phase phase,
                            std::uint32_t slots_per_day = 1);

}  // namespace skewkit
