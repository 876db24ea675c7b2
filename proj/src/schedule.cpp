#include "skewkit/schedule.hpp"

namespace skewkit {

std::string_view to_string(Phase p) { return p == Phase::AFirst ? "a_first" : "b_first"; }

std::optional<Phase> parse_phase(std::string_view text) {
  if (text == "a_first") return Phase::AFirst;
  if (text == "b_first") return Phase::BFirst;
  return std::nullopt;
}

Cycle CycleSchedule::cycle_at(std::uint64_t slot) const {
  const bool even = (slot / period_slots) % 2 == 0;
  const bool a = phase == Phase::AFirst ? even : !even;
  return a ? Cycle::A : Cycle::B;
}

std::uint32_t CycleSchedule::count(Cycle c) const {
  std::uint32_t n = 0;
  for (std::uint32_t s = 0; s < horizon_slots; ++s) n += cycle_at(s) == c;
  return n;
}

std::uint32_t CycleSchedule::horizon_days() const {
  return (horizon_slots + slots_per_day - 1) / slots_per_day;
}

CycleSchedule make_schedule(std::uint32_t period, std::uint32_t horizon, Phase phase,
                            std::uint32_t slots_per_day) {
  if (period < 1) throw InvalidArgument("schedule period must be >= 1");
  if (horizon < 1) throw InvalidArgument("schedule horizon must be >= 1");
  if (slots_per_day != 1 && slots_per_day != 2)
    throw InvalidArgument("slots_per_day must be 1 (whole days) or 2 (half days)");
  return CycleSchedule{period, slots_per_day, horizon, phase};
}

}  // namespace skewkit
