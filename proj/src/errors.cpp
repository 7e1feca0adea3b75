#include "cylbem/errors.hpp"

namespace cylbem {

std::string describe_warnings(unsigned flags) {
  if (flags == kNoWarning) return "none";
  std::string out;
  auto add = [&](unsigned bit, const char* name) {
    if ((flags & bit) == 0) return;
    if (!out.empty()) out += '|';
    out += name;
  };
  add(kTruncationWarning, "truncation");
  add(kNearSingularWarning, "near_singular");
  add(kResonanceFlag, "resonance");
  add(kDivisionFlag, "division");
  return out;
}

}  // namespace cylbem
