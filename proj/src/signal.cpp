#include "ttda/signal.hpp"

#include <cmath>
#include <string>

#include "ttda/errors.hpp"

namespace ttda {

void validate(const Signal& s) {
  if (!(s.sample_rate > 0.0) || !std::isfinite(s.sample_rate)) {
    throw DomainError("signal sample_rate must be positive, got " +
                      std::to_string(s.sample_rate));
  }
  if (s.samples.empty()) throw DomainError("signal has no samples");
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    if (!std::isfinite(s.samples[i])) {
      throw DomainError("signal sample " + std::to_string(i) + " is not finite");
    }
  }
}

}  // namespace ttda
