#include "isoclass/error.hpp"

#include <string>
#include <utility>

namespace isoclass {

Indeterminate::Indeterminate(std::string quantity, double value, double threshold)
    : std::runtime_error("indeterminate at given tolerance: " + quantity + " = " +
                         std::to_string(value) + " (threshold " + std::to_string(threshold) + ")"),
      quantity_(std::move(quantity)),
      value_(value),
      threshold_(threshold) {}

}  // namespace isoclass
