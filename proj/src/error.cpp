#include "valvecav/error.hpp"

#include <iostream>

namespace valvecav {

void log_warning(const std::string& message) {
  std::cerr << "warning: " << message << '\n';
}

}  // namespace valvecav
