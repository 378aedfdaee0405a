#pragma once

#include <string>

namespace oscpert {

/// Round-trip decimal form with 17 significant digits ("%.17g").
std::string format_real(double x);

}  // namespace oscpert
