#include "oscpert/format.hpp"

#include <cstdio>

namespace oscpert {

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace oscpert
