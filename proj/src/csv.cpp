#include "optswitch/csv.hpp"

#include <cstdio>

namespace optswitch {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace optswitch
