#pragma once

#include <string>

namespace optswitch {

/// Shortest round-trippable decimal form (17 significant digits).
std::string g17(double v);

}  // namespace optswitch
