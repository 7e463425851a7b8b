#pragma once

#include <map>
#include <string>

namespace susyqm {

/// Named real parameters of a superpotential family. Ordered so that every
/// traversal (and every serialized form) is deterministic.
using ParamMap = std::map<std::string, double>;

/// "A=2, B=0.5" style rendering for messages.
std::string describe(const ParamMap& params);

}  // namespace susyqm
