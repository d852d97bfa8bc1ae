#pragma once

#include "qlr/core.hpp"
#include "qlr/linalg.hpp"
#include "qlr/exact.hpp"
#include "qlr/localratio.hpp"
#include "qlr/evc.hpp"
#include "qlr/gadgets.hpp"
#include "qlr/random.hpp"
#include "qlr/io.hpp"
#include "qlr/bench.hpp"

namespace qlr {
inline constexpr const char* kVersion = "0.1.0";
}
