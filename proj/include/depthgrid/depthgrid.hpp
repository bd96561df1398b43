#pragma once

// Umbrella header.

#include "depthgrid/anfis.hpp"
#include "depthgrid/anfis_io.hpp"
#include "depthgrid/bench.hpp"
#include "depthgrid/error.hpp"
#include "depthgrid/filters.hpp"
#include "depthgrid/holefill.hpp"
#include "depthgrid/image.hpp"
#include "depthgrid/interp.hpp"
#include "depthgrid/metrics.hpp"
#include "depthgrid/pgm.hpp"
#include "depthgrid/rational.hpp"

namespace depthgrid {
inline constexpr const char* kVersion = "0.1.0";
}
