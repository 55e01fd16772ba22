#pragma once

#include "nrbl/core.hpp"
#include "nrbl/datagen.hpp"
#include "nrbl/ensembles.hpp"
#include "nrbl/fourier.hpp"
#include "nrbl/literal.hpp"
#include "nrbl/noise.hpp"
#include "nrbl/rng.hpp"
#include "nrbl/trapsearch.hpp"

namespace nrbl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nrbl
