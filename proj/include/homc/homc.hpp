#pragma once

// Umbrella header: the whole public API.

#include "homc/errors.hpp"
#include "homc/fixtures.hpp"
#include "homc/io.hpp"
#include "homc/limiting.hpp"
#include "homc/mfpt.hpp"
#include "homc/passage.hpp"
#include "homc/reduction.hpp"
#include "homc/simulate.hpp"
#include "homc/structure.hpp"
#include "homc/tensor.hpp"
#include "homc/version.hpp"
