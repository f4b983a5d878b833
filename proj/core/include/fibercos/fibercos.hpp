#pragma once

#include "fibercos/error.hpp"
#include "fibercos/fiber_field.hpp"
#include "fibercos/gramian_engine.hpp"
#include "fibercos/oracle.hpp"
#include "fibercos/sampling.hpp"
#include "fibercos/subspace_geometry.hpp"
#include "fibercos/transforms.hpp"
#include "fibercos/types.hpp"
