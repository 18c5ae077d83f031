#pragma once

#include "hypgas/error.hpp"
#include "hypgas/geometry.hpp"
#include "hypgas/potential.hpp"
#include "hypgas/scattering.hpp"
#include "hypgas/bounds.hpp"
#include "hypgas/manifolds.hpp"
#include "hypgas/oracles.hpp"
#include "hypgas/report.hpp"
