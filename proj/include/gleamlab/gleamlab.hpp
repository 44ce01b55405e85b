#pragma once

#include "gleamlab/cache.hpp"
#include "gleamlab/diagram.hpp"
#include "gleamlab/error.hpp"
#include "gleamlab/exactalg.hpp"
#include "gleamlab/family.hpp"
#include "gleamlab/invariant.hpp"
#include "gleamlab/io.hpp"
#include "gleamlab/lattice.hpp"
#include "gleamlab/parallel.hpp"
#include "gleamlab/singular.hpp"
