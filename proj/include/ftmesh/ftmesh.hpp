#pragma once

#include "ftmesh/circuit.hpp"
#include "ftmesh/experiments.hpp"
#include "ftmesh/fourier.hpp"
#include "ftmesh/io.hpp"
#include "ftmesh/metrics.hpp"
#include "ftmesh/optimize.hpp"
#include "ftmesh/parallel.hpp"
#include "ftmesh/rng.hpp"
#include "ftmesh/sampling.hpp"
#include "ftmesh/types.hpp"
