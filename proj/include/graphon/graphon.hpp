#ifndef GRAPHON_GRAPHON_HPP
#define GRAPHON_GRAPHON_HPP

#include "graphon/bitmatrix.hpp"
#include "graphon/builtin.hpp"
#include "graphon/connectivity.hpp"
#include "graphon/core.hpp"
#include "graphon/error.hpp"
#include "graphon/linalg.hpp"
#include "graphon/matrix.hpp"
#include "graphon/metrics.hpp"
#include "graphon/sampler.hpp"
#include "graphon/varadhan.hpp"

#endif  // GRAPHON_GRAPHON_HPP
