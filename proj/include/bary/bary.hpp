#pragma once

// Umbrella header: the whole library in one include.

#include "bary/barycenter.hpp"
#include "bary/centroid.hpp"
#include "bary/cli.hpp"
#include "bary/demo.hpp"
#include "bary/errors.hpp"
#include "bary/geom.hpp"
#include "bary/io.hpp"
#include "bary/measure.hpp"
#include "bary/oracle.hpp"
#include "bary/parallel.hpp"
#include "bary/scalar.hpp"
#include "bary/sparsity.hpp"
#include "bary/svg.hpp"
#include "bary/transport.hpp"
#include "bary/verify.hpp"
