#ifndef HOMENT_HOMENT_HPP
#define HOMENT_HOMENT_HPP

#include "homent/analytic.hpp"
#include "homent/complex.hpp"
#include "homent/entropy.hpp"
#include "homent/errors.hpp"
#include "homent/graph.hpp"
#include "homent/homology.hpp"
#include "homent/infogeo.hpp"
#include "homent/parallel.hpp"
#include "homent/rng.hpp"
#include "homent/sweep.hpp"
#include "homent/version.hpp"

#endif  // HOMENT_HOMENT_HPP
