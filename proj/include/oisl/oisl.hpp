#pragma once

// Umbrella header: optical inter-satellite link channel statistics, average
// achievable rate, and cooperative-relay planning under Gaussian-beam
// pointing errors.

#include "oisl/beam.hpp"
#include "oisl/channel.hpp"
#include "oisl/constants.hpp"
#include "oisl/constellation.hpp"
#include "oisl/errors.hpp"
#include "oisl/pointing.hpp"
#include "oisl/quadrature.hpp"
#include "oisl/rate.hpp"
#include "oisl/rng.hpp"
#include "oisl/special.hpp"
