// qsa.hpp: umbrella header

#pragma once

#include "qsa/adversary.hpp"
#include "qsa/bid.hpp"
#include "qsa/montecarlo.hpp"
#include "qsa/permutation.hpp"
#include "qsa/protocol.hpp"
#include "qsa/report.hpp"
#include "qsa/rng.hpp"
#include "qsa/serialize.hpp"
#include "qsa/scenario.hpp"
#include "qsa/statevector.hpp"
#include "qsa/states.hpp"
#include "qsa/transcript.hpp"
#include "qsa/world.hpp"
