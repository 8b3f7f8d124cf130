#ifndef REGDIGRAPH_REGDIGRAPH_HPP
#define REGDIGRAPH_REGDIGRAPH_HPP

#include "arithmetic.hpp"
#include "config.hpp"
#include "core.hpp"
#include "csv.hpp"
#include "exact.hpp"
#include "experiments.hpp"
#include "random.hpp"
#include "rerandom.hpp"
#include "sampler.hpp"
#include "spectral.hpp"
#include "structures.hpp"
#include "vectorclass.hpp"

#endif
