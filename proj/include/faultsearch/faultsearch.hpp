#ifndef FAULTSEARCH_FAULTSEARCH_HPP
#define FAULTSEARCH_FAULTSEARCH_HPP

#include "faultsearch/formulas.hpp"
#include "faultsearch/strategy.hpp"
#include "faultsearch/simulator.hpp"
#include "faultsearch/cover.hpp"
#include "faultsearch/potential.hpp"
#include "faultsearch/fractional.hpp"
#include "faultsearch/io.hpp"

#endif
