#pragma once

#include "bhg/types.hpp"
#include "bhg/dah.hpp"
#include "bhg/chain_graph.hpp"
#include "bhg/projection.hpp"
#include "bhg/markov.hpp"
#include "bhg/factor.hpp"
#include "bhg/factorization.hpp"
#include "bhg/intervention.hpp"
#include "bhg/oracle.hpp"
#include "bhg/io.hpp"
