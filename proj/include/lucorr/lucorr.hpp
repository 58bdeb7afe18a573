#pragma once

#include "lucorr/correlation.hpp"
#include "lucorr/dicke.hpp"
#include "lucorr/error.hpp"
#include "lucorr/ghz.hpp"
#include "lucorr/graph.hpp"
#include "lucorr/operator_basis.hpp"
#include "lucorr/party_set.hpp"
#include "lucorr/pauli.hpp"
#include "lucorr/polynomial.hpp"
#include "lucorr/random.hpp"
#include "lucorr/report_io.hpp"
#include "lucorr/state.hpp"
#include "lucorr/state_io.hpp"
#include "lucorr/walsh_hadamard.hpp"
