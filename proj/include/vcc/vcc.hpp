#pragma once

#include "corona_spectra.hpp"
#include "graph.hpp"
#include "serialize.hpp"
#include "source.hpp"
#include "spectral.hpp"
#include "state_transfer.hpp"
