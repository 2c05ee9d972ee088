#pragma once

#include "smfdfa/changepoint.hpp"
#include "smfdfa/error.hpp"
#include "smfdfa/forecast.hpp"
#include "smfdfa/io.hpp"
#include "smfdfa/longmemory.hpp"
#include "smfdfa/mfdfa.hpp"
#include "smfdfa/series.hpp"
#include "smfdfa/structured.hpp"
#include "smfdfa/surrogate.hpp"
#include "smfdfa/synth.hpp"
