#pragma once

// Convenience umbrella header.

#include "mtlf/backtest.hpp"
#include "mtlf/calendar.hpp"
#include "mtlf/conditional_model.hpp"
#include "mtlf/config.hpp"
#include "mtlf/errors.hpp"
#include "mtlf/features.hpp"
#include "mtlf/forecast_io.hpp"
#include "mtlf/forecaster.hpp"
#include "mtlf/ingest.hpp"
#include "mtlf/linalg.hpp"
#include "mtlf/metrics.hpp"
#include "mtlf/model_bank.hpp"
#include "mtlf/oracles.hpp"
#include "mtlf/panel.hpp"
#include "mtlf/snapshot.hpp"
#include "mtlf/synthetic.hpp"
#include "mtlf/timestamp.hpp"
#include "mtlf/types.hpp"
