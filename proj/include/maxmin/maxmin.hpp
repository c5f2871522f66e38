#pragma once

#include "errors.hpp"
#include "model.hpp"
#include "engine.hpp"
#include "schedulers.hpp"
#include "oracle.hpp"
#include "workload.hpp"
#include "experiment.hpp"
