#pragma once

#include "credalpac/bounds.hpp"
#include "credalpac/complexity.hpp"
#include "credalpac/core.hpp"
#include "credalpac/credal.hpp"
#include "credalpac/errors.hpp"
#include "credalpac/random.hpp"
#include "credalpac/harness/config.hpp"
#include "credalpac/harness/experiment.hpp"
#include "credalpac/harness/falsify.hpp"
#include "credalpac/harness/report.hpp"
