#pragma once

#include "logcov/common.hpp"
#include "logcov/compare.hpp"
#include "logcov/corpus.hpp"
#include "logcov/coverage.hpp"
#include "logcov/drain.hpp"
#include "logcov/masking.hpp"
#include "logcov/pipeline.hpp"
#include "logcov/report.hpp"
#include "logcov/runsets.hpp"
