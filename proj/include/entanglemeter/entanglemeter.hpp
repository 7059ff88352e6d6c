#pragma once

#include "bounds.hpp"
#include "compare.hpp"
#include "detection.hpp"
#include "emit.hpp"
#include "linalg.hpp"
#include "measures.hpp"
#include "parallel.hpp"
#include "partitions.hpp"
#include "qstate.hpp"
#include "report.hpp"
#include "roof.hpp"
#include "state_io.hpp"
#include "states.hpp"
