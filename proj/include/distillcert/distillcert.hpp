#pragma once

#include "bbpssw.hpp"
#include "canonical.hpp"
#include "certificate.hpp"
#include "criteria.hpp"
#include "distill.hpp"
#include "ensembles.hpp"
#include "error.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "random.hpp"
#include "range.hpp"
#include "statecore.hpp"
#include "verify.hpp"
