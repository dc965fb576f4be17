#ifndef SMFRET_SMFRET_HPP
#define SMFRET_SMFRET_HPP

#include "smfret/error.hpp"
#include "smfret/model.hpp"
#include "smfret/correct.hpp"
#include "smfret/select.hpp"
#include "smfret/efficiency.hpp"
#include "smfret/histogram.hpp"
#include "smfret/fit.hpp"
#include "smfret/io.hpp"
#include "smfret/config.hpp"
#include "smfret/simulate.hpp"
#include "smfret/pipeline.hpp"

#endif  // SMFRET_SMFRET_HPP
