#pragma once

#include "cissir/budget.hpp"
#include "cissir/channel.hpp"
#include "cissir/codebook.hpp"
#include "cissir/errors.hpp"
#include "cissir/io.hpp"
#include "cissir/sdp.hpp"
#include "cissir/sensing.hpp"
#include "cissir/split.hpp"
#include "cissir/tapered.hpp"
