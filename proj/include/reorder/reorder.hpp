#pragma once

#include "reorder/inversion.hpp"
#include "reorder/matching.hpp"
#include "reorder/oracle.hpp"
#include "reorder/receiver.hpp"
#include "reorder/textio.hpp"
#include "reorder/types.hpp"
