#pragma once

#include "dlmc/builder.hpp"
#include "dlmc/circuit.hpp"
#include "dlmc/compile_cot.hpp"
#include "dlmc/compile_remask.hpp"
#include "dlmc/compile_revision.hpp"
#include "dlmc/dist_check.hpp"
#include "dlmc/distribution.hpp"
#include "dlmc/dlm.hpp"
#include "dlmc/error.hpp"
#include "dlmc/gadgets.hpp"
#include "dlmc/netlist.hpp"
#include "dlmc/parity.hpp"
#include "dlmc/rational.hpp"
