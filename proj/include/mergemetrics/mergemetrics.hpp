#pragma once

#include "mergemetrics/barcode.hpp"
#include "mergemetrics/chambers.hpp"
#include "mergemetrics/errors.hpp"
#include "mergemetrics/generate.hpp"
#include "mergemetrics/interleaving.hpp"
#include "mergemetrics/io.hpp"
#include "mergemetrics/matrix.hpp"
#include "mergemetrics/paths.hpp"
#include "mergemetrics/svg.hpp"
#include "mergemetrics/tree.hpp"
