#pragma once

#include "forge/check.hpp"
#include "forge/errors.hpp"
#include "forge/gates.hpp"
#include "forge/graph.hpp"
#include "forge/graph_io.hpp"
#include "forge/lps.hpp"
#include "forge/matching.hpp"
#include "forge/peel.hpp"
#include "forge/pipeline.hpp"
#include "forge/random.hpp"
#include "forge/schema.hpp"
#include "forge/spectral.hpp"
#include "forge/surgery.hpp"
