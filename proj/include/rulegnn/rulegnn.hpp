#pragma once

#include "cache.hpp"
#include "checkpoint.hpp"
#include "config.hpp"
#include "dataset.hpp"
#include "error.hpp"
#include "export.hpp"
#include "folds.hpp"
#include "graph.hpp"
#include "isomorphism.hpp"
#include "labeling.hpp"
#include "layer.hpp"
#include "layout.hpp"
#include "model.hpp"
#include "optimizer.hpp"
#include "patterns.hpp"
#include "presets.hpp"
#include "synthetic.hpp"
#include "training.hpp"
