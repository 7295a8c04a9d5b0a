#pragma once

// Umbrella header for the full pipeline: ingestion, preprocessing,
// correlation-ranked feature selection, the classifier families, the
// feed-forward network, evaluation metrics, and the experiment runner.

#include "netml/classifiers/model.hpp"
#include "netml/csv.hpp"
#include "netml/dataset.hpp"
#include "netml/error.hpp"
#include "netml/experiment.hpp"
#include "netml/feature_select.hpp"
#include "netml/ingest.hpp"
#include "netml/metrics.hpp"
#include "netml/mlp.hpp"
#include "netml/model_io.hpp"
#include "netml/pipeline.hpp"
#include "netml/preprocess.hpp"
#include "netml/rng.hpp"
