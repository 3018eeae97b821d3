#pragma once

// Umbrella header.

#include "frust/analysis.hpp"
#include "frust/correlation.hpp"
#include "frust/dates.hpp"
#include "frust/errors.hpp"
#include "frust/hierarchy.hpp"
#include "frust/ingest.hpp"
#include "frust/io_formats.hpp"
#include "frust/measures.hpp"
#include "frust/numfmt.hpp"
#include "frust/pipeline.hpp"
#include "frust/reference_data.hpp"
#include "frust/relations.hpp"
