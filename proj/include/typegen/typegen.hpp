#pragma once

// Everything: catalog, docstring inference, frontend, turtle analysis,
// duck typing, dataset assembly and evaluation.

#include "typegen/catalog.hpp"
#include "typegen/common.hpp"
#include "typegen/config.hpp"
#include "typegen/corpus.hpp"
#include "typegen/dataset.hpp"
#include "typegen/doc_index.hpp"
#include "typegen/duck_typer.hpp"
#include "typegen/eval.hpp"
#include "typegen/frontend.hpp"
#include "typegen/ir.hpp"
#include "typegen/predictions.hpp"
#include "typegen/qualified_name.hpp"
#include "typegen/turtle_analysis.hpp"
#include "typegen/usage_map.hpp"
