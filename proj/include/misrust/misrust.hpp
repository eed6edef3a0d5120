#pragma once

#include "misrust/ast.hpp"
#include "misrust/callgraph.hpp"
#include "misrust/checks.hpp"
#include "misrust/config.hpp"
#include "misrust/corpus.hpp"
#include "misrust/diagnostics.hpp"
#include "misrust/engine.hpp"
#include "misrust/lexer.hpp"
#include "misrust/options.hpp"
#include "misrust/parser.hpp"
#include "misrust/registry.hpp"
#include "misrust/report.hpp"
#include "misrust/span.hpp"
#include "misrust/unsafe_analysis.hpp"
#include "misrust/version.hpp"
