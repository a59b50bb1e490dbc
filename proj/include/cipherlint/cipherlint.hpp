#pragma once

// Umbrella header: full pipeline from source text to rendered corpus report.

#include "cipherlint/source.hpp"
#include "cipherlint/lexer.hpp"
#include "cipherlint/ast.hpp"
#include "cipherlint/parser.hpp"
#include "cipherlint/imports.hpp"
#include "cipherlint/fold.hpp"
#include "cipherlint/catalog.hpp"
#include "cipherlint/matcher.hpp"
#include "cipherlint/slicer.hpp"
#include "cipherlint/analyzer.hpp"
#include "cipherlint/corpus.hpp"
#include "cipherlint/report.hpp"
#include "cipherlint/cli.hpp"
