#pragma once

#include "ledgerlint/address.hpp"
#include "ledgerlint/audit.hpp"
#include "ledgerlint/cashflow.hpp"
#include "ledgerlint/csv.hpp"
#include "ledgerlint/date.hpp"
#include "ledgerlint/daycount.hpp"
#include "ledgerlint/depreciation.hpp"
#include "ledgerlint/error.hpp"
#include "ledgerlint/formula/ast.hpp"
#include "ledgerlint/formula/evaluate.hpp"
#include "ledgerlint/formula/evaluator.hpp"
#include "ledgerlint/formula/functions.hpp"
#include "ledgerlint/formula/lexer.hpp"
#include "ledgerlint/formula/parser.hpp"
#include "ledgerlint/formula/printer.hpp"
#include "ledgerlint/loan.hpp"
#include "ledgerlint/numfmt.hpp"
#include "ledgerlint/rates.hpp"
#include "ledgerlint/report.hpp"
#include "ledgerlint/sheet.hpp"
#include "ledgerlint/types.hpp"
