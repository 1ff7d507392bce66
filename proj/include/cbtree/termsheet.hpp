#pragma once

#include <string>
#include <string_view>

#include "cbtree/instrument.hpp"

namespace cbtree {

/// Parses the flat `key = value` term-sheet format:
///
///   # comment
///   issue    = 2009-01-06
///   maturity = 2014-01-06
///   face     = 100
///   recovery = 0.4
///   coupon.rate  = 0.08
///   coupon.dates = 2009-07-06 2010-01-06
///   conversion.window = 2009-01-06..2014-01-06
///   conversion.1.from  = 2009-01-06
///   conversion.1.ratio = 1
///   call.1.window = 2011-01-06..2014-01-06
///   call.1.price  = 110
///   put.1.date  = 2012-01-06
///   put.1.price = 105
///
/// Dates are ISO-8601, windows are `start..end` (inclusive), repeated
/// provisions are numbered from 1. Unknown or duplicate keys are errors.
/// Throws ParseError (with line and field) on malformed text and
/// std::invalid_argument when the parsed sheet fails ConvertibleTerms
/// validation.
ConvertibleTerms parse_termsheet(std::string_view text);

/// parse_termsheet over the contents of a file. Throws std::runtime_error
/// when the file cannot be read.
ConvertibleTerms load_termsheet(const std::string& path);

/// Canonical emission of the same format; parse_termsheet(write_termsheet(t))
/// reproduces t exactly.
std::string write_termsheet(const ConvertibleTerms& terms);

} // namespace cbtree
