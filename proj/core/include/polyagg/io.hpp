#pragma once

#include <string>

#include "polyagg/aggregation.hpp"

namespace polyagg {

// Parses either the sum syntax "y^3 + 2y + 1" (positions get generated
// labels) or the labeled syntax "{i1: [d1,d2], i2: []}"; round-trips with
// poly_to_string / poly_to_labeled_string.
Poly parse_poly(const std::string& text);

// JSON formats.  Loaders validate everything they read and throw ParseError
// (malformed input), LawViolation (law failure, e.g. a bad composition
// table) or TypeMismatch (values outside declared carriers).
std::string category_to_json(const FinCategory& c);
FinCategory category_from_json(const std::string& text);

std::string copresheaf_to_json(const Copresheaf& x);                       // tables + maps
Copresheaf copresheaf_from_json(const CatPtr& c, const std::string& text);

std::string schema_to_json(const Schema& s);                               // category + monoids
Schema schema_from_json(const std::string& text);

std::string instance_to_json(const Instance& inst);                        // + attributes
Instance instance_from_json(const Schema& s, const std::string& text);

std::string query_to_json(const CatPtr& c, const DucQuery& q);             // pattern list
DucQuery query_from_json(const CatPtr& c, const std::string& text);

std::string span_to_json(const Span& s);
Span span_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace polyagg
