#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "criterion.hpp"
#include "errors.hpp"
#include "fusion_ring.hpp"
#include "search.hpp"

namespace mink {

struct RingRecord {
    FusionRing ring;
    std::string provenance; // free-form source note; carried by JSON only
};

struct Dataset {
    std::vector<RingRecord> rings;
    std::vector<Certificate> certificates;
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg, std::size_t line = 0);
    /* 1-based input line for text datasets; 0 when not line-addressable. */
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/* Text dataset format, one ring per block:

     # label
     s x s matrix for basis element 1
     ...
     s x s matrix for basis element s

   The l-th matrix holds N_{lm}^n at row n, column m (the display
   convention); the rank is inferred from the first row's width.  Blank
   lines are ignored.  Labels must be unique. */
Dataset parse_dataset_text(std::istream& in);
void serialize_dataset_text(const Dataset& ds, std::ostream& out);

/* JSON dataset: either a bare array of ring objects or
   {"rings": [...], "certificates": [...]}.  A ring object carries
   "label", "matrices" (display convention) and optionally "rank" and
   "provenance".  Certificates use 1-based triples and round-trip all
   floating-point fields exactly. */
Dataset parse_dataset_json(const std::string& text);
std::string serialize_dataset_json(const Dataset& ds);

/* Sniff JSON ('{' or '[' first) vs text. */
Dataset parse_dataset(const std::string& text);

std::string certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const std::string& text);

/* Commuting-square JSON: {"t00_01": [[..]], "t01_11": [[..]],
   "t00_10": [[..]], "t10_11": [[..]], "v11": [..], "label": optional}. */
CommutingSquareSpec parse_square_json(const std::string& text);
std::string serialize_square_json(const CommutingSquareSpec& spec);

enum class ReportFormat { table, csv, json };

ReportFormat report_format_from_name(const std::string& name);

/* Deterministic rendering of a scan report; identical bytes for any
   thread count.  "table" is a human-readable text layout whose final
   sections bucket exclusions by max multiplicity (rows) x rank
   (columns), with counts and percentages; "csv" is one row per ring
   with the certificate inline; "json" embeds everything. */
std::string render_report(const ScanReport& report, ReportFormat format);

} // namespace mink
