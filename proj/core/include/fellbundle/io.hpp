// JSON file formats and deterministic serialization.
//
// Groupoid: {"arrows": N, "units": [...], "range": [...], "source": [...],
//            "inverse": [...], "compose": [[i,j,k], ...]}
//   (undefined pairs are simply omitted from "compose")
// Bundle:   {"groupoid": <inline object or path>, "kind": "trivial"|"twist"|
//            "crossed"|"custom", "dim": {"<unit>": n, ...},
//            "sigma": [[i,j,re,im], ...],
//            "alpha": {"unitaries": {"<arrow>": [[re,im], ...]}},
//            "custom": {"mult": [[a,b,i,j,[[re,im],...]], ...],
//                       "invol": [[a,i,[[re,im],...]], ...]}}
// Section:  {"values": {"<arrow>": [[re,im], ...]}}  (row-major entries)
//
// All floating-point values in emitted reports are rounded to 12
// significant digits before serialization so identical runs emit
// identical bytes.

#pragma once

#include <fellbundle/jmap.hpp>
#include <fellbundle/zwindow.hpp>

#include <filesystem>
#include <string>

namespace fell {

/// Parse failures and structural file problems.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double round12(double v);

GroupoidPtr load_groupoid_json(const std::string& text);
GroupoidPtr load_groupoid_file(const std::filesystem::path& path);
std::string groupoid_to_json(const FiniteGroupoid& g, int indent = 2);

/// base_dir resolves a relative "groupoid" path inside the bundle file.
BundlePtr load_bundle_json(const std::string& text, const std::filesystem::path& base_dir = {});
BundlePtr load_bundle_file(const std::filesystem::path& path);
std::string bundle_to_json(const FellBundle& bundle, int indent = 2);

Section load_section_json(const std::string& text, BundlePtr bundle);
Section load_section_file(const std::filesystem::path& path, BundlePtr bundle);
std::string section_to_json(const Section& f, int indent = 2);

std::string validation_report_to_json(const ValidationReport& report, int indent = 2);
std::string verification_report_to_json(const VerificationReport& report, std::uint64_t seed,
                                        int num_random, int indent = 2);

/// {"unit_norms": {"<unit>": v}, "reduced_norm": v, "sup_norm": v}
std::string norms_to_json(const Section& f, int indent = 2);

std::string zwindow_table_to_json(const ZWindowTable& table, int indent = 2);
std::string zwindow_table_to_csv(const ZWindowTable& table);

}  // namespace fell
