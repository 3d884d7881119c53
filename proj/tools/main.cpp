// Command-line front end. Subcommands:
//   validate  - parse an instance file and report every violated axiom
//   norm      - sup norm, per-unit norms, and the reduced norm of a section
//   convolve  - convolution product of two sections
//   jcheck    - the full verification suite over a bundle
//   zwindow   - window norms on the integers against the Fourier oracle
//   randgen   - seeded random instance files
//
// Exit codes: 0 success, 1 semantic failure (validation or checks), 2
// input error (unreadable/malformed files, bad parameters).

#include <fellbundle/instances.hpp>
#include <fellbundle/io.hpp>
#include <fellbundle/jmap.hpp>
#include <fellbundle/scenarios.hpp>
#include <fellbundle/zwindow.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw fell::ParseError("cannot write " + out_path);
    out << text << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"Fell-bundle computations over finite groupoids"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_path;
    std::string format = "json";
    std::uint64_t seed = 0;
    double tol = 1e-10;
    app.add_option("--out", out_path, "write output to a file instead of stdout");
    app.add_option("--format", format, "output format: json|csv|text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--seed", seed, "seed for all randomness");
    app.add_option("--tol", tol, "residual tolerance override");

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "validate a groupoid or bundle file");
    std::string validate_path;
    validate_cmd->add_option("path", validate_path, "instance file")->required();

    // norm
    auto* norm_cmd = app.add_subcommand("norm", "norms of a section");
    std::string norm_bundle, norm_section;
    norm_cmd->add_option("bundle", norm_bundle, "bundle file")->required();
    norm_cmd->add_option("section", norm_section, "section file")->required();

    // convolve
    auto* conv_cmd = app.add_subcommand("convolve", "convolution product of two sections");
    std::string conv_bundle, conv_f, conv_g;
    conv_cmd->add_option("bundle", conv_bundle, "bundle file")->required();
    conv_cmd->add_option("f", conv_f, "left section file")->required();
    conv_cmd->add_option("g", conv_g, "right section file")->required();

    // jcheck
    auto* jcheck_cmd = app.add_subcommand("jcheck", "run the verification suite");
    std::string jcheck_bundle;
    int jcheck_random = 25;
    jcheck_cmd->add_option("bundle", jcheck_bundle, "bundle file")->required();
    jcheck_cmd->add_option("--random", jcheck_random, "number of random sections");

    // zwindow
    auto* zw_cmd = app.add_subcommand("zwindow", "window norms on the integers");
    std::vector<std::string> zw_coeffs;
    std::vector<int> zw_windows = {4, 16, 64};
    int zw_grid = 4096;
    zw_cmd->add_option("--coeffs", zw_coeffs, "coefficients as k:re:im")->required();
    zw_cmd->add_option("--windows", zw_windows, "window sizes");
    zw_cmd->add_option("--grid", zw_grid, "initial oracle grid");

    // randgen
    auto* rand_cmd = app.add_subcommand("randgen", "emit a seeded random bundle file");
    std::string rand_kind = "trivial";
    int rand_size = 3;
    rand_cmd->add_option("--kind", rand_kind, "trivial|twist|crossed")
        ->check(CLI::IsMember({"trivial", "twist", "crossed"}));
    rand_cmd->add_option("--size", rand_size, "size hint (1..3)");

    CLI11_PARSE(app, argc, argv);

    if (validate_cmd->parsed()) {
        const std::string text = [&] {
            std::ifstream in(validate_path, std::ios::binary);
            if (!in) throw fell::ParseError("cannot open " + validate_path);
            std::ostringstream os;
            os << in.rdbuf();
            return os.str();
        }();
        // bundles carry a "kind" or "groupoid" field; bare groupoids have "arrows"
        const auto probe = nlohmann::json::parse(text, nullptr, false);
        if (probe.is_discarded()) throw fell::ParseError("malformed JSON");
        fell::ValidationReport report;
        if (probe.is_object() && (probe.contains("kind") || probe.contains("groupoid"))) {
            const auto bundle =
                fell::load_bundle_json(text, std::filesystem::path(validate_path).parent_path());
            report = fell::validate(bundle->groupoid());
            const auto bundle_report = fell::validate_bundle(*bundle, tol > 0 ? tol : 1e-10);
            report.violations.insert(report.violations.end(), bundle_report.violations.begin(),
                                     bundle_report.violations.end());
        } else {
            report = fell::validate(*fell::load_groupoid_json(text));
        }
        emit(format == "text" ? report.to_string() : fell::validation_report_to_json(report),
             out_path);
        return report.ok() ? kExitOk : kExitFail;
    }

    if (norm_cmd->parsed()) {
        const auto bundle = fell::load_bundle_file(norm_bundle);
        const auto f = fell::load_section_file(norm_section, bundle);
        emit(fell::norms_to_json(f), out_path);
        return kExitOk;
    }

    if (conv_cmd->parsed()) {
        const auto bundle = fell::load_bundle_file(conv_bundle);
        const auto f = fell::load_section_file(conv_f, bundle);
        const auto g = fell::load_section_file(conv_g, bundle);
        emit(fell::section_to_json(fell::convolve(f, g)), out_path);
        return kExitOk;
    }

    if (jcheck_cmd->parsed()) {
        const auto bundle = fell::load_bundle_file(jcheck_bundle);
        fell::VerificationReport report;
        try {
            fell::SuiteConfig config;
            config.num_random = jcheck_random;
            config.seed = seed;
            config.tol = tol;
            report = fell::run_suite(bundle, config);
        } catch (const std::invalid_argument& e) {
            std::cerr << "refused: " << e.what() << "\n";
            return kExitFail;
        }
        if (format == "text") {
            emit(report.summary(), out_path);
        } else {
            emit(fell::verification_report_to_json(report, seed, jcheck_random), out_path);
        }
        return report.all_pass() ? kExitOk : kExitFail;
    }

    if (zw_cmd->parsed()) {
        fell::ZWindowInstance inst;
        for (const auto& spec : zw_coeffs) {
            int k = 0;
            double re = 0.0, im = 0.0;
            if (std::sscanf(spec.c_str(), "%d:%lf:%lf", &k, &re, &im) != 3)
                throw fell::ParseError("coefficients must look like k:re:im");
            inst.coeffs[k] += fell::Cplx{re, im};
        }
        const auto table = fell::z_window_report(inst, zw_windows, zw_grid);
        emit(format == "csv" ? fell::zwindow_table_to_csv(table)
                             : fell::zwindow_table_to_json(table),
             out_path);
        return table.all_ok() ? kExitOk : kExitFail;
    }

    if (rand_cmd->parsed()) {
        fell::BundleKind kind = fell::BundleKind::Trivial;
        if (rand_kind == "twist") kind = fell::BundleKind::Twist;
        if (rand_kind == "crossed") kind = fell::BundleKind::CrossedProduct;
        const auto bundle = fell::make_random_instance(kind, rand_size, seed);
        emit(fell::bundle_to_json(*bundle), out_path);
        return kExitOk;
    }

    return kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const fell::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const fell::StructureError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
