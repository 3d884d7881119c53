#include <fellbundle/io.hpp>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fell {

using ordered_json = nlohmann::ordered_json;

double round12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::strtod(buf, nullptr);
}

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

ordered_json parse(const std::string& text) {
    ordered_json j = ordered_json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw ParseError("malformed JSON");
    return j;
}

int parse_index_key(const std::string& key, const char* what) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(key, &pos);
        if (pos != key.size()) throw ParseError(std::string(what) + ": bad index key " + key);
        return v;
    } catch (const std::logic_error&) {
        throw ParseError(std::string(what) + ": bad index key " + key);
    }
}

// instance data serializes at full precision so files round-trip exactly;
// only report values go through round12
ordered_json matrix_to_json(const Mat& m) {
    ordered_json entries = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            entries.push_back({m(r, c).real(), m(r, c).imag()});
    return entries;
}

Mat matrix_from_json(const ordered_json& j, int rows, int cols, const char* what) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows * cols)
        throw ParseError(std::string(what) + ": expected " + std::to_string(rows * cols) +
                         " complex entries");
    Mat m(rows, cols);
    int i = 0;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw ParseError(std::string(what) + ": entries must be [re, im] pairs");
        m(i / cols, i % cols) = Cplx{e[0].get<double>(), e[1].get<double>()};
        ++i;
    }
    return m;
}

}  // namespace

GroupoidPtr load_groupoid_json(const std::string& text) {
    const ordered_json j = parse(text);
    if (!j.is_object()) throw ParseError("groupoid: expected a JSON object");
    GroupoidData d;
    try {
        d.arrows = j.at("arrows").get<int>();
        d.units = j.at("units").get<std::vector<int>>();
        d.range = j.at("range").get<std::vector<int>>();
        d.source = j.at("source").get<std::vector<int>>();
        d.inverse = j.at("inverse").get<std::vector<int>>();
        d.compose.assign(static_cast<std::size_t>(d.arrows) * std::max(d.arrows, 0), kUndefined);
        for (const auto& triple : j.at("compose")) {
            if (!triple.is_array() || triple.size() != 3)
                throw ParseError("groupoid: compose entries must be [i, j, k]");
            const int a = triple[0].get<int>();
            const int b = triple[1].get<int>();
            const int c = triple[2].get<int>();
            if (a < 0 || a >= d.arrows || b < 0 || b >= d.arrows)
                throw ParseError("groupoid: compose index out of range");
            d.compose[static_cast<std::size_t>(a) * d.arrows + b] = c;
        }
    } catch (const ordered_json::exception& e) {
        throw ParseError(std::string("groupoid: ") + e.what());
    }
    try {
        return std::make_shared<FiniteGroupoid>(std::move(d));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("groupoid: ") + e.what());
    }
}

GroupoidPtr load_groupoid_file(const std::filesystem::path& path) {
    return load_groupoid_json(read_file(path));
}

std::string groupoid_to_json(const FiniteGroupoid& g, int indent) {
    ordered_json j;
    j["arrows"] = g.arrow_count();
    j["units"] = g.units();
    j["range"] = ordered_json::array();
    j["source"] = ordered_json::array();
    j["inverse"] = ordered_json::array();
    for (int a = 0; a < g.arrow_count(); ++a) {
        j["range"].push_back(g.range(a));
        j["source"].push_back(g.source(a));
        j["inverse"].push_back(g.inverse(a));
    }
    j["compose"] = ordered_json::array();
    for (int a = 0; a < g.arrow_count(); ++a)
        for (int b = 0; b < g.arrow_count(); ++b)
            if (g.compose(a, b) != kUndefined) j["compose"].push_back({a, b, g.compose(a, b)});
    return j.dump(indent);
}

BundlePtr load_bundle_json(const std::string& text, const std::filesystem::path& base_dir) {
    const ordered_json j = parse(text);
    if (!j.is_object()) throw ParseError("bundle: expected a JSON object");

    GroupoidPtr g;
    if (!j.contains("groupoid")) throw ParseError("bundle: missing groupoid");
    if (j["groupoid"].is_string()) {
        std::filesystem::path p = j["groupoid"].get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        g = load_groupoid_file(p);
    } else {
        g = load_groupoid_json(j["groupoid"].dump());
    }

    FiberSpec dims;
    if (j.contains("dim")) {
        if (!j["dim"].is_object()) throw ParseError("bundle: dim must map units to integers");
        for (const auto& [key, value] : j["dim"].items())
            dims.dim[parse_index_key(key, "bundle dim")] = value.get<int>();
    } else {
        for (int u : g->units()) dims.dim[u] = 1;
    }

    const std::string kind = j.value("kind", "trivial");
    try {
        if (kind == "trivial") return make_trivial_bundle(g, dims);
        if (kind == "twist") {
            std::map<std::pair<int, int>, Cplx> sigma;
            for (const auto& quad : j.at("sigma")) {
                if (!quad.is_array() || quad.size() != 4)
                    throw ParseError("bundle: sigma entries must be [i, j, re, im]");
                sigma[{quad[0].get<int>(), quad[1].get<int>()}] =
                    Cplx{quad[2].get<double>(), quad[3].get<double>()};
            }
            return make_twist_bundle(g, sigma);
        }
        if (kind == "crossed") {
            std::map<int, Mat> alpha;
            for (const auto& [key, value] : j.at("alpha").at("unitaries").items()) {
                const int a = parse_index_key(key, "bundle alpha");
                if (a < 0 || a >= g->arrow_count())
                    throw ParseError("bundle alpha: arrow index out of range");
                const int m = dims.at(g->range(a));
                alpha[a] = matrix_from_json(value, m, m, "bundle alpha");
            }
            return make_crossed_product_bundle(g, dims, alpha);
        }
        if (kind == "custom") {
            CustomTables tables;
            auto rows = [&](int a) { return dims.at(g->range(a)); };
            auto cols = [&](int a) { return dims.at(g->source(a)); };
            auto arrow_in_range = [&](int a) {
                if (a < 0 || a >= g->arrow_count())
                    throw ParseError("bundle custom: arrow index out of range");
                return a;
            };
            for (const auto& rec : j.at("custom").at("mult")) {
                const int a = arrow_in_range(rec[0].get<int>());
                const int b = arrow_in_range(rec[1].get<int>());
                const int i = rec[2].get<int>();
                const int k = rec[3].get<int>();
                const int ab = g->compose(a, b);
                if (ab == kUndefined) throw ParseError("bundle: custom mult on non-composable pair");
                if (i < 0 || i >= rows(a) * cols(a) || k < 0 || k >= rows(b) * cols(b))
                    throw ParseError("bundle custom: basis index out of range");
                auto& table = tables.mult[{a, b}];
                table.resize(static_cast<std::size_t>(rows(a) * cols(a)));
                for (auto& row : table)
                    if (row.empty())
                        row.assign(static_cast<std::size_t>(rows(b) * cols(b)),
                                   Mat::Zero(rows(ab), cols(ab)));
                table[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
                    matrix_from_json(rec[4], rows(ab), cols(ab), "bundle custom mult");
            }
            for (const auto& rec : j.at("custom").at("invol")) {
                const int a = arrow_in_range(rec[0].get<int>());
                const int i = rec[1].get<int>();
                const int ai = g->inverse(a);
                if (i < 0 || i >= rows(a) * cols(a))
                    throw ParseError("bundle custom: basis index out of range");
                auto& table = tables.invol[a];
                if (table.empty())
                    table.assign(static_cast<std::size_t>(rows(a) * cols(a)),
                                 Mat::Zero(rows(ai), cols(ai)));
                table[static_cast<std::size_t>(i)] =
                    matrix_from_json(rec[2], rows(ai), cols(ai), "bundle custom invol");
            }
            return make_custom_bundle(g, dims, std::move(tables));
        }
    } catch (const ordered_json::exception& e) {
        throw ParseError(std::string("bundle: ") + e.what());
    }
    throw ParseError("bundle: unknown kind '" + kind + "'");
}

BundlePtr load_bundle_file(const std::filesystem::path& path) {
    return load_bundle_json(read_file(path), path.parent_path());
}

std::string bundle_to_json(const FellBundle& bundle, int indent) {
    const FiniteGroupoid& g = bundle.groupoid();
    ordered_json j;
    j["groupoid"] = ordered_json::parse(groupoid_to_json(g, indent));
    switch (bundle.kind()) {
        case BundleKind::Trivial: j["kind"] = "trivial"; break;
        case BundleKind::Twist: j["kind"] = "twist"; break;
        case BundleKind::CrossedProduct: j["kind"] = "crossed"; break;
        case BundleKind::Custom: j["kind"] = "custom"; break;
    }
    ordered_json dims = ordered_json::object();
    for (int u : g.units()) dims[std::to_string(u)] = bundle.unit_dim(u);
    j["dim"] = dims;

    if (bundle.kind() == BundleKind::Twist) {
        ordered_json sigma = ordered_json::array();
        for (int a = 0; a < g.arrow_count(); ++a)
            for (int b = 0; b < g.arrow_count(); ++b)
                if (g.compose(a, b) != kUndefined) {
                    const Cplx s = bundle.sigma(a, b);
                    sigma.push_back({a, b, s.real(), s.imag()});
                }
        j["sigma"] = sigma;
    }
    if (bundle.kind() == BundleKind::CrossedProduct) {
        ordered_json unitaries = ordered_json::object();
        for (int a = 0; a < g.arrow_count(); ++a)
            unitaries[std::to_string(a)] = matrix_to_json(bundle.action_unitary(a));
        j["alpha"] = ordered_json::object();
        j["alpha"]["unitaries"] = unitaries;
    }
    if (bundle.kind() == BundleKind::Custom) {
        ordered_json mult = ordered_json::array();
        ordered_json invol = ordered_json::array();
        for (int a = 0; a < g.arrow_count(); ++a) {
            for (int i = 0; i < bundle.fiber_dim(a); ++i)
                invol.push_back({a, i, matrix_to_json(bundle.invol(a, bundle.basis_element(a, i)))});
            for (int b = 0; b < g.arrow_count(); ++b) {
                if (g.compose(a, b) == kUndefined) continue;
                for (int i = 0; i < bundle.fiber_dim(a); ++i)
                    for (int k = 0; k < bundle.fiber_dim(b); ++k)
                        mult.push_back({a, b, i, k,
                                        matrix_to_json(bundle.mult(a, b, bundle.basis_element(a, i),
                                                                   bundle.basis_element(b, k)))});
            }
        }
        j["custom"] = ordered_json::object();
        j["custom"]["mult"] = mult;
        j["custom"]["invol"] = invol;
    }
    return j.dump(indent);
}

Section load_section_json(const std::string& text, BundlePtr bundle) {
    const ordered_json j = parse(text);
    if (!j.is_object() || !j.contains("values"))
        throw ParseError("section: expected {\"values\": {...}}");
    Section out(bundle);
    std::vector<Mat> values = out.values();
    try {
        for (const auto& [key, value] : j["values"].items()) {
            const int a = parse_index_key(key, "section");
            if (a < 0 || a >= bundle->groupoid().arrow_count())
                throw ParseError("section: arrow index out of range");
            values[static_cast<std::size_t>(a)] = matrix_from_json(
                value, bundle->fiber_rows(a), bundle->fiber_cols(a), "section value");
        }
    } catch (const ordered_json::exception& e) {
        throw ParseError(std::string("section: ") + e.what());
    }
    return Section(std::move(bundle), std::move(values));
}

Section load_section_file(const std::filesystem::path& path, BundlePtr bundle) {
    return load_section_json(read_file(path), std::move(bundle));
}

std::string section_to_json(const Section& f, int indent) {
    ordered_json values = ordered_json::object();
    for (int a = 0; a < f.bundle().groupoid().arrow_count(); ++a) {
        if (f.value(a).cwiseAbs().maxCoeff() == 0.0) continue;
        values[std::to_string(a)] = matrix_to_json(f.value(a));
    }
    ordered_json j;
    j["values"] = values;
    return j.dump(indent);
}

std::string validation_report_to_json(const ValidationReport& report, int indent) {
    ordered_json j;
    j["ok"] = report.ok();
    ordered_json violations = ordered_json::array();
    for (const auto& v : report.violations) {
        ordered_json entry;
        entry["rule"] = v.rule;
        entry["witness"] = v.witness;
        entry["residual"] = round12(v.residual);
        violations.push_back(entry);
    }
    j["violations"] = violations;
    return j.dump(indent);
}

std::string verification_report_to_json(const VerificationReport& report, std::uint64_t seed,
                                        int num_random, int indent) {
    ordered_json j;
    j["all_pass"] = report.all_pass();
    j["seed"] = seed;
    j["num_random"] = num_random;
    ordered_json checks = ordered_json::array();
    for (const auto& c : report.checks) {
        ordered_json entry;
        entry["name"] = c.name;
        entry["law"] = c.law;
        entry["instance"] = c.instance;
        entry["residual"] = round12(c.residual);
        entry["bound"] = round12(c.bound);
        entry["pass"] = c.pass;
        checks.push_back(entry);
    }
    j["checks"] = checks;
    return j.dump(indent);
}

std::string norms_to_json(const Section& f, int indent) {
    const auto& units = f.bundle().groupoid().units();
    const auto norms = unit_norms(f);
    ordered_json per_unit = ordered_json::object();
    double reduced = 0.0;
    for (std::size_t i = 0; i < units.size(); ++i) {
        per_unit[std::to_string(units[i])] = round12(norms[i]);
        reduced = std::max(reduced, norms[i]);
    }
    ordered_json j;
    j["unit_norms"] = per_unit;
    j["reduced_norm"] = round12(reduced);
    j["sup_norm"] = round12(sup_norm(f));
    return j.dump(indent);
}

std::string zwindow_table_to_json(const ZWindowTable& table, int indent) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : table.rows) {
        ordered_json entry;
        entry["N"] = r.window;
        entry["window_norm"] = round12(r.norm);
        entry["oracle_lower"] = round12(r.oracle_lower);
        entry["oracle_upper"] = round12(r.oracle_upper);
        entry["coeff_max"] = round12(r.coeff_max);
        entry["l1_norm"] = round12(r.ell1);
        entry["chain_ok"] = r.chain_ok;
        rows.push_back(entry);
    }
    ordered_json j;
    j["rows"] = rows;
    j["all_ok"] = table.all_ok();
    return j.dump(indent);
}

std::string zwindow_table_to_csv(const ZWindowTable& table) {
    std::ostringstream os;
    os << "N,window_norm,oracle_lower,oracle_upper,coeff_max,l1_norm,chain_ok\n";
    char buf[64];
    auto fmt = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return std::string(buf);
    };
    for (const auto& r : table.rows)
        os << r.window << "," << fmt(r.norm) << "," << fmt(r.oracle_lower) << ","
           << fmt(r.oracle_upper) << "," << fmt(r.coeff_max) << "," << fmt(r.ell1) << ","
           << (r.chain_ok ? 1 : 0) << "\n";
    return os.str();
}

}  // namespace fell
