#include "gwsep/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "gwsep/errors.hpp"

namespace gwsep {

std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text)
{
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw InvalidInput("not a number: '" + std::string(text) + "'");
    }
    return v;
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

int parse_int(std::string_view text, const std::string& what)
{
    text = trim(text);
    int v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw InvalidInput(what + ": not an integer: '" + std::string(text) + "'");
    }
    return v;
}

}  // namespace

void write_dataset_csv(std::ostream& out, const Dataset& data)
{
    for (std::size_t i = 1; i <= data.dim(); ++i) out << "x_" << i << ',';
    out << 'y';
    if (data.has_groups()) out << ",group";
    out << '\n';
    for (std::size_t t = 0; t < data.size(); ++t) {
        for (double v : data[t].x) out << format_double(v) << ',';
        out << data[t].label;
        if (data.has_groups()) out << ',' << data.groups()[t];
        out << '\n';
    }
}

Dataset read_dataset_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("dataset CSV is empty");
    const auto header = split_csv(line);
    std::size_t dim = 0;
    while (dim < header.size() && trim(header[dim]) == "x_" + std::to_string(dim + 1)) ++dim;
    if (dim == header.size() || trim(header[dim]) != "y") {
        throw InvalidInput("dataset CSV header must be x_1..x_d,y[,group]");
    }
    const bool has_groups = dim + 2 == header.size();
    if (has_groups && trim(header[dim + 1]) != "group") throw InvalidInput("unexpected dataset CSV column after y");
    if (dim + 2 < header.size()) throw InvalidInput("too many dataset CSV columns");

    std::vector<LabeledExample> examples;
    std::vector<int> groups;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != header.size()) {
            throw InvalidInput("dataset CSV row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                               " columns, expected " + std::to_string(header.size()));
        }
        LabeledExample ex;
        ex.x.reserve(dim);
        for (std::size_t i = 0; i < dim; ++i) ex.x.push_back(parse_double(cells[i]));
        ex.label = parse_int(cells[dim], "row " + std::to_string(row));
        examples.push_back(std::move(ex));
        if (has_groups) groups.push_back(parse_int(cells[dim + 1], "row " + std::to_string(row)));
    }
    return Dataset(dim, std::move(examples), std::move(groups));
}

void write_trace_csv(std::ostream& out, const MistakeTrace& trace)
{
    out << "t,y,y_hat,z,explore,cum_mistakes\n";
    for (const auto& s : trace.steps) {
        out << s.t << ',' << s.y << ',' << s.y_hat << ',' << s.z << ',' << (s.explore ? 1 : 0) << ','
            << s.cumulative << '\n';
    }
}

namespace {

Json finite_or_null(double v)
{
    if (std::isfinite(v)) return v;
    return nullptr;
}

Json vectors_to_json(const std::vector<Vector>& vs)
{
    Json arr = Json::array();
    for (const auto& v : vs) arr.push_back(v);
    return arr;
}

std::vector<Vector> vectors_from_json(const Json& j, const char* field)
{
    if (!j.is_array()) throw InvalidInput(std::string("certificate field '") + field + "' must be an array");
    std::vector<Vector> out;
    for (const auto& row : j) out.push_back(row.get<Vector>());
    return out;
}

}  // namespace

Json report_to_json(const CertificateReport& report)
{
    Json j;
    j["passed"] = report.passed;
    j["positive_slack"] = finite_or_null(report.positive_slack);
    j["negative_slack"] = finite_or_null(report.negative_slack);
    j["pairwise_slack"] = finite_or_null(report.pairwise_slack);
    j["intra_group_slack"] = finite_or_null(report.intra_group_slack);
    j["weight_budget"] = report.weight_budget;
    j["intra_weight_budget"] = report.intra_weight_budget;
    j["violation_count"] = report.violation_count;
    if (report.worst) {
        const auto& w = *report.worst;
        Json v;
        v["example"] = w.example;
        v["other_example"] = w.other_example ? Json(*w.other_example) : Json(nullptr);
        v["label"] = w.label;
        v["other_label"] = w.other_label;
        v["slack"] = w.slack;
        v["condition"] = w.condition;
        j["worst"] = v;
    } else {
        j["worst"] = nullptr;
    }
    return j;
}

Json certificate_to_json(const SeparabilityCertificate& certificate)
{
    Json j;
    j["kind"] = std::string(to_string(certificate.kind));
    j["gamma"] = certificate.gamma;
    j["weights"] = vectors_to_json(certificate.weights);
    if (certificate.kind == SeparabilityKind::group_weak) {
        j["intra_weights"] = vectors_to_json(certificate.intra_weights);
        Json groups = Json::array();
        if (certificate.groups) {
            for (int g = 1; g <= certificate.groups->num_groups(); ++g) groups.push_back(certificate.groups->classes_in(g));
        }
        j["groups"] = groups;
    }
    return j;
}

SeparabilityCertificate certificate_from_json(const Json& j)
{
    try {
        SeparabilityCertificate c;
        c.kind = parse_separability_kind(j.at("kind").get<std::string>());
        c.gamma = j.at("gamma").get<double>();
        c.weights = vectors_from_json(j.at("weights"), "weights");
        if (c.kind == SeparabilityKind::group_weak) {
            c.intra_weights = vectors_from_json(j.at("intra_weights"), "intra_weights");
            c.groups = GroupStructure::from_groups(j.at("groups").get<std::vector<std::vector<int>>>());
        }
        return c;
    } catch (const Json::exception& e) {
        throw InvalidInput(std::string("malformed certificate JSON: ") + e.what());
    }
}

Json polynomial_to_json(const SparsePolynomial& p)
{
    Json terms = Json::array();
    for (const auto& [alpha, c] : p.terms()) terms.push_back({{"alpha", alpha}, {"coeff", c}});
    return {{"d", p.dim()}, {"terms", terms}};
}

SparsePolynomial polynomial_from_json(const Json& j)
{
    try {
        SparsePolynomial p(j.at("d").get<std::size_t>());
        for (const auto& t : j.at("terms")) p.add_term(t.at("alpha").get<Exponent>(), t.at("coeff").get<double>());
        return p;
    } catch (const Json::exception& e) {
        throw InvalidInput(std::string("malformed polynomial JSON: ") + e.what());
    }
}

Json embedding_to_json(const TruncatedEmbedding& e)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < e.size(); ++i) {
        const auto alpha = e.indices().exponent(i);
        rows.push_back({{"alpha", std::vector<std::uint16_t>(alpha.begin(), alpha.end())}, {"value", e.values()[i]}});
    }
    return rows;
}

namespace {

std::string_view to_string(LearnerConfig::TieRule rule)
{
    return rule == LearnerConfig::TieRule::smallest_index ? "smallest-index" : "uniform";
}

std::string_view to_string(LearnerConfig::Membership m)
{
    return m == LearnerConfig::Membership::non_negative ? "non-negative" : "positive";
}

}  // namespace

Json learner_to_json(const KernelBandit& learner)
{
    const auto& cfg = learner.config();
    Json supports = Json::array();
    for (const auto& list : learner.supports()) {
        Json arr = Json::array();
        for (const auto& e : list) arr.push_back({{"x", e.x}, {"sign", e.sign}});
        supports.push_back(arr);
    }
    const auto state = learner.rng().state();
    return {{"K", cfg.classes},
            {"kernel", std::string(to_string(cfg.kernel))},
            {"tie_rule", std::string(to_string(cfg.tie_rule))},
            {"membership", std::string(to_string(cfg.membership))},
            {"step", learner.step()},
            {"rng_state", std::vector<std::uint64_t>(state.begin(), state.end())},
            {"supports", supports}};
}

KernelBandit learner_from_json(const Json& j)
{
    try {
        LearnerConfig cfg;
        cfg.classes = j.at("K").get<int>();
        cfg.kernel = parse_kernel_kind(j.at("kernel").get<std::string>());
        const auto tie = j.value("tie_rule", std::string("smallest-index"));
        if (tie == "smallest-index") cfg.tie_rule = LearnerConfig::TieRule::smallest_index;
        else if (tie == "uniform") cfg.tie_rule = LearnerConfig::TieRule::uniform;
        else throw InvalidInput("unknown tie rule '" + tie + "'");
        const auto membership = j.value("membership", std::string("non-negative"));
        if (membership == "non-negative") cfg.membership = LearnerConfig::Membership::non_negative;
        else if (membership == "positive") cfg.membership = LearnerConfig::Membership::positive;
        else throw InvalidInput("unknown membership rule '" + membership + "'");

        std::vector<std::vector<SupportEntry>> supports;
        for (const auto& list : j.at("supports")) {
            auto& out = supports.emplace_back();
            for (const auto& e : list) out.push_back({e.at("x").get<Vector>(), e.at("sign").get<int>()});
        }
        const auto words = j.at("rng_state").get<std::vector<std::uint64_t>>();
        if (words.size() != 4) throw InvalidInput("rng_state must hold 4 words");
        KernelBandit learner(cfg, 0);
        learner.set_state(std::move(supports), j.at("step").get<std::size_t>(), {words[0], words[1], words[2], words[3]});
        return learner;
    } catch (const Json::exception& e) {
        throw InvalidInput(std::string("malformed learner state JSON: ") + e.what());
    }
}

Json gen_spec_to_json(const GenSpec& spec)
{
    Json j{{"kind", std::string(to_string(spec.kind))},
           {"d", spec.dim},
           {"K", spec.classes},
           {"gamma", spec.gamma},
           {"samples_per_class", spec.samples_per_class},
           {"seed", spec.seed}};
    if (spec.kind == SeparabilityKind::group_weak) {
        j["group_sizes"] = spec.group_sizes;
        j["band_axis"] = std::string(to_string(spec.band_axis));
    }
    return j;
}

GenSpec gen_spec_from_json(const Json& j)
{
    try {
        GenSpec spec;
        spec.kind = parse_separability_kind(j.at("kind").get<std::string>());
        spec.dim = j.value("d", std::size_t{2});
        spec.gamma = j.at("gamma").get<double>();
        spec.samples_per_class = j.value("samples_per_class", std::size_t{100});
        spec.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("group_sizes")) spec.group_sizes = j.at("group_sizes").get<std::vector<int>>();
        if (j.contains("K")) {
            spec.classes = j.at("K").get<int>();
        } else {
            for (int c : spec.group_sizes) spec.classes += c;
        }
        if (j.contains("L") && spec.kind == SeparabilityKind::group_weak &&
            j.at("L").get<int>() != static_cast<int>(spec.group_sizes.size())) {
            throw InvalidInput("L does not match the number of group sizes");
        }
        if (j.contains("band_axis")) spec.band_axis = parse_band_axis(j.at("band_axis").get<std::string>());
        return spec;
    } catch (const Json::exception& e) {
        throw InvalidInput(std::string("malformed generation spec: ") + e.what());
    }
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InvalidInput("failed writing '" + path.string() + "'");
}

Json read_json_file(const std::filesystem::path& path)
{
    try {
        return Json::parse(read_text_file(path));
    } catch (const Json::parse_error& e) {
        throw InvalidInput("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const Json& j)
{
    write_text_file(path, j.dump(2) + "\n");
}

}  // namespace gwsep
