#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "gwsep/datagen.hpp"
#include "gwsep/errors.hpp"
#include "gwsep/io.hpp"
#include "gwsep/rng.hpp"

using namespace gwsep;

namespace {

Dataset read_csv(const std::string& text)
{
    std::istringstream in(text);
    return read_dataset_csv(in);
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("doubles round-trip exactly")
{
    Rng rng(6);
    for (int i = 0; i < 10000; ++i) {
        const double v = std::ldexp(rng.uniform(-1.0, 1.0), static_cast<int>(rng.below(40)) - 20);
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(std::isnan(parse_double(format_double(std::nan("")))));
    CHECK_THROWS_AS(parse_double("abc"), InvalidInput);
    CHECK_THROWS_AS(parse_double("1.5x"), InvalidInput);
}

TEST_CASE("dataset CSV round trip")
{
    GenSpec spec;
    spec.kind = SeparabilityKind::group_weak;
    spec.classes = 4;
    spec.group_sizes = {2, 2};
    spec.gamma = 0.1;
    spec.samples_per_class = 30;
    spec.seed = 8;
    const auto gen = generate(spec);
    std::ostringstream out;
    write_dataset_csv(out, gen.data);
    const auto back = read_csv(out.str());
    REQUIRE(back.size() == gen.data.size());
    CHECK(back.dim() == 2);
    CHECK(back.groups() == gen.data.groups());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].x == gen.data[i].x);
        CHECK(back[i].label == gen.data[i].label);
    }
    std::ostringstream again;
    write_dataset_csv(again, back);
    CHECK(again.str() == out.str());
}

TEST_CASE("dataset CSV without a group column")
{
    const auto data = read_csv("x_1,x_2,y\n0.1,0.2,1\n\n-0.3,0.4,2\n");
    CHECK(data.size() == 2);
    CHECK_FALSE(data.has_groups());
    CHECK(data[1].label == 2);
}

TEST_CASE("dataset CSV errors")
{
    CHECK_THROWS_AS(read_csv(""), InvalidInput);
    CHECK_THROWS_AS(read_csv("a,b,y\n1,2,1\n"), InvalidInput);
    CHECK_THROWS_AS(read_csv("x_1,x_2\n1,2\n"), InvalidInput);
    CHECK_THROWS_AS(read_csv("x_1,y,grp\n1,1,1\n"), InvalidInput);
    CHECK_THROWS_AS(read_csv("x_1,y\n1,1,1\n"), InvalidInput);
    CHECK_THROWS_AS(read_csv("x_1,y\n0.5,one\n"), InvalidInput);
    CHECK_THROWS_AS(read_csv("x_1,y\n0.5,0\n"), InvalidInput);
}

TEST_CASE("trace CSV format")
{
    MistakeTrace trace;
    trace.steps.push_back({1, 2, 1, 1, false, 4, 1});
    trace.steps.push_back({2, 3, 3, 0, true, 0, 1});
    std::ostringstream out;
    write_trace_csv(out, trace);
    CHECK(out.str() == "t,y,y_hat,z,explore,cum_mistakes\n1,2,1,1,0,1\n2,3,3,0,1,1\n");
}

TEST_CASE("certificate round trip")
{
    for (auto kind : {SeparabilityKind::strong, SeparabilityKind::weak, SeparabilityKind::group_weak}) {
        GenSpec spec;
        spec.kind = kind;
        spec.classes = 3;
        spec.dim = 3;
        spec.gamma = 0.2;
        spec.samples_per_class = 10;
        spec.group_sizes = {2, 1};
        const auto gen = generate(spec);
        const auto j = certificate_to_json(gen.certificate);
        const auto back = certificate_from_json(Json::parse(j.dump()));
        CHECK(back.kind == gen.certificate.kind);
        CHECK(back.gamma == gen.certificate.gamma);
        CHECK(back.weights == gen.certificate.weights);
        CHECK(back.intra_weights == gen.certificate.intra_weights);
        CHECK(back.groups.has_value() == gen.certificate.groups.has_value());
        if (back.groups) CHECK(back.groups->assignment() == gen.certificate.groups->assignment());
        CHECK(verify(gen.data, back).passed);
    }
    CHECK_THROWS_AS(certificate_from_json(Json::parse(R"({"kind": "weak"})")), InvalidInput);
}

TEST_CASE("report JSON marks vacuous fields as null")
{
    CertificateReport r;
    r.passed = true;
    const auto j = report_to_json(r);
    CHECK(j.at("positive_slack").is_null());
    CHECK(j.at("passed").get<bool>());
}

TEST_CASE("polynomial round trip")
{
    const auto p = SparsePolynomial::affine(0.25, Vector{1.0, -3.0}) * SparsePolynomial::affine(-1.0, Vector{0.5, 0.5});
    const auto back = polynomial_from_json(Json::parse(polynomial_to_json(p).dump()));
    CHECK(back == p);
    CHECK_THROWS_AS(polynomial_from_json(Json::parse(R"({"d": 2, "terms": [{"alpha": [1], "coeff": 1.0}]})")),
                    InvalidInput);
}

TEST_CASE("learner state round trip continues identically")
{
    LearnerConfig cfg;
    cfg.classes = 3;
    cfg.tie_rule = LearnerConfig::TieRule::uniform;
    KernelBandit a(cfg, 12);
    Rng rng(1);
    auto step = [&](KernelBandit& l, const Vector& x, int y) {
        const auto p = l.predict(x);
        l.update(x, p, p.label == y ? 0 : 1);
        return p.label;
    };
    for (int t = 0; t < 200; ++t) {
        const Vector x{rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)};
        step(a, x, 1 + static_cast<int>(rng.below(3)));
    }
    auto b = learner_from_json(Json::parse(learner_to_json(a).dump()));
    CHECK(learner_to_json(b) == learner_to_json(a));
    for (int t = 0; t < 200; ++t) {
        const Vector x{rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)};
        const int y = 1 + static_cast<int>(rng.below(3));
        CHECK(step(a, x, y) == step(b, x, y));
    }
    auto bad = learner_to_json(a);
    bad["tie_rule"] = "random";
    CHECK_THROWS_AS(learner_from_json(bad), InvalidInput);
}

TEST_CASE("generation spec round trip")
{
    GenSpec spec;
    spec.kind = SeparabilityKind::group_weak;
    spec.classes = 8;
    spec.group_sizes = {3, 4, 1};
    spec.gamma = 0.05;
    spec.seed = 123456789012345ULL;
    spec.band_axis = BandAxis::tangential;
    const auto back = gen_spec_from_json(Json::parse(gen_spec_to_json(spec).dump()));
    CHECK(back.kind == spec.kind);
    CHECK(back.classes == spec.classes);
    CHECK(back.group_sizes == spec.group_sizes);
    CHECK(back.gamma == spec.gamma);
    CHECK(back.seed == spec.seed);
    CHECK(back.band_axis == spec.band_axis);
    CHECK(back.samples_per_class == spec.samples_per_class);

    auto j = gen_spec_to_json(spec);
    j["L"] = 2;
    CHECK_THROWS_AS(gen_spec_from_json(j), InvalidInput);
}

TEST_CASE("file helpers")
{
    const auto dir = std::filesystem::temp_directory_path() / "gwsep_io_test" / "nested";
    std::filesystem::remove_all(dir.parent_path());
    write_json_file(dir / "a.json", Json{{"k", 1}});
    CHECK(read_json_file(dir / "a.json").at("k") == 1);
    CHECK(read_text_file(dir / "a.json") == "{\n  \"k\": 1\n}\n");
    write_text_file(dir / "b.txt", "not json");
    CHECK_THROWS_AS(read_json_file(dir / "b.txt"), InvalidInput);
    CHECK_THROWS_AS(read_text_file(dir / "missing.txt"), InvalidInput);
    std::filesystem::remove_all(dir.parent_path());
}

}
