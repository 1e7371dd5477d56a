#include <exception>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "gwsep/errors.hpp"

using namespace gwsep::cli;

int main(int argc, char** argv)
{
    CLI::App app{"Bandit multiclass learning under group weak linear separability"};
    app.require_subcommand(1);
    std::function<int()> action;

    GenDataOptions gen;
    auto* g = app.add_subcommand("gen-data", "Generate a certified separable dataset");
    g->add_option("--spec", gen.spec_path, "Generation spec JSON");
    g->add_option("--out", gen.out_dir, "Output directory")->required();
    g->add_option("--seed", gen.seed, "Seed (overrides the spec file)");
    g->add_option("--kind", gen.kind, "strong | weak | group-weak");
    g->add_option("--d", gen.dim, "Dimension");
    g->add_option("--K", gen.classes, "Number of classes");
    g->add_option("--groups", gen.groups, "Classes per group, e.g. 3,4,1");
    g->add_option("--gamma", gen.gamma, "Margin");
    g->add_option("--samples", gen.samples, "Samples per class");
    g->add_option("--band-axis", gen.band_axis, "radial | tangential");
    g->callback([&] { action = [&] { return gen_data(gen); }; });

    RunOptions run_opt;
    auto* r = app.add_subcommand("run", "Run the online protocol and write a mistake trace");
    r->add_option("--data", run_opt.data_path, "Dataset CSV")->required();
    r->add_option("--kernel", run_opt.kernel, "linear | rational");
    r->add_option("--algorithm", run_opt.algorithm, "bandit | perceptron");
    r->add_option("--T", run_opt.horizon, "Number of rounds")->required();
    r->add_option("--seed", run_opt.seed, "Seed");
    r->add_option("--K", run_opt.classes, "Number of classes (default: largest label)");
    r->add_option("--membership", run_opt.membership, "non-negative | positive");
    r->add_option("--tie-rule", run_opt.tie_rule, "smallest-index | uniform");
    r->add_option("--out", run_opt.trace_path, "Trace CSV")->required();
    r->add_option("--summary", run_opt.summary_path, "Summary JSON (default: <out>.summary.json)");
    r->add_option("--state", run_opt.state_path, "Final learner state JSON");
    r->callback([&] { action = [&] { return run(run_opt); }; });

    ContourOptions con;
    auto* c = app.add_subcommand("contour", "Score a grid with one class of a saved learner");
    c->add_option("--state", con.state_path, "Learner state JSON")->required();
    c->add_option("--grid", con.grid, "Points per axis");
    c->add_option("--bbox", con.bbox, "xmin xmax ymin ymax")->expected(4)->delimiter(',');
    c->add_option("--class", con.label, "Class to score");
    c->add_option("--out", con.out_path, "Grid CSV")->required();
    c->callback([&] { action = [&] { return contour(con); }; });

    CertifyOptions cert;
    auto* v = app.add_subcommand("certify", "Build and check per-class separating polynomials");
    v->add_option("--data", cert.data_path, "Dataset CSV")->required();
    v->add_option("--certificate", cert.certificate_path, "Group-weak certificate JSON")->required();
    v->add_option("--gamma", cert.gamma, "Margin (default: the certificate's)");
    v->add_option("--max-degree", cert.max_degree, "Largest accepted r*s");
    v->add_option("--out", cert.out_path, "Polynomials JSON")->required();
    v->callback([&] { action = [&] { return certify(cert); }; });

    BoundsOptions bnd;
    auto* b = app.add_subcommand("bounds", "Tabulate transformed margins and mistake bounds");
    b->add_option("--gamma", bnd.gammas, "Margins")->delimiter(',');
    b->add_option("--L", bnd.groups, "Group counts")->delimiter(',');
    b->add_option("--K", bnd.classes, "Class counts")->delimiter(',');
    b->add_flag("--grid", bnd.default_grid, "Use the built-in 20-point grid");
    b->add_option("--out", bnd.out_path, "CSV path (default: stdout)");
    b->callback([&] { action = [&] { return bounds(bnd); }; });

    SweepOptions sw;
    auto* s = app.add_subcommand("sweep", "Run a batch experiment from a config JSON");
    s->add_option("--config", sw.config_path, "Config JSON {data, run}")->required();
    s->add_option("--out", sw.out_dir, "Output directory")->required();
    s->callback([&] { action = [&] { return sweep(sw); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : invalid_input;
    }

    try {
        return action();
    } catch (const gwsep::VerificationFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return certification_failed;
    } catch (const gwsep::InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return invalid_input;
    } catch (const gwsep::Infeasible& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return invalid_input;
    } catch (const gwsep::ResourceLimit& e) {
        std::cerr << "limit: " << e.what() << '\n';
        return invalid_input;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return internal_error;
    }
}
