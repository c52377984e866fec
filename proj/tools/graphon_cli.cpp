#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "graphon/cli.hpp"

namespace {

void add_common(CLI::App* sub, graphon::RunConfig& c) {
    sub->add_option("--input", c.input, "graphon spec (JSON)")->required();
    sub->add_option("--out", c.out_dir, "output directory")->capture_default_str();
    sub->add_option("--grid", c.grid, "grid resolution for builtins and heatmaps")->capture_default_str();
    sub->add_option("--epsilon", c.epsilon, "support threshold (default 1e-12 step, 1e-9 grid)");
    sub->add_option("--tgrid", c.t_grid_text, "log-spaced t-grid a:b:k (default 1e-3:1e-5:8)");
    sub->add_option("--expect", c.expect, "expected slope");
    sub->add_option("--tolerance", c.tolerance, "slope tolerance")->capture_default_str();
    sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
    sub->add_flag("--reproducible", c.reproducible, "omit the timestamp from outputs");
    sub->add_flag("--allow-disconnected", c.allow_disconnected, "proceed on disconnected graphons");
}

}  // namespace

int main(int argc, char** argv) {
    graphon::RunConfig c;
    CLI::App app{"Distances on graphons"};
    app.require_subcommand(1);

    auto* varadhan = app.add_subcommand("varadhan", "distance CSV, layer heatmap and summary");
    auto* slope = app.add_subcommand("slope", "heat-kernel slope experiment");
    auto* metrics = app.add_subcommand("metrics", "communicability, embedding and cut norm");
    auto* connectivity = app.add_subcommand("connectivity", "connectivity and diameter");
    auto* sample = app.add_subcommand("sample", "W-random graph and distance comparison");
    for (auto* sub : {varadhan, slope, metrics, connectivity, sample}) add_common(sub, c);

    slope->add_option("--u", c.u, "first set, intervals a:b,c:d");
    slope->add_option("--v", c.v, "second set");
    slope->add_option("--transform", c.transform, "exp | resolvent: slopes of f(Lt) on the block matrix");
    slope->add_option("--weights", c.weights, "unit | random edge weights and diagonal")->capture_default_str();
    metrics->add_option("--sets", c.sets, "sets separated by ';' (default: the blocks)");
    metrics->add_option("--dim", c.embedding_dim, "embedding truncation K (default: all)");
    sample->add_option("--vertices", c.vertices, "vertices per sample")->capture_default_str();
    sample->add_option("--trials", c.trials, "samples in the comparison")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : graphon::kExitInput;
    }
    c.command = app.get_subcommands().front()->get_name();
    return graphon::run(c, std::cout, std::cerr);
}
