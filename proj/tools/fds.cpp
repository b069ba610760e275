#include <fds/checks.hpp>
#include <fds/dataset.hpp>
#include <fds/embed.hpp>
#include <fds/harness.hpp>
#include <fds/metrics.hpp>
#include <fds/ranges.hpp>
#include <fds/report.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::vector<std::string> split_list(std::string const& text)
{
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<fds::MetricId> parse_metrics(std::string const& text)
{
    std::vector<fds::MetricId> out;
    for (auto const& id : split_list(text)) {
        auto m = fds::parse_metric_id(id);
        if (!m) throw fds::PreconditionError("unknown metric id '" + id + "'");
        out.push_back(*m);
    }
    return out;
}

nlohmann::json read_json(std::string const& path)
{
    std::ifstream in(path);
    if (!in) throw fds::Error("cannot open '" + path + "'");
    return nlohmann::json::parse(in);
}

fds::Dataset read_dataset(std::string const& path, fds::Schema const& schema)
{
    std::ifstream in(path);
    if (!in) throw fds::Error("cannot open '" + path + "'");
    return fds::read_csv(in, schema);
}

// check:variant:grid:metric
fds::FaultInjection parse_fault(std::string const& text)
{
    std::vector<std::string> parts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ':')) parts.push_back(item);
    if (parts.size() != 4) throw fds::PreconditionError("fault must be check:variant:grid:metric, got '" + text + "'");
    auto m = fds::parse_metric_id(parts[3]);
    if (!m) throw fds::PreconditionError("unknown metric id '" + parts[3] + "'");
    return {parts[0], parts[1], std::stoul(parts[2]), *m};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fidelity and diversity metrics for synthetic data, with a sanity-check benchmark"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Run the sanity-check suite and write tables and curves");
    fds::SuiteConfig cfg;
    cfg.workers = fds::default_workers();
    std::size_t repeats = 0, size = 0, grid_points = 0;
    std::string checks, metrics, embedding = "simple", beta_rule = "matched", out_dir = "fds-results", check_file;
    std::vector<std::string> faults;
    bool quiet = false;
    run->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    run->add_option("--repeats", repeats, "Repeats per grid point (default 10, 5 with --fast)");
    run->add_option("--checks", checks, "Comma-separated check ids (default: all)");
    run->add_option("--metrics", metrics, "Comma-separated metric ids (default: all)");
    run->add_option("--embedding", embedding, "Embedding for IAP/IBR")
        ->check(CLI::IsMember({"simple", "one-class"}))
        ->capture_default_str();
    run->add_option("--beta-rule", beta_rule, "Beta-recall matching rule")
        ->check(CLI::IsMember({"matched", "restricted"}))
        ->capture_default_str();
    run->add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();
    run->add_option("--out", out_dir, "Output directory")->capture_default_str();
    run->add_flag("--fast", cfg.fast, "Fewer grid points and repeats");
    run->add_option("--size", size, "Dataset size where size is not swept (default 1000)");
    run->add_option("--grid-points", grid_points, "Points per continuous sweep (default 13)");
    run->add_option("--check-file", check_file, "JSON file with custom check specs, run instead of the catalog");
    run->add_option("--inject", faults, "Poison one metric at one cell: check:variant:grid:metric");
    run->add_flag("--quiet", quiet, "Do not print the tables");

    // catalog
    auto* catalog = app.add_subcommand("catalog", "Print the check catalog as JSON");
    bool catalog_fast = false;
    catalog->add_flag("--fast", catalog_fast, "Catalog with --fast settings");

    // validate-ranges
    auto* ranges = app.add_subcommand("validate-ranges", "Print TV bounds for the Gaussian checks");
    std::size_t trials = 20;
    std::uint64_t ranges_seed = 1;
    ranges->add_option("--trials", trials, "Random 1-D pairs for the bracket check")->capture_default_str();
    ranges->add_option("--seed", ranges_seed, "Seed for the random pairs")->capture_default_str();

    // eval
    auto* eval = app.add_subcommand("eval", "Compute the metrics on two CSV files");
    std::string real_path, syn_path, schema_path, eval_metrics, config_path;
    eval->add_option("--real", real_path, "Real data CSV")->required();
    eval->add_option("--synthetic", syn_path, "Synthetic data CSV")->required();
    eval->add_option("--schema", schema_path, "Schema JSON")->required();
    eval->add_option("--metrics", eval_metrics, "Comma-separated metric ids (default: all)");
    eval->add_option("--config", config_path, "Metric configuration JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            if (repeats) cfg.repeats = repeats;
            if (size) cfg.size = size;
            if (grid_points) cfg.grid_points = grid_points;
            cfg.checks = split_list(checks);
            if (!metrics.empty()) cfg.metrics.metrics = parse_metrics(metrics);
            cfg.metrics.embedding = embedding == "one-class" ? fds::AlphaEmbedding::one_class
                                                             : fds::AlphaEmbedding::simple;
            cfg.metrics.beta_rule = beta_rule == "restricted" ? fds::BetaRule::restricted : fds::BetaRule::matched;
            for (auto const& f : faults) cfg.faults.push_back(parse_fault(f));

            fds::SuiteResults results;
            if (!check_file.empty()) {
                auto const j = read_json(check_file);
                std::vector<fds::CheckSpec> specs =
                    j.is_array() ? j.get<std::vector<fds::CheckSpec>>() : std::vector{j.get<fds::CheckSpec>()};
                if (repeats)
                    for (auto& s : specs) s.repeats = repeats;
                results = fds::run_suite(cfg, std::move(specs));
            } else {
                results = fds::run_suite(cfg);
            }
            fds::write_results(results, out_dir);
            if (!quiet) {
                std::cout << "## Fidelity\n\n"
                          << fds::table_markdown(fds::render_table(results, fds::MetricKind::fidelity))
                          << "\n## Diversity\n\n"
                          << fds::table_markdown(fds::render_table(results, fds::MetricKind::diversity)) << '\n';
            }
            std::cerr << "wrote " << out_dir << " (" << results.curves.size() << " curves, "
                      << results.verdicts.size() << " verdicts, " << results.provenance.wall_seconds << " s)\n";
        } else if (*catalog) {
            std::cout << nlohmann::json(fds::build_check_catalog(catalog_fast ? fds::CatalogOptions::fast()
                                                                                : fds::CatalogOptions{}))
                             .dump(1)
                      << '\n';
        } else if (*ranges) {
            auto const brackets = fds::tv_bracket_trials(trials, ranges_seed);
            auto const extremes = fds::sweep_extreme_bounds(fds::build_check_catalog());
            bool ok = true;
            for (auto const& b : brackets) ok = ok && b.ok;
            for (auto const& e : extremes) ok = ok && e.separated;
            nlohmann::json j{{"tv_brackets", brackets}, {"sweep_extremes", extremes}, {"all_ok", ok}};
            std::cout << j.dump(1) << '\n';
        } else if (*eval) {
            auto const schema = fds::schema_from_json(read_json(schema_path));
            auto const real = read_dataset(real_path, schema);
            auto const syn = read_dataset(syn_path, schema);
            fds::MetricConfig mc = config_path.empty() ? fds::MetricConfig{} : read_json(config_path).get<fds::MetricConfig>();
            if (!eval_metrics.empty()) mc.metrics = parse_metrics(eval_metrics);
            auto const [er, eg] = fds::embed_pair(real, syn);
            nlohmann::json values = nlohmann::json::object(), errors = nlohmann::json::object();
            for (auto const& s : fds::compute_all(er, eg, mc)) {
                auto const id = std::string(fds::metric_id(s.id));
                values[id] = s.ok() ? nlohmann::json(s.value) : nlohmann::json(nullptr);
                if (!s.ok()) errors[id] = s.error;
            }
            nlohmann::json j{{"metrics", values}};
            if (!errors.empty()) j["errors"] = errors;
            std::cout << j.dump(1) << '\n';
        }
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
