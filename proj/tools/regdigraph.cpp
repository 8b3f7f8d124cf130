// Command-line harness for the regdigraph library.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "regdigraph/regdigraph.hpp"

namespace rd = regdigraph;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<std::size_t> threads;
    std::string input;
};

rd::ExperimentConfig load(const Common& c) {
    rd::ExperimentConfig cfg = c.config.empty() ? rd::ExperimentConfig{} : rd::read_config(c.config);
    if (c.seed) {
        cfg.seed = *c.seed;
    }
    if (c.threads) {
        cfg.threads = *c.threads;
    }
    if (!c.out.empty()) {
        cfg.output = c.out;
    }
    rd::check_config(cfg);
    return cfg;
}

/// stdout unless a path is configured.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) {
                throw rd::ValidationError("cannot write '" + path + "'");
            }
        }
    }
    std::ostream& get() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<rd::RegularDigraphMatrix> read_matrices(const std::string& path) {
    std::ifstream file;
    std::istream* in = &std::cin;
    if (!path.empty() && path != "-") {
        file.open(path);
        if (!file) {
            throw rd::ValidationError("cannot read '" + path + "'");
        }
        in = &file;
    }
    std::vector<rd::RegularDigraphMatrix> out;
    while (auto m = rd::read_matrix(*in)) {
        out.push_back(std::move(*m));
    }
    return out;
}

std::vector<std::vector<double>> read_vectors(const std::string& path, const std::string& inline_vector) {
    std::vector<std::string> lines;
    if (!inline_vector.empty()) {
        lines.push_back(inline_vector);
    } else {
        std::ifstream file;
        std::istream* in = &std::cin;
        if (!path.empty() && path != "-") {
            file.open(path);
            if (!file) {
                throw rd::ValidationError("cannot read '" + path + "'");
            }
            in = &file;
        }
        std::string line;
        while (std::getline(*in, line)) {
            lines.push_back(line);
        }
    }
    std::vector<std::vector<double>> out;
    for (auto& line : lines) {
        for (auto& ch : line) {
            if (ch == ' ' || ch == '\t') {
                ch = ',';
            }
        }
        auto v = rd::detail::parse_list(line);
        if (!v.empty()) {
            out.push_back(std::move(v));
        }
    }
    return out;
}

/// "0 1 2; 3 4 5" -> {{0,1,2},{3,4,5}}.
rd::RestrictionFamily parse_family(const std::string& text) {
    rd::RestrictionFamily family;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ';')) {
        std::stringstream ps(part);
        rd::IndexSet set;
        std::string tok;
        while (ps >> tok) {
            set.push_back(static_cast<rd::Index>(rd::detail::parse_uint(tok)));
        }
        family.sets.push_back(std::move(set));
    }
    return family;
}

void print_summary(const rd::ExperimentOutput& out) {
    for (const auto& w : out.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    for (const auto& s : out.summary) {
        std::cerr << s << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random regular digraph matrices: sampling, singular values, CLCD, switchings"};
    app.require_subcommand(1);
    Common common;
    auto addCommon = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "key = value configuration file");
        sub->add_option("--seed", common.seed, "base seed");
        sub->add_option("--out", common.out, "output path (default stdout)");
        sub->add_option("--threads", common.threads, "worker threads");
    };

    auto* sample = app.add_subcommand("sample", "draw `trials` matrices from M_{n,d}");
    addCommon(sample);
    auto* enumerate = app.add_subcommand("enumerate", "list all of M_{n,d} (small n)");
    addCommon(enumerate);
    auto* svd = app.add_subcommand("svd", "smallest singular values of matrices read from --input");
    addCommon(svd);
    svd->add_option("--input", common.input, "matrix file (default stdin)");

    std::string vectorText;
    auto* clcdCmd = app.add_subcommand("clcd", "CLCD of vectors, one per line");
    addCommon(clcdCmd);
    clcdCmd->add_option("--input", common.input, "vector file (default stdin)");
    clcdCmd->add_option("--vector", vectorText, "a single comma-separated vector");

    std::string familyText;
    std::size_t ell = 1;
    auto* qclcdCmd = app.add_subcommand("qclcd", "QCLCD of vectors over an index-set family");
    addCommon(qclcdCmd);
    qclcdCmd->add_option("--input", common.input, "vector file (default stdin)");
    qclcdCmd->add_option("--vector", vectorText, "a single comma-separated vector");
    qclcdCmd->add_option("--family", familyText, "index sets, e.g. \"0 1 2; 3 4 5\"")->required();
    qclcdCmd->add_option("--ell", ell, "order statistic (1-based)");

    auto* quasirand = app.add_subcommand("quasirand", "check Q_{h,R} on sampled matrices");
    addCommon(quasirand);
    auto* rerandom = app.add_subcommand("rerandom", "resample a matrix conditioned on F_{S,sigma}");
    addCommon(rerandom);
    rerandom->add_option("--input", common.input, "matrix file (default: sample one)");
    auto* experiment = app.add_subcommand("experiment", "run the configured experiment, CSV output");
    addCommon(experiment);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        auto cfg = load(common);
        Output out(cfg.output);
        auto& os = out.get();

        if (sample->parsed()) {
            const auto sc = cfg.sampler_config();
            for (std::uint64_t i = 0; i < cfg.trials; ++i) {
                auto rng = rd::make_rng(rd::trial_seed(cfg.seed, i));
                auto res = rd::sample_uniform_with_warnings(sc, rng);
                for (const auto& w : res.warnings) {
                    std::cerr << "warning: " << w << '\n';
                }
                if (i) {
                    os << '\n';
                }
                rd::write_matrix(os, res.matrix);
            }
        } else if (enumerate->parsed()) {
            const auto all = rd::enumerate_Mnd(cfg.n, cfg.effective_d());
            for (std::size_t i = 0; i < all.size(); ++i) {
                if (i) {
                    os << '\n';
                }
                rd::write_matrix(os, all[i]);
            }
            std::cerr << all.size() << " matrices\n";
        } else if (svd->parsed()) {
            rd::CsvTable table({"index", "n", "d", "s_min", "restricted_s_min", "exact_singular"});
            const auto ms = read_matrices(common.input);
            for (std::size_t i = 0; i < ms.size(); ++i) {
                const auto dense = rd::to_dense(ms[i]);
                const auto spec = rd::smallest_singular(dense, cfg.svdTol);
                table.add(i, ms[i].n(), ms[i].d(), spec.sMin, ms[i].n() >= 2 ? rd::restricted_smallest(dense) : 0.0,
                          rd::exact_singular(ms[i]));
            }
            table.write(os);
        } else if (clcdCmd->parsed()) {
            rd::CsvTable table({"index", "n", "clcd"});
            const auto vs = read_vectors(common.input, vectorText);
            for (std::size_t i = 0; i < vs.size(); ++i) {
                table.add(i, vs[i].size(), rd::clcd(vs[i], {cfg.alpha, cfg.gamma, cfg.thetaMax}));
            }
            table.write(os);
        } else if (qclcdCmd->parsed()) {
            rd::CsvTable table({"index", "n", "ell", "qclcd"});
            const auto family = parse_family(familyText);
            const auto vs = read_vectors(common.input, vectorText);
            for (std::size_t i = 0; i < vs.size(); ++i) {
                table.add(i, vs[i].size(), ell, rd::qclcd(vs[i], family, ell, {cfg.alpha, cfg.gamma, cfg.thetaMax}));
            }
            table.write(os);
        } else if (quasirand->parsed()) {
            cfg.experiment = "quasirandom";
            auto res = rd::run_quasirandom(cfg);
            res.table.write(os);
            print_summary(res);
        } else if (rerandom->parsed()) {
            auto rng = rd::make_rng(cfg.seed);
            rd::RegularDigraphMatrix a = common.input.empty() ? rd::sample_uniform(cfg.sampler_config(), rng)
                                                              : read_matrices(common.input).at(0);
            const auto pair = rd::random_split_match_pair(a.n(), rng);
            for (std::uint64_t i = 0; i < cfg.trials; ++i) {
                if (i) {
                    os << '\n';
                }
                rd::write_matrix(os, rd::resample_conditional(a, pair, rng));
            }
        } else if (experiment->parsed()) {
            auto res = rd::run_experiment(cfg);
            res.table.write(os);
            print_summary(res);
        }
        if (!os) {
            throw rd::RuntimeFailure("write failed");
        }
    } catch (const rd::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
