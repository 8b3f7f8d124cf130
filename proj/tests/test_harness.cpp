#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "regdigraph/config.hpp"
#include "regdigraph/csv.hpp"
#include "regdigraph/exact.hpp"
#include "regdigraph/experiments.hpp"

using namespace regdigraph;

TEST(Config, DefaultsRoundTrip) {
    ExperimentConfig defaults;
    EXPECT_EQ(parse_config(config_to_text(defaults)), defaults);
    ExperimentConfig c;
    c.experiment = "quasirandom";
    c.n = 100;
    c.d = 25;
    c.lambda = 0.25;
    c.kappaGrid = {0, 0.5};
    c.burnIn = 1234;
    c.output = "out.csv";
    c.gamma = 0.0123456789012345;
    c.recordTiming = true;
    EXPECT_EQ(parse_config(config_to_text(c)), c);
}

TEST(Config, CommentsAndWhitespace) {
    auto c = parse_config("# header\n\n  n = 12   # trailing\nd=3\nkappa_grid = 0, 0.01 ,0.1\n");
    EXPECT_EQ(c.n, 12u);
    EXPECT_EQ(c.effective_d(), 3u);
    EXPECT_EQ(c.kappaGrid, (std::vector<double>{0, 0.01, 0.1}));
}

TEST(Config, ErrorsCarryLineNumbers) {
    try {
        parse_config("n = 10\nfoo\n");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
    try {
        parse_config("n = 10\n\nbogus = 1\n");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
    }
    EXPECT_THROW(parse_config("n = ten\n"), ValidationError);
    EXPECT_THROW(parse_config("gamma = 0.1x\n"), ValidationError);
    EXPECT_THROW(read_config("/nonexistent/config.cfg"), ValidationError);
}

TEST(Config, HardChecks) {
    ExperimentConfig c;
    EXPECT_NO_THROW(check_config(c));
    c.kappaGrid = {0.1, 0.0};
    EXPECT_THROW(check_config(c), ValidationError);
    c = {};
    c.d = 50;
    EXPECT_THROW(check_config(c), ValidationError);
    c = {};
    c.experiment = "nope";
    EXPECT_THROW(check_config(c), ValidationError);
    c = {};
    c.sampler = "gibbs";
    EXPECT_THROW(check_config(c), ValidationError);
}

TEST(Config, ChainWarnings) {
    ExperimentConfig c;
    c.n = 100;
    c.d = 25;
    c.mu = 1e-6;
    c.gamma = 1e-5;
    c.eta = 1e-4;
    c.q = 20000;
    c.nu1 = 1e-3;
    c.nu2 = 1e-3;
    c.delta = 0.05;
    c.rho = 0.05;
    EXPECT_TRUE(parameter_chain_warnings(c).empty());
    c.mu = 1.0;
    EXPECT_EQ(parameter_chain_warnings(c).size(), 1u);
}

TEST(Csv, HeaderOnlyAndFormatting) {
    CsvTable t({"a", "b"});
    EXPECT_EQ(t.str(), "a,b\n");
    t.add(1, 0.1);
    t.add(std::string("x"), true);
    EXPECT_EQ(t.str(), "a,b\n1,0.10000000000000001\nx,1\n");
    EXPECT_THROW(t.add(1), ValidationError);
    EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
}

TEST(ExactSingular, Examples) {
    EXPECT_FALSE(exact_singular(canonical_start(5, 1)));
    BitMatrix j(4);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            j.set(r, c, true);
        }
    }
    EXPECT_TRUE(exact_singular(j));
    EXPECT_TRUE(exact_singular(canonical_start(4, 2)));
    EXPECT_FALSE(exact_singular(canonical_start(5, 2)));
}

TEST(ExactSingular, MatchesRationalEliminationOnM42AndM52) {
    for (auto [n, d] : std::vector<std::pair<std::size_t, std::size_t>>{{4, 2}, {5, 2}}) {
        for (const auto& a : enumerate_Mnd(n, d)) {
            EXPECT_EQ(exact_singular(a), oracle::rational_det(oracle::to_ints(a)) == 0);
        }
    }
}

TEST(ExactSingular, RandomSamplesAgainstRational) {
    auto rng = make_rng(5);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 6 + uniform_index(rng, 10);
        auto a = sample_uniform({n, 1 + uniform_index(rng, n - 1)}, rng);
        EXPECT_EQ(exact_singular(a), oracle::rational_det(oracle::to_ints(a)) == 0);
    }
}

TEST(ExactSingular, PrimeTable) {
    const auto& p = detail::large_primes();
    ASSERT_EQ(p.size(), 64u);
    EXPECT_EQ(p[0], 2147483647u);
    for (auto x : p) {
        EXPECT_TRUE(detail::is_prime32(x));
    }
    EXPECT_GE(primes_needed(200), 24u);
    detail::Barrett b(p[3]);
    EXPECT_EQ(b.reduce(~std::uint64_t{0}), ~std::uint64_t{0} % p[3]);
}

TEST(Wilson, Interval) {
    auto [lo, hi] = wilson_interval(0, 1000);
    EXPECT_EQ(lo, 0.0);
    EXPECT_GT(hi, 0.0);
    EXPECT_LT(hi, 0.01);
    auto [l2, h2] = wilson_interval(500, 1000);
    EXPECT_NEAR(0.5 * (l2 + h2), 0.5, 1e-12);
}

TEST(ParallelMap, OrderAndErrors) {
    auto v = parallel_map(100, 4, [](std::size_t i) { return i * i; });
    for (std::size_t i = 0; i < 100; ++i) {
        EXPECT_EQ(v[i], i * i);
    }
    EXPECT_THROW(parallel_map(10, 3,
                              [](std::size_t i) -> int {
                                  if (i == 7) {
                                      throw RuntimeFailure("boom");
                                  }
                                  return 0;
                              }),
                 RuntimeFailure);
}

namespace {

ExperimentConfig small(const std::string& experiment) {
    ExperimentConfig c;
    c.experiment = experiment;
    c.n = 12;
    c.d = 3;
    c.trials = 20;
    c.corpusSize = 20;
    c.checkBudget = 2000;
    c.h = 1;
    c.sampleCount = 2000;
    c.dimensions = {12, 20};
    return c;
}

} // namespace

TEST(Experiments, ByteIdenticalAcrossThreadCounts) {
    for (const auto& name : experiment_names()) {
        auto c = small(name);
        if (name == "rerandom-uniformity") {
            c.n = 4;
            c.d = 2;
            c.trials = 500;
        }
        if (name == "compressible") {
            c.n = 20;
        }
        const auto one = run_experiment(c).table.str();
        c.threads = 3;
        EXPECT_EQ(run_experiment(c).table.str(), one) << name;
        EXPECT_EQ(run_experiment(c).table.str(), one) << name;
    }
}

TEST(Experiments, SingularityRecordsConsistent) {
    auto c = small("singularity");
    c.n = 6;
    c.d = 2;
    c.trials = 200;
    auto recs = run_singularity_trials(c, true);
    bool anySingular = false;
    for (const auto& r : recs) {
        EXPECT_TRUE(records_consistent(r, c.singularTol));
        EXPECT_LE(r.sMin, r.restrictedSMin + 1e-10);
        anySingular = anySingular || r.exactSingular;
    }
    EXPECT_TRUE(anySingular);
}

TEST(Experiments, TailMonotoneInKappa) {
    auto c = small("sn-tail");
    c.n = 8;
    c.d = 3;
    c.trials = 300;
    c.kappaGrid = {0, 0.01, 0.1, 0.3, 1.0};
    auto rows = tail_rows(run_singularity_trials(c, false), c.kappaGrid, c.n);
    for (std::size_t k = 1; k < rows.size(); ++k) {
        EXPECT_GE(rows[k].count, rows[k - 1].count);
    }
}

TEST(Experiments, SingleVectorCompleteDigraph) {
    // d = n - 1: A = J - P, so |Ax| = |Px| = 1 on sum-zero x.
    auto c = small("single-vector");
    c.n = 10;
    c.d = 9;
    for (double r : single_vector_ratios(c, alternating_vector(10))) {
        EXPECT_NEAR(r * std::sqrt(10.0), 1.0, 1e-12);
    }
    EXPECT_THROW(single_vector_ratios(c, Vector::Ones(10)), ValidationError);
}

TEST(Experiments, CompressibleCorpusIsCompressible) {
    auto rng = make_rng(3);
    for (const auto& x : compressible_corpus(100, 0.1, 0.1, 100, rng)) {
        std::vector<double> xs(x.data(), x.data() + x.size());
        EXPECT_TRUE(is_compressible(xs, 0.1, 0.1));
        EXPECT_NEAR(x.norm(), 1.0, 1e-12);
        EXPECT_LE(std::abs(x.sum()), 1e-10 * 10);
    }
}

TEST(Experiments, SlicePopulationMatchesBitmasks) {
    std::vector<double> v{0.3, -1.0, 2.5, 0.25, -0.75, 1.0};
    auto a = slice_population(v, 3);
    auto b = oracle::slice_sums(v, 3);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_NEAR(a[k], b[k], 1e-12);
    }
}

TEST(Experiments, CsvFileWrite) {
    auto path = std::filesystem::temp_directory_path() / "regdigraph_harness_test.csv";
    CsvTable t({"x"});
    write_csv(t, path.string());
    std::ifstream in(path);
    std::string s((std::istreambuf_iterator<char>(in)), {});
    EXPECT_EQ(s, "x\n");
    std::filesystem::remove(path);
}
