#include "vadminer/models.hpp"
#include "vadminer/random.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

vadminer::DesignMatrix logistic_design(std::size_t n, std::size_t p) {
    vadminer::Rng rng(7);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    std::vector<std::string> names;
    for (std::size_t j = 0; j < p; ++j) names.push_back("x" + std::to_string(j));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        double eta = 0.0;
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            x(i, j) = rng.normal();
            eta += 0.3 * x(i, j);
        }
        y(i) = rng.bernoulli(1.0 / (1.0 + std::exp(-eta))) ? 1.0 : 0.0;
    }
    return {names, x, y};
}

void BM_FitLogistic(benchmark::State& state) {
    const auto design = logistic_design(static_cast<std::size_t>(state.range(0)), 20);
    for (auto _ : state) benchmark::DoNotOptimize(vadminer::fit_logistic(design));
}
BENCHMARK(BM_FitLogistic)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_CrossVal(benchmark::State& state) {
    const auto design = logistic_design(10000, 20);
    for (auto _ : state) benchmark::DoNotOptimize(vadminer::crossval(design, 10, 1, 1));
}
BENCHMARK(BM_CrossVal)->Unit(benchmark::kMillisecond);

} // namespace
