#include "vadminer/analyses.hpp"
#include "vadminer/standin_lexicon.hpp"
#include "vadminer/synth.hpp"
#include "vadminer/textscore.hpp"

#include <benchmark/benchmark.h>

namespace {

const vadminer::Lexicon& lexicon() {
    static const vadminer::Lexicon lex(vadminer::standin_entries());
    return lex;
}

std::vector<vadminer::IssueReport> corpus(std::size_t issues) {
    vadminer::GeneratorConfig config;
    config.issues = issues;
    return vadminer::generate_corpus(config, lexicon(), 1).issues;
}

void BM_ScoreText(benchmark::State& state) {
    const auto issues = corpus(50);
    std::size_t bytes = 0;
    for (auto _ : state) {
        for (const auto& issue : issues)
            for (const auto& c : issue.comments) {
                benchmark::DoNotOptimize(vadminer::score_text(c.body, lexicon()));
                bytes += c.body.size();
            }
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(bytes));
}
BENCHMARK(BM_ScoreText);

void BM_ScoreCorpus(benchmark::State& state) {
    const auto issues = corpus(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        vadminer::ScoredCorpus scored(issues, lexicon(), 1);
        benchmark::DoNotOptimize(scored.scored_issues());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScoreCorpus)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Tokenize(benchmark::State& state) {
    const std::string text = "NullPointerException at org.apache.foo.Bar.baz(Bar.java:42) when the joy of "
                             "configuration meets anger; see stack_trace0x7f free() for details.";
    for (auto _ : state) benchmark::DoNotOptimize(vadminer::tokenize(text));
}
BENCHMARK(BM_Tokenize);

} // namespace
