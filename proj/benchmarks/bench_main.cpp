#include <benchmark/benchmark.h>

#include "cli.hpp"
#include "cmheight/bounds.hpp"

using namespace cmheight;
using arith::PrecisionContext;

namespace {

std::shared_ptr<const fields::AbelianField> shared(fields::AbelianField K) {
    return std::make_shared<const fields::AbelianField>(std::move(K));
}

void BM_HurwitzZeta(benchmark::State& state) {
    PrecisionContext ctx(static_cast<int>(state.range(0)));
    Real x(mpq_class(3, 7), ctx.work_prec());
    Complex s(Real::parse("0.5", ctx.work_prec()), Real::parse("14.134725", ctx.work_prec()));
    for (auto _ : state) benchmark::DoNotOptimize(arith::hurwitz_zeta(s, x, ctx));
}
BENCHMARK(BM_HurwitzZeta)->Arg(128)->Arg(256)->Arg(512);

void BM_LogGamma(benchmark::State& state) {
    PrecisionContext ctx(static_cast<int>(state.range(0)));
    mpq_class x(5, 37);
    for (auto _ : state) benchmark::DoNotOptimize(arith::log_gamma(x, ctx));
}
BENCHMARK(BM_LogGamma)->Arg(128)->Arg(256);

void BM_LValue(benchmark::State& state) {
    PrecisionContext ctx(128);
    auto chars = dirichlet::characters(dirichlet::unit_group(state.range(0)));
    dirichlet::ResidueCharacter chi = chars[1];
    for (const auto& c : chars)
        if (dirichlet::is_odd(c) && dirichlet::conductor(c) == state.range(0)) chi = c;
    Real s = Real::parse("0.999", ctx.work_prec());
    for (auto _ : state) benchmark::DoNotOptimize(lfun::l_value(chi, s, ctx));
}
BENCHMARK(BM_LValue)->Arg(5)->Arg(37)->Arg(59);

void BM_ProfileEngine(benchmark::State& state) {
    PrecisionContext ctx(128);
    auto E = shared(fields::cyclotomic(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(colmez::ProfileEngine(E, ctx).averaged_rhs());
}
BENCHMARK(BM_ProfileEngine)->Arg(16)->Arg(37)->Unit(benchmark::kMillisecond);

void BM_KernelAllTypes(benchmark::State& state) {
    PrecisionContext ctx(128);
    auto E = shared(fields::cyclotomic(state.range(0)));
    colmez::ProfileEngine engine(E, ctx);
    colmez::TypeSpace space(*E);
    colmez::HeightKernel kernel(space, engine);
    for (auto _ : state) {
        Real sum(0, 160);
        space.for_each_type([&](std::uint64_t P) { sum += kernel.height(P); });
        benchmark::DoNotOptimize(sum);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(fields::cm_type_count(*E)));
}
BENCHMARK(BM_KernelAllTypes)->Arg(25)->Arg(31)->Unit(benchmark::kMillisecond);

void BM_ProfilePerType(benchmark::State& state) {
    PrecisionContext ctx(128);
    auto E = shared(fields::cyclotomic(state.range(0)));
    colmez::ProfileEngine engine(E, ctx);
    std::uint64_t mask = 0, n = fields::cm_type_count(*E);
    for (auto _ : state) {
        benchmark::DoNotOptimize(engine.profile(mask).height);
        mask = (mask + 1) % n;
    }
}
BENCHMARK(BM_ProfilePerType)->Arg(13)->Arg(37);

void BM_ZeroScan(benchmark::State& state) {
    PrecisionContext ctx(128);
    auto E = fields::cyclotomic(state.range(0));
    Real c(mpq_class(1, 4), ctx.work_prec());
    Real step = Real::parse("1e-4", ctx.work_prec());
    for (auto _ : state) benchmark::DoNotOptimize(bounds::scan_field(E, c, step, ctx).min_abs);
}
BENCHMARK(BM_ZeroScan)->Arg(12)->Arg(37)->Arg(59)->Unit(benchmark::kMillisecond);

void BM_Corpus(benchmark::State& state) {
    cli::RunConfig cfg;
    cfg.modulus_max = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(cli::run_corpus(cfg).checks);
}
BENCHMARK(BM_Corpus)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
