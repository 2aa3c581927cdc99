#include <algorithm>

#include "support.hpp"

using namespace support;

namespace {

double max_grid_steps(const WarpingFunction& a, const Vector& b)
{
    return max_abs(a.values - b) * static_cast<double>(a.grid.size() - 1);
}

double pairwise_sum(const std::vector<Vector>& qs, const Grid& g)
{
    double total = 0.0;
    for (std::size_t i = 0; i < qs.size(); ++i)
        for (std::size_t j = i + 1; j < qs.size(); ++j)
            total += l2_norm(g, qs[i] - qs[j]);
    return total;
}

} // namespace

TEST_SUITE("alignment")
{
    TEST_CASE("optimal_warp of a function with itself is the identity")
    {
        const Grid g = Grid::uniform(101);
        Gen gen(1);
        for (int trial = 0; trial < 10; ++trial) {
            const Srsf q = to_srsf(gen.smooth(g));
            CHECK(max_grid_steps(optimal_warp(q, q), g.times()) <= 1.0);
        }
    }

    TEST_CASE("optimal_warp preconditions")
    {
        const Srsf small = to_srsf(sample(Grid::uniform(7), [](double t) { return t * t; }));
        CHECK_THROWS_AS(optimal_warp(small, small), InvalidGridError);
        const Grid irregular = Grid::normalized(Vector::LinSpaced(20, 0.0, 1.0).array().square());
        const Srsf q = to_srsf(sample(irregular, [](double t) { return t; }));
        CHECK_THROWS_AS(optimal_warp(q, q), InvalidGridError);
        const Srsf a = to_srsf(sample(Grid::uniform(20), [](double t) { return t; }));
        const Srsf b = to_srsf(sample(Grid::uniform(21), [](double t) { return t; }));
        CHECK_THROWS_AS(optimal_warp(a, b), GridMismatchError);
        CHECK_THROWS_AS(optimal_warp(a, a, DpOptions{0}), ParameterError);
    }

    TEST_CASE("construct and recover")
    {
        const Grid g = Grid::uniform(128);
        Gen gen(2);
        for (int trial = 0; trial < 10; ++trial) {
            const Harmonic f(gen);
            const WarpingFunction gamma0 = moderate_warp(gen, g);
            const Srsf q1 = to_srsf(sample(g, f));

            // q2 = q1 o gamma0^{-1}, so q2 o gamma0 reproduces q1.
            const Srsf q2 = to_srsf(at_warp(invert_warp(gamma0), f));
            const WarpingFunction found = optimal_warp(q1, q2);
            CHECK(max_grid_steps(found, gamma0.values) <= 3.0);
            CHECK(warp_cost(q1, q2, found) < 0.05 * srsf_distance(q1, q2));

            // The other way round the recovered warp is the inverse.
            const Srsf q3 = to_srsf(at_warp(gamma0, f));
            CHECK(max_grid_steps(optimal_warp(q1, q3), invert_warp(gamma0).values) <= 3.0);
        }
    }

    TEST_CASE("DP cost is no larger than random search")
    {
        const Grid g = Grid::uniform(64);
        Gen gen(3);
        for (int trial = 0; trial < 3; ++trial) {
            const Srsf q1 = to_srsf(gen.smooth(g));
            const Srsf q2 = to_srsf(gen.smooth(g));
            const double dp = warp_cost(q1, q2, optimal_warp(q1, q2));
            double best = std::numeric_limits<double>::infinity();
            for (int k = 0; k < 1000; ++k)
                best = std::min(best, warp_cost(q1, q2, random_warp(g, gen.uniform(0.0, 1.2), gen.seed())));
            CHECK(dp <= best);
        }
    }

    TEST_CASE("DP residual shrinks under grid refinement")
    {
        Gen gen(4);
        for (int trial = 0; trial < 5; ++trial) {
            const Harmonic f(gen);
            const double a = gen.uniform(0.3, 0.6);
            double previous = std::numeric_limits<double>::infinity();
            for (Index T : {64, 128, 256}) {
                const Grid g = Grid::uniform(T);
                const Srsf q1 = to_srsf(sample(g, f));
                const Srsf q2 = to_srsf(at_warp(invert_warp(Gen::quadratic(g, a)), f));
                const double cost = warp_cost(q1, q2, optimal_warp(q1, q2));
                CHECK(cost <= previous * 1.05);
                previous = cost;
            }
        }
    }

    TEST_CASE("amplitude distance")
    {
        const Grid g = Grid::uniform(128);
        Gen gen(5);
        for (int trial = 0; trial < 5; ++trial) {
            const Harmonic fa(gen);
            const auto f = sample(g, fa);
            CHECK(amplitude_distance(f, f) < 1e-8);
            CHECK(amplitude_distance(f, at_warp(moderate_warp(gen, g), fa)) < 0.05 * l2_norm(g, to_srsf(f).values));

            const Harmonic ha(gen);
            const double base = amplitude_distance(f, sample(g, ha));
            const double warped =
                amplitude_distance(at_warp(moderate_warp(gen, g), fa), at_warp(moderate_warp(gen, g), ha));
            CHECK(std::abs(warped - base) < 0.1 * base + 0.05);
        }
    }

    TEST_CASE("align_set of identical functions")
    {
        const Grid g = Grid::uniform(64);
        const auto f = bump(g, 3.0, 0.5, 0.1);
        const AlignedSet a = align_set({f, f, f});
        const Srsf q = to_srsf(f);
        const auto round_trip = from_srsf(q);
        for (Index i = 0; i < a.size(); ++i) {
            CHECK(max_grid_steps(a.warps[static_cast<std::size_t>(i)], g.times()) <= 1.0);
            CHECK(max_abs(a.aligned_functions[static_cast<std::size_t>(i)].values - round_trip.values) < 1e-6);
        }
        CHECK(max_abs(a.mean_srsf.values - q.values) < 1e-6);
    }

    TEST_CASE("align_set collapses a warped family")
    {
        const Grid g = Grid::uniform(101);
        Gen gen(6);
        const Harmonic f(gen);
        std::vector<SampledFunction> fs;
        std::vector<Vector> before;
        for (int i = 0; i < 8; ++i) {
            fs.push_back(at_warp(moderate_warp(gen, g), f));
            before.push_back(to_srsf(fs.back()).values);
        }
        const AlignedSet a = align_set(fs);
        std::vector<Vector> after;
        for (const auto& q : a.aligned_srsfs)
            after.push_back(q.values);
        CHECK(pairwise_sum(after, g) < 0.05 * pairwise_sum(before, g));
    }

    TEST_CASE("align_set invariants on a mixed sample")
    {
        const Grid g = Grid::uniform(101);
        const auto fs = warped_bumps(g, 12, 7);
        const AlignedSet a = align_set(fs);
        REQUIRE(a.size() == 12);
        CHECK(a.aligned_srsfs.size() == 12);
        CHECK(a.aligned_functions.size() == 12);
        CHECK(a.warps.size() == 12);
        CHECK(a.shooting_vectors.size() == 12);


        // Centering: the Karcher mean of the output warps is the identity.
        const KarcherMean km = warp_karcher_mean(a.warps);
        CHECK(phase_distance(km.mean, identity_warp(g)) < 1e-3);
        Vector mean_v = Vector::Zero(g.size());
        for (const auto& v : a.shooting_vectors)
            mean_v += v.values / 12.0;
        CHECK(l2_norm(g, mean_v) < 1e-3);
        for (const auto& v : a.shooting_vectors)
            CHECK(std::abs(inner_product(g, v.values, a.psi_mean.values)) < 1e-6);

        // Aligned functions keep their original starting values.
        for (Index i = 0; i < a.size(); ++i) {
            const auto k = static_cast<std::size_t>(i);
            CHECK(a.aligned_functions[k].values(0) == doctest::Approx(fs[k].values(0)));
        }

        // Cross-sectional variance of the SRSFs drops.
        auto variance = [&](const std::vector<Vector>& qs) {
            Vector mean = Vector::Zero(g.size());
            for (const auto& q : qs)
                mean += q / static_cast<double>(qs.size());
            double v = 0.0;
            for (const auto& q : qs)
                v += inner_product(g, q - mean, q - mean);
            return v;
        };
        std::vector<Vector> before;
        std::vector<Vector> after;
        for (Index i = 0; i < a.size(); ++i) {
            before.push_back(to_srsf(fs[static_cast<std::size_t>(i)]).values);
            after.push_back(a.aligned_srsfs[static_cast<std::size_t>(i)].values);
        }
        CHECK(variance(after) < variance(before));
    }

    TEST_CASE("aligned SRSFs stay aligned to the mean")
    {
        const Grid g = Grid::uniform(101);
        Gen gen(11);
        const Harmonic f(gen);
        std::vector<SampledFunction> fs;
        for (int i = 0; i < 10; ++i) {
            const double c = 0.2 * gen.normal();
            fs.push_back(at_warp(moderate_warp(gen, g), [&](double t) { return f(t) + c * std::sin(6 * pi * t); }));
        }
        const AlignedSet a = align_set(fs);
        for (const auto& q : a.aligned_srsfs) {
            const WarpingFunction again = optimal_warp(a.mean_srsf, q);
            CHECK(max_grid_steps(again, g.times()) <= 3.0);
            CHECK(warp_cost(a.mean_srsf, q, again) <= srsf_distance(a.mean_srsf, q) + 1e-12);
        }
    }

    TEST_CASE("align_set is invariant to input order")
    {
        const Grid g = Grid::uniform(64);
        const auto fs = warped_bumps(g, 8, 8);
        const AlignedSet a = align_set(fs);
        std::vector<std::size_t> perm(fs.size());
        for (std::size_t i = 0; i < perm.size(); ++i)
            perm[i] = perm.size() - 1 - i;
        std::vector<SampledFunction> shuffled;
        for (std::size_t i : perm)
            shuffled.push_back(fs[i]);
        const AlignedSet b = align_set(shuffled);
        CHECK(max_abs(a.mean_srsf.values - b.mean_srsf.values) < 1e-6);
        for (std::size_t i = 0; i < perm.size(); ++i)
            CHECK(max_abs(a.warps[perm[i]].values - b.warps[i].values) < 1e-6);
    }

    TEST_CASE("align_set errors")
    {
        const Grid g = Grid::uniform(64);
        const auto fs = warped_bumps(g, 6, 9);
        CHECK_THROWS_AS(align_set({fs[0]}), ParameterError);
        CHECK_THROWS_AS(align_set({fs[0], sample(Grid::uniform(65), [](double t) { return t; })}), GridMismatchError);
        AlignOptions tight;
        tight.tolerance = 0.0;
        tight.max_iterations = 1;
        try {
            align_set(fs, tight);
            FAIL("expected a convergence error");
        } catch (const ConvergenceError& e) {
            CHECK(e.iterations() == 1);
        }
    }

    TEST_CASE("a training sample aligns to the reference exactly as in the set")
    {
        const Grid g = Grid::uniform(101);
        const auto fs = warped_bumps(g, 10, 10);
        const AlignedSet a = align_set(fs);
        for (Index i = 0; i < a.size(); ++i) {
            const SamplePieces p = align_to_reference(a.reference(), fs[static_cast<std::size_t>(i)]);
            const SamplePieces stored = a.pieces(i);
            CHECK(p.warp.values == stored.warp.values);
            CHECK(p.aligned_srsf.values == stored.aligned_srsf.values);
            CHECK(p.shooting.values == stored.shooting.values);
        }
    }
}
