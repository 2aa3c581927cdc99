#include "support.hpp"

using namespace support;

namespace {

/// Aligned set assembled from known warps, bypassing the DP.
AlignedSet assemble(const std::vector<SampledFunction>& fs, const std::vector<WarpingFunction>& warps)
{
    const Grid& g = fs.front().grid;
    std::vector<Srsf> aligned;
    std::vector<SampledFunction> aligned_functions;
    Vector mean = Vector::Zero(g.size());
    for (std::size_t i = 0; i < fs.size(); ++i) {
        aligned.push_back(warp_srsf(to_srsf(fs[i]), warps[i]));
        aligned_functions.push_back(from_srsf(aligned.back()));
        mean += aligned.back().values / static_cast<double>(fs.size());
    }
    KarcherMean km = warp_karcher_mean(warps);
    return AlignedSet{Srsf(g, mean, fs.front().values(0)),
                      fs,
                      aligned,
                      aligned_functions,
                      warps,
                      km.shooting_vectors,
                      km.psi_mean,
                      {},
                      {},
                      Srsf(g, mean, fs.front().values(0)),
                      identity_warp(g),
                      1};
}

std::vector<SampledFunction> smooth_family(const Grid& g, Gen& gen, int n)
{
    std::vector<SampledFunction> fs;
    for (int i = 0; i < n; ++i)
        fs.push_back(gen.smooth(g));
    return fs;
}

void check_model_invariants(const FpcaModel& m)
{
    const Matrix gram = m.basis.transpose() * m.weights.asDiagonal() * m.basis;
    CHECK((gram - Matrix::Identity(m.n_components, m.n_components)).cwiseAbs().maxCoeff() < 1e-8);
    for (Index j = 0; j < m.singular_values.size(); ++j) {
        CHECK(m.singular_values(j) >= 0.0);
        if (j > 0)
            CHECK(m.singular_values(j) <= m.singular_values(j - 1));
    }
    CHECK(m.singular_values.sum() <= m.total_variance + 1e-8);
    for (Index j = 0; j < m.basis.cols(); ++j) {
        const double scale = m.basis.col(j).cwiseAbs().maxCoeff();
        for (Index i = 0; i < m.basis.rows(); ++i) {
            if (std::abs(m.basis(i, j)) > 1e-10 * scale) {
                CHECK(m.basis(i, j) > 0.0);
                break;
            }
        }
    }
}

Matrix centered_columns(const FpcaModel& m, const AlignedSet& a)
{
    const Matrix X = m.kind == FpcaKind::standard ? [&] {
        Matrix raw(a.grid().size(), a.size());
        for (Index i = 0; i < a.size(); ++i)
            raw.col(i) = a.originals[static_cast<std::size_t>(i)].values;
        return raw;
    }()
                                                  : representations(m.kind, a, m.C);
    return X.colwise() - m.mean;
}

} // namespace

TEST_SUITE("fpca")
{
    TEST_CASE("representation sizes and weights")
    {
        const Grid g = Grid::uniform(50);
        CHECK(representation_size(FpcaKind::vertical, 50) == 51);
        CHECK(representation_size(FpcaKind::combined, 50) == 100);
        CHECK(representation_size(FpcaKind::horizontal, 50) == 50);
        CHECK(representation_size(FpcaKind::standard, 50) == 50);
        const Vector wv = representation_weights(FpcaKind::vertical, g);
        CHECK(wv.size() == 51);
        CHECK(wv(50) == doctest::Approx(1.0 / 49.0));
        CHECK(representation_weights(FpcaKind::combined, g).sum() == doctest::Approx(2.0));
        CHECK(parse_fpca_kind("elastic_combined") == FpcaKind::combined);
        CHECK(to_string(FpcaKind::horizontal) == "horizontal");
        CHECK_THROWS_AS(parse_fpca_kind("kernel"), ParameterError);
    }

    TEST_CASE("identical inputs have zero singular values")
    {
        const Grid g = Grid::uniform(64);
        const auto f = sample(g, [](double t) { return std::sin(2 * pi * t) + t; });
        const AlignedSet a = align_set({f, f, f, f});
        for (FpcaKind kind : {FpcaKind::vertical, FpcaKind::horizontal, FpcaKind::combined, FpcaKind::standard}) {
            const FpcaModel m = fit_fpca(kind, a, 2, 1.0);
            CHECK(m.singular_values.cwiseAbs().maxCoeff() < 1e-20);
        }
        const CEstimate c = estimate_C(a);
        CHECK(c.degenerate_phase);
        CHECK(c.C == 1.0);
    }

    TEST_CASE("two samples give one nonzero singular value")
    {
        const Grid g = Grid::uniform(64);
        Gen gen(1);
        const auto fs = smooth_family(g, gen, 2);
        const AlignedSet a = assemble(fs, {identity_warp(g), identity_warp(g)});
        for (FpcaKind kind : {FpcaKind::vertical, FpcaKind::standard}) {
            const FpcaModel m = fit_fpca(kind, a, 1);
            CHECK(m.singular_values(0) > 0.0);
            CHECK(std::abs(m.singular_values(0) - m.total_variance) < 1e-12 * m.total_variance);
        }
    }

    TEST_CASE("property: full-rank reconstruction for all kinds")
    {
        Gen gen(2);
        for (int trial = 0; trial < 3; ++trial) {
            const Grid g = Grid::uniform(gen.integer(40, 80));
            const auto fs = warped_bumps(g, gen.integer(4, 9), gen.seed());
            const AlignedSet a = align_set(fs);
            const Index p = a.size() - 1;
            for (FpcaKind kind : {FpcaKind::vertical, FpcaKind::horizontal, FpcaKind::combined, FpcaKind::standard}) {
                const FpcaModel m = fit_fpca(kind, a, p);
                check_model_invariants(m);
                const Matrix centered = centered_columns(m, a);
                const Matrix rebuilt = m.basis * m.scores.transpose();
                CHECK((rebuilt - centered).cwiseAbs().maxCoeff() < 1e-6);
            }
        }
    }

    TEST_CASE("vertical mean carries the starting values")
    {
        const Grid g = Grid::uniform(60);
        Gen gen(3);
        const auto fs = smooth_family(g, gen, 5);
        std::vector<WarpingFunction> ids(5, identity_warp(g));
        const FpcaModel m = vertical_fpca(assemble(fs, ids), 3);
        double f0 = 0.0;
        for (const auto& f : fs)
            f0 += f.values(0) / 5.0;
        CHECK(m.mean.size() == 61);
        CHECK(m.mean(60) == doctest::Approx(f0));
    }

    TEST_CASE("component count is validated")
    {
        const Grid g = Grid::uniform(40);
        Gen gen(4);
        const AlignedSet a = assemble(smooth_family(g, gen, 4), std::vector<WarpingFunction>(4, identity_warp(g)));
        CHECK_THROWS_AS(vertical_fpca(a, 0), ParameterError);
        CHECK_THROWS_AS(vertical_fpca(a, 4), ParameterError);
        CHECK_THROWS_AS(standard_fpca(a.originals, 4), ParameterError);
        CHECK_THROWS_AS(combined_fpca(a, 2, 0.0), ParameterError);
        CHECK_THROWS_AS(combined_fpca(a, 2, -1.0), ParameterError);
        CHECK_NOTHROW(vertical_fpca(a, 3));
    }

    TEST_CASE("a one-parameter warp family is rank one")
    {
        const Grid g = Grid::uniform(100);
        Gen gen(5);
        const PsiFunction id = identity_psi(g);
        const Vector v0 = gen.tangent(id, 1.0);
        const double limit = 0.9 / v0.cwiseAbs().maxCoeff();
        const auto f = sample(g, [](double t) { return std::sin(2 * pi * t); });
        std::vector<SampledFunction> fs;
        std::vector<WarpingFunction> warps;
        for (int i = 0; i < 10; ++i) {
            warps.push_back(from_psi(exp_map(id, Vector(gen.uniform(-limit, limit) * v0))));
            fs.push_back(f);
        }
        const FpcaModel m = horizontal_fpca(assemble(fs, warps), 3);
        CHECK(m.singular_values(0) > 0.99 * m.total_variance);
    }

    TEST_CASE("horizontal coefficients have zero mean")
    {
        const Grid g = Grid::uniform(80);
        const AlignedSet a = align_set(warped_bumps(g, 10, 6));
        const FpcaModel m = horizontal_fpca(a, 4);
        CHECK(m.scores.colwise().mean().cwiseAbs().maxCoeff() < 1e-6);
        CHECK(m.mean.cwiseAbs().maxCoeff() == 0.0);
    }

    TEST_CASE("large C concentrates the leading direction in the phase block")
    {
        const Grid g = Grid::uniform(80);
        const AlignedSet a = align_set(warped_bumps(g, 12, 7));
        const FpcaModel m = combined_fpca(a, 3, 100.0);
        const Index T = g.size();
        const Vector u = m.basis.col(0);
        const double phase =
            (m.weights.tail(T).array() * u.tail(T).array().square()).sum() / (m.weights.array() * u.array().square()).sum();
        CHECK(phase > 0.9);
        CHECK(m.C == 100.0);
    }

    TEST_CASE("estimate_C homogeneity")
    {
        const Grid g = Grid::uniform(90);
        Gen gen(8);
        std::vector<SampledFunction> fs;
        std::vector<WarpingFunction> warps;
        for (int i = 0; i < 8; ++i) {
            fs.push_back(gen.smooth(g));
            warps.push_back(gen.quadratic_warp(g, 0.4));
        }
        const AlignedSet a = assemble(fs, warps);
        const CEstimate base = estimate_C(a);
        CHECK_FALSE(base.degenerate_phase);
        CHECK(base.C > 0.0);

        AlignedSet doubled = a;
        for (auto& v : doubled.shooting_vectors)
            v.values *= 2.0;
        CHECK(estimate_C(doubled).C == doctest::Approx(base.C / 2.0).epsilon(1e-12));

        AlignedSet tripled = a;
        for (auto& q : tripled.aligned_srsfs)
            q.values *= 3.0;
        CHECK(estimate_C(tripled).C == doctest::Approx(base.C * 3.0).epsilon(1e-12));

        // C balances the dispersion of the two blocks.
        const Matrix X = representations(FpcaKind::combined, a, base.C);
        const Matrix centered = X.colwise() - Vector(X.rowwise().mean());
        const Vector w = representation_weights(FpcaKind::combined, g);
        const Index T = g.size();
        const double amp = (w.head(T).asDiagonal() * centered.topRows(T).cwiseAbs2()).sum();
        const Matrix phase_block = X.bottomRows(T);
        const double ph = (w.tail(T).asDiagonal() * phase_block.cwiseAbs2()).sum();
        CHECK(amp == doctest::Approx(ph).epsilon(1e-10));
    }

    TEST_CASE("projection")
    {
        const Grid g = Grid::uniform(70);
        const AlignedSet a = align_set(warped_bumps(g, 9, 9));
        for (FpcaKind kind : {FpcaKind::vertical, FpcaKind::horizontal, FpcaKind::combined, FpcaKind::standard}) {
            const FpcaModel m = fit_fpca(kind, a, 4);
            CHECK(project(m, Matrix(m.mean)).cwiseAbs().maxCoeff() < 1e-12);
            for (Index k = 0; k < 4; ++k) {
                const Eigen::RowVectorXd e = project(m, Matrix(m.mean + m.basis.col(k))).row(0);
                Eigen::RowVectorXd unit = Eigen::RowVectorXd::Zero(4);
                unit(k) = 1.0;
                CHECK((e - unit).cwiseAbs().maxCoeff() < 1e-8);
            }
            CHECK((project(m, a) - m.scores).cwiseAbs().maxCoeff() < 1e-10);
            for (Index i = 0; i < a.size(); ++i)
                CHECK((project(m, a.pieces(i)) - m.scores.row(i)).cwiseAbs().maxCoeff() < 1e-10);
            CHECK_THROWS_AS(project(m, Matrix::Zero(m.dimension() + 1, 1)), DimensionError);
        }
        CHECK_THROWS_AS(project(vertical_fpca(a, 2), a.originals), ParameterError);
    }

    TEST_CASE("principal paths")
    {
        const Grid g = Grid::uniform(80);
        const AlignedSet a = align_set(warped_bumps(g, 10, 10));
        for (FpcaKind kind : {FpcaKind::vertical, FpcaKind::horizontal, FpcaKind::combined, FpcaKind::standard}) {
            const FpcaModel m = fit_fpca(kind, a, 3);
            const auto at_zero = principal_paths(m, 0, {0.0}).front();
            CHECK(phase_distance(at_zero.warp, identity_warp(g)) < 1e-3);
            if (kind == FpcaKind::standard)
                CHECK(max_abs(at_zero.function.values - m.mean) < 1e-12);
            else
                CHECK(max_abs(at_zero.function.values - from_srsf(Srsf(g, a.mean_srsf.values, m.f0_mean)).values)
                      < 1e-12);
            CHECK_THROWS_AS(principal_paths(m, 3, {0.0}), ParameterError);
        }

        const FpcaModel standard = standard_fpca(a.originals, 3);
        const auto sym = principal_paths(standard, 1, {-1.0, 1.0});
        CHECK(max_abs(sym[0].function.values + sym[1].function.values - 2.0 * standard.mean) < 1e-12);

        const FpcaModel vertical = vertical_fpca(a, 3);
        CHECK(max_abs(principal_paths(vertical, 0, {1.5}).front().warp.values - g.times()) == 0.0);

        const FpcaModel combined = combined_fpca(a, 3, estimate_C(a).C);
        const auto path = principal_paths(combined, 0, {0.0, 0.5, 1.0, 1.5, 2.0});
        const SampledFunction mean_curve = compose(path[0].function, path[0].warp);
        double previous = 0.0;
        for (std::size_t k = 1; k < path.size(); ++k) {
            const double d = l2_norm(g, Vector(compose(path[k].function, path[k].warp).values - mean_curve.values));
            CHECK(d > previous);
            previous = d;
        }
    }

    TEST_CASE("phase-free data")
    {
        const Grid g = Grid::uniform(90);
        Gen gen(12);
        std::vector<SampledFunction> fs;
        for (int i = 0; i < 8; ++i) {
            const double s = gen.uniform(0.5, 2.0);
            fs.push_back(sample(g, [s](double t) { return s * (std::sin(2 * pi * t) + 0.5 * std::cos(4 * pi * t)); }));
        }
        const AlignedSet a = align_set(fs);
        for (const auto& w : a.warps)
            CHECK(max_abs(w.values - g.times()) * 89.0 <= 1.0);
        const FpcaModel h = horizontal_fpca(a, 3);
        CHECK(h.total_variance < 1e-6);
        const FpcaModel v = vertical_fpca(a, 3);
        CHECK(v.singular_values(0) > 0.99 * v.total_variance);
    }
}
