#include "efpcr/alignment.hpp"

#include <limits>
#include <numeric>
#include <string>

namespace efpcr {

namespace {

struct StencilStep
{
    int di;
    int dj;
    double sqrt_slope;
    // Position of gamma(t_{k+s}) relative to column l, s = 0..di.
    std::vector<int> offset;
    std::vector<double> frac;
    std::vector<double> weight;
    // sqrt_slope * q2(gamma(t_{k+s})) for a segment starting at column l,
    // stored at l * (di + 1) + s.
    std::vector<double> table;
};

std::vector<StencilStep> build_stencil(int max_step)
{
    std::vector<StencilStep> steps;
    // (1, 1) first: ties resolve towards the diagonal.
    for (int sum = 2; sum <= 2 * max_step; ++sum) {
        for (int a = 1; a <= max_step; ++a) {
            const int b = sum - a;
            if (b < 1 || b > max_step || std::gcd(a, b) != 1)
                continue;
            StencilStep st{a, b, std::sqrt(static_cast<double>(b) / a), {}, {}, {}, {}};
            for (int s = 0; s <= a; ++s) {
                const int num = b * s;
                st.offset.push_back(num / a);
                st.frac.push_back(static_cast<double>(num % a) / a);
                st.weight.push_back(s == 0 || s == a ? 0.5 : 1.0);
            }
            steps.push_back(std::move(st));
        }
    }
    return steps;
}

void require_uniform(const Grid& grid)
{
    if (grid.size() < 8)
        throw InvalidGridError("alignment needs at least 8 grid points");
    if (!grid.is_uniform())
        throw InvalidGridError("alignment needs a uniform grid");
}

Vector mean_of(const std::vector<Srsf>& qs)
{
    Vector m = Vector::Zero(qs.front().values.size());
    for (const auto& q : qs)
        m += q.values;
    return m / static_cast<double>(qs.size());
}

} // namespace

WarpingFunction optimal_warp(const Srsf& q1, const Srsf& q2, const DpOptions& options)
{
    require_same_grid(q1.grid, q2.grid);
    const Grid& grid = q1.grid;
    require_uniform(grid);
    if (options.max_step < 1)
        throw ParameterError("DP stencil needs max_step >= 1");

    const int T = static_cast<int>(grid.size());
    const int M = options.max_step;
    const double h = grid.mean_step();
    const double* a = q1.values.data();
    const double* b = q2.values.data();
    auto stencil = build_stencil(M);
    for (StencilStep& st : stencil) {
        const int width = st.di + 1;
        st.table.assign(static_cast<std::size_t>(T) * width, 0.0);
        for (int l = 0; l + st.dj < T; ++l) {
            for (int u = 0; u < width; ++u) {
                const int col = l + st.offset[u];
                const double fr = st.frac[u];
                const double q2_val = fr == 0.0 ? b[col] : b[col] + fr * (b[col + 1] - b[col]);
                st.table[static_cast<std::size_t>(l) * width + u] = st.sqrt_slope * q2_val;
            }
        }
    }
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> energy(static_cast<std::size_t>(T) * T, inf);
    std::vector<int> parent(static_cast<std::size_t>(T) * T, -1);
    auto at = [T](int i, int j) { return static_cast<std::size_t>(i) * T + j; };
    energy[at(0, 0)] = 0.0;

    const int last = T - 1;
    for (int i = 1; i < T; ++i) {
        for (int j = 1; j < T; ++j) {
            // Nodes outside the slope cone cannot lie on a feasible path.
            if (j > M * i || i > M * j || last - j > M * (last - i) || last - i > M * (last - j))
                continue;
            double best = inf;
            int best_step = -1;
            for (std::size_t s = 0; s < stencil.size(); ++s) {
                const StencilStep& st = stencil[s];
                const int k = i - st.di;
                const int l = j - st.dj;
                if (k < 0 || l < 0)
                    continue;
                const double base = energy[at(k, l)];
                // Segment costs are non-negative, so a base at or above the
                // best candidate cannot win.
                if (base >= best)
                    continue;
                const double* row = st.table.data() + static_cast<std::size_t>(l) * (st.di + 1);
                double acc = 0.0;
                for (int u = 0; u <= st.di; ++u) {
                    const double r = a[k + u] - row[u];
                    acc += st.weight[u] * r * r;
                }
                const double cand = base + h * acc;
                if (cand < best) {
                    best = cand;
                    best_step = static_cast<int>(s);
                }
            }
            energy[at(i, j)] = best;
            parent[at(i, j)] = best_step;
        }
    }

    std::vector<int> path_i{last};
    std::vector<int> path_j{last};
    int i = last;
    int j = last;
    while (i > 0 || j > 0) {
        const int s = parent[at(i, j)];
        if (s < 0)
            throw Error("DP lattice has no feasible path");
        i -= stencil[s].di;
        j -= stencil[s].dj;
        path_i.push_back(i);
        path_j.push_back(j);
    }

    const Vector& t = grid.times();
    const auto n_nodes = static_cast<Index>(path_i.size());
    Vector node_t(n_nodes);
    Vector node_gamma(n_nodes);
    for (Index k = 0; k < n_nodes; ++k) {
        node_t(k) = t(path_i[n_nodes - 1 - k]);
        node_gamma(k) = t(path_j[n_nodes - 1 - k]);
    }
    return WarpingFunction(grid, interp_linear(node_t, node_gamma, t));
}

double warp_cost(const Srsf& q1, const Srsf& q2, const WarpingFunction& gamma)
{
    return srsf_distance(q1, warp_srsf(q2, gamma));
}

double amplitude_distance(const SampledFunction& f1, const SampledFunction& f2, const DpOptions& options)
{
    require_same_grid(f1.grid, f2.grid);
    const Srsf q1 = to_srsf(f1);
    const Srsf q2 = to_srsf(f2);
    return warp_cost(q1, q2, optimal_warp(q1, q2, options));
}

SamplePieces AlignedSet::pieces(Index i) const
{
    const auto k = static_cast<std::size_t>(i);
    return SamplePieces{originals.at(k), aligned_srsfs.at(k), warps.at(k), shooting_vectors.at(k)};
}

SamplePieces align_to_reference(const AlignmentReference& reference, const SampledFunction& f)
{
    const Grid& grid = reference.mean_srsf.grid;
    SampledFunction g = resample(f, grid);
    Srsf q = to_srsf(g, reference.gradient);
    WarpingFunction gamma = compose_warps(optimal_warp(reference.target, q, reference.dp), reference.centering);
    Srsf aligned = warp_srsf(q, gamma);
    ShootingVector v = inv_exp_map(reference.psi_mean, to_psi(gamma));
    return SamplePieces{std::move(g), std::move(aligned), std::move(gamma), std::move(v)};
}

AlignedSet align_set(const std::vector<SampledFunction>& fs, const AlignOptions& options)
{
    if (fs.size() < 2)
        throw ParameterError("align_set needs at least two functions");
    const Grid& grid = fs.front().grid;
    require_uniform(grid);
    for (const auto& f : fs)
        require_same_grid(grid, f.grid);

    const std::size_t n = fs.size();
    std::vector<Srsf> qs;
    qs.reserve(n);
    for (const auto& f : fs)
        qs.push_back(to_srsf(f, options.gradient));

    // Start from the sample closest to the cross-sectional mean.
    const Vector cross_mean = mean_of(qs);
    std::size_t start = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double d = l2_norm(grid, Vector(qs[i].values - cross_mean));
        if (d < best) {
            best = d;
            start = i;
        }
    }
    Vector mu = qs[start].values;

    std::vector<WarpingFunction> warps(n, identity_warp(grid));
    int iter = 0;
    bool converged = false;
    while (iter < options.max_iterations) {
        ++iter;
        const Srsf reference(grid, mu);
        Vector next = Vector::Zero(grid.size());
        for (std::size_t i = 0; i < n; ++i) {
            warps[i] = optimal_warp(reference, qs[i], options.dp);
            next += warp_srsf(qs[i], warps[i]).values;
        }
        next /= static_cast<double>(n);
        const double scale = l2_norm(grid, mu);
        const double change = std::abs(l2_norm(grid, next) - scale);
        mu = std::move(next);
        if (change <= options.tolerance * scale) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("groupwise alignment did not converge in " + std::to_string(iter) + " iterations",
                               iter);

    // Final alignment to the converged mean, then center by composition.
    // Composition is only equivariant up to interpolation error, so the
    // centering warp is refined until the Karcher mean of the composed warps
    // is close to the identity.
    const Srsf target(grid, mu);
    std::vector<WarpingFunction> dp_warps;
    dp_warps.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        dp_warps.push_back(optimal_warp(target, qs[i], options.dp));
    warps = dp_warps;
    WarpingFunction centering = identity_warp(grid);
    KarcherMean final_mean = warp_karcher_mean(warps, options.karcher);
    for (int round = 0; round < options.max_centering_rounds; ++round) {
        if (phase_distance(final_mean.mean, identity_warp(grid)) <= options.centering_tolerance)
            break;
        centering = compose_warps(centering, invert_warp(final_mean.mean));
        for (std::size_t i = 0; i < n; ++i)
            warps[i] = compose_warps(dp_warps[i], centering);
        final_mean = warp_karcher_mean(warps, options.karcher);
    }
    std::vector<Srsf> aligned;
    std::vector<SampledFunction> aligned_functions;
    aligned.reserve(n);
    aligned_functions.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        aligned.push_back(warp_srsf(qs[i], warps[i]));
        aligned_functions.push_back(from_srsf(aligned.back()));
    }
    const Srsf mean_srsf(grid, mean_of(aligned));

    double f0_mean = 0.0;
    for (const auto& f : fs)
        f0_mean += f.values(0);
    f0_mean /= static_cast<double>(n);

    return AlignedSet{Srsf(grid, mean_srsf.values, f0_mean),
                      fs,
                      std::move(aligned),
                      std::move(aligned_functions),
                      std::move(warps),
                      std::move(final_mean.shooting_vectors),
                      std::move(final_mean.psi_mean),
                      options.gradient,
                      options.dp,
                      Srsf(grid, target.values, f0_mean),
                      centering,
                      iter};
}

} // namespace efpcr
