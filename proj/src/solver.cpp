#include "edlf/solver.hpp"

#include <chrono>
#include <cmath>
#include <deque>

#include "edlf/energy.hpp"
#include "edlf/errors.hpp"
#include "edlf/field_io.hpp"
#include "edlf/rng.hpp"

namespace edlf {

void SolverOptions::validate() const {
    if (max_iters < 0) throw InvalidInputError("SolverOptions: max_iters must be >= 0");
    if (!(grad_tol > 0.0)) throw InvalidInputError("SolverOptions: grad_tol must be positive");
    if (!(shrink > 0.0 && shrink < 1.0))
        throw InvalidInputError("SolverOptions: shrink must lie in (0,1)");
    if (!(step0 > 0.0)) throw InvalidInputError("SolverOptions: step0 must be positive");
    if (!(armijo_c > 0.0 && armijo_c < 1.0))
        throw InvalidInputError("SolverOptions: armijo_c must lie in (0,1)");
    if (levels < 1) throw InvalidInputError("SolverOptions: levels must be >= 1");
}

namespace {

constexpr int kNb[6][3] = {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1}};

// Wavefront copy from the fixed boundary, then quotient-aware Jacobi sweeps.
void harmonic_fill(LineFieldState& state, int sweeps) {
    const GridDomain& d = state.domain;
    std::vector<char> filled(d.size(), 0);
    std::deque<std::size_t> queue;
    for (int iz = 0; iz < d.nz; ++iz)
        for (int iy = 0; iy < d.ny; ++iy)
            for (int ix = 0; ix < d.nx; ++ix) {
                std::size_t i = d.index(ix, iy, iz);
                if (d.roles[i] == NodeRole::BoundaryFixed) {
                    filled[i] = 1;
                    queue.push_back(i);
                }
            }
    if (queue.empty()) return;  // nothing fixed; leave interior as provided

    auto coords = [&](std::size_t i, int& ix, int& iy, int& iz) {
        ix = static_cast<int>(i % d.nx);
        iy = static_cast<int>((i / d.nx) % d.ny);
        iz = static_cast<int>(i / (static_cast<std::size_t>(d.nx) * d.ny));
    };
    while (!queue.empty()) {
        std::size_t i = queue.front();
        queue.pop_front();
        int ix, iy, iz;
        coords(i, ix, iy, iz);
        for (const auto& nb : kNb) {
            int jx = ix + nb[0], jy = iy + nb[1], jz = iz + nb[2];
            if (!d.in_grid(jx, jy, jz)) continue;
            std::size_t j = d.index(jx, jy, jz);
            if (filled[j] || d.roles[j] != NodeRole::Interior) continue;
            state.values[j] = state.values[i];
            filled[j] = 1;
            queue.push_back(j);
        }
    }

    std::vector<Vec3> next(state.values);
    const bool quot = state.params.quotient();
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (int iz = 0; iz < d.nz; ++iz)
            for (int iy = 0; iy < d.ny; ++iy)
                for (int ix = 0; ix < d.nx; ++ix) {
                    std::size_t i = d.index(ix, iy, iz);
                    if (d.roles[i] != NodeRole::Interior) continue;
                    Vec3 acc{};
                    int cnt = 0;
                    const Vec3& wc = state.values[i];
                    for (const auto& nb : kNb) {
                        int jx = ix + nb[0], jy = iy + nb[1], jz = iz + nb[2];
                        if (!d.in_grid(jx, jy, jz)) continue;
                        std::size_t j = d.index(jx, jy, jz);
                        if (d.roles[j] == NodeRole::Exterior) continue;
                        const Vec3& wn = state.values[j];
                        double sg = (quot && dot(wc, wn) < 0.0) ? -1.0 : 1.0;
                        acc += sg * wn;
                        ++cnt;
                    }
                    if (cnt > 0) next[i] = acc / cnt;
                }
        state.values.swap(next);
        next = state.values;
    }
}

void random_init(LineFieldState& state, std::uint64_t seed) {
    Rng rng(seed);
    double amp = state.max_boundary_s();
    if (amp <= 0.0) amp = 1.0;
    const GridDomain& d = state.domain;
    for (std::size_t i = 0; i < state.values.size(); ++i) {
        // consume the stream uniformly so the draw per node is independent of roles
        Vec3 v{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        if (d.roles[i] == NodeRole::Interior) state.values[i] = amp * v;
    }
}

}  // namespace

void initialize(LineFieldState& state, const SolverOptions& options) {
    options.validate();
    switch (options.init_mode) {
        case InitMode::BoundaryHarmonicFill:
            harmonic_fill(state, options.fill_sweeps);
            break;
        case InitMode::Random:
            random_init(state, options.seed);
            break;
        case InitMode::FromFile: {
            LineFieldState loaded = load_field(options.init_file);
            const GridDomain& a = loaded.domain;
            const GridDomain& b = state.domain;
            if (a.nx != b.nx || a.ny != b.ny || a.nz != b.nz || a.h != b.h ||
                !(a.origin == b.origin))
                throw InvalidInputError("initialize: init file grid does not match");
            for (std::size_t i = 0; i < state.values.size(); ++i)
                if (state.domain.roles[i] == NodeRole::Interior)
                    state.values[i] = loaded.values[i];
            break;
        }
    }
}

SolveReport minimize(LineFieldState& state, const SolverOptions& options) {
    options.validate();
    state.check_finite();
    auto t_start = std::chrono::steady_clock::now();

    const GridDomain& d = state.domain;
    const double cap = state.max_boundary_s();
    const bool has_cap = cap > 0.0;

    auto clip = [&](std::vector<Vec3>& w) {
        if (!has_cap) return;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (d.roles[i] != NodeRole::Interior) continue;
            double s = norm(w[i]);
            if (s > cap) w[i] *= cap / s;
        }
    };
    clip(state.values);

    SolveReport rep;
    std::vector<Vec3> grad, prev_w, prev_g, trial;
    double energy = energy_and_gradient(state, grad);
    const double energy0 = energy;
    rep.energy_trace.push_back(energy);

    double step = options.step0;
    bool have_prev = false;

    for (int it = 0; it < options.max_iters; ++it) {
        double gn2 = 0.0;
        for (std::size_t i = 0; i < grad.size(); ++i) gn2 += norm_sq(grad[i]);
        double gn = std::sqrt(gn2);
        double scale = gradient_scale(state, energy);
        double rel = (scale > 0.0) ? gn / scale : 0.0;
        rep.final_rel_grad = rel;
        if (gn == 0.0 || rel <= options.grad_tol || energy <= 1e-24 * std::max(energy0, 1.0)) {
            rep.converged = true;
            break;
        }

        double t = options.step0;
        if (have_prev) {
            // BB1 trial step from the last accepted move
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < grad.size(); ++i) {
                Vec3 dw = state.values[i] - prev_w[i];
                Vec3 dg = grad[i] - prev_g[i];
                num += norm_sq(dw);
                den += dot(dw, dg);
            }
            t = (den > 0.0 && num > 0.0) ? num / den : step * 2.0;
        }

        prev_w = state.values;
        prev_g = grad;

        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            trial = prev_w;
            for (std::size_t i = 0; i < trial.size(); ++i)
                if (d.roles[i] == NodeRole::Interior) trial[i] -= t * grad[i];
            clip(trial);
            state.values.swap(trial);
            double e_try = total_energy(state);
            if (e_try <= energy - options.armijo_c * t * gn2) {
                accepted = true;
                break;
            }
            state.values.swap(trial);  // revert
            t *= options.shrink;
        }
        if (!accepted) {
            rep.line_search_stalled = true;
            state.values = prev_w;
            break;
        }
        step = t;
        have_prev = true;
        energy = energy_and_gradient(state, grad);
        rep.energy_trace.push_back(energy);
        rep.iterations = it + 1;
    }

    rep.final_energy = energy;
    {
        double gn2 = 0.0;
        for (std::size_t i = 0; i < grad.size(); ++i) gn2 += norm_sq(grad[i]);
        double scale = gradient_scale(state, energy);
        rep.final_rel_grad = (scale > 0.0) ? std::sqrt(gn2) / scale : 0.0;
    }

    double max_int = 0.0;
    for (std::size_t i = 0; i < state.values.size(); ++i)
        if (d.roles[i] == NodeRole::Interior) max_int = std::max(max_int, norm(state.values[i]));
    rep.max_principle_violation = std::max(0.0, max_int - cap);
    rep.max_principle_ok = !has_cap || rep.max_principle_violation <= 1e-9 * cap;

    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

LineFieldState coarse_to_fine(const ProblemSpec& spec, const SolverOptions& options,
                              SolveReport* final_report) {
    options.validate();
    if (!(spec.h_finest > 0.0)) throw InvalidInputError("coarse_to_fine: h_finest must be positive");

    LineFieldState current;
    bool have_coarse = false;
    for (int level = options.levels - 1; level >= 0; --level) {
        double h = spec.h_finest * std::pow(2.0, level);
        GridDomain dom = spec.domain_for_h(h);
        LineFieldState st(std::move(dom), spec.params);
        st.apply_boundary(spec.boundary);
        if (!have_coarse) {
            initialize(st, options);
        } else {
            const GridDomain& d = st.domain;
            for (int iz = 0; iz < d.nz; ++iz)
                for (int iy = 0; iy < d.ny; ++iy)
                    for (int ix = 0; ix < d.nx; ++ix)
                        if (d.role(ix, iy, iz) == NodeRole::Interior)
                            st.at(ix, iy, iz) = sample_w_aligned(current, d.pos(ix, iy, iz));
        }
        SolveReport rep = minimize(st, options);
        if (level == 0 && final_report) *final_report = rep;
        current = std::move(st);
        have_coarse = true;
    }
    return current;
}

}  // namespace edlf
