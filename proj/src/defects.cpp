#include "edlf/defects.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>

#include "edlf/errors.hpp"

namespace edlf {

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec3 node_pos(const GridDomain& d, std::size_t i) {
    int ix = static_cast<int>(i % d.nx);
    int iy = static_cast<int>((i / d.nx) % d.ny);
    int iz = static_cast<int>(i / (static_cast<std::size_t>(d.nx) * d.ny));
    return d.pos(ix, iy, iz);
}

// principal direction of a point cloud via Jacobi eigen iterations on the
// 3x3 covariance; deterministic
Vec3 principal_direction(const std::vector<Vec3>& pts, const Vec3& centroid) {
    double c[3][3] = {};
    for (const Vec3& p : pts) {
        Vec3 v = p - centroid;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) c[a][b] += v[a] * v[b];
    }
    double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int sweep = 0; sweep < 32; ++sweep) {
        double off = std::abs(c[0][1]) + std::abs(c[0][2]) + std::abs(c[1][2]);
        if (off < 1e-30) break;
        for (int p = 0; p < 3; ++p)
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(c[p][q]) < 1e-300) continue;
                double theta = 0.5 * std::atan2(2.0 * c[p][q], c[q][q] - c[p][p]);
                double co = std::cos(theta), si = std::sin(theta);
                for (int r = 0; r < 3; ++r) {
                    double cp = c[r][p], cq = c[r][q];
                    c[r][p] = co * cp - si * cq;
                    c[r][q] = si * cp + co * cq;
                }
                for (int r = 0; r < 3; ++r) {
                    double cp = c[p][r], cq = c[q][r];
                    c[p][r] = co * cp - si * cq;
                    c[q][r] = si * cp + co * cq;
                }
                for (int r = 0; r < 3; ++r) {
                    double vp = v[r][p], vq = v[r][q];
                    v[r][p] = co * vp - si * vq;
                    v[r][q] = si * vp + co * vq;
                }
            }
    }
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (c[i][i] > c[best][best]) best = i;
    Vec3 dir{v[0][best], v[1][best], v[2][best]};
    double n = norm(dir);
    return n > 0.0 ? dir / n : Vec3{1.0, 0.0, 0.0};
}

std::vector<Vec3> centerline(const std::vector<Vec3>& pts, double h) {
    if (pts.size() == 1) return {pts.front()};
    Vec3 centroid{};
    for (const Vec3& p : pts) centroid += p;
    centroid = centroid / static_cast<double>(pts.size());
    Vec3 axis = principal_direction(pts, centroid);

    std::vector<std::pair<double, std::size_t>> ts(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) ts[i] = {dot(pts[i] - centroid, axis), i};
    std::sort(ts.begin(), ts.end());

    const double width = 3.0 * h;
    const double step = 1.0 * h;
    double t0 = ts.front().first, t1 = ts.back().first;
    std::vector<Vec3> line;
    std::size_t lo = 0;
    for (double t = t0;; t += step) {
        double wlo = t - width / 2.0, whi = t + width / 2.0;
        while (lo < ts.size() && ts[lo].first < wlo) ++lo;
        Vec3 acc{};
        int cnt = 0;
        for (std::size_t i = lo; i < ts.size() && ts[i].first <= whi; ++i) {
            acc += pts[ts[i].second];
            ++cnt;
        }
        if (cnt > 0) {
            Vec3 p = acc / cnt;
            if (line.empty() || norm(p - line.back()) > 1e-9 * h) line.push_back(p);
        }
        if (t >= t1) break;
    }
    if (line.empty()) line.push_back(centroid);
    return line;
}

double point_set_diameter(const std::vector<Vec3>& pts) {
    if (pts.size() > 4096) {
        Vec3 lo = pts.front(), hi = pts.front();
        for (const Vec3& p : pts)
            for (int a = 0; a < 3; ++a) {
                lo[a] = std::min(lo[a], p[a]);
                hi[a] = std::max(hi[a], p[a]);
            }
        return norm(hi - lo);
    }
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            best = std::max(best, norm_sq(pts[i] - pts[j]));
    return std::sqrt(best);
}

double ref_scale(const LineFieldState& state) {
    double s = state.median_boundary_s();
    if (s > 0.0) return s;
    double m = 0.0;
    for (std::size_t i = 0; i < state.values.size(); ++i)
        if (state.domain.roles[i] != NodeRole::Exterior) m = std::max(m, norm(state.values[i]));
    return m;
}

}  // namespace

void LoopSpec::validate() const {
    if (points.size() < 4) throw InvalidInputError("LoopSpec: need at least 4 points");
    if (norm(points.front() - points.back()) > 1e-12)
        throw InvalidInputError("LoopSpec: loop must be closed (first = last)");
    for (const Vec3& p : points)
        if (!finite(p)) throw InvalidInputError("LoopSpec: non-finite point");
}

LoopSpec circle_loop(const Vec3& center, double radius, const Vec3& normal, int samples) {
    if (samples < 8) throw InvalidInputError("circle_loop: need at least 8 samples");
    if (!(radius > 0.0)) throw InvalidInputError("circle_loop: radius must be positive");
    double nn = norm(normal);
    if (!(nn > 0.0)) throw InvalidInputError("circle_loop: normal must be nonzero");
    Vec3 n = normal / nn;
    Vec3 seed = std::abs(n.y) < 0.9 ? Vec3{0.0, 1.0, 0.0} : Vec3{0.0, 0.0, 1.0};
    Vec3 f1 = cross(seed, n);
    f1 = f1 / norm(f1);
    Vec3 f2 = cross(n, f1);
    LoopSpec loop;
    loop.points.reserve(samples + 1);
    for (int i = 0; i < samples; ++i) {
        double t = 2.0 * kPi * i / samples;
        loop.points.push_back(center + radius * std::cos(t) * f1 + radius * std::sin(t) * f2);
    }
    loop.points.push_back(loop.points.front());
    loop.sample_spacing = 2.0 * kPi * radius / samples;
    return loop;
}

DefectGraph extract_zero_set(const LineFieldState& state, double eps_z) {
    if (!(eps_z > 0.0 && eps_z < 1.0))
        throw InvalidInputError("extract_zero_set: eps_z must lie in (0,1)");
    const GridDomain& d = state.domain;
    double s_ref = state.median_boundary_s();
    if (s_ref <= 0.0) {
        // no fixed boundary (analytic fields): fall back to the global max
        s_ref = 0.0;
        for (std::size_t i = 0; i < state.values.size(); ++i)
            if (d.roles[i] != NodeRole::Exterior) s_ref = std::max(s_ref, norm(state.values[i]));
        if (s_ref <= 0.0) throw DegenerateFieldError("extract_zero_set: field scale is zero");
    }
    const double thr = eps_z * s_ref;

    std::vector<char> mark(d.size(), 0);
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d.roles[i] != NodeRole::Exterior && norm(state.values[i]) < thr) mark[i] = 1;

    DefectGraph graph;
    graph.eps_z = eps_z;
    graph.s_ref = s_ref;

    std::vector<char> seen(d.size(), 0);
    for (std::size_t seed = 0; seed < d.size(); ++seed) {
        if (!mark[seed] || seen[seed]) continue;
        DefectComponent comp;
        std::deque<std::size_t> queue{seed};
        seen[seed] = 1;
        while (!queue.empty()) {
            std::size_t i = queue.front();
            queue.pop_front();
            comp.voxels.push_back(i);
            int ix = static_cast<int>(i % d.nx);
            int iy = static_cast<int>((i / d.nx) % d.ny);
            int iz = static_cast<int>(i / (static_cast<std::size_t>(d.nx) * d.ny));
            for (int dz = -1; dz <= 1; ++dz)
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0 && dz == 0) continue;
                        int jx = ix + dx, jy = iy + dy, jz = iz + dz;
                        if (!d.in_grid(jx, jy, jz)) continue;
                        std::size_t j = d.index(jx, jy, jz);
                        if (mark[j] && !seen[j]) {
                            seen[j] = 1;
                            queue.push_back(j);
                        }
                    }
        }
        std::sort(comp.voxels.begin(), comp.voxels.end());
        std::vector<Vec3> pts;
        pts.reserve(comp.voxels.size());
        for (std::size_t i : comp.voxels) pts.push_back(node_pos(d, i));
        comp.polyline = centerline(pts, d.h);
        comp.endpoints[0] = comp.polyline.front();
        comp.endpoints[1] = comp.polyline.back();
        comp.diameter = point_set_diameter(pts);
        graph.components.push_back(std::move(comp));
    }
    return graph;
}

int loop_class(const LineFieldState& state, const LoopSpec& loop, double s_floor) {
    loop.validate();
    double s_ref = ref_scale(state);
    if (s_ref <= 0.0) throw DegenerateFieldError("loop_class: field scale is zero");

    const std::size_t n = loop.points.size() - 1;  // last duplicates first
    std::vector<Vec3> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = sample_s_trilinear(state, loop.points[i]);
        if (s < s_floor * s_ref)
            throw ClassUndefinedError("loop_class: s below floor at sample " + std::to_string(i));
        w[i] = sample_w_aligned(state, loop.points[i]);
    }
    int prod = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& a = w[i];
        const Vec3& b = w[(i + 1) % n];
        double dp = dot(a, b);
        if (std::abs(dp) < 1e-6 * norm(a) * norm(b))
            throw AmbiguityError("loop_class: consecutive samples nearly perpendicular at " +
                                 std::to_string(i));
        if (dp < 0.0) prod = -prod;
    }
    return prod > 0 ? 0 : 1;
}

ParityReport sphere_crossing_parity(const LineFieldState& state, const Vec3& center,
                                    double radius, const DefectGraph& graph,
                                    const ParityOptions& opts) {
    if (!(radius > 0.0)) throw InvalidInputError("sphere_crossing_parity: radius must be > 0");
    const double h = state.domain.h;
    double loop_r = opts.loop_radius > 0.0 ? opts.loop_radius : 4.0 * h;

    ParityReport rep;
    for (std::size_t ci = 0; ci < graph.components.size(); ++ci) {
        const auto& line = graph.components[ci].polyline;
        for (std::size_t si = 0; si + 1 < line.size(); ++si) {
            Vec3 p = line[si], q = line[si + 1];
            Vec3 dvec = q - p;
            Vec3 rel = p - center;
            double A = norm_sq(dvec);
            if (A <= 0.0) continue;
            double B = 2.0 * dot(rel, dvec);
            double C = norm_sq(rel) - radius * radius;
            double disc = B * B - 4.0 * A * C;
            if (disc < 0.0) continue;
            double sq = std::sqrt(disc);
            for (double t : {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)}) {
                if (t < 0.0 || t >= 1.0) continue;
                SphereCrossing cr;
                cr.point = p + t * dvec;
                cr.tangent = dvec / std::sqrt(A);
                cr.component = static_cast<int>(ci);
                Vec3 radial = (cr.point - center) / radius;
                cr.tangential_warning = std::abs(dot(cr.tangent, radial)) < opts.transversal_margin;
                LoopSpec loop = circle_loop(cr.point, loop_r, cr.tangent, opts.loop_samples);
                cr.cls = loop_class(state, loop, opts.s_floor);
                if (cr.cls == 1) ++rep.class1_count;
                rep.crossings.push_back(cr);
            }
        }
    }
    rep.even_ok = (rep.class1_count % 2) == 0;
    return rep;
}

double reifenberg_flatness(const std::vector<Vec3>& points, const Vec3& b, double r) {
    if (!(r > 0.0)) throw InvalidInputError("reifenberg_flatness: r must be positive");
    std::vector<Vec3> inside;
    for (const Vec3& p : points)
        if (norm(p - b) <= r) inside.push_back(p);
    if (inside.empty())
        throw InvalidInputError("reifenberg_flatness: no points inside the ball (undefined)");

    Vec3 centroid{};
    for (const Vec3& p : inside) centroid += p;
    centroid = centroid / static_cast<double>(inside.size());
    Vec3 dir = principal_direction(inside, centroid);

    double sup1 = 0.0;
    for (const Vec3& p : inside) {
        Vec3 v = p - centroid;
        double along = dot(v, dir);
        sup1 = std::max(sup1, norm(v - along * dir));
    }

    // chord of L inside B_r(b): |centroid + t dir - b| = r
    Vec3 rel = centroid - b;
    double B = 2.0 * dot(rel, dir);
    double C = norm_sq(rel) - r * r;
    double disc = B * B - 4.0 * C;
    double sup2 = 0.0;
    if (disc > 0.0) {
        double sq = std::sqrt(disc);
        double t0 = (-B - sq) / 2.0, t1 = (-B + sq) / 2.0;
        int nsamp = 128;
        for (int i = 0; i <= nsamp; ++i) {
            Vec3 q = centroid + (t0 + (t1 - t0) * i / nsamp) * dir;
            double best = norm_sq(q - points.front());
            for (const Vec3& p : points) best = std::min(best, norm_sq(q - p));
            sup2 = std::max(sup2, std::sqrt(best));
        }
    }
    return std::max(sup1, sup2) / r;
}

namespace {

// branches of the component counted in shells around v; shells ladder
// outward past the tube thickness (extracted tubes are often 2-3 voxels wide)
int branch_count(const GridDomain& d, const std::vector<Vec3>& pts, const Vec3& v, double h) {
    (void)d;
    int worst = 0;
    for (double lo : {1.4, 2.4, 3.4}) {
        std::vector<Vec3> shell;
        for (const Vec3& p : pts) {
            double dist = norm(p - v);
            if (dist > lo * h && dist <= (lo + 1.0) * h) shell.push_back(p);
        }
        if (shell.empty()) continue;
        std::vector<int> cluster(shell.size(), -1);
        int nc = 0;
        for (std::size_t i = 0; i < shell.size(); ++i) {
            if (cluster[i] >= 0) continue;
            cluster[i] = nc;
            std::deque<std::size_t> queue{i};
            while (!queue.empty()) {
                std::size_t a = queue.front();
                queue.pop_front();
                for (std::size_t b = 0; b < shell.size(); ++b)
                    if (cluster[b] < 0 && norm(shell[a] - shell[b]) <= 1.8 * h) {
                        cluster[b] = nc;
                        queue.push_back(b);
                    }
            }
            ++nc;
        }
        worst = std::max(worst, nc);
    }
    return worst;
}

}  // namespace

void classify_components(const LineFieldState& state, DefectGraph& graph,
                         const std::vector<double>& scales, const ClassifyOptions& opts) {
    const GridDomain& d = state.domain;
    const double h = d.h;
    const double station_r = opts.loop_radius > 0.0 ? opts.loop_radius : 3.0 * h;
    const double iso_r = opts.isolated_loop_radius > 0.0 ? opts.isolated_loop_radius : 4.0 * h;

    graph.isolated_candidates.clear();
    graph.junctions.clear();
    graph.separations.clear();

    for (auto& comp : graph.components) {
        std::vector<Vec3> pts;
        pts.reserve(comp.voxels.size());
        for (std::size_t i : comp.voxels) pts.push_back(node_pos(d, i));

        // station loop classes along the centerline
        int defined1 = 0, stations = 0;
        const auto& line = comp.polyline;
        if (line.size() >= 3) {
            for (std::size_t i = 1; i + 1 < line.size(); ++i) {
                Vec3 tangent = line[i + 1] - line[i - 1];
                if (norm(tangent) <= 0.0) continue;
                ++stations;
                try {
                    LoopSpec loop = circle_loop(line[i], station_r, tangent, opts.loop_samples);
                    if (loop_class(state, loop, opts.s_floor) == 1) ++defined1;
                } catch (const Error&) {
                    // undefined station counts against the fraction
                }
            }
        }
        comp.station_class1_fraction = stations > 0 ? double(defined1) / stations : 0.0;

        // flatness profile on the centerline. Tested balls must lie inside
        // the domain and the curve must pass through them: at a station
        // within r of a polyline end the statistic would measure the
        // termination (domain cap or extraction fade-out), not the geometry.
        comp.flatness.clear();
        bool flat_ok = true;
        if (line.size() >= 2) {
            std::size_t stride = std::max<std::size_t>(1, line.size() / 12);
            for (std::size_t i = 0; i < line.size(); i += stride)
                for (double r : scales) {
                    if (r < 4.0 * h || r > comp.diameter + 2.0 * h) continue;
                    if (d.dist_to_boundary(line[i]) < r) continue;
                    if (norm(line[i] - line.front()) < r || norm(line[i] - line.back()) < r)
                        continue;
                    double eps = reifenberg_flatness(line, line[i], r);
                    comp.flatness.push_back({line[i], r, eps});
                    if (eps > opts.flatness_threshold) flat_ok = false;
                }
        }

        // isolated-candidate check: small and surrounded by trivial loops
        bool iso = comp.diameter <= opts.isolated_diameter_factor * h;
        if (iso) {
            Vec3 centroid{};
            for (const Vec3& p : pts) centroid += p;
            centroid = centroid / static_cast<double>(pts.size());
            const Vec3 normals[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
            for (const Vec3& nrm : normals) {
                try {
                    LoopSpec loop = circle_loop(centroid, iso_r, nrm, opts.loop_samples);
                    if (loop_class(state, loop, opts.s_floor) != 0) iso = false;
                } catch (const Error&) {
                    iso = false;
                }
                if (!iso) break;
            }
            if (iso) graph.isolated_candidates.push_back(centroid);
        }

        if (iso)
            comp.label = ComponentLabel::IsolatedCandidate;
        else if (stations > 0 &&
                 comp.station_class1_fraction >= opts.curve_station_fraction && flat_ok)
            comp.label = ComponentLabel::CurveLike;
        else
            comp.label = ComponentLabel::Ambiguous;

        // junction scan
        for (const Vec3& v : pts) {
            int bc = branch_count(d, pts, v, h);
            if (bc >= 3) {
                bool merged = false;
                for (auto& j : graph.junctions)
                    if (norm(j.point - v) <= 2.0 * h) {
                        j.branch_count = std::max(j.branch_count, bc);
                        merged = true;
                        break;
                    }
                if (!merged) graph.junctions.push_back({v, bc});
            }
        }
    }

    // pairwise separations of non-isolated components at the sampled scales
    for (std::size_t i = 0; i < graph.components.size(); ++i)
        for (std::size_t j = i + 1; j < graph.components.size(); ++j) {
            const auto& a = graph.components[i].polyline;
            const auto& b = graph.components[j].polyline;
            if (a.empty() || b.empty()) continue;
            double best = norm(a.front() - b.front());
            Vec3 pa = a.front(), pb = b.front();
            for (const Vec3& p : a)
                for (const Vec3& q : b) {
                    double dist = norm(p - q);
                    if (dist < best) {
                        best = dist;
                        pa = p;
                        pb = q;
                    }
                }
            Vec3 mid = 0.5 * (pa + pb);
            for (double r : scales) {
                double sep = -1.0;
                for (const Vec3& p : a) {
                    if (norm(p - mid) > r) continue;
                    for (const Vec3& q : b) {
                        if (norm(q - mid) > r) continue;
                        double dist = norm(p - q);
                        if (sep < 0.0 || dist < sep) sep = dist;
                    }
                }
                if (sep >= 0.0)
                    graph.separations.push_back(
                        {static_cast<int>(i), static_cast<int>(j), r, sep});
            }
        }
}

namespace {

const char* label_name(ComponentLabel l) {
    switch (l) {
        case ComponentLabel::CurveLike:
            return "curve_like";
        case ComponentLabel::IsolatedCandidate:
            return "isolated_candidate";
        case ComponentLabel::Ambiguous:
            return "ambiguous";
    }
    return "?";
}

}  // namespace

void write_defect_graph(const std::string& path, const DefectGraph& graph) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("write_defect_graph: cannot open '" + path + "'");
    char buf[256];
    out << "defect_graph eps_z=" << graph.eps_z << " s_ref=" << graph.s_ref
        << " components=" << graph.components.size() << "\n";
    for (std::size_t i = 0; i < graph.components.size(); ++i) {
        const auto& c = graph.components[i];
        std::snprintf(buf, sizeof buf,
                      "component %zu label=%s voxels=%zu diameter=%.17g station_class1=%.17g\n", i,
                      label_name(c.label), c.voxels.size(), c.diameter,
                      c.station_class1_fraction);
        out << buf;
        out << "  polyline";
        for (const Vec3& p : c.polyline) {
            std::snprintf(buf, sizeof buf, " (%.17g,%.17g,%.17g)", p.x, p.y, p.z);
            out << buf;
        }
        out << "\n";
        for (const auto& f : c.flatness) {
            std::snprintf(buf, sizeof buf, "  flatness b=(%.17g,%.17g,%.17g) r=%.17g eps=%.17g\n",
                          f.b.x, f.b.y, f.b.z, f.r, f.eps);
            out << buf;
        }
    }
    for (const auto& j : graph.junctions) {
        std::snprintf(buf, sizeof buf, "junction (%.17g,%.17g,%.17g) branches=%d\n", j.point.x,
                      j.point.y, j.point.z, j.branch_count);
        out << buf;
    }
    for (const auto& s : graph.separations) {
        std::snprintf(buf, sizeof buf, "separation %d %d r=%.17g dist=%.17g\n", s.comp_i,
                      s.comp_j, s.scale, s.distance);
        out << buf;
    }
}

void write_defect_summary_csv(const std::string& path, const DefectGraph& graph) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("write_defect_summary_csv: cannot open '" + path + "'");
    out << "component,label,voxels,diameter,station_class1_fraction,max_flatness\n";
    char buf[256];
    for (std::size_t i = 0; i < graph.components.size(); ++i) {
        const auto& c = graph.components[i];
        double maxf = 0.0;
        for (const auto& f : c.flatness) maxf = std::max(maxf, f.eps);
        std::snprintf(buf, sizeof buf, "%zu,%s,%zu,%.17g,%.17g,%.17g\n", i, label_name(c.label),
                      c.voxels.size(), c.diameter, c.station_class1_fraction, maxf);
        out << buf;
    }
}

}  // namespace edlf
