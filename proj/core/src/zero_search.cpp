#include "resinv/zero_search.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace resinv {

using cd = std::complex<double>;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
} // namespace

void WindingOptions::validate() const {
    if (min_samples < 8) throw std::invalid_argument("WindingOptions: min_samples must be >= 8");
    if (max_samples < min_samples)
        throw std::invalid_argument("WindingOptions: max_samples < min_samples");
    if (!(integer_slack > 0.0 && integer_slack < 0.5))
        throw std::invalid_argument("WindingOptions: integer_slack must lie in (0, 0.5)");
    if (!(contour_margin > 0.0))
        throw std::invalid_argument("WindingOptions: contour_margin must be positive");
}

void ZeroSearchOptions::validate() const {
    winding.validate();
    if (!(newton_tol > 0.0)) throw std::invalid_argument("ZeroSearchOptions: newton_tol");
    if (newton_iters < 1) throw std::invalid_argument("ZeroSearchOptions: newton_iters");
    if (multiplicity_cap < 1) throw std::invalid_argument("ZeroSearchOptions: multiplicity_cap");
    if (!(min_box > 0.0)) throw std::invalid_argument("ZeroSearchOptions: min_box");
    if (max_boxes < 1) throw std::invalid_argument("ZeroSearchOptions: max_boxes");
}

namespace {

struct Sample {
    cd z, f, df;
};

Sample probe(const AnalyticFn& fn, cd z, double margin) {
    auto [f, df] = fn.eval(z);
    if (!std::isfinite(f.real()) || !std::isfinite(f.imag()))
        throw std::runtime_error("zero search: non-finite function value");
    // Newton-step distance to the nearest zero; also catches an exact hit
    double af = std::abs(f);
    if (af == 0.0) throw ZeroOnContourError(z, 0.0);
    double adf = std::abs(df);
    if (adf > 0.0 && af < margin * adf) throw ZeroOnContourError(z, af / adf);
    return {z, f, df};
}

struct CircleQuadrature {
    double winding = 0.0;
    cd moment = 0.0;
    int samples = 0;
};

// One trapezoid level: terms t_k = (f'/f)(z_k) R e^{i theta_k} averaged over the
// period; doubling reuses previous samples at even indices.
CircleQuadrature circle_pass(const AnalyticFn& fn, cd center, double radius,
                             const WindingOptions& opt, bool want_moment) {
    int n = opt.min_samples;
    double target = kTwoPi * radius * 2.0; // ~2 samples per unit arc as a floor
    while (n < target && n < opt.max_samples) n *= 2;

    std::vector<cd> terms;
    std::vector<cd> zs;
    auto add_term = [&](int k, int total) {
        double th = kTwoPi * k / total;
        cd z = center + radius * std::polar(1.0, th);
        Sample s = probe(fn, z, opt.contour_margin);
        zs.push_back(z);
        terms.push_back(s.df / s.f * radius * std::polar(1.0, th));
    };
    for (int k = 0; k < n; ++k) add_term(k, n);

    auto raw = [&]() {
        cd sum = 0.0;
        for (cd t : terms) sum += t;
        return sum / double(terms.size());
    };
    auto raw_moment = [&]() {
        cd sum = 0.0;
        for (std::size_t k = 0; k < terms.size(); ++k) sum += zs[k] * terms[k];
        return sum / double(terms.size());
    };

    cd prev = raw();
    while (n < opt.max_samples) {
        // interleave midpoints: sample count doubles, old nodes stay valid
        std::vector<cd> old_terms = std::move(terms);
        std::vector<cd> old_zs = std::move(zs);
        terms.clear();
        zs.clear();
        for (int k = 0; k < n; ++k) {
            terms.push_back(old_terms[k]);
            zs.push_back(old_zs[k]);
            add_term(2 * k + 1, 2 * n);
        }
        n *= 2;
        cd cur = raw();
        double drift = std::abs(cur - prev);
        double nearest = std::abs(cur - std::round(cur.real()));
        if (drift < 0.02 && nearest <= opt.integer_slack) {
            CircleQuadrature q;
            q.winding = cur.real();
            q.moment = want_moment ? raw_moment() : cd(0.0);
            q.samples = n;
            return q;
        }
        prev = cur;
    }
    // Non-settling quadrature at full depth means a zero grazes the circle
    // between samples; report it as on-contour so callers jitter the radius.
    std::size_t worst = 0;
    for (std::size_t k = 1; k < terms.size(); ++k)
        if (std::abs(terms[k]) > std::abs(terms[worst])) worst = k;
    throw ZeroOnContourError(zs[worst], kTwoPi * radius / double(n));
}

} // namespace

int winding_number_circle(const AnalyticFn& fn, cd center, double radius,
                          const WindingOptions& opt) {
    opt.validate();
    if (!(radius > 0.0)) throw std::invalid_argument("winding_number_circle: radius");
    CircleQuadrature q = circle_pass(fn, center, radius, opt, false);
    return static_cast<int>(std::lround(q.winding));
}

std::pair<int, cd> winding_moment_circle(const AnalyticFn& fn, cd center, double radius,
                                         const WindingOptions& opt) {
    opt.validate();
    if (!(radius > 0.0)) throw std::invalid_argument("winding_moment_circle: radius");
    CircleQuadrature q = circle_pass(fn, center, radius, opt, true);
    int m = static_cast<int>(std::lround(q.winding));
    cd centroid = m != 0 ? q.moment / double(m) : center;
    return {m, centroid};
}

namespace {

// Accumulated change of arg f along the segment [a.z, b.z], bisecting until
// each piece turns by less than pi/2 so the principal branch cannot alias.
double arc_delta(const AnalyticFn& fn, const Sample& a, const Sample& b,
                 const WindingOptions& opt, int depth) {
    double delta = std::arg(b.f / a.f);
    if (std::abs(delta) < 0.5 * kPi && depth > 0) return delta;
    if (depth > 30) throw ZeroOnContourError(0.5 * (a.z + b.z), std::abs(b.z - a.z));
    Sample mid = probe(fn, 0.5 * (a.z + b.z), opt.contour_margin);
    return arc_delta(fn, a, mid, opt, depth + 1) + arc_delta(fn, mid, b, opt, depth + 1);
}

double edge_delta(const AnalyticFn& fn, cd p, cd q, const WindingOptions& opt,
                  double samples_per_unit) {
    int n = std::max(4, static_cast<int>(std::ceil(std::abs(q - p) * samples_per_unit)));
    double total = 0.0;
    Sample prev = probe(fn, p, opt.contour_margin);
    for (int k = 1; k <= n; ++k) {
        Sample cur = probe(fn, p + (q - p) * (double(k) / n), opt.contour_margin);
        total += arc_delta(fn, prev, cur, opt, 0);
        prev = cur;
    }
    return total;
}

struct Rect {
    double x0, x1, y0, y1;
    int count = 0;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double diam() const { return std::hypot(width(), height()); }
    cd center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
    bool contains(cd z) const {
        return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
    }
};

int winding_rectangle(const AnalyticFn& fn, const Rect& r, const WindingOptions& opt,
                      double samples_per_unit) {
    cd a{r.x0, r.y0}, b{r.x1, r.y0}, c{r.x1, r.y1}, d{r.x0, r.y1};
    double total = edge_delta(fn, a, b, opt, samples_per_unit) +
                   edge_delta(fn, b, c, opt, samples_per_unit) +
                   edge_delta(fn, c, d, opt, samples_per_unit) +
                   edge_delta(fn, d, a, opt, samples_per_unit);
    double w = total / kTwoPi;
    double rounded = std::round(w);
    if (std::abs(w - rounded) > opt.integer_slack)
        throw std::runtime_error("rectangle winding not near an integer");
    return static_cast<int>(rounded);
}

struct NewtonOutcome {
    cd z;
    double last_step = 0.0;
    bool ok = false;
};

// z -> z - m f/f', quadratic on an m-fold zero.
NewtonOutcome modified_newton(const AnalyticFn& fn, cd z0, int m, const ZeroSearchOptions& opt,
                              double leash) {
    NewtonOutcome out;
    cd z = z0;
    for (int it = 0; it < opt.newton_iters; ++it) {
        auto [f, df] = fn.eval(z);
        if (f == cd(0.0)) {
            out.z = z;
            out.last_step = 0.0;
            out.ok = true;
            return out;
        }
        if (df == cd(0.0)) return out;
        cd step = -double(m) * f / df;
        z += step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return out;
        if (std::abs(z - z0) > leash) return out;
        if (std::abs(step) < opt.newton_tol * (1.0 + std::abs(z))) {
            out.z = z;
            out.last_step = std::abs(step);
            out.ok = true;
            return out;
        }
    }
    return out;
}

constexpr double kSplitFractions[] = {0.5, 0.53, 0.462, 0.551, 0.438, 0.507};

// Contours of characteristic size len use a proximity margin no larger than a
// small fraction of len, so that tight confirmation circles and small boxes
// are not vetoed by the very zero they enclose.
WindingOptions scaled_margin(const WindingOptions& w, double len) {
    WindingOptions o = w;
    o.contour_margin = std::min(w.contour_margin, 0.02 * len);
    return o;
}

} // namespace

std::vector<LocatedZero> locate_zeros(const AnalyticFn& fn, cd center, double radius,
                                      const ZeroSearchOptions& opt) {
    opt.validate();
    if (!(radius > 0.0)) throw std::invalid_argument("locate_zeros: radius");
    const double spu =
        std::max(4.0 / radius, 8.0); // edge sampling density, floor of 4 per edge

    // root square circumscribing the disk; grown slightly when a zero sits on it
    Rect root{};
    bool rooted = false;
    for (int attempt = 0; attempt < 6 && !rooted; ++attempt) {
        double half = radius * (1.0 + 1e-3 * attempt);
        root = Rect{center.real() - half, center.real() + half, center.imag() - half,
                    center.imag() + half};
        try {
            root.count = winding_rectangle(fn, root, scaled_margin(opt.winding, root.diam()), spu);
            rooted = true;
        } catch (const ZeroOnContourError&) {
            if (attempt == 5) throw;
        }
    }

    std::vector<LocatedZero> out;
    std::vector<Rect> work;
    if (root.count > 0) work.push_back(root);
    int processed = 0;

    while (!work.empty()) {
        if (++processed > opt.max_boxes) {
            std::ostringstream msg;
            msg << "zero search budget exhausted: " << work.size() << " unresolved boxes, "
                << out.size() << " zeros located";
            throw std::runtime_error(msg.str());
        }
        Rect box = work.back();
        work.pop_back();
        double diam = box.diam();

        // isolation attempt: counts within the cap may be one (possibly
        // multiple) zero; confirm multiplicity on a tight circle before emitting
        if (box.count <= opt.multiplicity_cap) {
            NewtonOutcome nr = modified_newton(fn, box.center(), box.count, opt, 2.0 * diam);
            if (nr.ok && box.contains(nr.z)) {
                double edge_dist = std::min(
                    std::min(nr.z.real() - box.x0, box.x1 - nr.z.real()),
                    std::min(nr.z.imag() - box.y0, box.y1 - nr.z.imag()));
                double r_conf = std::max(4.0 * nr.last_step, 1e-12 * (1.0 + std::abs(nr.z)));
                if (r_conf < edge_dist || diam <= opt.min_box) {
                    try {
                        if (winding_number_circle(fn, nr.z, r_conf,
                                                  scaled_margin(opt.winding, r_conf)) ==
                            box.count) {
                            out.push_back({nr.z, box.count});
                            continue;
                        }
                    } catch (const ZeroOnContourError&) {
                        // another zero hugs the confirmation circle; fall through
                    } catch (const std::runtime_error&) {
                    }
                }
            }
        }

        if (diam <= opt.min_box) {
            // unresolvable cluster: report its winding centroid as one zero
            cd loc = box.center();
            try {
                auto [m, centroid] = winding_moment_circle(
                    fn, box.center(), 0.75 * diam, scaled_margin(opt.winding, diam));
                if (m == box.count) loc = centroid;
            } catch (const std::exception&) {
            }
            out.push_back({loc, box.count});
            continue;
        }

        // split the longer side; jitter the cut when a zero lands on it and
        // insist the children's winding numbers add up to the parent's
        bool split_done = false;
        for (std::size_t t = 0; t < std::size(kSplitFractions) && !split_done; ++t) {
            double f = kSplitFractions[t];
            Rect c1 = box, c2 = box;
            if (box.width() >= box.height()) {
                double cut = box.x0 + box.width() * f;
                c1.x1 = cut;
                c2.x0 = cut;
            } else {
                double cut = box.y0 + box.height() * f;
                c1.y1 = cut;
                c2.y0 = cut;
            }
            try {
                c1.count = winding_rectangle(fn, c1, scaled_margin(opt.winding, c1.diam()), spu);
                c2.count = winding_rectangle(fn, c2, scaled_margin(opt.winding, c2.diam()), spu);
            } catch (const ZeroOnContourError&) {
                continue;
            }
            if (c1.count + c2.count != box.count) continue; // aliasing or edge zero
            if (c1.count > 0) work.push_back(c1);
            if (c2.count > 0) work.push_back(c2);
            split_done = true;
        }
        if (!split_done)
            throw std::runtime_error("zero search could not split a box cleanly");
    }

    int total = 0;
    for (const auto& z : out) total += z.multiplicity;
    if (total != root.count) {
        std::ostringstream msg;
        msg << "zero search lost count: located " << total << " of " << root.count;
        throw std::runtime_error(msg.str());
    }
    std::sort(out.begin(), out.end(), [](const LocatedZero& l, const LocatedZero& r) {
        if (l.z.real() != r.z.real()) return l.z.real() < r.z.real();
        return l.z.imag() < r.z.imag();
    });
    return out;
}

} // namespace resinv
