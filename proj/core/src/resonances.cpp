#include "resinv/resonances.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace resinv {

using cd = std::complex<double>;

int ResonanceSet::total() const {
    int t = n_origin;
    for (const auto& z : zeros) t += z.multiplicity;
    return t;
}

void ResonanceSet::validate() const {
    if (!(R > 0.0)) throw std::invalid_argument("ResonanceSet: R must be positive");
    if (n_origin < 0) throw std::invalid_argument("ResonanceSet: n_origin must be >= 0");
    for (const auto& z : zeros) {
        if (z.multiplicity < 1)
            throw std::invalid_argument("ResonanceSet: multiplicity must be >= 1");
        double az = std::abs(z.z);
        if (az == 0.0)
            throw std::invalid_argument("ResonanceSet: origin zeros belong in n_origin");
        if (az > R * (1.0 + 1e-12))
            throw std::invalid_argument("ResonanceSet: zero outside the disk");
        if (!std::isfinite(z.z.real()) || !std::isfinite(z.z.imag()))
            throw std::invalid_argument("ResonanceSet: non-finite zero");
    }
}

void ResonanceSearchConfig::validate() const {
    jost.validate();
    search.validate();
    if (!(origin_radius > 0.0))
        throw std::invalid_argument("ResonanceSearchConfig: origin_radius must be positive");
}

int count_zeros(const JostEvaluator& ev, cd center, double radius, const WindingOptions& opt) {
    AnalyticFn fn{[&ev](cd z) { return ev.both(z); }};
    return winding_number_circle(fn, center, radius, opt);
}

int count_zeros(const Potential& q, cd center, double radius, const JostEvaluationConfig& cfg) {
    JostEvaluator ev(q, cfg);
    return count_zeros(ev, center, radius);
}

namespace {

double jittered_radius(double R, int k) {
    if (k == 0) return R;
    int m = (k + 1) / 2;
    return R * (1.0 + (k % 2 == 1 ? -1.0 : 1.0) * 1e-3 * m);
}

void sort_zeros(std::vector<ResonanceZero>& zs) {
    std::sort(zs.begin(), zs.end(), [](const ResonanceZero& l, const ResonanceZero& r) {
        if (l.z.real() != r.z.real()) return l.z.real() < r.z.real();
        return l.z.imag() < r.z.imag();
    });
}

} // namespace

ResonanceSet find_resonances(const JostEvaluator& ev, double R, double tol,
                             const ResonanceSearchConfig& cfg) {
    cfg.validate();
    if (!(R > 0.0)) throw std::invalid_argument("find_resonances: R must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("find_resonances: tol must be positive");
    AnalyticFn fn{[&ev](cd z) { return ev.both(z); }};

    int n_origin = 0;
    if (std::abs(ev.psi(cd(0.0))) < tol) {
        bool counted = false;
        for (int k = 0; k < 6 && !counted; ++k) {
            try {
                n_origin = winding_number_circle(fn, cd(0.0), cfg.origin_radius * (1.0 + 1e-2 * k),
                                                 cfg.search.winding);
                counted = true;
            } catch (const ZeroOnContourError&) {
                if (k == 5) throw;
            }
        }
    }

    for (int k = 0; k < 10; ++k) {
        double Rk = jittered_radius(R, k);
        try {
            int total = winding_number_circle(fn, cd(0.0), Rk, cfg.search.winding);
            std::vector<LocatedZero> zs = locate_zeros(fn, cd(0.0), Rk, cfg.search);
            std::vector<ResonanceZero> kept;
            int sum = n_origin;
            for (const auto& lz : zs) {
                double az = std::abs(lz.z);
                if (az > Rk) continue; // found in the square, outside the disk
                if (n_origin > 0 && az <= cfg.origin_radius) continue; // the origin cluster
                kept.push_back({lz.z, lz.multiplicity});
                sum += lz.multiplicity;
            }
            if (sum != total) continue; // boundary straddle; jitter and retry
            sort_zeros(kept);
            ResonanceSet out{Rk, n_origin, std::move(kept)};
            out.validate();
            return out;
        } catch (const ZeroOnContourError&) {
            continue;
        }
    }
    throw std::runtime_error("find_resonances: no consistent zero inventory within the radius "
                             "jitter budget");
}

ResonanceSet find_resonances(const Potential& q, double R, double tol,
                             const ResonanceSearchConfig& cfg) {
    JostEvaluator ev(q, cfg.jost);
    return find_resonances(ev, R, tol, cfg);
}

namespace {

std::vector<cd> expand(const ResonanceSet& s) {
    std::vector<cd> out;
    for (const auto& z : s.zeros)
        for (int m = 0; m < z.multiplicity; ++m) out.push_back(z.z);
    return out;
}

// Kuhn's augmenting paths over edges with cost <= limit.
int max_matching(const std::vector<std::vector<double>>& cost, double limit,
                 std::vector<int>& match2) {
    int n1 = static_cast<int>(cost.size());
    int n2 = n1 > 0 ? static_cast<int>(cost[0].size()) : 0;
    match2.assign(n2, -1);
    std::vector<char> used(n2);
    std::function<bool(int)> augment = [&](int u) {
        for (int v = 0; v < n2; ++v) {
            if (used[v] || cost[u][v] > limit) continue;
            used[v] = 1;
            if (match2[v] < 0 || augment(match2[v])) {
                match2[v] = u;
                return true;
            }
        }
        return false;
    };
    int matched = 0;
    for (int u = 0; u < n1; ++u) {
        std::fill(used.begin(), used.end(), 0);
        if (augment(u)) ++matched;
    }
    return matched;
}

// Smallest cost threshold whose bipartite graph admits a matching of size
// `target`, found by binary search over the sorted distinct costs.
double bottleneck_threshold(const std::vector<std::vector<double>>& cost, int target,
                            std::vector<int>& best_match) {
    std::vector<double> levels;
    for (const auto& row : cost) levels.insert(levels.end(), row.begin(), row.end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    int lo = 0, hi = static_cast<int>(levels.size()) - 1;
    std::vector<int> match;
    if (max_matching(cost, levels[hi], match) < target)
        throw std::runtime_error("bottleneck pairing: matching target unreachable");
    best_match = match;
    double best = levels[hi];
    while (lo <= hi) {
        int mid = lo + (hi - lo) / 2;
        if (max_matching(cost, levels[mid], match) >= target) {
            best = levels[mid];
            best_match = match;
            hi = mid - 1;
        } else {
            lo = mid + 1;
        }
    }
    return best;
}

} // namespace

PairingResult pair_resonances(const ResonanceSet& s1, const ResonanceSet& s2) {
    s1.validate();
    s2.validate();
    if (s1.total() != s2.total())
        throw std::invalid_argument("pair_resonances: zero counts differ");
    if (s1.n_origin != s2.n_origin)
        throw std::invalid_argument("pair_resonances: origin multiplicities differ");

    std::vector<cd> a = expand(s1), b = expand(s2);
    PairingResult out;
    if (a.empty()) return out;

    std::vector<std::vector<double>> cost(a.size(), std::vector<double>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            cost[i][j] = std::abs(1.0 / b[j] - 1.0 / a[i]);

    std::vector<int> match2;
    out.epsilon = bottleneck_threshold(cost, static_cast<int>(a.size()), match2);
    std::vector<std::pair<cd, cd>> pairs(a.size());
    for (std::size_t v = 0; v < match2.size(); ++v) pairs[match2[v]] = {a[match2[v]], b[v]};
    out.pairs = std::move(pairs);
    return out;
}

PartialPairing pair_resonances_partial(const ResonanceSet& s1, const ResonanceSet& s2) {
    s1.validate();
    s2.validate();
    std::vector<cd> a = expand(s1), b = expand(s2);
    PartialPairing out;
    if (a.empty() || b.empty()) {
        out.only1 = a;
        out.only2 = b;
        return out;
    }

    std::vector<std::vector<double>> cost(a.size(), std::vector<double>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            cost[i][j] = std::abs(1.0 / b[j] - 1.0 / a[i]);

    int target = static_cast<int>(std::min(a.size(), b.size()));
    std::vector<int> match2;
    out.epsilon = bottleneck_threshold(cost, target, match2);

    std::vector<char> used1(a.size(), 0);
    for (std::size_t v = 0; v < match2.size(); ++v) {
        if (match2[v] < 0) {
            out.only2.push_back(b[v]);
            continue;
        }
        used1[match2[v]] = 1;
        out.pairs.emplace_back(a[match2[v]], b[v]);
    }
    for (std::size_t u = 0; u < a.size(); ++u)
        if (!used1[u]) out.only1.push_back(a[u]);
    std::sort(out.pairs.begin(), out.pairs.end(), [](const auto& l, const auto& r) {
        if (l.first.real() != r.first.real()) return l.first.real() < r.first.real();
        return l.first.imag() < r.first.imag();
    });
    return out;
}

ResonanceSet perturb_resonances(const ResonanceSet& s, double eps, std::uint64_t seed) {
    s.validate();
    if (!(eps >= 0.0)) throw std::invalid_argument("perturb_resonances: eps must be >= 0");
    if (eps == 0.0) return s;

    {
        std::ostringstream bad;
        int nbad = 0;
        for (const auto& z : s.zeros)
            if (2.0 * eps * std::abs(z.z) >= 1.0) {
                bad << (nbad++ ? ", " : "") << z.z;
            }
        if (nbad > 0)
            throw std::invalid_argument("perturb_resonances: eps too large near the origin for "
                                        "zeros: " + bad.str());
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double reach = eps * (1.0 - 1e-12); // keeps the nearness strict
    auto draw_disk = [&]() {
        double r = reach * std::sqrt(unif(rng));
        double ph = 2.0 * std::numbers::pi * unif(rng);
        return std::polar(r, ph);
    };
    auto moved = [](cd z, cd dw) { return 1.0 / (1.0 / z + dw); };
    auto same_halfplane = [](cd z, cd znew) {
        if (z.imag() > 0.0) return znew.imag() >= 0.0;
        if (z.imag() < 0.0) return znew.imag() <= 0.0;
        return true; // real zeros may leave the axis
    };

    const std::size_t n = s.zeros.size();
    std::vector<cd> out_z(n);
    std::vector<char> done(n, 0);
    std::ostringstream flagged;
    int nflag = 0;

    auto perturb_one = [&](cd z) -> cd {
        for (int attempt = 0; attempt < 64; ++attempt) {
            cd znew = moved(z, draw_disk());
            if (same_halfplane(z, znew)) return znew;
        }
        flagged << (nflag++ ? ", " : "") << z;
        return z;
    };

    for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) continue;
        cd z = s.zeros[i].z;
        double scale = 1.0 + std::abs(z);
        if (std::abs(z.real()) <= 1e-12 * scale) {
            // purely imaginary: slide along the axis so symmetry is exact
            double u = (2.0 * unif(rng) - 1.0) * reach;
            out_z[i] = 1.0 / (1.0 / z + cd(0.0, u));
            done[i] = 1;
            continue;
        }
        // mirror partner -conj(z), if present, moves in lockstep
        cd target = -std::conj(z);
        std::size_t partner = n;
        for (std::size_t j = i + 1; j < n && partner == n; ++j)
            if (!done[j] && s.zeros[j].multiplicity == s.zeros[i].multiplicity &&
                std::abs(s.zeros[j].z - target) <= 1e-9 * scale)
                partner = j;
        cd znew = perturb_one(z);
        out_z[i] = znew;
        done[i] = 1;
        if (partner < n) {
            out_z[partner] = -std::conj(znew);
            done[partner] = 1;
        }
    }

    if (nflag > 0)
        throw std::runtime_error("perturb_resonances: half-plane membership lost for zeros: " +
                                 flagged.str());

    ResonanceSet out;
    out.n_origin = s.n_origin;
    out.zeros.resize(n);
    double maxr = s.R;
    for (std::size_t i = 0; i < n; ++i) {
        out.zeros[i] = {out_z[i], s.zeros[i].multiplicity};
        maxr = std::max(maxr, std::abs(out_z[i]));
    }
    out.R = maxr;
    sort_zeros(out.zeros);
    out.validate();
    return out;
}

} // namespace resinv
