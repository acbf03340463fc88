#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace resinv {

/// An analytic function handed to the zero machinery: eval returns (f, f').
struct AnalyticFn {
    std::function<std::pair<std::complex<double>, std::complex<double>>(std::complex<double>)>
        eval;
};

/// A zero (or an unresolved cluster) sits too close to an integration contour
/// for the winding number to be trusted.
class ZeroOnContourError : public std::runtime_error {
  public:
    ZeroOnContourError(std::complex<double> where, double distance)
        : std::runtime_error("zero too close to integration contour"), where_(where),
          distance_(distance) {}
    std::complex<double> where() const { return where_; }
    double distance() const { return distance_; }

  private:
    std::complex<double> where_;
    double distance_;
};

struct WindingOptions {
    int min_samples = 64;        ///< initial trapezoid resolution on circles
    int max_samples = 16384;     ///< refinement cap
    double integer_slack = 0.25; ///< raw quadrature must land this close to an integer
    double contour_margin = 1e-6; ///< Newton-step distance |f/f'| that flags zero-on-contour

    void validate() const;
};

/// Winding number of f around the circle |z - center| = radius, by adaptive
/// trapezoid quadrature of f'/f (spectrally accurate on the smooth circle).
/// Throws ZeroOnContourError when a zero sits within contour_margin of the
/// path, and std::runtime_error when the quadrature refuses to settle near an
/// integer within max_samples.
int winding_number_circle(const AnalyticFn& fn, std::complex<double> center, double radius,
                          const WindingOptions& opt = {});

/// Winding number plus first moment: returns (count m, sum of zero locations
/// inside / m).  The centroid is meaningful only when m > 0.
std::pair<int, std::complex<double>> winding_moment_circle(const AnalyticFn& fn,
                                                           std::complex<double> center,
                                                           double radius,
                                                           const WindingOptions& opt = {});

struct LocatedZero {
    std::complex<double> z;
    int multiplicity = 1;
};

struct ZeroSearchOptions {
    WindingOptions winding;
    double newton_tol = 1e-11;  ///< relative step size that ends Newton polish
    int newton_iters = 60;
    int multiplicity_cap = 3;   ///< boxes counting more than this keep splitting
    double min_box = 1e-8;      ///< below this diameter a cluster is accepted as one zero
    int max_boxes = 40000;      ///< subdivision budget

    void validate() const;
};

/// Locate all zeros of f in the axis-aligned square circumscribing the disk
/// |z - center| <= radius, by recursive rectangle subdivision on winding
/// numbers (phase-tracked edge integrals, jittered split lines), modified
/// Newton refinement, and per-box multiplicity assignment.  The result is
/// sorted by (Re, Im).  Winding conservation is verified at every split.
std::vector<LocatedZero> locate_zeros(const AnalyticFn& fn, std::complex<double> center,
                                      double radius, const ZeroSearchOptions& opt = {});

} // namespace resinv
