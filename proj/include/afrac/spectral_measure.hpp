#pragma once

#include <array>
#include <string>
#include <vector>

namespace afrac {

struct Atom {
    std::vector<double> direction;  // unit vector in R^n
    double weight = 0.0;
};

// Constant density on the arc [a, b) of S^1 (radians, 0 <= a < b <= 2*pi after canonicalization).
struct DensityPiece {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
};

class SpectralMeasure {
public:
    explicit SpectralMeasure(int dimension = 2);

    // delta_{e1}+delta_{-e1}+...+delta_{en}+delta_{-en}
    static SpectralMeasure coordinate_axes(int dimension = 2);
    static SpectralMeasure uniform(double value = 1.0);

    SpectralMeasure& add_atom(std::vector<double> direction, double weight);
    SpectralMeasure& add_atom_angle(double theta, double weight);
    SpectralMeasure& add_density(double a, double b, double value);

    int dimension() const { return dimension_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<DensityPiece>& density() const { return density_; }

    // Only atoms on the coordinate axes, no density.
    bool axis_aligned() const;
    // (w(e_i)+w(-e_i))/2 per axis; the weight each 1D fractional Laplacian receives.
    std::array<double, 2> axis_coefficients() const;
    // lambda > 0 within the probe resolution.
    bool is_elliptic(double s, int sample_count = 720) const;

    std::string describe() const;

private:
    int dimension_;
    std::vector<Atom> atoms_;
    std::vector<DensityPiece> density_;
};

double total_mass(const SpectralMeasure& a);
double ellipticity_lambda(const SpectralMeasure& a, double s, int sample_count);
SpectralMeasure symmetrize(const SpectralMeasure& a);

// Field-by-field comparison with an absolute tolerance.
bool same_measure(const SpectralMeasure& a, const SpectralMeasure& b, double tol = 1e-12);

// Literal syntax: "atoms = [(angle_deg, weight), ...]" and/or
// "density = [(a_deg, b_deg, value), ...]", separated by ';' or newlines.
// Also accepts the names "axes" and "uniform".
SpectralMeasure parse_measure(const std::string& text);

}  // namespace afrac
