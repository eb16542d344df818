#include "afrac/spectral_measure.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

#include "afrac/error.hpp"
#include "afrac/quadrature.hpp"

namespace afrac {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_angle(double t) {
    double w = std::fmod(t, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w -= kTwoPi;
    return w;
}

double atom_angle(const Atom& atom) { return wrap_angle(std::atan2(atom.direction[1], atom.direction[0])); }

bool same_direction(const std::vector<double>& u, const std::vector<double>& v) {
    for (std::size_t i = 0; i < u.size(); ++i)
        if (std::abs(u[i] - v[i]) > 1e-12) return false;
    return true;
}

// Sorted, merged, zero-free atoms.
std::vector<Atom> canonical_atoms(std::vector<Atom> atoms, int dim) {
    auto key = [dim](const Atom& a) {
        return dim == 2 ? atom_angle(a) : 0.0;
    };
    std::stable_sort(atoms.begin(), atoms.end(), [&](const Atom& l, const Atom& r) {
        if (dim == 2) return key(l) < key(r);
        return l.direction < r.direction;
    });
    std::vector<Atom> out;
    for (auto& a : atoms) {
        if (a.weight == 0.0) continue;
        bool merged = false;
        for (auto& o : out) {
            if (same_direction(o.direction, a.direction)) {
                o.weight += a.weight;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(a);
    }
    return out;
}

// Piecewise-constant density as sorted disjoint arcs inside [0, 2pi), adjacent equal
// values merged and zero arcs dropped.
std::vector<DensityPiece> canonical_density(const std::vector<DensityPiece>& pieces) {
    std::vector<DensityPiece> split;
    for (const auto& p : pieces) {
        if (p.value == 0.0 || !(p.b > p.a)) continue;
        if (p.b - p.a >= kTwoPi - 1e-12) {
            split.push_back({0.0, kTwoPi, p.value});
            continue;
        }
        const double a = wrap_angle(p.a);
        const double b = a + (p.b - p.a);
        if (b <= kTwoPi + 1e-12) {
            split.push_back({a, std::min(b, kTwoPi), p.value});
        } else {
            split.push_back({a, kTwoPi, p.value});
            split.push_back({0.0, b - kTwoPi, p.value});
        }
    }
    if (split.empty()) return {};
    std::vector<double> cuts{0.0, kTwoPi};
    for (const auto& p : split) {
        cuts.push_back(p.a);
        cuts.push_back(p.b);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> uniq;
    for (double c : cuts)
        if (uniq.empty() || c - uniq.back() > 1e-12) uniq.push_back(c);
    uniq.back() = kTwoPi;

    std::vector<DensityPiece> out;
    for (std::size_t i = 0; i + 1 < uniq.size(); ++i) {
        const double mid = 0.5 * (uniq[i] + uniq[i + 1]);
        double v = 0.0;
        for (const auto& p : split)
            if (p.a <= mid && mid < p.b) v += p.value;
        if (v == 0.0) continue;
        if (!out.empty() && std::abs(out.back().b - uniq[i]) <= 1e-12 &&
            std::abs(out.back().value - v) <= 1e-15 * std::max(1.0, std::abs(v))) {
            out.back().b = uniq[i + 1];
        } else {
            out.push_back({uniq[i], uniq[i + 1], v});
        }
    }
    return out;
}

// integral of |cos(phi - theta)|^{2s} over [a, b]
double density_projection(double a, double b, double theta, double s) {
    std::vector<double> cuts{a};
    const double first = theta + M_PI / 2.0;
    double z = first + std::ceil((a - first) / M_PI) * M_PI;
    for (; z < b; z += M_PI)
        if (z > a) cuts.push_back(z);
    cuts.push_back(b);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += quad::tanh_sinh(
            [&](double phi) { return std::pow(std::abs(std::cos(phi - theta)), 2.0 * s); }, cuts[i],
            cuts[i + 1], 1e-10);
    }
    return total;
}

}  // namespace

SpectralMeasure::SpectralMeasure(int dimension) : dimension_(dimension) {
    require(dimension >= 1, "measure dimension must be >= 1");
}

SpectralMeasure SpectralMeasure::coordinate_axes(int dimension) {
    SpectralMeasure m(dimension);
    for (int i = 0; i < dimension; ++i) {
        std::vector<double> e(dimension, 0.0);
        e[i] = 1.0;
        m.add_atom(e, 1.0);
        e[i] = -1.0;
        m.add_atom(e, 1.0);
    }
    return m;
}

SpectralMeasure SpectralMeasure::uniform(double value) {
    SpectralMeasure m(2);
    m.add_density(0.0, kTwoPi, value);
    return m;
}

SpectralMeasure& SpectralMeasure::add_atom(std::vector<double> direction, double weight) {
    require(static_cast<int>(direction.size()) == dimension_, "atom direction has wrong dimension");
    require(weight >= 0.0 && std::isfinite(weight), "atom weight must be finite and nonnegative");
    double n2 = 0.0;
    for (double c : direction) n2 += c * c;
    require(std::abs(std::sqrt(n2) - 1.0) <= 1e-12, "atom direction must be a unit vector");
    atoms_.push_back({std::move(direction), weight});
    return *this;
}

SpectralMeasure& SpectralMeasure::add_atom_angle(double theta, double weight) {
    require(dimension_ == 2, "angle atoms need dimension 2");
    // exact axis directions for multiples of pi/2
    const double q = theta / (M_PI / 2.0);
    const double qr = std::round(q);
    if (std::abs(q - qr) < 1e-14) {
        static const double cs[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        const int k = ((static_cast<long>(qr) % 4) + 4) % 4;
        return add_atom({cs[k][0], cs[k][1]}, weight);
    }
    return add_atom({std::cos(theta), std::sin(theta)}, weight);
}

SpectralMeasure& SpectralMeasure::add_density(double a, double b, double value) {
    require(dimension_ == 2, "density pieces are only supported on S^1");
    require(b > a && b - a <= kTwoPi + 1e-12, "density arc must satisfy a < b <= a + 2pi");
    require(value >= 0.0 && std::isfinite(value), "density value must be finite and nonnegative");
    density_.push_back({a, b, value});
    density_ = canonical_density(density_);
    return *this;
}

bool SpectralMeasure::axis_aligned() const {
    if (dimension_ != 2 || !density_.empty()) return false;
    for (const auto& a : atoms_) {
        const bool ax = (std::abs(std::abs(a.direction[0]) - 1.0) < 1e-12 && std::abs(a.direction[1]) < 1e-12) ||
                        (std::abs(std::abs(a.direction[1]) - 1.0) < 1e-12 && std::abs(a.direction[0]) < 1e-12);
        if (!ax && a.weight > 0.0) return false;
    }
    return true;
}

std::array<double, 2> SpectralMeasure::axis_coefficients() const {
    require(axis_aligned(), "measure is not a combination of axis atoms");
    std::array<double, 2> c{0.0, 0.0};
    for (const auto& a : atoms_) {
        const int axis = std::abs(a.direction[0]) > 0.5 ? 0 : 1;
        c[axis] += 0.5 * a.weight;
    }
    return c;
}

bool SpectralMeasure::is_elliptic(double s, int sample_count) const {
    if (total_mass(*this) == 0.0) return false;
    return ellipticity_lambda(*this, s, sample_count) > 1e-12;
}

std::string SpectralMeasure::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (dimension_ != 2) {
        os << "atoms(n=" << dimension_ << ", count=" << atoms_.size() << ")";
        return os.str();
    }
    os << "atoms = [";
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (i) os << ", ";
        os << "(" << atom_angle(atoms_[i]) * 180.0 / M_PI << ", " << atoms_[i].weight << ")";
    }
    os << "]; density = [";
    for (std::size_t i = 0; i < density_.size(); ++i) {
        if (i) os << ", ";
        os << "(" << density_[i].a * 180.0 / M_PI << ", " << density_[i].b * 180.0 / M_PI << ", "
           << density_[i].value << ")";
    }
    os << "]";
    return os.str();
}

double total_mass(const SpectralMeasure& a) {
    double m = 0.0;
    for (const auto& atom : a.atoms()) m += atom.weight;
    for (const auto& p : a.density()) m += p.value * (p.b - p.a);
    return m;
}

double ellipticity_lambda(const SpectralMeasure& a, double s, int sample_count) {
    require(a.dimension() == 2, "ellipticity probe needs n = 2");
    require(sample_count >= 16, "ellipticity probe needs at least 16 directions");
    require(s > 0.0 && s < 1.0, "s must lie in (0,1)");
    if (total_mass(a) == 0.0) throw PreconditionError("degenerate measure: zero total mass");
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < sample_count; ++k) {
        const double theta = M_PI * k / sample_count;
        const double cx = std::cos(theta), cy = std::sin(theta);
        double v = 0.0;
        for (const auto& atom : a.atoms()) {
            const double d = std::abs(atom.direction[0] * cx + atom.direction[1] * cy);
            if (d > 0.0) v += atom.weight * std::pow(d, 2.0 * s);
        }
        for (const auto& p : a.density()) v += p.value * density_projection(p.a, p.b, theta, s);
        best = std::min(best, v);
    }
    return best;
}

SpectralMeasure symmetrize(const SpectralMeasure& a) {
    SpectralMeasure out(a.dimension());
    std::vector<Atom> atoms;
    for (const auto& atom : a.atoms()) {
        Atom neg = atom;
        for (double& c : neg.direction) c = -c;
        atoms.push_back({atom.direction, 0.5 * atom.weight});
        neg.weight = 0.5 * atom.weight;
        atoms.push_back(neg);
    }
    for (const auto& atom : canonical_atoms(std::move(atoms), a.dimension())) out.add_atom(atom.direction, atom.weight);
    std::vector<DensityPiece> pieces;
    for (const auto& p : a.density()) {
        pieces.push_back({p.a, p.b, 0.5 * p.value});
        pieces.push_back({p.a + M_PI, p.b + M_PI, 0.5 * p.value});
    }
    for (const auto& p : canonical_density(pieces)) out.add_density(p.a, p.b, p.value);
    return out;
}

bool same_measure(const SpectralMeasure& a, const SpectralMeasure& b, double tol) {
    if (a.dimension() != b.dimension()) return false;
    const auto aa = canonical_atoms(a.atoms(), a.dimension());
    const auto ba = canonical_atoms(b.atoms(), b.dimension());
    if (aa.size() != ba.size() || a.density().size() != b.density().size()) return false;
    for (std::size_t i = 0; i < aa.size(); ++i) {
        if (std::abs(aa[i].weight - ba[i].weight) > tol) return false;
        for (std::size_t j = 0; j < aa[i].direction.size(); ++j)
            if (std::abs(aa[i].direction[j] - ba[i].direction[j]) > tol) return false;
    }
    for (std::size_t i = 0; i < a.density().size(); ++i) {
        const auto& p = a.density()[i];
        const auto& q = b.density()[i];
        if (std::abs(p.a - q.a) > tol || std::abs(p.b - q.b) > tol || std::abs(p.value - q.value) > tol)
            return false;
    }
    return true;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::vector<double>> parse_tuples(const std::string& body, std::size_t arity, const std::string& key) {
    std::vector<std::vector<double>> out;
    static const std::regex tuple_re(R"(\(([^()]*)\))");
    for (auto it = std::sregex_iterator(body.begin(), body.end(), tuple_re); it != std::sregex_iterator(); ++it) {
        std::vector<double> vals;
        std::stringstream ss((*it)[1].str());
        std::string item;
        while (std::getline(ss, item, ',')) {
            const std::string num = trim(item);
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(num, &used);
            } catch (const std::logic_error&) {
                used = 0;
            }
            require(used > 0 && used == num.size(), "malformed number '" + num + "' in " + key);
            vals.push_back(v);
        }
        require(vals.size() == arity, key + " entries need " + std::to_string(arity) + " numbers");
        out.push_back(vals);
    }
    return out;
}

}  // namespace

SpectralMeasure parse_measure(const std::string& text) {
    const std::string t = trim(text);
    if (t == "axes") return SpectralMeasure::coordinate_axes(2);
    if (t == "uniform") return SpectralMeasure::uniform(1.0);
    SpectralMeasure m(2);
    std::string stmt;
    std::stringstream ss(t);
    bool any = false;
    while (std::getline(ss, stmt, ';')) {
        std::stringstream lines(stmt);
        std::string line;
        while (std::getline(lines, line)) {
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            require(eq != std::string::npos, "measure statement needs 'key = [...]': " + line);
            const std::string key = trim(line.substr(0, eq));
            const std::string body = trim(line.substr(eq + 1));
            require(body.size() >= 2 && body.front() == '[' && body.back() == ']',
                    "measure list must be enclosed in [ ]");
            if (key == "atoms") {
                for (const auto& v : parse_tuples(body, 2, key)) m.add_atom_angle(v[0] * M_PI / 180.0, v[1]);
            } else if (key == "density") {
                for (const auto& v : parse_tuples(body, 3, key))
                    m.add_density(v[0] * M_PI / 180.0, v[1] * M_PI / 180.0, v[2]);
            } else {
                throw PreconditionError("unknown measure key '" + key + "'");
            }
            any = true;
        }
    }
    require(any, "empty measure literal");
    return m;
}

}  // namespace afrac
