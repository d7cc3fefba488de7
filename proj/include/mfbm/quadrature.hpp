#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mfbm {

/// Fixed-order Gauss–Legendre rule on (-1,1); nodes by Newton iteration.
class GaussLegendre {
public:
    explicit GaussLegendre(int order) : nodes_(order), weights_(order) {
        const int m = (order + 1) / 2;
        for (int i = 0; i < m; ++i) {
            double z = std::cos(M_PI * (i + 0.75) / (order + 0.5));
            double pp = 0.0, z1 = 0.0;
            do {
                double p1 = 1.0, p2 = 0.0;
                for (int j = 0; j < order; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
                }
                pp = order * (z * p1 - p2) / (z * z - 1.0);
                z1 = z;
                z = z1 - p1 / pp;
            } while (std::abs(z - z1) > 1e-15);
            nodes_[i] = -z;
            nodes_[order - 1 - i] = z;
            weights_[i] = weights_[order - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
        }
    }

    template <class F>
    double panel(F&& f, double a, double b) const {
        const double c = 0.5 * (b - a), mid = 0.5 * (a + b);
        double s = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(mid + c * nodes_[i]);
        return c * s;
    }

private:
    std::vector<double> nodes_, weights_;
};

/// Panel-based integrator with geometric grading toward an integrable
/// endpoint singularity at 0 (power or log type). Panels [b 2^{-(m+1)},
/// b 2^{-m}] are added until their contribution falls below panel_rel_tol
/// of the running total.
class GradedIntegrator {
public:
    struct Options {
        int order = 24;
        int max_levels = 220;
        double panel_rel_tol = 1e-15;
    };

    GradedIntegrator() : GradedIntegrator(Options()) {}
    explicit GradedIntegrator(Options opt) : opt_(opt), rule_(opt.order) {}

    /// Integral over (0, b] of f with a possible integrable singularity at 0.
    template <class F>
    double zero_graded(F&& f, double b) const {
        double total = 0.0;
        double hi = b;
        for (int m = 0; m < opt_.max_levels; ++m) {
            const double lo = 0.5 * hi;
            const double part = rule_.panel(f, lo, hi);
            total += part;
            hi = lo;
            if (m > 4 && std::abs(part) < opt_.panel_rel_tol * std::abs(total)) break;
        }
        return total;
    }

    /// Integral of an even function over [-b, b].
    template <class F>
    double even_symmetric(F&& f, double b) const {
        return 2.0 * zero_graded(f, b);
    }

    /// Composite rule over [a, b] (no singularity), npanels uniform panels.
    template <class F>
    double composite(F&& f, double a, double b, int npanels) const {
        double total = 0.0;
        const double h = (b - a) / npanels;
        for (int i = 0; i < npanels; ++i) total += rule_.panel(f, a + i * h, a + (i + 1) * h);
        return total;
    }

    /// Integral over (0, b] graded at 0 plus composite refinement of the top
    /// panel region; for integrands singular at 0 and rough elsewhere.
    template <class F>
    double zero_graded_refined(F&& f, double b, int top_panels) const {
        const double split = 0.5 * b;
        return zero_graded(f, split) + composite(f, split, b, top_panels);
    }

    const Options& options() const { return opt_; }

private:
    Options opt_;
    GaussLegendre rule_;
};

/// Closed form of  int_X^inf x^{-q} ln^j x dx  for q > 1 and j in {0,1,2}.
inline double tail_power_log(double X, double q, int j) {
    if (!(q > 1.0)) throw std::domain_error("tail_power_log: requires q > 1");
    const double s = q - 1.0;
    const double head = std::pow(X, -s);
    const double lx = std::log(X);
    switch (j) {
        case 0: return head / s;
        case 1: return head * (lx / s + 1.0 / (s * s));
        case 2: return head * (lx * lx / s + 2.0 * lx / (s * s) + 2.0 / (s * s * s));
        default: throw std::domain_error("tail_power_log: j must be 0, 1 or 2");
    }
}

}  // namespace mfbm
