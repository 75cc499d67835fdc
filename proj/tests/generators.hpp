#pragma once

// Hand-rolled random generators shared by the property tests.

#include "cfrac/elements.hpp"

#include <cmath>
#include <random>

namespace cfrac::testgen {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : g_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g_); }
    bool coin(double p = 0.5) { return uniform(0, 1) < p; }

    PwlTable monotone_table(int points, double min_slope, double max_slope) {
        std::vector<double> xs, ys;
        double x = -uniform(1, 4), y = -uniform(0, 2);
        for (int k = 0; k < points; ++k) {
            xs.push_back(x);
            ys.push_back(y);
            const double dx = uniform(0.1, 1.0);
            x += dx;
            y += dx * uniform(min_slope, max_slope);
        }
        return PwlTable(xs, ys);
    }

    /// A series element; impedance position.
    Element series(bool allow_pwl = true) {
        switch (integer(0, allow_pwl ? 3 : 2)) {
            case 0: return StaticNL::tanh_plus_id();
            case 1: return LinearResistor{log_uniform(0.1, 10)};
            case 2: return StaticNL::saturation(uniform(0.2, 3));
            default: return StaticNL::pwl(monotone_table(integer(2, 6), 0.1, 3), Orientation::Impedance);
        }
    }

    ShuntRC shunt() { return {uniform(0.05, 3), coin(0.8) ? uniform(0.05, 3) : 0.0}; }

    /// Random chain of the printable shape: series elements at impedance
    /// positions, ShuntRC at admittance positions, with occasional fillers.
    CircuitChain chain(int max_units = 6, bool allow_pwl = true) {
        std::vector<Element> els;
        els.push_back(coin() ? Element{Short{}} : series(allow_pwl));
        els.emplace_back(shunt());
        const int n = integer(0, max_units);
        for (int k = 0; k < n; ++k) {
            els.push_back(coin(0.1) ? Element{Short{}} : series(allow_pwl));
            els.push_back(coin(0.1) ? Element{Open{}} : Element{shunt()});
        }
        if (coin(0.3)) els.push_back(series(allow_pwl));
        return CircuitChain(std::move(els));
    }

    /// Chain meeting the strictness hypotheses: every shunt has G>0 and
    /// every series element is output-strict with mu > 0 where needed.
    CircuitChain strict_chain(int max_units = 8) {
        std::vector<Element> els;
        els.emplace_back(Short{});
        els.emplace_back(ShuntRC{uniform(0.1, 3), uniform(0.1, 3)});
        const int n = integer(1, max_units);
        for (int k = 0; k < n; ++k) {
            switch (integer(0, 2)) {
                case 0: els.emplace_back(StaticNL::tanh_plus_id()); break;
                case 1: els.emplace_back(LinearResistor{log_uniform(0.1, 10)}); break;
                default: els.emplace_back(StaticNL::pwl(monotone_table(integer(2, 6), 0.1, 3), Orientation::Impedance));
            }
            els.emplace_back(ShuntRC{uniform(0.1, 3), uniform(0.0, 3)});
        }
        return CircuitChain(std::move(els));
    }

private:
    std::mt19937_64 g_;
};

}  // namespace cfrac::testgen
