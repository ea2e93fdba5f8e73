#include "levymmm/model.hpp"

#include <cmath>
#include <limits>

namespace levymmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// E e^{theta Jump} for a single jump, valid strictly inside the domain.
struct MgfVisitor {
    double theta;
    double operator()(const NoJumps&) const { return 1.0; }
    double operator()(const GaussianJumps& g) const {
        return std::exp(theta * g.mean + 0.5 * theta * theta * g.var);
    }
    double operator()(const DoubleExpJumps& d) const {
        return d.p_up * d.eta_up / (d.eta_up - theta) +
               (1.0 - d.p_up) * d.eta_down / (d.eta_down + theta);
    }
    double operator()(const OneSidedExpJumps& o) const {
        return o.sign == JumpSign::positive ? o.decay / (o.decay - theta)
                                            : o.decay / (o.decay + theta);
    }
};

struct MgfPrimeVisitor {
    double theta;
    double operator()(const NoJumps&) const { return 0.0; }
    double operator()(const GaussianJumps& g) const {
        return std::exp(theta * g.mean + 0.5 * theta * theta * g.var) *
               (g.mean + theta * g.var);
    }
    double operator()(const DoubleExpJumps& d) const {
        double up = d.eta_up - theta;
        double dn = d.eta_down + theta;
        return d.p_up * d.eta_up / (up * up) - (1.0 - d.p_up) * d.eta_down / (dn * dn);
    }
    double operator()(const OneSidedExpJumps& o) const {
        if (o.sign == JumpSign::positive) {
            double s = o.decay - theta;
            return o.decay / (s * s);
        }
        double s = o.decay + theta;
        return -o.decay / (s * s);
    }
};

void require_in_domain(const LevyModel& m, double theta) {
    if (!theta_domain(m).contains(theta))
        throw DomainError("theta outside the finiteness domain of psi");
}

}  // namespace

ThetaDomain theta_domain(const LevyModel& m) {
    struct V {
        ThetaDomain operator()(const NoJumps&) const { return {-kInf, kInf}; }
        ThetaDomain operator()(const GaussianJumps&) const { return {-kInf, kInf}; }
        ThetaDomain operator()(const DoubleExpJumps& d) const { return {-d.eta_down, d.eta_up}; }
        ThetaDomain operator()(const OneSidedExpJumps& o) const {
            return o.sign == JumpSign::positive ? ThetaDomain{-kInf, o.decay}
                                                : ThetaDomain{-o.decay, kInf};
        }
    };
    return std::visit(V{}, m.jumps);
}

double jump_rate(const JumpSpec& jumps) {
    struct V {
        double operator()(const NoJumps&) const { return 0.0; }
        double operator()(const GaussianJumps& g) const { return g.rate; }
        double operator()(const DoubleExpJumps& d) const { return d.rate; }
        double operator()(const OneSidedExpJumps& o) const { return o.rate; }
    };
    return std::visit(V{}, jumps);
}

double psi(const LevyModel& m, double theta) {
    require_in_domain(m, theta);
    double j = jump_rate(m.jumps) * (std::visit(MgfVisitor{theta}, m.jumps) - 1.0);
    return m.drift_a * theta + 0.5 * m.sigma2 * theta * theta + j;
}

double psi_prime(const LevyModel& m, double theta) {
    require_in_domain(m, theta);
    double jp = jump_rate(m.jumps) * std::visit(MgfPrimeVisitor{theta}, m.jumps);
    return m.drift_a + m.sigma2 * theta + jp;
}

LevyModel esscher_tilt(const LevyModel& m, double nu) {
    require_in_domain(m, nu);
    LevyModel t;
    t.sigma2 = m.sigma2;
    t.drift_a = m.drift_a + m.sigma2 * nu;
    struct V {
        double nu;
        JumpSpec operator()(const NoJumps& n) const { return n; }
        JumpSpec operator()(const GaussianJumps& g) const {
            // e^{nu x} N(mean,var) dx = e^{nu*mean + nu^2 var/2} N(mean + nu*var, var) dx
            return GaussianJumps{g.rate * std::exp(nu * g.mean + 0.5 * nu * nu * g.var),
                                 g.mean + nu * g.var, g.var};
        }
        JumpSpec operator()(const DoubleExpJumps& d) const {
            double up_mass = d.rate * d.p_up * d.eta_up / (d.eta_up - nu);
            double dn_mass = d.rate * (1.0 - d.p_up) * d.eta_down / (d.eta_down + nu);
            double rate = up_mass + dn_mass;
            return DoubleExpJumps{rate, up_mass / rate, d.eta_up - nu, d.eta_down + nu};
        }
        JumpSpec operator()(const OneSidedExpJumps& o) const {
            if (o.sign == JumpSign::positive)
                return OneSidedExpJumps{o.sign, o.rate * o.decay / (o.decay - nu), o.decay - nu};
            return OneSidedExpJumps{o.sign, o.rate * o.decay / (o.decay + nu), o.decay + nu};
        }
    };
    t.jumps = std::visit(V{nu}, m.jumps);
    return t;
}

ModelDiagnostics validate(const LevyModel& m) {
    ModelDiagnostics d{true, {}, theta_domain(m)};
    auto fail = [&](const std::string& msg) {
        d.ok = false;
        d.violations.push_back(msg);
    };
    if (!(m.sigma2 > 0.0)) fail("sigma2 must be > 0 (monotone/degenerate path law otherwise)");
    struct V {
        decltype(fail)& f;
        void operator()(const NoJumps&) const {}
        void operator()(const GaussianJumps& g) const {
            if (!(g.rate > 0.0)) f("gaussian jump rate must be > 0");
            if (!(g.var > 0.0)) f("gaussian jump variance must be > 0");
        }
        void operator()(const DoubleExpJumps& de) const {
            if (!(de.rate > 0.0)) f("double-exp jump rate must be > 0");
            if (!(de.p_up > 0.0 && de.p_up < 1.0)) f("double-exp p_up must be in (0,1)");
            if (!(de.eta_up > 0.0)) f("double-exp eta_up must be > 0");
            if (!(de.eta_down > 0.0)) f("double-exp eta_down must be > 0");
        }
        void operator()(const OneSidedExpJumps& o) const {
            if (!(o.rate > 0.0)) f("one-sided jump rate must be > 0");
            if (!(o.decay > 0.0)) f("one-sided jump decay must be > 0");
        }
    };
    std::visit(V{fail}, m.jumps);
    return d;
}

bool has_positive_jumps(const LevyModel& m) {
    struct V {
        bool operator()(const NoJumps&) const { return false; }
        bool operator()(const GaussianJumps&) const { return true; }
        bool operator()(const DoubleExpJumps&) const { return true; }
        bool operator()(const OneSidedExpJumps& o) const {
            return o.sign == JumpSign::positive;
        }
    };
    return std::visit(V{}, m.jumps);
}

bool has_negative_jumps(const LevyModel& m) {
    struct V {
        bool operator()(const NoJumps&) const { return false; }
        bool operator()(const GaussianJumps&) const { return true; }
        bool operator()(const DoubleExpJumps&) const { return true; }
        bool operator()(const OneSidedExpJumps& o) const {
            return o.sign == JumpSign::negative;
        }
    };
    return std::visit(V{}, m.jumps);
}

LevyModel negate_model(const LevyModel& m) {
    LevyModel n;
    n.drift_a = -m.drift_a;
    n.sigma2 = m.sigma2;
    struct V {
        JumpSpec operator()(const NoJumps& x) const { return x; }
        JumpSpec operator()(const GaussianJumps& g) const {
            return GaussianJumps{g.rate, -g.mean, g.var};
        }
        JumpSpec operator()(const DoubleExpJumps& d) const {
            return DoubleExpJumps{d.rate, 1.0 - d.p_up, d.eta_down, d.eta_up};
        }
        JumpSpec operator()(const OneSidedExpJumps& o) const {
            return OneSidedExpJumps{o.sign == JumpSign::positive ? JumpSign::negative
                                                                 : JumpSign::positive,
                                    o.rate, o.decay};
        }
    };
    n.jumps = std::visit(V{}, m.jumps);
    return n;
}

}  // namespace levymmm
