#include "qfvm/errors.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace qfvm {

namespace {

constexpr double kPi = 3.14159265358979323846;

ManufacturedCase triple_sine(bool variable_kappa) {
    ManufacturedCase mc;
    mc.u = [](const Vec3& x) {
        return std::sin(kPi * x[0]) * std::sin(kPi * x[1]) * std::sin(kPi * x[2]);
    };
    mc.grad_u = [](const Vec3& x) {
        double s0 = std::sin(kPi * x[0]), c0 = std::cos(kPi * x[0]);
        double s1 = std::sin(kPi * x[1]), c1 = std::cos(kPi * x[1]);
        double s2 = std::sin(kPi * x[2]), c2 = std::cos(kPi * x[2]);
        return Vec3(kPi * c0 * s1 * s2, kPi * s0 * c1 * s2, kPi * s0 * s1 * c2);
    };
    if (variable_kappa) {
        mc.name = "paper-sine";
        mc.kappa = [](const Vec3& x) { return std::exp(x[0] + 2.0 * x[1] + 3.0 * x[2]); };
        mc.kappa_is_constant = false;
        auto u = mc.u;
        auto gu = mc.grad_u;
        auto k = mc.kappa;
        // f = -div(kappa grad u) = kappa (3 pi^2 u - (1,2,3).grad u)
        mc.f = [u, gu, k](const Vec3& x) {
            Vec3 g = gu(x);
            return k(x) * (3.0 * kPi * kPi * u(x) - (g[0] + 2.0 * g[1] + 3.0 * g[2]));
        };
    } else {
        mc.name = "poisson-sine";
        mc.kappa = [](const Vec3&) { return 1.0; };
        mc.kappa_is_constant = true;
        auto u = mc.u;
        mc.f = [u](const Vec3& x) { return 3.0 * kPi * kPi * u(x); };
    }
    return mc;
}

}  // namespace

ManufacturedCase manufactured_case(const std::string& name) {
    if (name == "paper-sine") return triple_sine(true);
    if (name == "poisson-sine") return triple_sine(false);
    throw std::invalid_argument("unknown case: " + name);
}

std::array<double, 2> error_norms(const Mesh& mesh, const std::vector<double>& uh,
                                  const ManufacturedCase& mc, int degree) {
    if (uh.size() != static_cast<std::size_t>(mesh.n_nodes()))
        throw std::invalid_argument("solution size does not match mesh node count");
    const TetRule rule = tet_rule(degree);
    double h1 = 0.0, l2 = 0.0;
    for (std::size_t k = 0; k < mesh.tets.size(); ++k) {
        const auto& t = mesh.tets[k];
        Tet tet = make_tet(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]],
                           mesh.vertices[t[3]]);
        TetGeometry g = tet_geometry(tet);
        std::array<int, 10> nodes = mesh.element_nodes(static_cast<int>(k));
        double eh1 = 0.0, el2 = 0.0;
        for (std::size_t q = 0; q < rule.pts.size(); ++q) {
            const auto& L = rule.pts[q];
            Vec3 x = L[0] * g.p[0] + L[1] * g.p[1] + L[2] * g.p[2] + L[3] * g.p[3];
            double vh = 0.0;
            Vec3 gh = Vec3::Zero();
            for (int m = 0; m < 10; ++m) {
                double c = uh[nodes[m]];
                vh += c * basis_eval(m, L);
                gh += c * basis_grad(g, m, L);
            }
            double dv = mc.u(x) - vh;
            el2 += rule.w[q] * dv * dv;
            eh1 += rule.w[q] * (mc.grad_u(x) - gh).squaredNorm();
        }
        h1 += g.volume * eh1;
        l2 += g.volume * el2;
    }
    return {std::sqrt(h1), std::sqrt(l2)};
}

ConvergenceReport run_convergence(const SchemeParams& params, const ManufacturedCase& mc,
                                  const std::vector<int>& levels, const MeshFamily& family,
                                  double rtol, int quad_degree) {
    ConvergenceReport rep;
    for (int n : levels) {
        auto start = std::chrono::steady_clock::now();
        Mesh mesh = generate_structured(n);
        if (family.perturbed) mesh = perturb(mesh, family.rate_numerator / n, family.seed);
        AssemblyOptions opts;
        opts.kappa_is_constant = mc.kappa_is_constant;
        GlobalSystem sys = assemble(mesh, params, mc.kappa, mc.f, opts);
        SolveReport sr;
        std::vector<double> uh = solve(sys.A, sys.b, SolveMethod::bicgstab, rtol, sr);
        auto [h1, l2] = error_norms(mesh, uh, mc, quad_degree);
        ConvergenceRow row;
        row.n = n;
        row.h = mesh.h;
        row.h1 = h1;
        row.l2 = l2;
        row.iterations = sr.iterations;
        row.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!rep.rows.empty()) {
            const ConvergenceRow& prev = rep.rows.back();
            double ratio = std::log(double(n) / prev.n);
            row.h1_order = std::log(prev.h1 / row.h1) / ratio;
            row.l2_order = std::log(prev.l2 / row.l2) / ratio;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

std::string convergence_csv(const ConvergenceReport& report) {
    std::ostringstream out;
    out << "n,h,h1,h1_order,l2,l2_order\n";
    out.setf(std::ios::scientific);
    out.precision(5);
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& r = report.rows[i];
        out << r.n << "," << r.h << "," << r.h1 << ",";
        if (i > 0) out << r.h1_order;
        out << "," << r.l2 << ",";
        if (i > 0) out << r.l2_order;
        out << "\n";
    }
    return out.str();
}

}  // namespace qfvm
