#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "qfvm/errors.hpp"
#include "qfvm/stability.hpp"

using namespace qfvm;

namespace {

struct Args {
    std::string subcommand;
    std::map<std::string, std::string> flags;
    bool has(const std::string& k) const { return flags.count(k) != 0; }
    std::string get(const std::string& k, const std::string& dflt = "") const {
        auto it = flags.find(k);
        return it == flags.end() ? dflt : it->second;
    }
    double num(const std::string& k, double dflt) const {
        auto it = flags.find(k);
        if (it == flags.end()) return dflt;
        std::size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("bad numeric value for --" + k);
        return v;
    }
};

const char* kUsage =
    "usage: qfvm <subcommand> [flags]\n"
    "\n"
    "subcommands:\n"
    "  params       print scheme parameters and derived constants\n"
    "  convergence  run a refinement study and emit a CSV table\n"
    "  vstar        minimum-angle threshold search (single lambda or sweep)\n"
    "  audit        mesh quality report\n"
    "  solve        single solve with error norms\n"
    "  element      element matrices and stability verdict for one tet\n"
    "\n"
    "scheme selection: --scheme qfvs1..qfvs4, or --alpha A [--beta B --gamma G]\n"
    "                  [--lambda L]\n"
    "mesh source:      --structured N[,N,...] | --mesh FILE | --gmsh FILE\n"
    "                  [--perturb RATE_NUMERATOR --seed S]\n"
    "common flags:     --case paper-sine|poisson-sine  --rtol R  --method bicgstab|lu\n"
    "                  --json  --out FILE  --threads N  --dump-matrix FILE\n"
    "vstar flags:      --primes 3,5,...  --precision DEG  --lambda-grid LO:HI:COUNT\n";

Args parse_args(int argc, char** argv) {
    Args a;
    if (argc < 2) throw std::invalid_argument("missing subcommand");
    a.subcommand = argv[1];
    for (int i = 2; i < argc; ++i) {
        std::string s = argv[i];
        if (s.rfind("--", 0) != 0) throw std::invalid_argument("unexpected argument: " + s);
        std::string key = s.substr(2);
        if (key == "json") {
            a.flags[key] = "1";
        } else {
            if (i + 1 >= argc) throw std::invalid_argument("missing value for --" + key);
            a.flags[key] = argv[++i];
        }
    }
    return a;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoi(tok));
    }
    if (out.empty()) throw std::invalid_argument("empty integer list");
    return out;
}

SchemeParams scheme_from_args(const Args& a) {
    if (a.has("scheme")) {
        SchemeParams p = preset_scheme(a.get("scheme"));
        if (a.has("lambda")) p = make_params(p.alpha, p.beta, p.gamma, a.num("lambda", 0));
        return p;
    }
    if (!a.has("alpha")) throw std::invalid_argument("need --scheme or --alpha");
    double alpha = a.num("alpha", 0);
    double beta, gamma;
    if (a.has("beta") || a.has("gamma")) {
        if (!a.has("beta") || !a.has("gamma"))
            throw std::invalid_argument("--beta and --gamma must be given together");
        beta = a.num("beta", 0);
        gamma = a.num("gamma", 0);
    } else {
        auto bg = solve_orthogonal(alpha);
        beta = bg[0];
        gamma = bg[1];
    }
    double lambda = a.has("lambda") ? a.num("lambda", 0) : default_lambda(alpha, beta);
    return make_params(alpha, beta, gamma, lambda);
}

Mesh mesh_from_args(const Args& a, int structured_n = -1) {
    Mesh mesh;
    if (a.has("mesh"))
        mesh = read_mesh(a.get("mesh"));
    else if (a.has("gmsh"))
        mesh = read_gmsh(a.get("gmsh"));
    else if (a.has("structured") || structured_n > 0) {
        int n = structured_n > 0 ? structured_n : parse_int_list(a.get("structured")).at(0);
        mesh = generate_structured(n);
        if (a.has("perturb")) {
            double rate = a.num("perturb", 0) / n;
            mesh = perturb(mesh, rate, uint64_t(a.num("seed", 0)));
        }
    } else {
        throw std::invalid_argument("need a mesh source (--structured/--mesh/--gmsh)");
    }
    return mesh;
}

void write_text(const Args& a, const std::string& text) {
    if (a.has("out")) {
        std::ofstream f(a.get("out"));
        f << text;
    } else {
        std::cout << text;
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.setf(std::ios::scientific);
    os.precision(5);
    os << v;
    return os.str();
}

int cmd_params(const Args& a) {
    SchemeParams p = scheme_from_args(a);
    SchemeConstants c = scheme_constants(p);
    auto res = orthogonality_residuals(p.alpha, p.beta, p.gamma);
    auto range = lambda_range(p.alpha, p.beta);
    bool surface_only = std::abs(res[0]) < 1e-12 && std::abs(res[1]) > 1e-12;
    if (a.has("json")) {
        std::ostringstream os;
        os.precision(16);
        os << "{\n"
           << "  \"alpha\": " << p.alpha << ",\n  \"beta\": " << p.beta << ",\n"
           << "  \"gamma\": " << p.gamma << ",\n  \"lambda\": " << p.lambda << ",\n"
           << "  \"lambda_range\": [" << range[0] << ", " << range[1] << "],\n"
           << "  \"t\": [" << c.t1 << ", " << c.t2 << ", " << c.t3 << ", " << c.t4 << "],\n"
           << "  \"s\": [" << c.s0 << ", " << c.s1 << ", " << c.s2 << ", " << c.s3 << "],\n"
           << "  \"s_star\": " << c.s_star << ",\n"
           << "  \"surface_residual\": " << res[0] << ",\n"
           << "  \"volume_residual\": " << res[1] << ",\n"
           << "  \"surface_only\": " << (surface_only ? "true" : "false") << "\n}\n";
        write_text(a, os.str());
        return 0;
    }
    std::ostringstream os;
    os.precision(16);
    os << "alpha  = " << p.alpha << "\nbeta   = " << p.beta << "\ngamma  = " << p.gamma
       << "\nlambda = " << p.lambda << "\n"
       << "lambda range: (" << range[0] << ", " << range[1] << ")\n"
       << "t1..t4 = " << c.t1 << " " << c.t2 << " " << c.t3 << " " << c.t4 << "\n"
       << "s0..s3 = " << c.s0 << " " << c.s1 << " " << c.s2 << " " << c.s3 << "\n"
       << "s*     = " << c.s_star << "\n"
       << "residuals: surface " << res[0] << ", volume " << res[1] << "\n";
    if (surface_only) os << "note: surface condition only (volume residual nonzero)\n";
    write_text(a, os.str());
    return 0;
}

std::string report_json(const ConvergenceReport& rep) {
    std::ostringstream os;
    os << "[\n";
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        os << "  {\"n\": " << r.n << ", \"h\": " << fmt(r.h) << ", \"h1\": " << fmt(r.h1)
           << ", \"h1_order\": " << fmt(r.h1_order) << ", \"l2\": " << fmt(r.l2)
           << ", \"l2_order\": " << fmt(r.l2_order) << "}" << (i + 1 < rep.rows.size() ? "," : "")
           << "\n";
    }
    os << "]\n";
    return os.str();
}

int cmd_convergence(const Args& a) {
    SchemeParams p = scheme_from_args(a);
    ManufacturedCase mc = manufactured_case(a.get("case", "paper-sine"));
    std::vector<int> levels = parse_int_list(a.get("structured", "5,15,25"));
    MeshFamily fam;
    if (a.has("perturb")) {
        fam.perturbed = true;
        fam.rate_numerator = a.num("perturb", 0);
        fam.seed = uint64_t(a.num("seed", 0));
    }
    double rtol = a.num("rtol", 1e-12);
    ConvergenceReport rep = run_convergence(p, mc, levels, fam, rtol);
    write_text(a, a.has("json") ? report_json(rep) : convergence_csv(rep));
    return 0;
}

int cmd_vstar(const Args& a) {
    SchemeParams p = scheme_from_args(a);
    VstarOptions opts;
    if (a.has("primes")) opts.primes = parse_int_list(a.get("primes"));
    opts.precision_deg = a.num("precision", 0.1);
    opts.threads = int(a.num("threads", 0));
    std::vector<double> lambdas;
    if (a.has("lambda-grid")) {
        double lo, hi;
        int count;
        if (std::sscanf(a.get("lambda-grid").c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 ||
            count < 2)
            throw std::invalid_argument("--lambda-grid expects LO:HI:COUNT");
        auto range = lambda_range(p.alpha, p.beta);
        for (int i = 0; i < count; ++i) {
            double l = lo + (hi - lo) * i / (count - 1);
            if (l > range[0] && l < range[1])
                lambdas.push_back(l);
            else
                std::cerr << "warning: lambda " << l << " outside admissible range, skipped\n";
        }
        if (lambdas.empty()) throw std::invalid_argument("lambda grid entirely inadmissible");
    } else {
        lambdas.push_back(p.lambda);
    }
    std::ostringstream csv;
    csv << "lambda,vstar_degrees,primes,precision,wallclock\n";
    std::string primes_str;
    for (std::size_t i = 0; i < opts.primes.size(); ++i)
        primes_str += (i ? ";" : "") + std::to_string(opts.primes[i]);
    for (double l : lambdas) {
        SchemeParams pl = make_params(p.alpha, p.beta, p.gamma, l);
        auto start = std::chrono::steady_clock::now();
        double v = vstar_search(pl, opts);
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        csv << fmt(l) << "," << fmt(v) << "," << primes_str << "," << fmt(opts.precision_deg)
            << "," << fmt(secs) << "\n";
    }
    if (a.has("json")) {
        // re-emit rows as objects
        std::istringstream in(csv.str());
        std::string line;
        std::getline(in, line);
        std::ostringstream os;
        os << "[\n";
        bool first = true;
        while (std::getline(in, line)) {
            std::stringstream ls(line);
            std::string lam, v, pr, prec, wall;
            std::getline(ls, lam, ',');
            std::getline(ls, v, ',');
            std::getline(ls, pr, ',');
            std::getline(ls, prec, ',');
            std::getline(ls, wall, ',');
            os << (first ? "" : ",\n") << "  {\"lambda\": " << lam << ", \"vstar_degrees\": " << v
               << ", \"primes\": \"" << pr << "\", \"precision\": " << prec
               << ", \"wallclock\": " << wall << "}";
            first = false;
        }
        os << "\n]\n";
        write_text(a, os.str());
    } else {
        write_text(a, csv.str());
    }
    return 0;
}

int cmd_audit(const Args& a) {
    Mesh mesh = mesh_from_args(a);
    QualityReport rep = audit(mesh);
    if (a.has("json")) {
        std::ostringstream os;
        os.precision(10);
        os << "{\n  \"elements\": " << mesh.tets.size() << ",\n  \"nodes\": " << mesh.n_nodes()
           << ",\n  \"min_v_angle_deg\": " << rep.min_v_angle_deg
           << ",\n  \"max_aspect\": " << rep.max_aspect
           << ",\n  \"worst_element\": " << rep.worst_element << "\n}\n";
        write_text(a, os.str());
        return 0;
    }
    std::ostringstream os;
    os.precision(10);
    os << "elements:        " << mesh.tets.size() << "\n"
       << "nodes:           " << mesh.n_nodes() << "\n"
       << "min V-angle:     " << rep.min_v_angle_deg << " deg (element " << rep.worst_element
       << ")\n"
       << "max aspect h/rho: " << rep.max_aspect << "\n";
    if (a.has("threshold")) {
        auto bad = audit_failures(rep, a.num("threshold", 0));
        os << "elements below " << a.get("threshold") << " deg: " << bad.size() << "\n";
        for (int e : bad) os << "  element " << e << ": " << rep.v_angles_deg[e] << " deg\n";
    }
    write_text(a, os.str());
    return 0;
}

int cmd_solve(const Args& a) {
    SchemeParams p = scheme_from_args(a);
    ManufacturedCase mc = manufactured_case(a.get("case", "paper-sine"));
    Mesh mesh = mesh_from_args(a);
    AssemblyOptions opts;
    opts.kappa_is_constant = mc.kappa_is_constant;
    GlobalSystem sys = assemble(mesh, p, mc.kappa, mc.f, opts);
    if (a.has("dump-matrix")) dump_system(sys, a.get("dump-matrix"));
    SolveMethod method = SolveMethod::bicgstab;
    if (a.get("method", "bicgstab") == "lu")
        method = SolveMethod::lu;
    else if (a.get("method", "bicgstab") != "bicgstab")
        throw std::invalid_argument("unknown method: " + a.get("method"));
    SolveReport sr;
    std::vector<double> uh = solve(sys.A, sys.b, method, a.num("rtol", 1e-12), sr);
    auto [h1, l2] = error_norms(mesh, uh, mc);
    if (a.has("solution-out")) {
        std::ofstream f(a.get("solution-out"));
        f.precision(17);
        for (double v : uh) f << v << "\n";
    }
    if (a.has("json")) {
        std::ostringstream os;
        os << "{\n  \"nodes\": " << mesh.n_nodes() << ",\n  \"iterations\": " << sr.iterations
           << ",\n  \"relative_residual\": " << fmt(sr.relative_residual)
           << ",\n  \"method\": \"" << sr.method << "\",\n  \"h1_error\": " << fmt(h1)
           << ",\n  \"l2_error\": " << fmt(l2) << "\n}\n";
        write_text(a, os.str());
        return 0;
    }
    std::ostringstream os;
    os << "nodes:      " << mesh.n_nodes() << "\n"
       << "method:     " << sr.method << " (" << sr.iterations << " iterations, residual "
       << fmt(sr.relative_residual) << ")\n"
       << "H1 error:   " << fmt(h1) << "\n"
       << "L2 error:   " << fmt(l2) << "\n";
    if (mesh.n_nodes() - int(std::count(mesh.node_boundary.begin(), mesh.node_boundary.end(), 1)) ==
        1) {
        for (int i = 0; i < mesh.n_nodes(); ++i)
            if (!mesh.node_boundary[i]) os << "interior value: " << uh[i] << "\n";
    }
    write_text(a, os.str());
    return 0;
}

void print_matrix(std::ostream& os, const std::string& name, const Eigen::MatrixXd& m) {
    os << name << " (" << m.rows() << "x" << m.cols() << "):\n";
    os.setf(std::ios::scientific);
    os.precision(5);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) os << (j ? " " : "  ") << m(i, j);
        os << "\n";
    }
    os.unsetf(std::ios::scientific);
}

int cmd_element(const Args& a) {
    SchemeParams p = scheme_from_args(a);
    Tet tet;
    if (a.has("tet")) {
        std::stringstream ss(a.get("tet"));
        std::string tok;
        std::vector<double> vals;
        while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
        if (vals.size() != 12) throw std::invalid_argument("--tet expects 12 comma-separated numbers");
        tet = make_tet(Vec3(vals[0], vals[1], vals[2]), Vec3(vals[3], vals[4], vals[5]),
                       Vec3(vals[6], vals[7], vals[8]), Vec3(vals[9], vals[10], vals[11]));
    } else {
        // regular unit-edge tetrahedron
        tet = make_tet(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.5, std::sqrt(3.0) / 2.0, 0),
                       Vec3(0.5, std::sqrt(3.0) / 6.0, std::sqrt(6.0) / 3.0));
    }
    TetGeometry g = tet_geometry(tet);
    ElementStability es = element_stability(g, p);
    auto range = lambda_range(p.alpha, p.beta);
    std::ostringstream os;
    print_matrix(os, "A", es.A);
    print_matrix(os, "A_K1", es.A1);
    print_matrix(os, "A_K_lambda", es.A_lambda);
    print_matrix(os, "B_bar", es.B_bar);
    print_matrix(os, "N", es.N);
    os.precision(10);
    os << "min V-angle:    " << min_v_angle(g) * 180.0 / 3.14159265358979323846 << " deg\n"
       << "lambda:         " << p.lambda << " in (" << range[0] << ", " << range[1] << ")\n"
       << "min eigenvalue: " << es.min_eig_Bbar << "\n"
       << "verdict:        " << (es.stable ? "stable" : "unstable") << "\n";
    write_text(a, os.str());
    return es.stable ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        Args a = parse_args(argc, argv);
        if (a.subcommand == "params") return cmd_params(a);
        if (a.subcommand == "convergence") return cmd_convergence(a);
        if (a.subcommand == "vstar") return cmd_vstar(a);
        if (a.subcommand == "audit") return cmd_audit(a);
        if (a.subcommand == "solve") return cmd_solve(a);
        if (a.subcommand == "element") return cmd_element(a);
        if (a.subcommand == "help" || a.subcommand == "--help") {
            std::cout << kUsage;
            return 0;
        }
        throw std::invalid_argument("unknown subcommand: " + a.subcommand);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n\n" << kUsage;
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
