// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qgeom/invariants.hpp"
#include "qgeom/qgt.hpp"
#include "qgeom/surface_geometry.hpp"

using namespace qgeom;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double slope(const std::vector<double>& steps, const std::vector<double>& errs)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(steps.size());
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const double x = std::log(steps[i]), y = std::log(errs[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int run_tool(const std::string& args)
{
    const std::string cmd = std::string(QGEOM_SWEEP_EXE) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

QuadratureSpec grid(std::size_t n)
{
    QuadratureSpec spec;
    spec.n_points = n;
    return spec;
}

Outcome ac1()
{
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double h : {0.0, 0.5, -0.5, 0.9, -0.9, 1.5, -1.5, 3.0, -3.0})
        worst = std::max(worst, std::abs(chern_number({h, 1.0, 2.0}, grid(2048)).value));
    const double t = seconds_since(t0);
    return {worst <= 1e-8 && t < 5.0, fmt("max |C| = %.2e, %.3f s", worst, t)};
}

Outcome ac2()
{
    double worst = 0.0;
    for (double h : {0.0, 0.25, -0.25, 0.5, -0.5, 0.9, -0.9})
        worst = std::max(worst, std::abs(euler_naive({h, 1.0, 2.0}, grid(2048)).value - 4.0));
    return {worst <= 1e-6, fmt("max |chi_naive - 4| = %.2e", worst)};
}

Outcome ac3()
{
    // oracle: largest polar angle about -z on a 2^22-point kx grid, then 4 (1 - cos theta0)
    const ModelParams p{2.0, 1.0, 2.0};
    const std::size_t n = std::size_t{1} << 22;
    double theta0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double kx = two_pi * static_cast<double>(i) / static_cast<double>(n);
        const Vec3 d = ModelField{p}(KPoint(kx, 0.0)).normalized();
        theta0 = std::max(theta0, std::acos(std::clamp(-d.z(), -1.0, 1.0)));
    }
    const double reference = 4.0 * (1.0 - std::cos(theta0));
    const double closed = 4.0 * (1.0 - std::sqrt(3.0) / 2.0);
    const double chi = euler_naive(p, grid(2048)).value;
    const double far = euler_naive({50.0, 1.0, 2.0}, grid(2048)).value;
    const bool pass = std::abs(reference - closed) <= 1e-5 && std::abs(chi - reference) <= 1e-5 && far < 0.01;
    return {pass, fmt("chi_naive(2) - oracle = %.2e, oracle - 4(1-sqrt3/2) = %.2e, chi_naive(50) = %.4g",
                      chi - reference, reference - closed, far)};
}

const std::vector<double> ac4_h{0.0, 0.5, -0.5, 1.1, -1.1, 2.0, -2.0, 5.0, -5.0, 20.0, -20.0};
const std::vector<double> ac4_alpha{0.5, 1.0, 2.0};

Outcome ac4()
{
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double a : ac4_alpha) {
        for (double h : ac4_h)
            worst = std::max(worst, std::abs(euler_corrected({h, a, 2.0}, grid(2048)).value - 4.0));
    }
    const double t = seconds_since(t0);
    return {worst <= 1e-6 && t < 30.0, fmt("max |chi_corrected - 4| = %.2e over 33 points, %.3f s", worst, t)};
}

Outcome ac5()
{
    std::vector<double> hs = ac4_h;
    for (double h : {0.25, -0.25, 0.9, -0.9, 1.5, -1.5, 3.0, -3.0})
        hs.push_back(h);
    double worst = 0.0;
    int wrong = 0;
    for (double a : ac4_alpha) {
        for (double h : hs) {
            const CapGeometry cap = analyze_image({h, a, 2.0}, grid(2048));
            worst = std::max(worst, std::abs(cap.multiplicity_raw - cap.multiplicity));
            if (cap.multiplicity != (std::abs(h) < 1.0 ? 2 : 4))
                ++wrong;
        }
    }
    return {wrong == 0 && worst <= 1e-3,
            fmt("%g wrong multiplicities, max |m_raw - m| = %.2e", static_cast<double>(wrong), worst)};
}

Outcome ac6()
{
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> hdist(-3.0, 3.0), adist(0.2, 2.0), kdist(0.0, two_pi);
    double worst_a = 0.0, worst_n = 0.0;
    for (int i = 0; i < 10000; ++i) {
        double h = hdist(gen);
        while (std::abs(std::abs(h) - 1.0) < 0.01)
            h = hdist(gen);
        const ModelParams p{h, adist(gen), 2.0};
        const KPoint k{kdist(gen), kdist(gen)};
        worst_a = std::max(worst_a, std::abs(sqrt_det_g(p, k) - std::abs(berry_curvature_analytic(p, k)) / 2));
        const QGTSample q = qgt_sample_numeric(ModelField{p}, k, 1e-4);
        worst_n = std::max(worst_n, std::abs(q.sqrt_det_g - std::abs(q.berry) / 2));
    }
    return {worst_a <= 1e-12 && worst_n <= 1e-6, fmt("analytic %.2e, numeric %.2e", worst_a, worst_n)};
}

Outcome ac7()
{
    const RoundMetric metric{0.5};
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double theta = 0.01 + (pi - 0.02) * (i + 0.5) / 100.0;
        const double r = metric.radius * std::sin(theta);
        // the circle formula is unsigned; k_g changes sign past the equator
        const double expected = std::copysign(circle_geodesic_curvature(metric.radius, r), std::cos(theta));
        worst = std::max(worst, std::abs(geodesic_curvature(metric, theta).kg - expected));
    }
    const double spot = geodesic_curvature(metric, pi / 6).kg;
    const double spot_err = std::abs(spot - 2.0 * std::sqrt(3.0));
    return {worst <= 1e-10 && spot_err <= 1e-10, fmt("max diff %.2e, k_g(pi/6) = %.15g", worst, spot)};
}

Outcome ac8()
{
    double worst = 0.0;
    for (double theta : {0.1, 0.5, 1.0, 1.5, 2.0, 3.0})
        worst = std::max(worst, std::abs(gauss_bonnet(cap_from_angle(theta)) - 1.0));
    const double sphere = gauss_bonnet(cap_from_angle(pi));
    return {worst <= 1e-9 && std::abs(sphere - 2.0) <= 1e-9,
            fmt("max |cap - 1| = %.2e, sphere - 2 = %.2e", worst, sphere - 2.0)};
}

Outcome ac9()
{
    const std::vector<double> steps{1e-3, 5e-4, 2.5e-4};
    const ModelParams pm{1.5, 0.8, 2.0};
    const KPoint km{2.0, 0.3};
    const ModelParams pb{2.0, 1.0, 2.0};
    const KPoint kb{3.0 * pi / 4, 1.1};
    const MetricTensor exact = metric_analytic(pm, km);
    std::vector<double> em, eb;
    for (double s : steps) {
        const MetricTensor g = metric_numeric(ModelField{pm}, km, s);
        em.push_back(std::max({std::abs(g.g11 - exact.g11), std::abs(g.g12 - exact.g12), std::abs(g.g22 - exact.g22)}));
        eb.push_back(std::abs(berry_curvature_numeric(ModelField{pb}, kb, s) - berry_curvature_analytic(pb, kb)));
    }
    const double sm = slope(steps, em), sb = slope(steps, eb);
    return {std::abs(sm - 2.0) <= 0.2 && std::abs(sb - 2.0) <= 0.2, fmt("slopes: metric %.3f, curvature %.3f", sm, sb)};
}

Outcome ac10()
{
    // single cover of the sphere by kx in [0, pi], ky in [0, 2 pi]
    auto monopole = [](KPoint k) -> Vec3 {
        return {std::sin(k.kx) * std::cos(k.ky), std::sin(k.kx) * std::sin(k.ky), -std::cos(k.kx)};
    };
    QuadratureSpec spec;
    spec.kx = Interval{0.0, pi};
    spec.rule = Rule::composite_simpson;
    const double c = chern_number(monopole, spec).value;
    return {std::abs(c - 1.0) <= 1e-8, fmt("C = %.12f", c)};
}

Outcome ac11()
{
    const fs::path dir = fs::temp_directory_path() / ("qgeom_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string args = "--h-min -3 --h-max 3 --h-count 61 --alpha 1 --out ";
    const int r1 = run_tool(args + (dir / "a.csv").string());
    const int r2 = run_tool(args + (dir / "b.csv").string());
    const std::string a = slurp(dir / "a.csv");
    const bool same = r1 == 0 && r2 == 0 && !a.empty() && a == slurp(dir / "b.csv");
    const bool header = a.rfind("h,alpha,chern,chi_naive,chi_corrected,multiplicity,theta0,status\n", 0) == 0;
    const int none = run_tool("--h-min 0.99 --h-max 1.01 --h-count 3");
    const int usage = run_tool("--h-count 1");
    const int io = run_tool("--h-count 3 --out /nonexistent_dir/x.csv");
    fs::remove_all(dir);
    return {same && header && none == 1 && usage == 2 && io == 3,
            std::string(same ? "identical" : "DIFFERENT") + " files, header " + (header ? "ok" : "BAD") +
                ", exit codes 0/" + std::to_string(none) + "/" + std::to_string(usage) + "/" + std::to_string(io)};
}

}  // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"AC1  Chern number vanishes", ac1},
        {"AC2  naive Euler plateau", ac2},
        {"AC3  naive Euler decay", ac3},
        {"AC4  corrected Euler constant", ac4},
        {"AC5  integral multiplicity", ac5},
        {"AC6  sqrt(det g) = |F|/2", ac6},
        {"AC7  geodesic curvature", ac7},
        {"AC8  Gauss-Bonnet caps and sphere", ac8},
        {"AC9  finite-difference convergence", ac9},
        {"AC10 monopole Chern number", ac10},
        {"AC11 CLI determinism and exit codes", ac11},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s  %-38s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        if (!o.pass)
            ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
