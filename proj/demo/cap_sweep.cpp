// Prints the bulk-only and boundary-corrected Euler numbers across the
// |h| = 1 transition, next to the cap geometry that explains the difference.
#include <cstdio>

#include "qgeom/invariants.hpp"

int main()
{
    using namespace qgeom;
    std::printf("%6s %10s %12s %12s %4s %10s %10s\n", "h", "C", "chi_naive", "chi", "m", "theta0", "boundary");
    for (double h : {0.0, 0.5, 0.9, 1.1, 1.5, 2.0, 3.0, 5.0, 10.0}) {
        const ModelParams p{h, 1.0, 2.0};
        const CapGeometry cap = analyze_image(p);
        const GaussBonnetTerms gb = gauss_bonnet_terms(cap);
        std::printf("%6.2f %10.2e %12.8f %12.8f %4d %10.6f %10.6f\n", h, chern_number(p).value,
                    euler_naive(p).value, cap.multiplicity * gb.total, cap.multiplicity, cap.theta0,
                    cap.multiplicity * gb.boundary);
    }
}
