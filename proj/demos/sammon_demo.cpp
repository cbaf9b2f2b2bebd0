// Maps the corners of a 3D cube into the plane with the Sammon mapping and
// prints the stress trace, showing the monotone pseudo-Newton descent.

#include <cstdio>

#include <qsarmap/qsarmap.hpp>

int main() {
    qsarmap::Matrix cube(8, 3);
    for (std::size_t i = 0; i < 8; ++i) {
        cube(i, 0) = static_cast<double>(i & 1);
        cube(i, 1) = static_cast<double>((i >> 1) & 1);
        cube(i, 2) = static_cast<double>((i >> 2) & 1);
    }

    qsarmap::SammonConfig config;
    config.max_iterations = 200;
    const qsarmap::SammonResult result = qsarmap::embed(cube, 2, config);

    const auto& trace = result.trace.stress_per_iteration;
    std::printf("cube corners -> 2D, %d iterations, converged: %s\n",
                result.trace.iterations_used, result.trace.converged ? "yes" : "no");
    std::printf("initial stress %.8f, final stress %.8f\n", trace.front(), trace.back());
    for (std::size_t i = 0; i < trace.size(); i += 10)
        std::printf("  iteration %3zu: stress %.8f\n", i, trace[i]);

    std::printf("\nfinal layout:\n");
    for (std::size_t i = 0; i < 8; ++i)
        std::printf("  corner (%g, %g, %g) -> (%+.4f, %+.4f)\n", cube(i, 0), cube(i, 1),
                    cube(i, 2), result.embedding.coords(i, 0), result.embedding.coords(i, 1));
    return 0;
}
