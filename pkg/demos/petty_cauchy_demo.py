"""Shadow averages: the Cauchy surface-area formula and Petty's functional.

Surface area equals a dimensional constant times the spherical mean of
shadow areas; the related affine-invariant functional
(|C|^{n-1} mean |shadow|^{-n})^{-1/n} is minimized by ellipsoids.
"""
import numpy as np

from voliso import (McParams, apply_affine, cauchy_surface_area,
                    petty_functional, surface_area, vrep_from_hrep)
from voliso.shapes import (cube_vertices, random_affine_map, random_polytope,
                           regular_polygon, regular_simplex)

MC = McParams(sample_count=300_000, seed=3)


def main():
    print("=" * 70)
    print("Cauchy formula: surface area from shadow averages")
    print("=" * 70)
    bodies = [
        ("square [-1,1]^2", cube_vertices(2)),
        ("cube [-1,1]^3", cube_vertices(3)),
        ("regular triangle", vrep_from_hrep(regular_simplex(2))),
        ("random polytope n=3", vrep_from_hrep(random_polytope(3, np.random.default_rng(0)))),
    ]
    for name, body in bodies:
        exact = surface_area(body)
        est = cauchy_surface_area(body, MC)
        sigmas = abs(est.value - exact) / est.std_error
        print(f"  {name:22s} exact {exact:9.5f}   estimate {est.value:9.5f} "
              f"+- {est.std_error:.5f}  ({sigmas:.1f} sigma)")

    print()
    print("=" * 70)
    print("Petty's shadow functional (affine-invariant, minimized by balls)")
    print("=" * 70)
    disc = petty_functional(regular_polygon(720), MC)
    square = petty_functional(cube_vertices(2), MC)
    print(f"  disc (720-gon):  {disc.value:.6f} +- {disc.std_error:.2e}"
          f"   (ball minimum 2/sqrt(pi) = {2 / np.sqrt(np.pi):.6f})")
    print(f"  square:          {square.value:.6f} +- {square.std_error:.2e}")

    print("\n  affine invariance of the square's value:")
    rng = np.random.default_rng(4)
    for index in range(4):
        image = apply_affine(cube_vertices(2), random_affine_map(2, rng, max_shift=0.2))
        est = petty_functional(image, McParams(300_000, seed=10 + index))
        print(f"    random affine image {index}: {est.value:.6f} "
              f"+- {est.std_error:.2e}")


if __name__ == "__main__":
    main()
