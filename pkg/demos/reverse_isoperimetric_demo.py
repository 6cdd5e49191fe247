"""Reverse isoperimetric inequality at desk scale.

Every convex body has an affine image whose isoperimetric quotient
|boundary| / |volume|^((n-1)/n) is at most that of the regular simplex
(cube, for symmetric bodies).  The right representative is the John
position, where the maximal inscribed ellipsoid is the unit ball.  This
script John-positions random bodies and compares their quotients with the
extremal constants.
"""
import numpy as np

from voliso import (isoperimetric_quotient, john_position, polytope_volume,
                    reverse_isoperimetric_constant, simplex_volume_bound,
                    cube_volume_bound, vrep_from_hrep)
from voliso.shapes import random_polytope, regular_simplex

COUNT = 60


def sweep(n, symmetric, seed):
    rng = np.random.default_rng(seed)
    quotients = []
    volumes = []
    for _ in range(COUNT):
        image, _ = john_position(random_polytope(n, rng, symmetric=symmetric))
        vertices = vrep_from_hrep(image)
        quotients.append(isoperimetric_quotient(vertices))
        volumes.append(polytope_volume(vertices))
    return np.array(quotients), np.array(volumes)


def main():
    print("=" * 70)
    print("Isoperimetric quotients of John-positioned random bodies")
    print("=" * 70)
    for n in (2, 3):
        for symmetric in (False, True):
            constant = reverse_isoperimetric_constant(n, symmetric)
            vol_bound = (cube_volume_bound(n) if symmetric
                         else simplex_volume_bound(n))
            quotients, volumes = sweep(n, symmetric, seed=100 * n + symmetric)
            kind = "symmetric" if symmetric else "general  "
            print(f"\nn={n} {kind}  ({COUNT} bodies)")
            print(f"  quotients: min {quotients.min():.4f}  "
                  f"mean {quotients.mean():.4f}  max {quotients.max():.4f}  "
                  f"<= constant {constant:.4f}")
            print(f"  volumes:   max {volumes.max():.4f}  "
                  f"<= extremal volume {vol_bound:.4f}")

    print("\nThe extremal body attains the constant exactly:")
    for n in (2, 3):
        simplex = vrep_from_hrep(regular_simplex(n))
        print(f"  regular simplex n={n}: quotient "
              f"{isoperimetric_quotient(simplex):.6f} vs constant "
              f"{reverse_isoperimetric_constant(n, False):.6f}")


if __name__ == "__main__":
    main()
