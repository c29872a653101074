"""
Library Fans

Projective spaces, products, Hirzebruch surfaces and the degree-6 del Pezzo surface.

Author: Mohammed Ismail AbdElmageid
"""
from itertools import combinations
from typing import Dict, Callable

from core.fan import Fan


def projective_space(n: int) -> Fan:
    """P^n: rays e_1..e_n and -(e_1+...+e_n); maximal cones omit one ray each"""
    if n < 1:
        raise ValueError(f"projective space needs n >= 1, got {n}")
    rays = [tuple(int(i == k) for k in range(n)) for i in range(n)]
    rays.append(tuple([-1] * n))
    maximal = list(combinations(range(n + 1), n))
    return Fan.from_maximal_cones(n, rays, maximal, name=f"P{n}")


def product(first: Fan, second: Fan) -> Fan:
    """Product fan on N1 x N2; rays of the second factor follow those of the first"""
    rays = [tuple(r) + (0,) * second.dim for r in first.rays]
    rays += [(0,) * first.dim + tuple(r) for r in second.rays]
    offset = first.ray_count
    maximal = [a + tuple(j + offset for j in b) for a in first.maximal_cones for b in second.maximal_cones]
    orbits = list(first.orbit_of_ray) + [i + first.orbit_count for i in second.orbit_of_ray]
    return Fan.from_maximal_cones(first.dim + second.dim, rays, maximal, orbit_of_ray=orbits,
                                  name=f"{first.describe()}x{second.describe()}")


def hirzebruch(a: int) -> Fan:
    """F_a: rays (1,0), (0,1), (-1,a), (0,-1)"""
    rays = [(1, 0), (0, 1), (-1, a), (0, -1)]
    maximal = [(0, 1), (1, 2), (2, 3), (0, 3)]
    return Fan.from_maximal_cones(2, rays, maximal, name=f"F{a}")


def del_pezzo_6() -> Fan:
    """Degree-6 del Pezzo surface: the hexagonal fan with six rays"""
    rays = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]
    maximal = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]
    return Fan.from_maximal_cones(2, rays, maximal, name="dP6")


def projective_line() -> Fan:
    return projective_space(1)


LIBRARY: Dict[str, Callable[[], Fan]] = {
    "P1": projective_line,
    "P2": lambda: projective_space(2),
    "P3": lambda: projective_space(3),
    "P1xP1": lambda: product(projective_space(1), projective_space(1)),
    "F1": lambda: hirzebruch(1),
    "dP6": del_pezzo_6,
}


def library_fan(name: str) -> Fan:
    """Look up a library fan by name (P1, P2, P3, P1xP1, F1, dP6)"""
    try:
        return LIBRARY[name]()
    except KeyError:
        raise KeyError(f"Unknown library fan '{name}'. Available: {', '.join(LIBRARY)}")
