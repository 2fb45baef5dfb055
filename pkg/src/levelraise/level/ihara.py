"""Randomized check that integral functions in the rational image of delta have integral preimages."""

from __future__ import annotations

import random

from ..congruence import columns, ihara_constant
from ..exact.normal_forms import saturate
from .instance import LevelRaisingInstance


def random_image_vectors(inst: LevelRaisingInstance, trials: int, seed: int, bound: int = 9) -> list[list[int]]:
    """Random integer combinations of a basis of (im delta over Q) cap Z^{X_J}."""
    rng = random.Random(seed)
    sat = saturate([c for c in columns(inst.delta) if any(c)], inst.X.size)
    out = []
    for _ in range(trials):
        coeffs = [rng.randint(-bound, bound) for _ in sat]
        out.append([sum(c * v[i] for c, v in zip(coeffs, sat)) for i in range(inst.X.size)])
    return out


def ihara_check(inst: LevelRaisingInstance, trials: int, seed: int) -> dict:
    passed = failed = 0
    max_radius = 0
    failures = []
    for g in random_image_vectors(inst, trials, seed):
        try:
            _, _, radius = inst.ihara_decompose(g)
        except (ArithmeticError, ValueError) as exc:
            failed += 1
            failures.append(str(exc))
            continue
        passed += 1
        max_radius = max([max_radius] + radius)
    by_rank, by_components = inst.kernel_dimension()
    return {
        "p": inst.p, "q": inst.q, "trials": trials, "seed": seed,
        "passed": passed, "failed": failed,
        "ihara_constant": ihara_constant(inst.delta),
        "kernel_dim_by_rank": by_rank, "kernel_dim_by_components": by_components,
        "max_radius": max_radius, "failures": failures[:5],
    }
