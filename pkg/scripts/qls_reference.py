#!/usr/bin/env python3
"""Independent high-precision evaluation of the linear-solver gate bound.

Written separately from the package implementation and kept dependency-free
of it: mpmath at 50 digits, direct transcription of the formula. Output is
frozen into tests/test_qcost.py and tests/test_acceptance.py as fixtures.

Usage: python3 scripts/qls_reference.py
"""

import mpmath as mp

mp.mp.dps = 50


def w_smallest(eps_seg):
    target = mp.mpf(eps_seg) ** 2 / 2
    w = 1
    while mp.e ** w / mp.mpf(w) ** w > target:
        w += 1
        if w > 10 ** 6:
            raise RuntimeError("w scan exceeded limit")
    return w


def qls_bound(norm1, norm_max, d, kappa, eps):
    norm1, norm_max = mp.mpf(norm1), mp.mpf(norm_max)
    kappa, eps = mp.mpf(kappa), mp.mpf(eps)
    L = mp.log(1 + 8 * kappa / eps)
    t = 2 * mp.sqrt(2) * kappa * L
    dz = (2 * mp.pi / (kappa + 1)) / mp.sqrt(L)
    K = int(mp.floor(((kappa + 1) / mp.pi) * L))
    s = mp.mpf(0)
    k = 1
    while k <= K:
        z = k * dz
        term = z * mp.e ** (-z * z / 2)
        s += term
        if z > 45:
            break
        k += 1
    alpha = 2 * mp.sqrt(mp.pi) * (kappa / (kappa + 1)) * 2 * s
    if alpha <= 1:
        raise RuntimeError("alpha <= 1 (degenerate)")
    amp = mp.pi / (2 * mp.asin(1 / alpha)) + 1
    gamma = eps / (mp.sqrt(2) * mp.mpf(d) ** 3 * t)
    eps_seg = eps / (90 * gamma * t * d * d * mp.ceil(norm_max / gamma))
    w = w_smallest(eps_seg)
    norm_factor = norm1 - d * d * gamma
    if norm_factor <= 0:
        return mp.mpf(0)
    qb = mp.ceil(mp.log(norm1 / gamma - d * d, 2)) - 1
    if qb <= 0:
        return mp.mpf(0)
    return 10 * t * w * amp * norm_factor * qb


GRID = [
    # (norm1, norm_max, d, kappa, eps)
    (1.0, 1.0, 1, 1.0, 1e-3),
    (1.0, 1.0, 1, 2.0, 1e-3),
    (0.75, 0.5, 2, 5.0, 1e-3),
    (1.0, 1.0, 1, 1.0, 1e-6),
    (0.5, 0.25, 4, 10.0, 1e-4),
]


def main():
    print("# frozen fixtures for qls_lb (value to 17 significant digits)")
    for params in GRID:
        v = qls_bound(*params)
        print(f"{params!r}: {mp.nstr(v, 17)}")
    print("\n# kappa monotonicity sweep (norm1=1, norm_max=1, d=1, eps=1e-3)")
    prev = None
    for i in range(11):
        kappa = 2 ** i
        v = qls_bound(1.0, 1.0, 1, kappa, 1e-3)
        mono = "" if prev is None or v > prev else "  NOT MONOTONE"
        print(f"kappa={kappa}: {mp.nstr(v, 12)}{mono}")
        prev = v
    print("\n# eps monotonicity sweep (norm1=1, norm_max=1, d=1, kappa=2)")
    prev = None
    for i in range(1, 7):
        eps = mp.mpf(10) ** -i
        v = qls_bound(1.0, 1.0, 1, 2.0, eps)
        mono = "" if prev is None or v > prev else "  NOT MONOTONE"
        print(f"eps=1e-{i}: {mp.nstr(v, 12)}{mono}")
        prev = v


if __name__ == "__main__":
    main()
