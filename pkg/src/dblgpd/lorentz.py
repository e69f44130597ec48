"""Numerics for SO(3,1) = K A N and the Poincare double group.

Metric eta = diag(-1, 1, 1, 1).  Generators, with parameters as they appear
in the matrices:

    K(a, b, c): spatial block [[0, a, b], [-a, 0, c], [-b, -c, 0]]
    A(t):       (0,1) block   [[0, t], [t, 0]]
    N(p, q):    [[0,0,p,q], [0,0,p,q], [p,-p,0,0], [q,-q,0,0]]

Poincare elements compose as (L1, v1)(L2, v2) = (L1 L2, v1 + L1 v2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])
METRIC_TOL = 1e-9
STRUCT_TOL = 1e-8
GEN_TOL = 1e-12


class LorentzError(ValueError):
    pass


def metric_defect(L: np.ndarray) -> float:
    return float(np.max(np.abs(L.T @ ETA @ L - ETA)))


def lorentz_inv(L: np.ndarray) -> np.ndarray:
    """eta L^T eta, exact for metric-preserving L."""
    return ETA @ L.T @ ETA


def check_lorentz(L: np.ndarray, tol: float = METRIC_TOL) -> None:
    """Raise unless L is a proper orthochronous Lorentz matrix."""
    L = np.asarray(L, dtype=float)
    if L.shape != (4, 4) or not np.all(np.isfinite(L)):
        raise LorentzError("expected a finite 4x4 matrix")
    d = metric_defect(L)
    if d > tol * max(1.0, float(np.max(np.abs(L))) ** 2):
        raise LorentzError(f"matrix does not preserve the metric (defect {d:.3g})")
    if abs(np.linalg.det(L) - 1.0) > 1e-6:
        raise LorentzError("matrix is improper (det != 1)")
    if L[0, 0] < 1.0 - tol:
        raise LorentzError("matrix is not orthochronous (L00 < 1)")


def _finite(params) -> np.ndarray:
    p = np.asarray(params, dtype=float).reshape(-1)
    if not np.all(np.isfinite(p)):
        raise LorentzError("generator parameters must be finite")
    return p


def k_generator(a: float, b: float, c: float) -> np.ndarray:
    m = np.zeros((4, 4))
    m[1:, 1:] = [[0, a, b], [-a, 0, c], [-b, -c, 0]]
    return m


def a_generator(t: float) -> np.ndarray:
    m = np.zeros((4, 4))
    m[0, 1] = m[1, 0] = t
    return m


def n_generator(p: float, q: float) -> np.ndarray:
    return np.array([[0, 0, p, q], [0, 0, p, q], [p, -p, 0, 0], [q, -q, 0, 0]], dtype=float)


def exp_generator(family: str, params) -> np.ndarray:
    """Closed-form exponential of a K, A or N generator."""
    p = _finite(params)
    family = family.upper()
    out = np.eye(4)
    if family == "K":
        if p.size != 3:
            raise LorentzError("K takes three parameters")
        w = k_generator(*p)[1:, 1:]
        theta = float(np.sqrt(p @ p))
        if theta < 1e-8:
            s, c = 1.0 - theta**2 / 6, 0.5 - theta**2 / 24
        else:
            s, c = np.sin(theta) / theta, (1 - np.cos(theta)) / theta**2
        out[1:, 1:] = np.eye(3) + s * w + c * (w @ w)
    elif family == "A":
        if p.size != 1:
            raise LorentzError("A takes one parameter")
        ch, sh = np.cosh(p[0]), np.sinh(p[0])
        out[:2, :2] = [[ch, sh], [sh, ch]]
    elif family == "N":
        if p.size != 2:
            raise LorentzError("N takes two parameters")
        m = n_generator(*p)
        out = out + m + (m @ m) / 2
    else:
        raise LorentzError(f"unknown generator family {family!r}")
    return out


def rotation_params(k: np.ndarray) -> np.ndarray:
    """(a, b, c) with exp_generator('K', (a, b, c)) == k, from the spatial block via scipy."""
    w = Rotation.from_matrix(k[1:, 1:]).as_rotvec()
    # standard skew [w]x has entries (0,1) = -w3, (0,2) = w2, (1,2) = -w1
    return np.array([-w[2], w[1], -w[0]])


@dataclass
class KANFactors:
    k: np.ndarray
    a: np.ndarray
    n: np.ndarray
    rotation: np.ndarray
    boost: float
    null: tuple[float, float]
    residual: float

    def to_dict(self) -> dict:
        return {
            "k": self.k.tolist(),
            "a": self.a.tolist(),
            "n": self.n.tolist(),
            "params": {"rotation": self.rotation.tolist(), "boost": self.boost, "null": list(self.null)},
            "residual": self.residual,
        }


def iwasawa_decompose(L) -> KANFactors:
    """L = k a n with k a rotation, a an x-boost and n a null rotation.

    x = L^-1 e0 is a future unit timelike vector; n leaves x0 - x1 alone
    and can kill x2, x3; the boost then rescales x0 - x1 to 1.
    """
    L = np.asarray(L, dtype=float)
    check_lorentz(L)
    x = lorentz_inv(L)[:, 0]
    u = x[0] - x[1]
    if u <= 0:
        raise LorentzError("L^-1 e0 is not future timelike")
    p, q = -x[2] / u, -x[3] / u
    t = float(np.log(u))
    a = exp_generator("A", [t])
    n = exp_generator("N", [p, q])
    k = L @ exp_generator("N", [-p, -q]) @ exp_generator("A", [-t])
    # clean the rotation: its first row and column are exactly e0
    k[0, :] = k[:, 0] = 0.0
    k[0, 0] = 1.0
    residual = float(np.max(np.abs(k @ a @ n - L)))
    return KANFactors(k, a, n, rotation_params(k), t, (float(p), float(q)), residual)


def an_k_decompose(L) -> tuple[np.ndarray, np.ndarray]:
    """L = m k with m in AN and k a rotation (the KAN factorization of L^-1, inverted)."""
    f = iwasawa_decompose(lorentz_inv(L))
    return lorentz_inv(f.a @ f.n), f.k.T


# -- Poincare ----------------------------------------------------------------


@dataclass
class PoincareElement:
    lorentz: np.ndarray
    translation: np.ndarray

    def __matmul__(self, other: "PoincareElement") -> "PoincareElement":
        return PoincareElement(self.lorentz @ other.lorentz, self.translation + self.lorentz @ other.translation)

    def inverse(self) -> "PoincareElement":
        li = lorentz_inv(self.lorentz)
        return PoincareElement(li, -li @ self.translation)

    def distance(self, other: "PoincareElement") -> float:
        return max(
            float(np.max(np.abs(self.lorentz - other.lorentz))),
            float(np.max(np.abs(self.translation - other.translation))),
        )


@dataclass
class PoincareSquare:
    """top h and bottom h2 in K, left k and right k2 in AN, with h k2 = k h2; u the core label."""

    h: np.ndarray
    k: np.ndarray
    h2: np.ndarray
    k2: np.ndarray
    u: np.ndarray

    def defect(self) -> float:
        return float(np.max(np.abs(self.h @ self.k2 - self.k @ self.h2)))

    def hcomp(self, other: "PoincareSquare") -> "PoincareSquare":
        return PoincareSquare(self.h @ other.h, self.k, self.h2 @ other.h2, other.k2, self.u + self.h @ other.u)

    def vcomp(self, other: "PoincareSquare") -> "PoincareSquare":
        return PoincareSquare(self.h, self.k @ other.k, other.h2, self.k2 @ other.k2, self.u + self.k @ other.u)

    def hinv(self) -> "PoincareSquare":
        hi = self.h.T
        return PoincareSquare(hi, self.k2, self.h2.T, self.k, -hi @ self.u)

    def vinv(self) -> "PoincareSquare":
        ki = lorentz_inv(self.k)
        return PoincareSquare(self.h2, ki, self.h, lorentz_inv(self.k2), -ki @ self.u)

    def distance(self, other: "PoincareSquare") -> float:
        return max(
            float(np.max(np.abs(a - b)))
            for a, b in zip((self.h, self.k, self.h2, self.k2, self.u), (other.h, other.k, other.h2, other.k2, other.u))
        )

    def to_group(self) -> PoincareElement:
        """(u, 1)(h k2, 0): the Poincare element this square stands for."""
        return PoincareElement(self.h @ self.k2, self.u.copy())


def square_from(top: np.ndarray, left: np.ndarray, u: np.ndarray) -> PoincareSquare:
    """The unique square with the given top and left: h2, k2 from left^-1 top = h2 k2^-1."""
    f = iwasawa_decompose(lorentz_inv(left) @ top)
    return PoincareSquare(top, left, f.k, lorentz_inv(f.a @ f.n), np.asarray(u, dtype=float))


def identity_square_h(h: np.ndarray) -> PoincareSquare:
    return PoincareSquare(h, np.eye(4), h, np.eye(4), np.zeros(4))


def identity_square_v(k: np.ndarray) -> PoincareSquare:
    return PoincareSquare(np.eye(4), k, np.eye(4), k, np.zeros(4))


def random_rotation(rng: np.random.Generator, scale: float = 3.0) -> np.ndarray:
    return exp_generator("K", rng.uniform(-scale, scale, 3))


def random_an(rng: np.random.Generator, scale: float = 3.0) -> np.ndarray:
    return exp_generator("A", rng.uniform(-scale, scale, 1)) @ exp_generator("N", rng.uniform(-scale, scale, 2))


def random_lorentz(rng: np.random.Generator, scale: float = 3.0) -> np.ndarray:
    return random_rotation(rng, scale) @ random_an(rng, scale)


def poincare_double_group_check(samples: int = 1000, seed: int = 42, *, scale: float = 1.0) -> dict:
    """Random squares and 2x2 arrangements; every law is measured as a max residual."""
    if samples < 1:
        raise LorentzError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    res = {k: 0.0 for k in ("square", "closure", "units", "inverses", "interchange", "associativity", "group_law", "core_commutes")}
    worst = None

    def bump(key, val, arrangement=None):
        nonlocal worst
        if val > res[key]:
            res[key] = val
            if key == "interchange":
                worst = arrangement

    def rnd_u():
        return rng.uniform(-scale, scale, 4)

    for _ in range(samples):
        a = square_from(random_rotation(rng, scale), random_an(rng, scale), rnd_u())
        b = square_from(random_rotation(rng, scale), a.k2, rnd_u())
        c = square_from(a.h2, random_an(rng, scale), rnd_u())
        d = square_from(b.h2, c.k2, rnd_u())
        for s in (a, b, c, d):
            bump("square", s.defect())
        ab, cd, ac, bd = a.hcomp(b), c.hcomp(d), a.vcomp(c), b.vcomp(d)
        for s in (ab, cd, ac, bd):
            bump("closure", s.defect())
        rows, cols = ab.vcomp(cd), ac.hcomp(bd)
        bump("interchange", rows.distance(cols), (a, b, c, d))
        e = square_from(random_rotation(rng, scale), b.k2, rnd_u())
        f = square_from(c.h2, random_an(rng, scale), rnd_u())
        bump("associativity", a.hcomp(b).hcomp(e).distance(a.hcomp(b.hcomp(e))))
        bump("associativity", a.vcomp(c).vcomp(f).distance(a.vcomp(c.vcomp(f))))
        bump("units", identity_square_v(a.k).hcomp(a).distance(a))
        bump("units", a.hcomp(identity_square_v(a.k2)).distance(a))
        bump("units", identity_square_h(a.h).vcomp(a).distance(a))
        bump("units", a.vcomp(identity_square_h(a.h2)).distance(a))
        bump("inverses", a.hcomp(a.hinv()).distance(identity_square_v(a.k)))
        bump("inverses", a.hinv().hcomp(a).distance(identity_square_v(a.k2)))
        bump("inverses", a.vcomp(a.vinv()).distance(identity_square_h(a.h)))
        bump("inverses", a.vinv().vcomp(a).distance(identity_square_h(a.h2)))
        g1, g2, g3 = (PoincareElement(random_lorentz(rng, scale), rnd_u()) for _ in range(3))
        bump("group_law", ((g1 @ g2) @ g3).distance(g1 @ (g2 @ g3)))
        x = PoincareSquare(np.eye(4), np.eye(4), np.eye(4), np.eye(4), rnd_u())
        y = PoincareSquare(np.eye(4), np.eye(4), np.eye(4), np.eye(4), rnd_u())
        bump("core_commutes", max(x.hcomp(y).distance(y.hcomp(x)), x.hcomp(y).distance(x.vcomp(y))))
    max_res = max(res.values())
    report = {
        "samples": samples,
        "seed": seed,
        "residuals": res,
        "max_residual": max_res,
        "tolerance": STRUCT_TOL,
        "ok": max_res <= STRUCT_TOL,
    }
    if not report["ok"] and worst is not None:
        report["worst_arrangement"] = [
            {"h": s.h.tolist(), "k": s.k.tolist(), "h2": s.h2.tolist(), "k2": s.k2.tolist(), "u": s.u.tolist()} for s in worst
        ]
    return report
