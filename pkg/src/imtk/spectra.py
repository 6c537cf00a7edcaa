"""Closed-form spectra and ranks of the square intersection matrices, plus
the verification engines that check them against explicitly built matrices.

All closed forms assume k <= v/2; callers get a ValueError outside that
range rather than an extrapolated answer.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .build import MatrixKind, build
from .combinat import binomial
from .exactalg import (ExactMatrix, ModMatrix, Poly, _matvec_mod, random_prime,
                       rank_modp)
from .opcalc import L

FLOAT_CHECK_MAX_ORDER = 200
EXACT_CHECK_MAX_ORDER = 300


def multiplicity(v: int, j: int) -> int:
    """dim V_j = C(v, j) - C(v, j-1), with C(v, -1) = 0."""
    return binomial(v, j) - binomial(v, j - 1)


def mu(v: int, k: int, t: int, j: int) -> Poly:
    """Eigenvalue polynomial of F^t_{kk}(z) on V_j."""
    _require(0 <= j <= t <= k and 2 * k <= v, "need 0 <= j <= t <= k <= v/2")
    return Poly([binomial(k - j, i - j) * binomial(v - j - i, k - i)
                 for i in range(t + 1)])


def lambda_utl(v: int, k: int, t: int, l: int, j: int) -> int:
    """Eigenvalue of U^{t,l}_{kk} on V_j.

    The sum runs from i = l; terms with i < j vanish through the extended
    binomial C(k-j, i-j).
    """
    _require(0 <= j <= t <= k and 0 <= l <= t and 2 * k <= v,
             "need 0 <= j, l <= t <= k <= v/2")
    return sum((-1) ** (l + i) * binomial(i, l) * binomial(k - j, i - j)
               * binomial(v - j - i, k - i) for i in range(l, t + 1))


def eberlein(v: int, k: int, l: int, j: int) -> int:
    """Eberlein polynomial value: eigenvalue of U^{k-l}_{kk} on V_j."""
    _require(0 <= j <= k and 0 <= l <= k, "need 0 <= j, l <= k")
    return sum((-1) ** (l - i) * binomial(k - i, l - i) * binomial(k - j, i)
               * binomial(v - k + i - j, i) for i in range(l + 1))


def lambda_uge(v: int, k: int, l: int, j: int) -> int:
    """Eigenvalue of U^{>=l}_{kk} on V_j, for l >= 1."""
    _require(1 <= l <= k and 0 <= j <= k and 2 * k <= v,
             "need 1 <= l <= k <= v/2 and 0 <= j <= k")
    return sum((-1) ** (l + i) * binomial(i - 1, l - 1) * binomial(k - j, i - j)
               * binomial(v - j - i, k - i) for i in range(l, k + 1))


def alpha(v: int, k: int, s: int, t: int, j: int) -> Poly:
    """Eigenvalue polynomial of W^T_{sk} F^t_{sk}(z) on V_j.

    Computed both from the closed form and by applying L(k, s) to mu_j; the
    two routes are asserted equal.
    """
    _require(0 <= j <= t <= s <= k and 2 * k <= v,
             "need 0 <= j <= t <= s <= k <= v/2")
    closed = Poly([(-1) ** (k + s) * binomial(k - j, i - j)
                   * binomial(v - j - i, k - i) * binomial(i - s - 1, k - s)
                   for i in range(t + 1)])
    operator_route = L(k, s).apply_poly(mu(v, k, t, j))
    if closed != operator_route:
        raise AssertionError(
            f"alpha closed form disagrees with L(k,s) mu_j at {(v, k, s, t, j)}")
    return closed


def tau(v: int, k: int, s: int, l: int, j: int) -> int:
    """Eigenvalue of W^T_{sk} U^l_{sk} on V_j.

    The sum starts at i = min(j, l); the i < l terms vanish through C(i, l).
    """
    _require(0 <= j <= s <= k and 0 <= l and 2 * k <= v,
             "need 0 <= j <= s <= k <= v/2 and l >= 0")
    return (-1) ** (k + s + l) * sum(
        (-1) ** i * binomial(i, l) * binomial(k - j, i - j)
        * binomial(v - j - i, k - i) * binomial(i - s - 1, k - s)
        for i in range(min(j, l), k + 1))


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


# ---------------------------------------------------------------------------
# spectra as data

@dataclass(frozen=True)
class SpectrumSpec:
    """Eigenvalues with multiplicities: one pair per invariant subspace V_j
    (j ascending), plus the zero tail of dimension order - C(v, t)."""

    pairs: tuple[tuple[object, int], ...]
    zero_tail: int
    order: int

    def __post_init__(self):
        total = sum(m for _, m in self.pairs) + self.zero_tail
        if total != self.order:
            raise ValueError(f"multiplicities sum to {total}, order is {self.order}")
        if any(m < 0 for _, m in self.pairs) or self.zero_tail < 0:
            raise ValueError("negative multiplicity")

    def distinct(self) -> list[tuple[object, int]]:
        """Pairs merged by eigenvalue, first-appearance order, tail merged into 0."""
        order: list = []
        mult: dict = {}
        for val, m in self.pairs:
            if val not in mult:
                mult[val] = 0
                order.append(val)
            mult[val] += m
        if self.zero_tail:
            zero = next((v for v in order if v == 0), None)
            if zero is None:
                order.append(0)
                mult[0] = 0
                zero = 0
            mult[zero] += self.zero_tail
        return [(v, mult[v]) for v in order if mult[v] > 0]

    def multiplicity_of(self, value) -> int:
        return next((m for v, m in self.distinct() if v == value), 0)

    def eval_at(self, a) -> "SpectrumSpec":
        pairs = tuple((val.eval(a) if isinstance(val, Poly) else val, m)
                      for val, m in self.pairs)
        return SpectrumSpec(pairs, self.zero_tail, self.order)

    def is_scalar(self) -> bool:
        return all(not isinstance(v, Poly) for v, _ in self.pairs)

    def to_dict(self) -> dict:
        def enc(val):
            if isinstance(val, Poly):
                return [str(c) for c in val.coeffs]
            return str(val)
        return {
            "order": self.order,
            "zero_tail": self.zero_tail,
            "pairs": [{"j": j, "eigenvalue": enc(v), "multiplicity": m}
                      for j, (v, m) in enumerate(self.pairs)],
        }


def spectrum_of(kind: MatrixKind) -> SpectrumSpec:
    """Full spectrum of a square intersection matrix with k <= v/2."""
    v, s, k = kind.v, kind.s, kind.k
    if kind.tag not in ("F", "A", "N", "U", "Uge", "Utl"):
        raise ValueError(f"no spectrum closed form for kind {kind.tag}")
    if s != k:
        raise ValueError("spectrum_of needs a square kind (s == k)")
    if 2 * k > v:
        raise ValueError("spectrum closed forms need k <= v/2")
    order = binomial(v, k)

    def per_j(values, top):
        pairs = tuple((values(j), multiplicity(v, j)) for j in range(top + 1))
        return SpectrumSpec(pairs, order - binomial(v, top), order)

    if kind.tag == "F":
        t = kind.effective_t()
        return per_j(lambda j: mu(v, k, t, j), t)
    if kind.tag == "Utl":
        t, l = kind.t, kind.l
        _require(l <= t <= k, "Utl spectrum needs l <= t <= k")
        return per_j(lambda j: lambda_utl(v, k, t, l, j), t)
    if kind.tag == "N":
        t = kind.t
        _require(t <= k, "N spectrum needs t <= k")
        return per_j(lambda j: (-1) ** t * lambda_utl(v, k, t, 0, j), t)
    if kind.tag == "A":
        i = kind.i
        _require(i <= k, "A spectrum needs i <= k")
        return per_j(lambda j: lambda_utl(v, k, i, i, j), i)
    if kind.tag == "U":
        l = kind.l
        _require(l <= k, "U spectrum needs l <= k")
        return per_j(lambda j: lambda_utl(v, k, k, l, j), k)
    # Uge
    l = kind.l
    _require(l <= k, "Uge spectrum needs l <= k")
    if l == 0:  # U^{>=0} is the all-ones matrix
        return per_j(lambda j: order if j == 0 else 0, k)
    return per_j(lambda j: lambda_uge(v, k, l, j), k)


def wf_spectrum(v: int, k: int, s: int, t: int) -> SpectrumSpec:
    """Spectrum of W^T_{sk} F^t_{sk}(z): alpha_j with the V_j multiplicities."""
    _require(0 <= t <= s <= k and 2 * k <= v, "need t <= s <= k <= v/2")
    order = binomial(v, k)
    pairs = tuple((alpha(v, k, s, t, j), multiplicity(v, j)) for j in range(t + 1))
    return SpectrumSpec(pairs, order - binomial(v, t), order)


def wu_spectrum(v: int, k: int, s: int, l: int) -> SpectrumSpec:
    """Spectrum of W^T_{sk} U^l_{sk}: tau_j with the V_j multiplicities."""
    _require(0 <= l <= s <= k and 2 * k <= v, "need l <= s <= k <= v/2")
    order = binomial(v, k)
    pairs = tuple((tau(v, k, s, l, j), multiplicity(v, j)) for j in range(s + 1))
    return SpectrumSpec(pairs, order - binomial(v, s), order)


def rank_formula(kind: MatrixKind) -> int:
    """Closed-form rank where one is available."""
    v, s, k = kind.v, kind.s, kind.k
    if kind.tag in ("U", "W"):
        l = s if kind.tag == "W" else kind.l
        _require(0 <= s <= k and 2 * k <= v, "rank formula needs s <= k <= v/2")
        _require(l <= s, "rank formula needs l <= s")
        return sum(multiplicity(v, j) for j in range(s + 1)
                   if tau(v, k, s, l, j) != 0)
    if kind.tag == "N" and s == k and kind.t == k - 1:
        _require(2 * k <= v, "rank formula needs k <= v/2")
        if v == 2 * k:
            return binomial(2 * k, k) // 2
        return binomial(v, k - 1)
    if kind.tag in ("A", "N", "Utl", "Uge") and s == k:
        spec = spectrum_of(kind)
        return spec.order - spec.multiplicity_of(0)
    raise ValueError(f"no rank formula for {kind.describe()}")


# ---------------------------------------------------------------------------
# verification engine

@dataclass
class CheckRecord:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class SpectrumReport:
    matrix: str
    order: int
    mode: str
    ok: bool = True
    primes: tuple[int, ...] = ()
    checks: list[CheckRecord] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append(CheckRecord(name, ok, detail))
        if not ok:
            self.ok = False

    def to_dict(self) -> dict:
        return {
            "matrix": self.matrix,
            "order": self.order,
            "mode": self.mode,
            "ok": self.ok,
            "primes": list(self.primes),
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail}
                       for c in self.checks],
        }


def _reduce_scalar(x, p: int) -> int:
    if isinstance(x, Fraction):
        if x.denominator % p == 0:
            raise ValueError(f"prime {p} divides an eigenvalue denominator")
        return x.numerator % p * pow(x.denominator, -1, p) % p
    return x % p


def _shifted_int_array(arr: np.ndarray, lam) -> np.ndarray:
    """Integer matrix with the same rank as arr - lam*I (denominator cleared)."""
    n = arr.shape[0]
    num, den = (lam.numerator, lam.denominator) if isinstance(lam, Fraction) else (lam, 1)
    if den != 1 and int(np.abs(arr).max(initial=0)) * den >= (1 << 62):
        raise OverflowError("eigenvalue denominator too large for int64 shift")
    out = arr * den if den != 1 else arr.copy()
    idx = np.arange(n)
    out[idx, idx] -= num
    return out


def verify_spectrum(m: ExactMatrix, spec: SpectrumSpec, mode: str = "modp",
                    rng: random.Random | None = None, probes: int = 8,
                    threads: int = 1, label: str = "",
                    assume_diagonalizable: bool = False) -> SpectrumReport:
    """Check a claimed spectrum against an explicitly built matrix.

    modp mode: multiplicity sum, exact trace, annihilation probes over two
    random primes, and one mod-p rank per distinct eigenvalue (retried with a
    fresh prime on mismatch).  exact mode additionally compares trace(M^e)
    with the spectral power sums for e up to the number of distinct
    eigenvalues (order <= 300).

    The rank route equates geometric and algebraic multiplicities, so the
    matrix must be symmetric unless the caller vouches for diagonalizability
    (the W^T F products have a full eigenbasis by construction).
    """
    if mode not in ("modp", "exact"):
        raise ValueError("mode must be 'modp' or 'exact'")
    if m.nrows != m.ncols:
        raise ValueError("matrix must be square")
    if not spec.is_scalar():
        raise TypeError("verify_spectrum needs rational eigenvalues; "
                        "evaluate polynomial spectra at a point first")
    rng = rng or random.Random()
    report = SpectrumReport(label or f"matrix of order {m.nrows}", m.nrows, mode)
    arr = m.as_int_array()
    if not assume_diagonalizable and not np.array_equal(arr, arr.T):
        raise ValueError("matrix must be symmetric")

    report.add("order", spec.order == m.nrows,
               f"claimed order {spec.order}, matrix order {m.nrows}")
    if not report.ok:
        return report

    distinct = spec.distinct()
    trace = int(arr.trace())
    want_trace = sum(val * mult for val, mult in distinct)
    report.add("trace", trace == want_trace,
               f"trace {trace}, spectral sum {want_trace}")

    p1 = random_prime(rng)
    p2 = random_prime(rng)
    while p2 == p1:
        p2 = random_prime(rng)
    report.primes = (p1, p2)

    # annihilation: prod_lambda (M - lambda I) x = 0 for random probes x
    fails = []
    for p in (p1, p2):
        ap = arr % p
        lam_mod = [_reduce_scalar(val, p) for val, _ in distinct]
        for t in range(probes):
            x = np.array([rng.randrange(p) for _ in range(m.nrows)], dtype=np.int64)
            y = x
            for lm in lam_mod:
                y = (_matvec_mod(ap, y, p) - lm * y) % p
            if np.any(y):
                fails.append(f"probe {t} mod {p}")
    report.add("annihilation", not fails,
               f"{2 * probes} probes over primes {p1}, {p2}"
               + (f"; failed: {fails}" if fails else ""))

    # multiplicities: rank(M - lambda I) = order - mult(lambda)
    def rank_one(item):
        val, mult = item
        want = m.nrows - mult
        got = rank_modp(ModMatrix(_shifted_int_array(arr, val), p1), p1)
        if got != want:
            # rank mod p can undershoot the rational rank for unlucky primes
            fresh = random_prime(rng)
            got = rank_modp(ModMatrix(_shifted_int_array(arr, val), fresh), fresh)
        return val, mult, want, got

    if threads > 1 and len(distinct) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(rank_one, distinct))
    else:
        results = [rank_one(item) for item in distinct]
    for val, mult, want, got in results:
        report.add(f"multiplicity[{val}]", got == want,
                   f"rank(M - {val} I) = {got}, expected {want} (mult {mult})")

    if mode == "exact":
        if m.nrows > EXACT_CHECK_MAX_ORDER:
            raise ValueError(f"exact mode limited to order <= {EXACT_CHECK_MAX_ORDER}")
        power = ExactMatrix.identity(m.nrows)
        for e in range(1, len(distinct) + 1):
            power = power @ m
            got = power.trace()
            want = sum(mult * val ** e for val, mult in distinct)
            report.add(f"power_sum[{e}]", got == want,
                       f"trace(M^{e}) = {got}, spectral sum {want}")
    return report


def float_eigenvalues(m: ExactMatrix) -> np.ndarray:
    """Double-precision eigenvalues of a small symmetric matrix, ascending."""
    if m.nrows > FLOAT_CHECK_MAX_ORDER:
        raise ValueError(f"float cross-check limited to order <= {FLOAT_CHECK_MAX_ORDER}")
    arr = np.array([[float(x) for x in row] for row in m.data])
    if not np.allclose(arr, arr.T):
        raise ValueError("float cross-check needs a symmetric matrix")
    return np.linalg.eigvalsh(arr)


def float_crosscheck(m: ExactMatrix, spec: SpectrumSpec, tol: float = 1e-6) -> bool:
    """Compare the claimed spectrum with a float eigendecomposition, clustering
    computed eigenvalues within tol."""
    got = float_eigenvalues(m)
    want: list[float] = []
    for val, mult in spec.distinct():
        want.extend([float(val)] * mult)
    want.sort()
    return len(want) == len(got) and bool(np.all(np.abs(got - np.array(want)) <= tol))


def sampled_eval_points() -> Sequence[Fraction]:
    """Rational sample points used to verify polynomial-valued spectra."""
    return (Fraction(1), Fraction(2), Fraction(-2))
