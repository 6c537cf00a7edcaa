"""The identity catalog: every numbered identity as a named, parameterized,
executable check, plus a grid runner with reporting.

Left and right sides are always computed by independent routes: left sides
by products of entrywise-built matrices, right sides by closed forms, never
sharing intermediates.  Registry keys use 'p' for primed variants
(prop5.ip is the right-multiplication twin of prop5.i).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fnmatch import fnmatch
from fractions import Fraction
from math import factorial
from typing import Callable, Iterable

from . import opcalc
from .build import (A, F, N, U, Uge, Utl, W, Wbar, X, Y, block_decompose,
                    build, row_support_formula)
from .combinat import SubsetFamily, binomial, xi, xi_at_minus1
from .exactalg import ExactMatrix, Poly, equiv_check
from .scheme import intersection_p, intersection_r

# ---------------------------------------------------------------------------
# small helpers

def _cmp(lhs: ExactMatrix, rhs: ExactMatrix) -> str | None:
    """None when equal, else a witness naming the first differing entry."""
    if lhs.shape != rhs.shape:
        return f"shape {lhs.shape} != {rhs.shape}"
    if lhs == rhs:
        return None
    for i in range(lhs.nrows):
        for j in range(lhs.ncols):
            if lhs.data[i][j] != rhs.data[i][j]:
                return f"entry ({i},{j}): {lhs.data[i][j]!r} != {rhs.data[i][j]!r}"
    return None


def _cmp_poly(lhs: Poly, rhs: Poly, what: str) -> str | None:
    if lhs != rhs:
        return f"{what}: {lhs!r} != {rhs!r}"
    return None


def _zp1(e: int) -> Poly:
    return Poly((1, 1)) ** e


def _scale_zp1(m: ExactMatrix, e: int) -> ExactMatrix:
    """Multiply by (z+1)^e; negative e divides exactly entrywise."""
    if e >= 0:
        return m.scale(_zp1(e))
    return m.map_entries(lambda x: Poly._lift(x).divexact_linear(-1, -e))


def _lincomb(pairs, shape, families=(None, None)) -> ExactMatrix:
    acc = ExactMatrix.zeros(*shape, *families)
    for c, m in pairs:
        if c:
            acc = acc + m.scale(c)
    return acc


def _mins(s: int, k: int) -> int:
    return min(s, k)


# ---------------------------------------------------------------------------
# registry plumbing

@dataclass
class CheckResult:
    name: str
    params: dict
    ok: bool
    detail: str = ""


@dataclass
class IdentityCheck:
    name: str
    description: str
    domain: Callable[[int], Iterable[dict]]
    check: Callable[..., str | None]
    note: str = ""

    def run(self, **params) -> CheckResult:
        witness = self.check(**params)
        return CheckResult(self.name, params, witness is None, witness or "")


REGISTRY: dict[str, IdentityCheck] = {}


def _register(name: str, description: str, domain, note: str = ""):
    def deco(fn):
        REGISTRY[name] = IdentityCheck(name, description, domain, fn, note)
        return fn
    return deco


# ---------------------------------------------------------------------------
# inclusion, exclusion, and binomial-entry matrices

def _dom_eq1(v_max):
    for v in range(1, v_max + 1):
        for k in range(v + 1):
            for s in range(k + 1):
                for i in range(s + 1):
                    yield {"i": i, "s": s, "k": k, "v": v}


@_register("eq1", "W_is W_sk = C(k-i, s-i) W_ik", _dom_eq1)
def _chk_eq1(i, s, k, v):
    lhs = build(W(i, s, v)) @ build(W(s, k, v))
    rhs = build(W(i, k, v)).scale(binomial(k - i, s - i))
    return _cmp(lhs, rhs)


def _dom_sk(v_max):
    for v in range(1, v_max + 1):
        for s in range(v + 1):
            for k in range(v + 1):
                yield {"s": s, "k": k, "v": v}


@_register("eq2", "Wbar_sk = sum (-1)^i W_is^T W_ik", _dom_sk)
def _chk_eq2(s, k, v):
    rhs = _lincomb((((-1) ** i, build(W(i, s, v)).transpose() @ build(W(i, k, v)))
                    for i in range(s + 1)),
                   (binomial(v, s), binomial(v, k)))
    return _cmp(build(Wbar(s, k, v)), rhs)


@_register("eq3", "W_sk = sum (-1)^i W_is^T Wbar_ik", _dom_sk)
def _chk_eq3(s, k, v):
    rhs = _lincomb((((-1) ** i, build(W(i, s, v)).transpose() @ build(Wbar(i, k, v)))
                    for i in range(s + 1)),
                   (binomial(v, s), binomial(v, k)))
    return _cmp(build(W(s, k, v)), rhs)


def _dom_isk(v_max):
    for v in range(1, v_max + 1):
        for s in range(v + 1):
            for k in range(v + 1):
                for i in range(_mins(s, k) + 1):
                    yield {"i": i, "s": s, "k": k, "v": v}


@_register("eq4", "A^i_sk = W_is^T W_ik", _dom_isk)
def _chk_eq4(i, s, k, v):
    lhs = build(A(i, s, k, v))
    rhs = build(W(i, s, v)).transpose() @ build(W(i, k, v))
    return _cmp(lhs, rhs)


@_register("eq5", "Wbar_sk = sum (-1)^i A^i_sk", _dom_sk)
def _chk_eq5(s, k, v):
    rhs = _lincomb((((-1) ** i, build(A(i, s, k, v))) for i in range(s + 1)),
                   (binomial(v, s), binomial(v, k)))
    return _cmp(build(Wbar(s, k, v)), rhs)


def _dom_tsk(v_max):
    for v in range(1, v_max + 1):
        for s in range(v + 1):
            for k in range(v + 1):
                for t in range(_mins(s, k) + 1):
                    yield {"t": t, "s": s, "k": k, "v": v}


@_register("eq6", "N^t_sk = sum (-1)^(t-i) A^i_sk; Wbar = (-1)^min N^min", _dom_tsk)
def _chk_eq6(t, s, k, v):
    rhs = _lincomb((((-1) ** (t - i), build(A(i, s, k, v))) for i in range(t + 1)),
                   (binomial(v, s), binomial(v, k)))
    bad = _cmp(build(N(t, s, k, v)), rhs)
    if bad:
        return bad
    if t == _mins(s, k):
        lhs = build(Wbar(s, k, v))
        return _cmp(lhs, build(N(t, s, k, v)).scale((-1) ** t))
    return None


# ---------------------------------------------------------------------------
# the generating matrix F, its Taylor coefficients, and product expansions

@_register("eq12", "F^t = sum_l U^{tl} (z+1)^l", _dom_tsk)
def _chk_eq12(t, s, k, v):
    shape = (binomial(v, s), binomial(v, k))
    rhs = _lincomb(((_zp1(l), build(Utl(t, l, s, k, v))) for l in range(t + 1)),
                   shape)
    return _cmp(build(F(t, s, k, v)), rhs)


def _dom_tlsk(v_max):
    for v in range(1, v_max + 1):
        for s in range(v + 1):
            for k in range(v + 1):
                for t in range(_mins(s, k) + 1):
                    for l in range(t + 1):
                        yield {"t": t, "l": l, "s": s, "k": k, "v": v}


@_register("eq15", "U^{tl} = sum_i (-1)^(i-l) C(i,l) A^i", _dom_tlsk)
def _chk_eq15(t, l, s, k, v):
    rhs = _lincomb((((-1) ** (i - l) * binomial(i, l), build(A(i, s, k, v)))
                    for i in range(l, t + 1)),
                   (binomial(v, s), binomial(v, k)))
    return _cmp(build(Utl(t, l, s, k, v)), rhs)


def _dom_eq16(v_max):
    for v in range(1, v_max + 1):
        for s in range(v + 1):
            for k in range(v + 1):
                for t in range(_mins(s, k) + 1):
                    for i in range(t + 1):
                        yield {"t": t, "i": i, "s": s, "k": k, "v": v}


@_register("eq16", "A^i = sum_l C(l,i) U^{tl}", _dom_eq16)
def _chk_eq16(t, i, s, k, v):
    rhs = _lincomb(((binomial(l, i), build(Utl(t, l, s, k, v)))
                    for l in range(i, t + 1)),
                   (binomial(v, s), binomial(v, k)))
    return _cmp(build(A(i, s, k, v)), rhs)


def _dom_thm2(v_max):
    for v in range(1, v_max + 1):
        for s in range(v + 1):
            for k in range(v + 1):
                for t in range(_mins(s, k) + 2):
                    for l in range(t + 1):
                        yield {"t": t, "l": l, "s": s, "k": k, "v": v}


@_register("thm2.i", "U^{tl} entries, nonzero set, and row support", _dom_thm2)
def _chk_thm2_i(t, l, s, k, v):
    # dual route: Taylor coefficients at z = -1 of the built F^t
    got = build(Utl(t, l, s, k, v))
    fmat = build(F(t, s, k, v))
    for r in range(got.nrows):
        for c in range(got.ncols):
            coeffs = Poly._lift(fmat.data[r][c]).shift_basis(-1)
            want = coeffs[l] if l < len(coeffs) else 0
            if got.data[r][c] != want:
                return f"entry ({r},{c}): built {got.data[r][c]}, Taylor {want}"
    support_set = {l} | set(range(t + 1, _mins(s, k) + 1))
    theta_ok = all(
        (th in support_set) == (((-1) ** (t - l) * binomial(th, l)
                                 * binomial(th - l - 1, t - l)) != 0)
        for th in range(_mins(s, k) + 1))
    if not theta_ok:
        return "nonzero set differs from {l} u {t+1..min(s,k)}"
    if l <= t <= _mins(s, k):
        want_support = row_support_formula(t, l, s, k, v)
        for r in range(got.nrows):
            sup = sum(1 for x in got.data[r] if x != 0)
            if sup != want_support:
                return f"row {r} support {sup}, formula {want_support}"
    return None


@_register("thm2.ii", "U^{t,0} = (-1)^t N^t; U^{s,l} = U^l; U^{t,t} = A^t", _dom_tsk)
def _chk_thm2_ii(t, s, k, v):
    bad = _cmp(build(Utl(t, 0, s, k, v)), build(N(t, s, k, v)).scale((-1) ** t))
    if bad:
        return "U^{t,0} vs N: " + bad
    for l in range(s + 1):
        bad = _cmp(build(Utl(s, l, s, k, v)), build(U(l, s, k, v)))
        if bad:
            return f"U^(s,{l}) vs U^{l}: " + bad
    bad = _cmp(build(Utl(t, t, s, k, v)), build(A(t, s, k, v)))
    return ("U^(t,t) vs A^t: " + bad) if bad else None


@_register("thm2.iii", "U^{tl} expanded in the U^theta basis", _dom_tlsk)
def _chk_thm2_iii(t, l, s, k, v):
    shape = (binomial(v, s), binomial(v, k))
    pairs = [(1, build(U(l, s, k, v)))]
    for th in range(t + 1, _mins(s, k) + 1):
        c = (-1) ** (t - l) * binomial(th, l) * binomial(th - l - 1, t - l)
        pairs.append((c, build(U(th, s, k, v))))
    return _cmp(build(Utl(t, l, s, k, v)), _lincomb(pairs, shape))


@_register("lemma3.i", "(F^t_sk)^T = F^t_ks", _dom_tsk)
def _chk_lemma3_i(t, s, k, v):
    return _cmp(build(F(t, s, k, v)).transpose(), build(F(t, k, s, v)))


def _dom_l3ii(v_max):
    for v in range(1, v_max + 1):
        for s in range(v + 1):
            for k in range(v + 1):
                for t in (_mins(s, k), _mins(s, k) + 1, _mins(s, k) + 3):
                    yield {"t": t, "s": s, "k": k, "v": v}


@_register("lemma3.ii", "F^t_sk = F_sk for t >= min(s,k)", _dom_l3ii)
def _chk_lemma3_ii(t, s, k, v):
    return _cmp(build(F(t, s, k, v)), build(F(None, s, k, v)))


_SAMPLE_PAIRS = ((1, 2), (1, -2), (2, -2))


def _dom_kk(v_max):
    for v in range(1, v_max + 1):
        for k in range(v + 1):
            yield {"k": k, "v": v}


@_register("lemma3.iii", "F_kk(z) F_kk(u) commute (sampled rational points)", _dom_kk)
def _chk_lemma3_iii(k, v):
    f = build(F(None, k, k, v))
    for a, b in _SAMPLE_PAIRS:
        fa, fb = f.eval_at(a), f.eval_at(b)
        bad = _cmp(fa @ fb, fb @ fa)
        if bad:
            return f"at (z,u)=({a},{b}): " + bad
    return None


def _dom_ijkk(v_max):
    for v in range(1, v_max + 1):
        for k in range(v + 1):
            for i in range(k + 1):
                for j in range(i, k + 1):
                    yield {"i": i, "j": j, "k": k, "v": v}


@_register("lemma3.iv", "A^i_kk and A^j_kk commute", _dom_ijkk)
def _chk_lemma3_iv(i, j, k, v):
    ai, aj = build(A(i, k, k, v)), build(A(j, k, k, v))
    return _cmp(ai @ aj, aj @ ai)


@_register("lemma3.v", "U^i_kk and U^j_kk commute", _dom_ijkk)
def _chk_lemma3_v(i, j, k, v):
    ui, uj = build(U(i, k, k, v)), build(U(j, k, k, v))
    return _cmp(ui @ uj, uj @ ui)


def _dom_ab(v_max):
    for v in range(1, v_max + 1):
        for a in range(v + 1):
            for b in range(v + 1):
                yield {"a": a, "b": b, "v": v}


@_register("eq17", "F_{v-a,v-b} ~ (z+1)^{v-a-b} F_ab under complements", _dom_ab)
def _chk_eq17(a, b, v):
    lhs = build(F(None, v - a, v - b, v))
    rhs = _scale_zp1(build(F(None, a, b, v)), v - a - b)
    rperm = SubsetFamily(v, v - a).complement_permutation()
    cperm = SubsetFamily(v, v - b).complement_permutation()
    if not equiv_check(lhs, rhs, rperm, cperm):
        return "complement-permuted matrices differ"
    return None


def _dom_eq18(v_max):
    for v in range(1, v_max + 1):
        for k in range(v + 1):
            for a in range(k + 1):
                for b in range(k + 1):
                    yield {"a": a, "b": b, "k": k, "v": v}


@_register("eq18", "W_ak W_bk^T = sum_n C(v-b-a, v-k-n) A^n_ab", _dom_eq18)
def _chk_eq18(a, b, k, v):
    lhs = build(W(a, k, v)) @ build(W(b, k, v)).transpose()
    rhs = _lincomb(((binomial(v - b - a, v - k - n), build(A(n, a, b, v)))
                    for n in range(_mins(a, b) + 1)),
                   (binomial(v, a), binomial(v, b)))
    return _cmp(lhs, rhs)


def _dom_abc(v_max):
    for v in range(1, v_max + 1):
        for a in range(v + 1):
            for b in range(v + 1):
                for c in range(v + 1):
                    for i in range(_mins(a, b) + 1):
                        for j in range(_mins(b, c) + 1):
                            yield {"a": a, "b": b, "c": c, "i": i, "j": j, "v": v}


@_register("eq19", "A^i_ab A^j_bc expansion in A^n_ac", _dom_abc)
def _chk_eq19(a, b, c, i, j, v):
    lhs = build(A(i, a, b, v)) @ build(A(j, b, c, v))
    rhs = _lincomb(((binomial(a - n, i - n) * binomial(c - n, j - n)
                     * binomial(v - i - j, b + n - i - j), build(A(n, a, c, v)))
                    for n in range(_mins(i, j) + 1)),
                   (binomial(v, a), binomial(v, c)))
    return _cmp(lhs, rhs)


@_register("eq20", "U^i_ab U^j_bc expansion in U^l_ac", _dom_abc)
def _chk_eq20(a, b, c, i, j, v):
    lhs = build(U(i, a, b, v)) @ build(U(j, b, c, v))
    pairs = []
    for l in range(_mins(a, c) + 1):
        coef = sum(binomial(l, n) * binomial(c - l, j - n) * binomial(a - l, i - n)
                   * binomial(v - a - c + l, b - i - j + n) for n in range(l + 1))
        pairs.append((coef, build(U(l, a, c, v))))
    rhs = _lincomb(pairs, (binomial(v, a), binomial(v, c)))
    return _cmp(lhs, rhs)


# ---------------------------------------------------------------------------
# the summation identity, the zD calculus, and the W^T F ladder

def _dom_eq21(v_max):
    hi = max(8, min(v_max, 10))
    for l in range(hi + 1):
        for m in range(hi + 1):
            for n in range(hi + 1):
                for s in range(hi + 1):
                    yield {"l": l, "m": m, "n": n, "s": s}


@_register("eq21", "sum_k (-1)^k C(l-k,m) C(s,k-n) = (-1)^(l+m) C(s-m-1, l-m-n)",
           _dom_eq21)
def _chk_eq21(l, m, n, s):
    lhs = sum((-1) ** k * binomial(l - k, m) * binomial(s, k - n)
              for k in range(l + 1))
    rhs = (-1) ** (l + m) * binomial(s - m - 1, l - m - n)
    if lhs != rhs:
        return f"{lhs} != {rhs}"
    return None


def _dom_n8(v_max):
    for n in range(9):
        yield {"n": n}


@_register("lemma6.i", "(zD)^n = sum_k S(n,k) z^k D^k", _dom_n8)
def _chk_lemma6_i(n):
    brute = opcalc.identity_op()
    for _ in range(n):
        brute = opcalc.op_compose(brute, opcalc.zD)
    if brute != opcalc.zD_power(n):
        return f"composition {brute!r} != closed form {opcalc.zD_power(n)!r}"
    return None


@_register("lemma6.ii", "(zD)_n = z^n D^n", _dom_n8)
def _chk_lemma6_ii(n):
    brute = opcalc.identity_op()
    for i in range(n):
        brute = opcalc.op_compose(brute, opcalc.zD - i * opcalc.identity_op())
    if brute != opcalc.zD_falling(n):
        return f"composition {brute!r} != z^n D^n"
    return None


def _dom_kn8(v_max):
    for k in range(9):
        for n in range(9):
            yield {"k": k, "n": n}


@_register("lemma6.iii", "(zD-k)_n closed form", _dom_kn8)
def _chk_lemma6_iii(k, n):
    brute = opcalc.identity_op()
    for i in range(n):
        brute = opcalc.op_compose(brute, opcalc.zD - (k + i) * opcalc.identity_op())
    if brute != opcalc.zD_shifted_falling(k, n):
        return f"composition {brute!r} != closed form"
    return None


def _dom_eq22(v_max):
    for v in range(1, v_max + 1):
        for k in range(min(v, 4) + 1):
            for s in range(k + 1):
                for i in range(s + 1):
                    for t in range(s + 1):
                        yield {"i": i, "s": s, "t": t, "k": k, "v": v}


@_register("eq22", "W_is^T F^t_ik = L_si F^t_sk (product-form operator)", _dom_eq22)
def _chk_eq22(i, s, t, k, v):
    lhs = build(W(i, s, v)).transpose() @ build(F(t, i, k, v))
    # independent route: L_si as the composed product (s-zD)...(i+1-zD)/(s-i)!
    op = opcalc.identity_op()
    for m in range(i + 1, s + 1):
        op = opcalc.op_compose(op, m * opcalc.identity_op() - opcalc.zD)
    op = Fraction(1, factorial(s - i)) * op
    rhs = opcalc.op_apply(op, build(F(t, s, k, v)))
    return _cmp(lhs, rhs)


def _dom_p5(v_max):
    for v in range(1, v_max + 1):
        for s in range(1, v + 1):
            for k in range(v + 1):
                for t in range(_mins(s, k) + 1):
                    yield {"t": t, "s": s, "k": k, "v": v}


@_register("prop5.i", "W_{s-1,s}^T F^t_{s-1,k} = s F^t_sk - z D F^t_sk", _dom_p5)
def _chk_prop5_i(t, s, k, v):
    lhs = build(W(s - 1, s, v)).transpose() @ build(F(t, s - 1, k, v))
    fm = build(F(t, s, k, v))
    rhs = opcalc.op_apply(s * opcalc.identity_op() - opcalc.zD, fm)
    return _cmp(lhs, rhs)


def _dom_p5p(v_max):
    for v in range(1, v_max + 1):
        for s in range(v + 1):
            for k in range(1, v + 1):
                for t in range(_mins(s, k) + 1):
                    yield {"t": t, "s": s, "k": k, "v": v}


@_register("prop5.ip", "F^t_{s,k-1} W_{k-1,k} = k F^t_sk - z D F^t_sk", _dom_p5p)
def _chk_prop5_ip(t, s, k, v):
    lhs = build(F(t, s, k - 1, v)) @ build(W(k - 1, k, v))
    fm = build(F(t, s, k, v))
    rhs = opcalc.op_apply(k * opcalc.identity_op() - opcalc.zD, fm)
    return _cmp(lhs, rhs)


def _dom_sk1(v_max):
    for v in range(1, v_max + 1):
        for s in range(1, v + 1):
            for k in range(v + 1):
                yield {"s": s, "k": k, "v": v}


@_register("prop5.ii", "W_{s-1,s}^T F_{s-1,k} = s F_sk - z D F_sk", _dom_sk1)
def _chk_prop5_ii(s, k, v):
    lhs = build(W(s - 1, s, v)).transpose() @ build(F(None, s - 1, k, v))
    fm = build(F(None, s, k, v))
    rhs = opcalc.op_apply(s * opcalc.identity_op() - opcalc.zD, fm)
    return _cmp(lhs, rhs)


def _dom_sk2(v_max):
    for v in range(1, v_max + 1):
        for s in range(v + 1):
            for k in range(1, v + 1):
                yield {"s": s, "k": k, "v": v}


@_register("prop5.iip", "F_{s,k-1} W_{k-1,k} = k F_sk - z D F_sk", _dom_sk2)
def _chk_prop5_iip(s, k, v):
    lhs = build(F(None, s, k - 1, v)) @ build(W(k - 1, k, v))
    fm = build(F(None, s, k, v))
    rhs = opcalc.op_apply(k * opcalc.identity_op() - opcalc.zD, fm)
    return _cmp(lhs, rhs)


def _dom_p5iii(v_max):
    for v in range(1, v_max + 1):
        for s in range(1, v + 1):
            for k in range(v + 1):
                for t in range(_mins(s, k) + 1):
                    for l in range(t + 1):
                        yield {"t": t, "l": l, "s": s, "k": k, "v": v}


@_register("prop5.iii",
           "W_{s-1,s}^T U^{t,l}_{s-1,k} = (s-l) U^{t,l}_sk + (l+1) U^{t,l+1}_sk",
           _dom_p5iii)
def _chk_prop5_iii(t, l, s, k, v):
    lhs = build(W(s - 1, s, v)).transpose() @ build(Utl(t, l, s - 1, k, v))
    rhs = _lincomb(((s - l, build(Utl(t, l, s, k, v))),
                    (l + 1, build(Utl(t, l + 1, s, k, v)))),
                   (binomial(v, s), binomial(v, k)))
    return _cmp(lhs, rhs)


def _dom_p5iiip(v_max):
    for v in range(1, v_max + 1):
        for s in range(v + 1):
            for k in range(1, v + 1):
                for t in range(_mins(s, k) + 1):
                    for l in range(t + 1):
                        yield {"t": t, "l": l, "s": s, "k": k, "v": v}


@_register("prop5.iiip",
           "U^{t,l}_{s,k-1} W_{k-1,k} = (k-l) U^{t,l}_sk + (l+1) U^{t,l+1}_sk",
           _dom_p5iiip)
def _chk_prop5_iiip(t, l, s, k, v):
    lhs = build(Utl(t, l, s, k - 1, v)) @ build(W(k - 1, k, v))
    rhs = _lincomb(((k - l, build(Utl(t, l, s, k, v))),
                    (l + 1, build(Utl(t, l + 1, s, k, v)))),
                   (binomial(v, s), binomial(v, k)))
    return _cmp(lhs, rhs)


def _dom_p5iv(v_max):
    for v in range(1, v_max + 1):
        for s in range(1, v + 1):
            for k in range(v + 1):
                for l in range(_mins(s, k) + 1):
                    yield {"l": l, "s": s, "k": k, "v": v}


@_register("prop5.iv",
           "W_{s-1,s}^T U^l_{s-1,k} = (s-l) U^l_sk + (l+1) U^{l+1}_sk", _dom_p5iv)
def _chk_prop5_iv(l, s, k, v):
    lhs = build(W(s - 1, s, v)).transpose() @ build(U(l, s - 1, k, v))
    rhs = _lincomb(((s - l, build(U(l, s, k, v))),
                    (l + 1, build(U(l + 1, s, k, v)))),
                   (binomial(v, s), binomial(v, k)))
    return _cmp(lhs, rhs)


def _dom_p5ivp(v_max):
    for v in range(1, v_max + 1):
        for s in range(v + 1):
            for k in range(1, v + 1):
                for l in range(_mins(s, k) + 1):
                    yield {"l": l, "s": s, "k": k, "v": v}


@_register("prop5.ivp",
           "U^l_{s,k-1} W_{k-1,k} = (k-l) U^l_sk + (l+1) U^{l+1}_sk", _dom_p5ivp)
def _chk_prop5_ivp(l, s, k, v):
    lhs = build(U(l, s, k - 1, v)) @ build(W(k - 1, k, v))
    rhs = _lincomb(((k - l, build(U(l, s, k, v))),
                    (l + 1, build(U(l + 1, s, k, v)))),
                   (binomial(v, s), binomial(v, k)))
    return _cmp(lhs, rhs)


@_register("prop7.i", "W_is^T F^t_ik = L(s,i) F^t_sk, plus the transposed twin",
           _dom_eq22,
           note="the right-multiplication twin is checked by transposition")
def _chk_prop7_i(i, s, t, k, v):
    lhs = build(W(i, s, v)).transpose() @ build(F(t, i, k, v))
    rhs = opcalc.op_apply(opcalc.L(s, i), build(F(t, s, k, v)))
    bad = _cmp(lhs, rhs)
    if bad:
        return bad
    # transposed right-multiplication analog
    lhs_t = build(F(t, k, i, v)) @ build(W(i, s, v))
    rhs_t = opcalc.op_apply(opcalc.L(s, i), build(F(t, k, s, v)))
    bad = _cmp(lhs_t, rhs_t)
    return ("transposed twin: " + bad) if bad else None


def _dom_p7ii(v_max):
    for v in range(1, v_max + 1):
        for k in range(min(v, 4) + 1):
            for s in range(k + 1):
                for i in range(s + 1):
                    for t in range(_mins(s, k) + 1):
                        for l in range(t + 1):
                            yield {"i": i, "l": l, "t": t, "s": s, "k": k, "v": v}


@_register("prop7.ii", "W_is^T U^{tl}_ik = sum_h C(h,l) C(s-h,i-l) U^{th}_sk",
           _dom_p7ii)
def _chk_prop7_ii(i, l, t, s, k, v):
    lhs = build(W(i, s, v)).transpose() @ build(Utl(t, l, i, k, v))
    rhs = _lincomb(((binomial(h, l) * binomial(s - h, i - l),
                     build(Utl(t, h, s, k, v)))
                    for h in range(l, l + s - i + 1)),
                   (binomial(v, s), binomial(v, k)))
    return _cmp(lhs, rhs)


def _dom_p7iip(v_max):
    for v in range(1, v_max + 1):
        for k in range(min(v, 4) + 1):
            for s in range(k + 1):
                for i in range(s + 1):
                    for l in range(_mins(i, k) + 1):
                        yield {"i": i, "l": l, "s": s, "k": k, "v": v}


@_register("prop7.iip", "W_is^T U^l_ik = sum_h C(h,l) C(s-h,i-l) U^h_sk",
           _dom_p7iip)
def _chk_prop7_iip(i, l, s, k, v):
    lhs = build(W(i, s, v)).transpose() @ build(U(l, i, k, v))
    rhs = _lincomb(((binomial(h, l) * binomial(s - h, i - l), build(U(h, s, k, v)))
                    for h in range(l, s + 1)),
                   (binomial(v, s), binomial(v, k)))
    return _cmp(lhs, rhs)


# ---------------------------------------------------------------------------
# products W F (left multiplication by an inclusion matrix)

def _dom_prop8(v_max):
    for v in range(1, v_max + 1):
        for k in range(min(v, 4) + 1):
            for j in range(k + 1):
                for s in range(j + 1):
                    yield {"s": s, "j": j, "k": k, "v": v}


@_register("eq23", "W_sj F_jk as a (z+1)-conjugated operator expression", _dom_prop8)
def _chk_eq23(s, j, k, v):
    lhs = build(W(s, j, v)) @ build(F(None, j, k, v))
    g = _scale_zp1(build(F(None, s, k, v)), v - s - k)
    acc = ExactMatrix.zeros(binomial(v, s), binomial(v, k))
    for r in range(j - s + 1):
        coef = Fraction((-1) ** r * binomial(v - s - r, v - j), factorial(r))
        term = opcalc.op_apply(opcalc.OperatorExpr({r: coef}), g)
        acc = acc + term
    rhs = _scale_zp1(acc, j + k - v)
    return _cmp(lhs, rhs)


def a_pl(p: int, l: int, s: int, j: int, k: int, v: int) -> int:
    """Coefficient a_{p,l} of the W_sj F_jk expansion (validated variant).

    The alternating (-1)^r inside the sum is required for the eq24 expansion
    to hold; the unsigned variant fails already at (v,s,j,k) = (3,0,1,1).
    """
    return sum((-1) ** r * binomial(r, l) * binomial(v - s - r, v - j)
               * binomial(v - s - k, r - p) for r in range(j - s + 1))


@_register("eq24", "W_sj F_jk = sum_p (z+1)^p D^p F_sk / p! * sum_l ...",
           _dom_prop8,
           note="a_{p,l} carries (-1)^r inside the r-sum (validated variant)")
def _chk_eq24(s, j, k, v):
    lhs = build(W(s, j, v)) @ build(F(None, j, k, v))
    fsk = build(F(None, s, k, v))
    n = j - s
    acc = ExactMatrix.zeros(binomial(v, s), binomial(v, k))
    for p in range(n + 1):
        outer = Poly()
        for l in range(n + 1):
            outer = outer + _zp1(n - l) * ((-1) ** l * a_pl(p, l, s, j, k, v))
        dmat = fsk
        for _ in range(p):
            dmat = dmat.map_entries(lambda e: Poly._lift(e).derive())
        part = dmat.scale(_zp1(p) * outer).scale(Fraction(1, factorial(p)))
        acc = acc + part
    return _cmp(lhs, acc)


@_register("eq25", "a_{p,l}: terms with r < p vanish", _dom_prop8,
           note="C(v-s-k, r-p) = 0 for r < p by the extended convention")
def _chk_eq25(s, j, k, v):
    n = j - s
    for p in range(n + 1):
        for l in range(n + 1):
            head = sum((-1) ** r * binomial(r, l) * binomial(v - s - r, v - j)
                       * binomial(v - s - k, r - p) for r in range(p))
            if head != 0:
                return f"r < p terms sum to {head} at (p,l)=({p},{l})"
            tail = sum((-1) ** r * binomial(r, l) * binomial(v - s - r, v - j)
                       * binomial(v - s - k, r - p) for r in range(p, n + 1))
            if a_pl(p, l, s, j, k, v) != tail:
                return f"full sum differs from r >= p sum at (p,l)=({p},{l})"
    return None


# ---------------------------------------------------------------------------
# factoring through W_tk

def _dom_eq26(v_max):
    for v in range(1, v_max + 1):
        for k in range(v + 1):
            for t in range(k + 1):
                for s in range(v + 1):
                    yield {"s": s, "t": t, "k": k, "v": v}


@_register("eq26", "F^t_sk = X^k_st W_tk", _dom_eq26)
def _chk_eq26(s, t, k, v):
    lhs = build(F(t, s, k, v))
    rhs = build(X(s, t, k, v)) @ build(W(t, k, v))
    return _cmp(lhs, rhs)


def _dom_xi(v_max):
    hi = max(8, min(v_max + 2, 10))
    for k in range(hi + 1):
        for t in range(k + 1):
            for theta in range(t + 1):
                yield {"theta": theta, "t": t, "k": k}


@_register("eq27", "xi^{k+1}_{theta+1,t+1} = xi^{k+1}_{theta,t+1} + z xi^k_{theta,t}",
           _dom_xi)
def _chk_eq27(theta, t, k):
    lhs = xi(theta + 1, t + 1, k + 1)
    rhs = xi(theta, t + 1, k + 1) + Poly((0, 1)) * xi(theta, t, k)
    return _cmp_poly(lhs, rhs, f"xi recursion at {(theta, t, k)}")


@_register("eq28", "D xi^{k+1}_{theta+1,t+1} = (theta+1) xi^k_{theta,t}", _dom_xi,
           note="the derivative carries theta+1 (validated; matches psi's recursion)")
def _chk_eq28(theta, t, k):
    lhs = xi(theta + 1, t + 1, k + 1).derive()
    rhs = xi(theta, t, k) * (theta + 1)
    return _cmp_poly(lhs, rhs, f"xi derivative at {(theta, t, k)}")


@_register("eq29", "xi^k_{theta,t}(-1) closed form incl. the (0,0) convention",
           _dom_xi)
def _chk_eq29(theta, t, k):
    direct = xi(theta, t, k).eval(-1)
    closed = xi_at_minus1(theta, t, k)
    if direct != closed:
        return f"xi({theta},{t},{k})(-1): defining sum {direct} != closed form {closed}"
    return None


def _dom_eq30(v_max):
    for v in range(1, v_max + 1):
        for k in range(v + 1):
            for t in range(k + 1):
                for s in range(v + 1):
                    for l in range(t + 1):
                        yield {"s": s, "t": t, "k": k, "l": l, "v": v}


@_register("eq30", "U^{tl}_sk = Y^{kl}_st W_tk", _dom_eq30,
           note="Y numerator (k-t) validated; the (k-l) variant fails the grid")
def _chk_eq30(s, t, k, l, v):
    lhs = build(Utl(t, l, s, k, v))
    rhs = build(Y(s, t, k, l, v)) @ build(W(t, k, v))
    return _cmp(lhs, rhs)


# ---------------------------------------------------------------------------
# block decompositions

def _dom_blocks_tl(v_max):
    for v in range(1, v_max + 1):
        for s in range(1, v + 1):
            for k in range(1, v + 1):
                for t in range(_mins(s, k) + 1):
                    yield {"t": t, "s": s, "k": k, "v": v}


def _dom_blocks_tll(v_max):
    for v in range(1, v_max + 1):
        for s in range(1, v + 1):
            for k in range(1, v + 1):
                for t in range(_mins(s, k) + 1):
                    for l in range(t + 1):
                        yield {"t": t, "l": l, "s": s, "k": k, "v": v}


def _dom_blocks_sk(v_max):
    for v in range(1, v_max + 1):
        for s in range(1, v + 1):
            for k in range(1, v + 1):
                yield {"s": s, "k": k, "v": v}


def _dom_blocks_l(v_max):
    for v in range(1, v_max + 1):
        for s in range(1, v + 1):
            for k in range(1, v + 1):
                for l in range(_mins(s, k) + 1):
                    yield {"l": l, "s": s, "k": k, "v": v}


def _check_blocks(kind, part):
    actual, expected = block_decompose(kind, part)
    for pos, (got, want) in zip(("TL", "TR", "BL", "BR"), zip(actual, expected)):
        bad = _cmp(got, want)
        if bad:
            return f"{pos} block: {bad}"
    return None


@_register("blocks.i", "recursive structure of F^t_sk(v)", _dom_blocks_tl)
def _chk_blocks_i(t, s, k, v):
    return _check_blocks(F(t, s, k, v), "i")


@_register("blocks.ii", "recursive structure of F_sk(v)", _dom_blocks_sk)
def _chk_blocks_ii(s, k, v):
    return _check_blocks(F(None, s, k, v), "ii")


@_register("blocks.iii", "recursive structure of U^{t,l}_sk(v)", _dom_blocks_tll)
def _chk_blocks_iii(t, l, s, k, v):
    return _check_blocks(Utl(t, l, s, k, v), "iii")


@_register("blocks.iv", "recursive structure of U^l_sk(v)", _dom_blocks_l)
def _chk_blocks_iv(l, s, k, v):
    return _check_blocks(U(l, s, k, v), "iv")


@_register("blocks.v", "recursive structure of N^t_sk(v)", _dom_blocks_tl)
def _chk_blocks_v(t, s, k, v):
    return _check_blocks(N(t, s, k, v), "v")


@_register("blocks.vi", "recursive structure of A^t_sk(v)", _dom_blocks_tl)
def _chk_blocks_vi(t, s, k, v):
    return _check_blocks(A(t, s, k, v), "vi")


# ---------------------------------------------------------------------------
# scheme relations

@_register("sec7.remark", "(U^t_sk)^T = U^t_ks and sum_l U^{tl}_sk = J", _dom_tsk)
def _chk_sec7_remark(t, s, k, v):
    bad = _cmp(build(U(t, s, k, v)).transpose(), build(U(t, k, s, v)))
    if bad:
        return "transpose: " + bad
    total = _lincomb(((1, build(Utl(t, l, s, k, v))) for l in range(t + 1)),
                     (binomial(v, s), binomial(v, k)))
    bad = _cmp(total, ExactMatrix.ones(binomial(v, s), binomial(v, k)))
    return ("row sum: " + bad) if bad else None


def _dom_eq31(v_max):
    for v in range(1, v_max + 1):
        for s in range(v + 1):
            for k in range(v + 1):
                for l in range(1, s + 1):
                    yield {"l": l, "s": s, "k": k, "v": v}


@_register("eq31", "U^{>=l}_sk = sum_i (-1)^(i-l) C(i-1,l-1) A^i_sk (l >= 1)",
           _dom_eq31)
def _chk_eq31(l, s, k, v):
    rhs = _lincomb((((-1) ** (i - l) * binomial(i - 1, l - 1), build(A(i, s, k, v)))
                    for i in range(l, s + 1)),
                   (binomial(v, s), binomial(v, k)))
    return _cmp(build(Uge(l, s, k, v)), rhs)


def _dom_prop11(v_max):
    for v in range(1, v_max + 1):
        for k in range(v + 1):
            for i in range(k + 1):
                for j in range(k + 1):
                    yield {"i": i, "j": j, "k": k, "v": v}


@_register("prop11", "r and p intersection numbers of J(v,k)", _dom_prop11)
def _chk_prop11(i, j, k, v):
    shape = (binomial(v, k), binomial(v, k))
    lhs = build(A(i, k, k, v)) @ build(A(j, k, k, v))
    rhs = _lincomb(((intersection_r(v, k, i, j, l), build(A(l, k, k, v)))
                    for l in range(k + 1)), shape)
    bad = _cmp(lhs, rhs)
    if bad:
        return "A-basis (r numbers): " + bad
    lhs = build(U(i, k, k, v)) @ build(U(j, k, k, v))
    rhs = _lincomb(((intersection_p(v, k, i, j, l), build(U(l, k, k, v)))
                    for l in range(k + 1)), shape)
    bad = _cmp(lhs, rhs)
    return ("U-basis (p numbers): " + bad) if bad else None


# ---------------------------------------------------------------------------
# runner

EXPECTED_REGISTRY_KEYS = frozenset({
    "eq1", "eq2", "eq3", "eq4", "eq5", "eq6", "eq12", "eq15", "eq16",
    "thm2.i", "thm2.ii", "thm2.iii",
    "lemma3.i", "lemma3.ii", "lemma3.iii", "lemma3.iv", "lemma3.v",
    "eq17", "eq18", "eq19", "eq20",
    "eq21",
    "lemma6.i", "lemma6.ii", "lemma6.iii",
    "eq22",
    "prop5.i", "prop5.ip", "prop5.ii", "prop5.iip",
    "prop5.iii", "prop5.iiip", "prop5.iv", "prop5.ivp",
    "prop7.i", "prop7.ii", "prop7.iip",
    "eq23", "eq24", "eq25",
    "eq26", "eq27", "eq28", "eq29", "eq30",
    "blocks.i", "blocks.ii", "blocks.iii", "blocks.iv", "blocks.v", "blocks.vi",
    "sec7.remark", "eq31", "prop11",
})


def run_identity(name: str, **params) -> CheckResult:
    """Run one registered identity at one parameter tuple."""
    if name not in REGISTRY:
        raise KeyError(f"unknown identity {name!r}")
    return REGISTRY[name].run(**params)


@dataclass
class SuiteReport:
    v_max: int
    pattern: str
    elapsed: float = 0.0
    cases: dict[str, int] = field(default_factory=dict)
    failures: list[CheckResult] = field(default_factory=list)
    notes: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def total_cases(self) -> int:
        return sum(self.cases.values())

    def to_text(self) -> str:
        lines = [f"identity suite: v <= {self.v_max}, filter {self.pattern!r}"]
        for name in sorted(self.cases):
            nfail = sum(1 for f in self.failures if f.name == name)
            status = "ok" if nfail == 0 else f"{nfail} FAILED"
            line = f"  {name:<12} {self.cases[name]:>6} cases  {status}"
            if name in self.notes:
                line += f"  [{self.notes[name]}]"
            lines.append(line)
        for f in self.failures[:20]:
            lines.append(f"  FAIL {f.name} {f.params}: {f.detail}")
        lines.append(f"total: {self.total_cases} cases, "
                     f"{len(self.failures)} failures, {self.elapsed:.1f}s")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "v_max": self.v_max, "pattern": self.pattern, "ok": self.ok,
            "elapsed_seconds": round(self.elapsed, 3),
            "cases": dict(sorted(self.cases.items())),
            "notes": self.notes,
            "failures": [{"name": f.name, "params": f.params, "detail": f.detail}
                         for f in self.failures],
        }


def run_suite(v_max: int = 8, pattern: str = "all",
              progress: Callable[[str, int], None] | None = None) -> SuiteReport:
    """Run every matching identity over its full parameter grid with v <= v_max."""
    if v_max < 2:
        raise ValueError("v_max must be >= 2")
    pat = "*" if pattern in ("all", "") else pattern
    names = [n for n in sorted(REGISTRY) if fnmatch(n, pat)]
    if not names:
        raise KeyError(f"no identities match {pattern!r}")
    report = SuiteReport(v_max, pattern)
    start = time.monotonic()
    for name in names:
        check = REGISTRY[name]
        count = 0
        for params in check.domain(v_max):
            result = check.run(**params)
            count += 1
            if not result.ok:
                report.failures.append(result)
        report.cases[name] = count
        if check.note:
            report.notes[name] = check.note
        if progress is not None:
            progress(name, count)
    report.elapsed = time.monotonic() - start
    return report
