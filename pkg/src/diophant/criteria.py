"""Growth-sequence calculus and hypothesis harnesses for the two independence criteria."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import mpmath
import numpy as np

from .derivations import VarietyPresentation, sup_log_derivative
from .errors import (BadInput, NonPositive, NoWindow, PointInSupport, PointOffVariety,
                     TooFewSamples)
from .heights import component_height
from .metric import cycle_distance
from .points import EffectiveCycle, ProjectivePoint
from .polycore import HomogeneousPolynomial, log_l2_norm

MIN_SAMPLES = 16
DIVERGENCE_FACTOR = 1e3

HOLD = "hypotheses-hold"
FAILED = "hypothesis-failed"
INCONCLUSIVE = "inconclusive"


# ---------------------------------------------------------------------------
# growth exponents


@dataclass(frozen=True)
class GrowthEstimate:
    value: float
    spread: float

    def to_json(self) -> dict:
        return {"value": self.value, "spread": self.spread}


def _as_array(f_samples) -> np.ndarray:
    arr = np.asarray(f_samples, dtype=float)
    if arr.ndim != 1 or len(arr) < MIN_SAMPLES:
        raise TooFewSamples(f"need at least {MIN_SAMPLES} samples")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise NonPositive("growth sequences must be finite and positive")
    return arr


def _window_slope(logf: np.ndarray, lo: int, hi: int) -> float:
    # k runs from 1, so position i holds f(i + 1)
    return (logf[hi] - logf[lo]) / (math.log(hi + 1) - math.log(lo + 1))


def growth_exponent(f_samples) -> GrowthEstimate:
    """Estimate n_f = lim k (f(k+1) - f(k)) / f(k) from f(1), f(2), ...

    Sums of log(f(k+1)/f(k)) over a window divided by the matching sums of
    log((k+1)/k) average the discrete ratio with weights 1/k and behave well
    on integer-valued step sequences. The windows are the last three
    octaves [n/8, n/4], [n/4, n/2], [n/2, n]; the estimate is the last one
    and the spread is its total drift to the two earlier ones, which bounds
    the remaining bias for corrections decaying like k^(-1/2) or faster.
    Integer-valued sequences add one step of rounding at each endpoint.
    """
    arr = _as_array(f_samples)
    logf = np.log(arr)
    n = len(arr)
    cuts = [max(n // 8, 1) - 1, max(n // 4, 2) - 1, max(n // 2, 3) - 1, n - 1]
    slopes = [_window_slope(logf, cuts[j], cuts[j + 1]) for j in range(3)]
    est = slopes[2]
    spread = abs(est - slopes[0]) + abs(est - slopes[1]) + 1e-9
    if np.all(arr == np.round(arr)):
        # staircase sequences: each endpoint may sit a full step off the curve
        lo, hi = cuts[2], cuts[3]
        spread += (1 / arr[lo] + 1 / arr[hi]) / (math.log(hi + 1) - math.log(lo + 1))
    return GrowthEstimate(float(est), float(spread))


def inverse_sequence(f: Sequence[float], length: int) -> np.ndarray:
    """f^{-1}(n) = inf{k : f(k) >= n} for n = 1..length (f increasing)."""
    arr = np.maximum.accumulate(np.asarray(f, dtype=float))
    n = np.arange(1, length + 1, dtype=float)
    idx = np.searchsorted(arr, n, side="left")
    if idx[-1] >= len(arr):
        raise TooFewSamples("f does not reach the requested range")
    return (idx + 1).astype(float)


@dataclass(frozen=True)
class RuleCheck:
    rule: str
    estimate: float
    predicted: float
    tolerance: float
    ok: bool

    def to_json(self) -> dict:
        return {"rule": self.rule, "estimate": self.estimate, "predicted": self.predicted,
                "tolerance": self.tolerance, "ok": self.ok}


def _rule(name, est: GrowthEstimate, predicted: float, spread: float) -> RuleCheck:
    tol = 2.0 * (est.spread + spread)
    return RuleCheck(name, est.value, predicted, tol, abs(est.value - predicted) <= tol)


def doubling_holds(f: np.ndarray, n: int = 1) -> bool:
    """f(k + n) <= 2 f(k) on the tail half."""
    tail = f[len(f) // 2:]
    return bool(np.all(tail[n:] <= 2 * tail[:-n]))


def check_growth_calculus(pairs: Sequence[tuple[Callable, Callable]], length: int = 10_000) -> dict:
    """Check the closure rules for sums, products, quotients, composition and inverses.

    Each pair holds two vectorized callables on k = 1..length with positive
    values; composition evaluates f at g(k), the inverse rule uses f alone
    and needs n_f > 0.
    """
    k = np.arange(1, length + 1, dtype=float)
    results = []
    all_ok = True
    for f, g in pairs:
        fv, gv = np.asarray(f(k), float), np.asarray(g(k), float)
        nf, ng = growth_exponent(fv), growth_exponent(gv)
        checks = [
            _rule("sum", growth_exponent(fv + gv), max(nf.value, ng.value), max(nf.spread, ng.spread)),
            _rule("product", growth_exponent(fv * gv), nf.value + ng.value, nf.spread + ng.spread),
            _rule("quotient", growth_exponent(fv / gv), nf.value - ng.value, nf.spread + ng.spread),
            _rule("reciprocal", growth_exponent(1.0 / fv), -nf.value, nf.spread),
        ]
        comp = growth_exponent(np.asarray(f(gv), float))
        checks.append(_rule("composition", comp, nf.value * ng.value,
                            abs(nf.value) * ng.spread + abs(ng.value) * nf.spread))
        if nf.value > nf.spread:
            # enough of f to invert over 1..length, then the inverse rule
            top = int(min(fv[-1], length))
            if top >= MIN_SAMPLES:
                inv = growth_exponent(inverse_sequence(fv, top))
                checks.append(_rule("inverse", inv, 1.0 / nf.value, nf.spread / nf.value ** 2))
        order_ok = True
        if np.all(fv[length // 2:] >= gv[length // 2:]):
            order_ok = nf.value >= ng.value - 2 * (nf.spread + ng.spread)
        doubling = doubling_holds(fv) and doubling_holds(gv)
        ok = all(c.ok for c in checks) and order_ok and doubling
        all_ok &= ok
        results.append({"n_f": nf.to_json(), "n_g": ng.to_json(),
                        "checks": [c.to_json() for c in checks],
                        "order_consistent": order_ok, "doubling": doubling, "ok": ok})
    return {"pairs": results, "ok": all_ok}


# ---------------------------------------------------------------------------
# quadruples


@dataclass(frozen=True)
class GrowthQuadruple:
    """(D_k, S_k, H_k, V_k) for k = 1, 2, ...

    S_k may be 0: a zero derivative order is what single linear forms
    support, and with s = 0 it never enters the limit.
    """

    D: tuple
    S: tuple
    H: tuple
    V: tuple

    def __post_init__(self):
        seqs = {}
        for name in "DSHV":
            vals = tuple(float(v) for v in getattr(self, name))
            if len(vals) < MIN_SAMPLES:
                raise TooFewSamples(f"{name} has fewer than {MIN_SAMPLES} entries")
            if not all(math.isfinite(v) for v in vals):
                raise BadInput(f"{name} has non-finite entries")
            seqs[name] = vals
        if len({len(v) for v in seqs.values()}) != 1:
            raise BadInput("sequences have different lengths")
        for name in "DHV":
            if min(seqs[name]) <= 0:
                raise NonPositive(f"{name} must be strictly positive")
        if min(seqs["S"]) < 0:
            raise NonPositive("S must be nonnegative")
        for name in "DS":
            if any(v != int(v) for v in seqs[name]):
                raise BadInput(f"{name} must be integer-valued")
            seqs[name] = tuple(int(v) for v in seqs[name])
        if any(s > d for s, d in zip(seqs["S"], seqs["D"])):
            raise BadInput("S_k must not exceed D_k")
        for name, v in seqs.items():
            object.__setattr__(self, name, v)

    def __len__(self):
        return len(self.D)

    def at(self, k: int):
        """(D_k, S_k, H_k, V_k) with k counted from 1."""
        i = k - 1
        if not 0 <= i < len(self.D):
            raise BadInput(f"k = {k} outside the prefix")
        return self.D[i], self.S[i], self.H[i], self.V[i]

    @classmethod
    def from_functions(cls, D, S, H, V, length: int) -> "GrowthQuadruple":
        ks = range(1, length + 1)
        return cls(tuple(D(k) for k in ks), tuple(S(k) for k in ks),
                   tuple(H(k) for k in ks), tuple(V(k) for k in ks))

    def to_json(self) -> dict:
        return {"D": list(self.D), "S": list(self.S), "H": list(self.H), "V": list(self.V)}

    @classmethod
    def from_json(cls, obj) -> "GrowthQuadruple":
        try:
            return cls(tuple(obj["D"]), tuple(obj["S"]), tuple(obj["H"]), tuple(obj["V"]))
        except (KeyError, TypeError) as exc:
            raise BadInput(f"malformed quadruple: {exc}") from exc


def _strictly_increasing(v: np.ndarray) -> bool:
    return bool(np.all(np.diff(v) > 0))


def check_regular_growth(q: GrowthQuadruple, ratio_threshold: float = 2.0) -> tuple[bool, dict]:
    """Regular polynomial growth, evaluated on the tail k >= len/4."""
    D, S, H = (np.asarray(x, float) for x in (q.D, q.S, q.H))
    tail = slice(len(D) // 4, None)
    reasons = []
    if np.any(S[tail] <= 0):
        reasons.append("S must be positive")
        return False, {"ok": False, "reasons": reasons}
    if not np.all(S[tail] <= D[tail] / 3):
        reasons.append("S_k <= D_k/3 fails")
    ds, hs, hd = D[tail] / S[tail], H[tail] / S[tail], H[tail] / D[tail]
    for name, v in (("D/S", ds), ("H/S", hs)):
        if not _strictly_increasing(v):
            reasons.append(f"{name} not increasing")
        if v[-1] / v[0] <= ratio_threshold:
            reasons.append(f"{name} looks bounded")
    n_ds = growth_exponent(D / S) if np.all(S > 0) else growth_exponent(ds)
    if n_ds.value - n_ds.spread <= 0:
        reasons.append("n_{D/S} not positive")
    n_hd = growth_exponent(H / D)
    c_witness = float(hd.min())
    if n_hd.value + n_hd.spread < 0 or c_witness <= 0:
        reasons.append("H/D tends to 0")
    ok = not reasons
    return ok, {"ok": ok, "reasons": reasons, "n_D_over_S": n_ds.to_json(),
                "n_H_over_D": n_hd.to_json(), "c_witness": c_witness}


def criterion_values(q: GrowthQuadruple, s: int) -> np.ndarray:
    D, S, H, V = (np.asarray(x, float) for x in (q.D, q.S, q.H, q.V))
    Ss = np.ones_like(S) if s == 0 else S ** s
    return Ss * V / (D ** s * (D + H))


def criterion_limit(q: GrowthQuadruple, s: int, factor: float = DIVERGENCE_FACTOR,
                    strict: bool = False) -> dict:
    """Values S^s V / (D^s (D + H)) and the finite-prefix divergence proxy.

    Diverges when the tail half is monotone increasing and the last value
    exceeds factor times the first one. strict asks for a strictly
    increasing tail, the proxy used for a genuine limit.
    """
    if s < 0:
        raise BadInput("s must be nonnegative")
    vals = criterion_values(q, s)
    tail = vals[len(vals) // 2:]
    diffs = np.diff(tail)
    monotone = bool(np.all(diffs > 0)) if strict else bool(np.all(diffs >= 0))
    ratio = float(vals[-1] / vals[0])
    return {"values": [float(v) for v in vals], "monotone_tail": monotone,
            "growth_ratio": ratio, "factor": factor, "diverges": monotone and ratio > factor}


# ---------------------------------------------------------------------------
# instances and harnesses


@dataclass
class CriterionInstance:
    quadruple: GrowthQuadruple
    theta: ProjectivePoint
    X: VarietyPresentation
    families: Mapping[int, list]
    g: HomogeneousPolynomial
    s: int
    strict: bool = True
    flip_ball_sign: bool = False
    candidates: list = field(default_factory=list)

    def __post_init__(self):
        if self.s < 0:
            raise BadInput("s must be nonnegative")
        if self.g.degree != 1:
            raise BadInput("g must be a linear form")
        self.families = {int(k): list(v) for k, v in self.families.items()}
        for k, fam in self.families.items():
            D_k = self.quadruple.at(k)[0]
            for f in fam:
                if f.num_vars != self.X.num_vars:
                    raise BadInput("family member lives on the wrong space")
                if self.strict and f.degree > D_k:
                    raise BadInput(f"deg f = {f.degree} exceeds D_{k} = {D_k}")
        if not self.X.contains(self.theta):
            raise PointOffVariety("theta is not on X")

    def to_json(self) -> dict:
        return {"quadruple": self.quadruple.to_json(), "theta": self.theta.to_json(),
                "X": self.X.to_json(), "g": self.g.to_json(), "s": self.s,
                "families": {str(k): [f.to_json() for f in v] for k, v in sorted(self.families.items())},
                "flip_ball_sign": self.flip_ball_sign,
                "candidates": [c.to_json() for c in self.candidates]}

    @classmethod
    def from_json(cls, obj, strict: bool = True) -> "CriterionInstance":
        try:
            return cls(GrowthQuadruple.from_json(obj["quadruple"]),
                       ProjectivePoint.from_json(obj["theta"]),
                       VarietyPresentation.from_json(obj["X"]),
                       {int(k): [HomogeneousPolynomial.from_json(f) for f in v]
                        for k, v in obj["families"].items()},
                       HomogeneousPolynomial.from_json(obj["g"]), int(obj["s"]), strict,
                       bool(obj.get("flip_ball_sign", False)),
                       [ProjectivePoint.from_json(c) for c in obj.get("candidates", [])])
        except (KeyError, TypeError) as exc:
            raise BadInput(f"malformed criterion instance: {exc}") from exc


@dataclass
class KCheck:
    k: int
    degree_ok: bool
    norm_ok: bool
    derivative_ok: bool
    ball_ok: bool
    extra_ok: bool = True
    norm_margin: float = math.inf
    derivative_margin: float = math.inf
    ball_method: str = ""
    notes: list = field(default_factory=list)

    def failure(self) -> str | None:
        for name, ok in (("degree", self.degree_ok), ("norm", self.norm_ok),
                         ("derivative-bound", self.derivative_ok),
                         ("common-zero", self.ball_ok), ("restriction", self.extra_ok)):
            if not ok:
                return name
        return None

    def to_json(self) -> dict:
        return {"k": self.k, "degree_ok": self.degree_ok, "norm_ok": self.norm_ok,
                "derivative_ok": self.derivative_ok, "ball_ok": self.ball_ok,
                "restriction_ok": self.extra_ok, "norm_margin": _finite(self.norm_margin),
                "derivative_margin": _finite(self.derivative_margin),
                "ball_method": self.ball_method, "notes": list(self.notes)}


def _finite(x):
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass
class HarnessReport:
    checks: list
    limit: dict
    verdict: str
    failed_k: int | None = None
    failed_reason: str | None = None
    asserted_bound: str | None = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "failed_k": self.failed_k, "reason": self.failed_reason,
                "asserted_bound": self.asserted_bound, "limit": self.limit,
                "checks": [c.to_json() for c in self.checks], "notes": list(self.notes)}


def _ball_radius_log(inst: CriterionInstance, k: int) -> float:
    """log of the radius of the near-theta ball at step k (-inf for a point)."""
    if k <= 1:
        return -math.inf
    _, S_prev, _, V_prev = inst.quadruple.at(k - 1)
    if S_prev == 0:
        return -math.inf
    r = V_prev / S_prev
    return r if inst.flip_ball_sign else -r


def _common_zero_in_ball(fam, inst: CriterionInstance, log_r: float, rng, samples: int):
    """(no common near-zero found, method)."""
    theta = inst.theta
    prec = theta.precision_bits
    if inst.X.num_vars == 2:
        # on P^1 the common zeros are the roots of the gcd: exact test
        import sympy

        x0, x1 = sympy.symbols("x0 x1")
        gcd = fam[0].to_sympy()
        for f in fam[1:]:
            gcd = sympy.gcd(gcd, f.to_sympy())
        gp = sympy.Poly(gcd, x0, x1)
        if gp.total_degree() == 0:
            return True, "exact-gcd"
        one = sympy.Poly(gp.as_expr().subs(x0, 1), x1)
        roots = []
        if one.degree() < gp.total_degree():
            roots.append(ProjectivePoint([0, 1], prec))
        if one.degree() > 0:
            coeffs = [int(c) for c in sympy.Poly(one * sympy.ilcm(*[sympy.fraction(c)[1]
                      for c in one.all_coeffs()]), x1).all_coeffs()]
            from .points import poly_roots

            roots += [ProjectivePoint([1, r], prec) for r in poly_roots(coeffs, prec)]
        from .metric import fs_distance

        with mpmath.workprec(prec):
            for r in roots:
                d = fs_distance(r, theta)
                if d == 0 or (log_r > -math.inf and float(mpmath.log(d)) <= log_r) \
                        or d <= mpmath.mpf(2) ** (-prec // 2):
                    return False, "exact-gcd"
        return True, "exact-gcd"
    if log_r == -math.inf:
        # the ball is theta itself
        with mpmath.workprec(prec):
            zero = all(abs(f.evaluate(list(theta.coords))) <= mpmath.mpf(2) ** (-prec // 2)
                       * mpmath.sqrt(sum(abs(c) ** 2 for c in theta.coords)) ** f.degree
                       for f in fam)
        return not zero, "point"
    return _sampled_ball(fam, inst, log_r, rng, samples), "sampled (probabilistic)"


def _sampled_ball(fam, inst, log_r, rng, samples) -> bool:
    from .derivations import sample_points
    from .metric import fs_distance

    theta = inst.theta
    prec = min(theta.precision_bits, 256)
    thr = -prec * math.log(2) / 2
    r = math.exp(log_r)
    if inst.X.rel_dim == inst.X.ambient_dim:
        u = theta.unit()
        n = len(u)
        with mpmath.workprec(prec):
            for _ in range(samples):
                z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
                w = [u[i] + r * rng.random() * complex(z[i]) / float(np.linalg.norm(z)) for i in range(n)]
                x = ProjectivePoint(w, prec)
                if fs_distance(x, theta) > r:
                    continue
                nx = mpmath.sqrt(sum(abs(c) ** 2 for c in w))
                if all(float(mpmath.log(abs(f.evaluate(w)) + mpmath.mpf(10) ** -300))
                       - log_l2_norm(f) - f.degree * float(mpmath.log(nx)) <= thr for f in fam):
                    return False
        return True
    pts = sample_points(inst.X, rng, samples, precision_bits=prec, scale=r)
    with mpmath.workprec(prec):
        for x in pts:
            if fs_distance(x, theta) > r:
                continue
            w = list(x.coords)
            nx = mpmath.sqrt(sum(abs(c) ** 2 for c in w))
            if all(float(mpmath.log(abs(f.evaluate(w)) + mpmath.mpf(10) ** -300))
                   - log_l2_norm(f) - f.degree * float(mpmath.log(nx)) <= thr for f in fam):
                return False
    return True


def _per_k(inst: CriterionInstance, k: int, S_order: int, seed: int, samples: int,
           ball: bool = True) -> KCheck:
    D_k, S_k, H_k, V_k = inst.quadruple.at(k)
    fam = inst.families[k]
    deg_ok = all(f.degree <= D_k for f in fam)
    norm_margin = min(H_k - log_l2_norm(f) for f in fam) if fam else math.inf
    deriv = max((sup_log_derivative(f, inst.X, inst.theta, S_order, inst.g) for f in fam),
                default=-math.inf)
    deriv_margin = -V_k - deriv
    chk = KCheck(k, deg_ok, norm_margin >= 0, deriv_margin >= 0, True,
                 norm_margin=norm_margin, derivative_margin=deriv_margin)
    if ball and fam:
        rng = np.random.default_rng([seed, k])
        chk.ball_ok, chk.ball_method = _common_zero_in_ball(fam, inst, _ball_radius_log(inst, k),
                                                            rng, samples)
    elif not fam:
        chk.ball_ok = False
        chk.notes.append("empty family")
    return chk


def _assemble(checks, limit, s, notes, require_divergence=True) -> HarnessReport:
    for c in checks:
        reason = c.failure()
        if reason:
            return HarnessReport(checks, limit, FAILED, c.k, reason, None, notes)
    if require_divergence and not limit["diverges"]:
        return HarnessReport(checks, limit, INCONCLUSIVE, None, "no divergence", None, notes)
    return HarnessReport(checks, limit, HOLD, None, None, f"t >= {s + 1}", notes)


def check_hypotheses_algind1(inst: CriterionInstance, seed: int = 0, samples: int = 10_000,
                             factor: float = DIVERGENCE_FACTOR) -> HarnessReport:
    """Per-k degree, norm, derivative and common-zero checks plus the limit proxy.

    The k are checked one after the other in increasing order; the report
    names the first failing k and check.
    """
    checks = [_per_k(inst, k, inst.quadruple.at(k)[1], seed, samples)
              for k in sorted(inst.families)]
    limit = criterion_limit(inst.quadruple, inst.s, factor)
    notes = []
    rep = _assemble(checks, limit, inst.s, notes)
    if rep.verdict == HOLD and inst.s + 1 > inst.X.rel_dim:
        rep.notes.append(f"asserted bound exceeds rel_dim {inst.X.rel_dim}")
    return rep


# ---------------------------------------------------------------------------
# section 5 predicate


@dataclass(frozen=True)
class ApproxPredicate:
    holds: bool
    pcl2_lhs: float
    pcl2_rhs: float
    pcl3_lhs: float
    pcl3_rhs: float
    order: int

    @property
    def margin2(self) -> float:
        return self.pcl2_rhs - self.pcl2_lhs

    @property
    def margin3(self) -> float:
        return self.pcl3_rhs - self.pcl3_lhs

    def to_json(self) -> dict:
        return {"holds": self.holds, "pcl2": {"lhs": self.pcl2_lhs, "rhs": _finite(self.pcl2_rhs),
                                              "margin": _finite(self.margin2)},
                "pcl3": {"lhs": self.pcl3_lhs, "rhs": _finite(self.pcl3_rhs),
                         "margin": _finite(self.margin3)}, "order": self.order}


def sufficiently_approximating(Y, S_Y: int, k: int, q: GrowthQuadruple, theta: ProjectivePoint,
                               codim: int, seed: int = 0) -> ApproxPredicate:
    """Both estimates for Y of codimension p = codim with multiplicity S_Y.

    The weighted distance phi_a^{S_Y/9^p} uses the derivated distance of
    order floor(3 S_Y / 9^p) divided by t_a(Y), with a = H_k / D_k.
    """
    if S_Y < 0 or codim < 1:
        raise BadInput("S_Y must be nonnegative and codim positive")
    D_k, S_k, H_k, V_k = q.at(k)
    p = codim
    a = H_k / D_k
    Z = Y if isinstance(Y, EffectiveCycle) else EffectiveCycle(((1, Y),))
    t_y = a * Z.degree() + sum(m * component_height(c, seed=seed).value for m, c in Z)
    if t_y <= 0:
        raise NonPositive(f"a-size {t_y} is not positive")
    if S_k == 0:
        rhs2 = math.inf if S_Y > 0 else math.nan
        rhs3 = -math.inf if S_Y > 0 else math.nan
    else:
        rhs2 = S_Y / S_k ** p * 4 ** p * D_k ** (p - 1) * H_k
        rhs3 = -4 * S_Y * V_k / (14 ** (p - 1) * t_y * S_k)
    order = (3 * S_Y) // 9 ** p
    try:
        lhs3 = cycle_distance(Z, theta, order).value / t_y
    except PointInSupport:
        lhs3 = -math.inf
    lhs2 = t_y
    ok2 = S_Y > 0 and lhs2 <= rhs2
    ok3 = S_Y > 0 and lhs3 <= rhs3
    return ApproxPredicate(bool(ok2 and ok3), lhs2, rhs2, lhs3, rhs3, order)


# ---------------------------------------------------------------------------
# second criterion


def _hypersurface_points(Y: HomogeneousPolynomial, rng, n: int, prec: int) -> list:
    """Random points of V(Y): roots of Y along random complex lines."""
    out = []
    nv = Y.num_vars
    while len(out) < n:
        with mpmath.workprec(prec + 32):
            a = [mpmath.mpc(*rng.standard_normal(2)) for _ in range(nv)]
            b = [mpmath.mpc(*rng.standard_normal(2)) for _ in range(nv)]
            # Y(a + s b) as a polynomial in s, by interpolation at D + 1 nodes
            D = Y.degree
            nodes = [mpmath.mpf(j) for j in range(D + 1)]
            vals = [Y.evaluate([ai + s * bi for ai, bi in zip(a, b)]) for s in nodes]
            coeffs = mpmath.lu_solve(mpmath.matrix([[s ** e for e in range(D, -1, -1)] for s in nodes]),
                                     mpmath.matrix(vals))
            roots = mpmath.polyroots(list(coeffs), maxsteps=200, extraprec=prec)
            for r in roots:
                out.append(ProjectivePoint([ai + r * bi for ai, bi in zip(a, b)], prec))
    return out[:n]


def _restriction_nonzero(inst: CriterionInstance, fam, Y, order: int, rng, trials: int = 3) -> bool:
    """Some d^I f with |I| <= order is nonzero at random points of Y."""
    prec = inst.theta.precision_bits
    pts = [Y] if isinstance(Y, ProjectivePoint) else _hypersurface_points(Y, rng, trials, min(prec, 512))
    for y in pts:
        p = y.precision_bits
        for f in fam:
            with mpmath.workprec(p):
                ld = sup_log_derivative(f, inst.X, y, order)
            # relative to the size of f at a unit point
            if ld > log_l2_norm(f) - p * math.log(2) / 2 + f.degree * 2:
                return True
    return False


def check_hypotheses_algind2(inst: CriterionInstance, seed: int = 0, samples: int = 10_000,
                             factor: float = DIVERGENCE_FACTOR) -> HarnessReport:
    """Regular growth, strict divergence, per-k bounds and the restriction condition.

    Candidate subvarieties come from inst.candidates (points or hypersurface
    forms near theta); every one of them must admit a derivative of order at
    most S_k/3 of some f in F_k that does not vanish on it.
    """
    reg_ok, reg = check_regular_growth(inst.quadruple)
    limit = criterion_limit(inst.quadruple, inst.s, factor, strict=True)
    notes = [{"regularity": reg}]
    if not reg_ok:
        return HarnessReport([], limit, INCONCLUSIVE, None, "regularity", None, notes)
    if not limit["diverges"]:
        return HarnessReport([], limit, INCONCLUSIVE, None, "no divergence", None, notes)
    checks = []
    for k in sorted(inst.families):
        c = _per_k(inst, k, inst.quadruple.at(k)[1], seed, samples, ball=False)
        c.ball_method = "not required"
        order = inst.quadruple.at(k)[1] // 3
        rng = np.random.default_rng([seed, k, 2])
        for Y in inst.candidates:
            if not _restriction_nonzero(inst, inst.families[k], Y, order, rng):
                c.extra_ok = False
                c.notes.append("all derivatives vanish on a candidate")
                break
        checks.append(c)
    return _assemble(checks, limit, inst.s, notes)


# ---------------------------------------------------------------------------
# window arithmetic


def _F_inverse(ds: np.ndarray, D: float) -> int | None:
    """inf{k : D_k/S_k >= D} (1-based), None beyond the prefix."""
    run = np.maximum.accumulate(ds)
    i = int(np.searchsorted(run, D, side="left"))
    return i + 1 if i < len(ds) else None


def regularity_window(q: GrowthQuadruple, D: float, constants: Mapping[str, float]) -> tuple[int, dict]:
    """The first k with (m/2) D <= D_k/S_k < m D, m = min(c1, b/(10 + d)).

    (rega2) is reported literally, with H = G(F^{-1}(D)) where
    F(k) = D_k/S_k and G(k) = H_k/D_k, and also after applying the
    non-decreasing function G o F^{-1} to the window ends; (rega3) adds the
    literal inequalities.
    """
    for key in ("c1", "b", "d"):
        if key not in constants:
            raise BadInput(f"missing constant {key}")
    c1, b, d = float(constants["c1"]), float(constants["b"]), float(constants["d"])
    m = min(c1, b / (10 + d))
    Dk, Sk, Hk = (np.asarray(x, float) for x in (q.D, q.S, q.H))
    if np.any(Sk <= 0):
        raise BadInput("window arithmetic needs positive S")
    ds = Dk / Sk
    hits = np.flatnonzero((m / 2 * D <= ds) & (ds < m * D))
    if len(hits) == 0:
        raise NoWindow(f"no k with D_k/S_k in [{m * D / 2}, {m * D})")
    k = int(hits[0]) + 1
    i = k - 1
    G = Hk / Dk

    def H_of(x):
        j = _F_inverse(ds, x)
        return None if j is None else float(G[j - 1])

    Hval = H_of(D)
    hs = float(Hk[i] / Sk[i])
    lit2 = None if Hval is None else bool(m / 2 * Hval <= hs < m * Hval)
    lo, mid, hi = H_of(m / 2 * D), H_of(ds[i]), H_of(m * D)
    applied2 = None if None in (lo, mid, hi) else bool(lo <= mid <= hi)
    hd = float((Hk[i] + Dk[i]) / Sk[i])
    lit3 = None if Hval is None else bool(m / 2 * (Hval + D) <= hd < m * (Hval + D) <= 2 * m * Hval)
    return k, {"k": k, "m": m, "D_over_S": float(ds[i]), "window": [m * D / 2, m * D],
               "H": Hval, "rega2_literal": lit2, "rega2_applied": applied2, "rega3_literal": lit3}
