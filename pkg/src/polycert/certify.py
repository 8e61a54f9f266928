"""Nonnegativity certificates built from rational univariate representations.

For a polynomial ``g`` of even degree ``D`` whose gradient ideal is
zero-dimensional and radical, a RUR ``(R0, R, L)`` of the critical points
gives the identity

    R0'(T)**D * g(X) = r(T) + sum_i (R0'(T) * Xi - Ri(T)) * qi(T, X).

At every critical point ``g`` equals ``r(t) / R0'(t)**D``. So when ``g``
attains its infimum, it is nonnegative exactly when ``r`` is nonnegative on
the real roots of ``R0``. A globally nonnegative ``r`` is written as a
weighted sum of squares. Otherwise a real root with a negative critical
value is refined until a rational point with ``g < 0`` appears.

The drivers apply this to the stereographic transform of the input: first
unperturbed, then with a negative perturbation of shrinking size, and
finally with a provably safe positive perturbation.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field, replace
from typing import Any, Sequence

from gmpy2 import mpq

from .bounds import SizeProfile, epsilon_bound, profile_of
from .hjpert import LambdaExhausted, neg_perturb, pick_lambda_neg, pick_lambda_pos, pos_perturb
from .polycore import (
    MvPoly,
    UvPoly,
    default_variables,
    evaluate,
    gradient,
    poly_from_terms,
    poly_to_terms,
)
from .rational import ONE, ZERO, Q, fmt, gcd_of_numerators, lcm_of_denominators, simplest_between
from .stereo import Witness, shift_polynomial, shift_to_positive_constant, stereo_of, witness_transport
from .unisos import (
    WeightedSos,
    _int_coeffs,
    count_real_roots,
    isolate_real_roots,
    refine_root,
    tarski_query,
    tarski_sequence,
    weighted_sos_decompose,
)
from .zerodim import (
    NotRadicalSignal,
    PositiveDimensionalError,
    Rur,
    compute_rur,
    groebner_basis,
    is_squarefree,
    is_zero_dim_no_infinity,
    quotient_basis,
    rur_substitution_residue,
)
from .polycore import uv_gcd

FORMAT_VERSION = 1


class PertType(enum.Enum):
    NOPERT = "nopert"
    NEGPERT = "negpert"
    POSPERT = "pospert"


@dataclass(frozen=True)
class Certificate:
    """Either a nonnegativity certificate or a negativity witness for ``polynomial``."""

    nonneg: bool
    pert_type: PertType
    profile: SizeProfile
    subject: MvPoly
    lam: mpq | None = None
    rur: Rur | None = None
    sos: WeightedSos | None = None
    quotients: tuple | None = None
    witness: Witness | None = None
    polynomial: MvPoly | None = None
    variables: tuple = ()
    shift: tuple | None = None

    @property
    def degree(self) -> int:
        return max(self.subject.degree, 0)


@dataclass(frozen=True)
class FailSignal:
    """Negative-perturbation search ended without a certificate.

    ``point``/``value`` record a rational point where the transform is not
    positive, when one was found; ``value < 0`` there means the input itself
    takes negative values.
    """

    reason: str
    point: tuple | None = None
    value: mpq | None = None
    rejected: int = 0


@dataclass
class NegRunLog:
    """Bookkeeping of a negative-perturbation search."""

    attempts: list = field(default_factory=list)  # (gamma, lambda, outcome)

    @property
    def rejected(self) -> int:
        return sum(1 for _, _, outcome in self.attempts if outcome in ("infinity", "not-radical"))


class CertificationError(RuntimeError):
    """A certification stage could not reach a decision."""


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple  # tuple[(name, passed, detail)]

    @property
    def valid(self) -> bool:
        return bool(self.checks) and all(ok for _, ok, _ in self.checks)

    def failed(self) -> list:
        return [name for name, ok, _ in self.checks if not ok]


# ---------------------------------------------------------------------------
# The SOS identity


def _lift_uv(p: UvPoly, nvars: int) -> MvPoly:
    return p.to_mvpoly(nvars, 0)


def _split_by_power(P: MvPoly, i: int) -> dict:
    """Coefficients of ``P`` as a polynomial in variable ``i``."""
    parts: dict[int, dict] = {}
    for e, c in P.terms.items():
        k = e[i]
        parts.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
    return {k: MvPoly(P.nvars, t, _trusted=True) for k, t in parts.items()}


def sos_rur_identity(g: MvPoly, rur: Rur) -> tuple:
    """Return ``(r, quotients)`` with ``R0'**D g = r + sum (R0' Xi - Ri) qi``.

    Polynomials in ``(T, X1..Xn)`` use index 0 for ``T``.
    """
    n = g.nvars
    N = n + 1
    D = max(g.degree, 0)
    dR0 = rur.R0.derivative()
    dpow = [UvPoly((ONE,), _trusted=True)]
    for _ in range(D):
        dpow.append(dpow[-1] * dR0)
    # P(T, Y) = sum a_alpha R0'^(D-|alpha|) Y^alpha.
    P = MvPoly.zero(N)
    for e, c in g.terms.items():
        P = P + _lift_uv(dpow[D - sum(e)], N).mul_term((0,) + e, c)
    Qs: list[MvPoly] = [MvPoly.zero(N)] * n
    for i in range(n, 0, -1):
        Ri = _lift_uv(rur.R[i - 1], N)
        parts = _split_by_power(P, i)
        top = max(parts) if parts else 0
        if top == 0:
            Qs[i - 1] = MvPoly.zero(N)
            continue
        # Horner: B_{k-1} = c_k, B_j = c_{j+1} + R * B_{j+1}; P_new = c_0 + R * B_0.
        zero = MvPoly.zero(N)
        B = parts.get(top, zero)
        e_i = [0] * N
        Qi = MvPoly.zero(N)
        for j in range(top - 1, -1, -1):
            e_i[i] = j
            Qi = Qi + B.mul_term(tuple(e_i), ONE)
            if j:
                B = parts.get(j, zero) + Ri * B
        P = parts.get(0, zero) + Ri * B
        Qs[i - 1] = Qi
    r = UvPoly([P.coefficient((k,) + (0,) * n) for k in range(max(P.degree, 0) + 1)])
    if any(any(e[1:]) for e in P.terms):
        raise ArithmeticError("elimination left variables behind")
    # Substitute Y_j -> R0' * X_j.
    quotients = []
    for Qi in Qs:
        out = MvPoly.zero(N)
        groups: dict[int, dict] = {}
        for e, c in Qi.terms.items():
            groups.setdefault(sum(e[1:]), {})[e] = c
        for k, terms in groups.items():
            out = out + MvPoly(N, terms, _trusted=True) * _lift_uv(dpow[k] if k <= D else dR0**k, N)
        quotients.append(out)
    return r, tuple(quotients)


def identity_residual(subject: MvPoly, rur: Rur, sos: WeightedSos, quotients: Sequence[MvPoly]) -> MvPoly:
    """``R0'**D * subject - sum w s**2 - sum (R0' Xi - Ri) qi`` in ``(T, X)``."""
    n = subject.nvars
    N = n + 1
    D = max(subject.degree, 0)
    dR0 = _lift_uv(rur.R0.derivative(), N)
    lhs = subject.embed(N, list(range(1, N))) * (dR0**D)
    lhs = lhs - _lift_uv(sos.expand(), N)
    for i, qi in enumerate(quotients):
        rel = dR0 * MvPoly.var(N, i + 1) - _lift_uv(rur.R[i], N)
        lhs = lhs - rel * qi
    return lhs


# ---------------------------------------------------------------------------
# SOS-RUR


def _negative_critical_point(g: MvPoly, rur: Rur) -> tuple | None:
    """A rational point with ``g < 0`` near a real critical point with negative value, if any."""
    R0 = rur.R0
    dR0 = R0.derivative()
    rho = rur_substitution_residue(g, rur)
    if rho.is_zero():
        return None
    common = uv_gcd(R0, rho)
    reduced = R0.exact_div(common) if common.degree > 0 else R0
    if reduced.degree <= 0:
        return None
    # Sign of the critical value at each real root of ``reduced`` via Tarski queries.
    query = tarski_sequence(reduced, rho)
    if tarski_query(reduced, rho, seq=query) == count_real_roots(reduced):
        return None
    reduced_ints = _int_coeffs(reduced)
    for a, b in isolate_real_roots(reduced):
        if a == b:
            if rho(a) < 0:
                return rur.point_at(a)
            continue
        if tarski_query(reduced, rho, a, b, query) > 0:
            continue
        while True:
            mid = (a + b) / 2
            if dR0(mid):
                p = rur.point_at(mid)
                if evaluate(g, p) < 0:
                    return p
            a, b = refine_root(reduced, a, b, reduced_ints)
            if a == b:
                return rur.point_at(a)
    return None


def sos_rur(g: MvPoly, seed: int = 0) -> Certificate | NotRadicalSignal:
    """Certificate of nonnegativity or a negativity witness for ``g``.

    ``g`` must have even degree, attain its infimum, and have a
    zero-dimensional gradient ideal (``PositiveDimensionalError`` otherwise).
    """
    D = g.degree
    if D < 0 or D % 2:
        raise ValueError("sos_rur needs a polynomial of even degree")
    gb = groebner_basis(gradient(g))
    if gb.unit:
        raise ValueError("no critical points: the polynomial cannot attain its infimum")
    q = quotient_basis(gb)
    rur = compute_rur(gb, q, seed)
    if isinstance(rur, NotRadicalSignal):
        return rur
    profile = profile_of(g) if g.nvars else SizeProfile(1, 0, 0)
    point = _negative_critical_point(g, rur)
    if point is not None:
        return Certificate(False, PertType.NOPERT, profile, g, witness=Witness(point, evaluate(g, point)))
    r, quotients = sos_rur_identity(g, rur)
    sos = weighted_sos_decompose(r) if not r.is_zero() else WeightedSos((), ())
    return Certificate(True, PertType.NOPERT, profile, g, rur=rur, sos=sos, quotients=quotients)


# ---------------------------------------------------------------------------
# Drivers


def integer_normalization(f: MvPoly) -> MvPoly:
    """Positive rational multiple of ``f`` with coprime integer coefficients."""
    if f.is_zero():
        return f
    coeffs = list(f.terms.values())
    scale = mpq(lcm_of_denominators(coeffs))
    g = f.scale(scale)
    content = gcd_of_numerators(g.terms.values())
    return g.scale(mpq(1, content))


def _check_pipeline_input(f: MvPoly) -> None:
    if f.is_zero():
        raise ValueError("the zero polynomial is not accepted")
    if f.degree % 2:
        raise ValueError("the polynomial must have even degree")
    if any(c.denominator != 1 for c in f.terms.values()):
        raise ValueError("the polynomial must have integer coefficients")
    if f.constant_term <= 0:
        raise ValueError("the polynomial must have a positive constant term")


def hj_sos_pos(f: MvPoly, seed: int = 0, retries: int = 8) -> Certificate:
    """Certificate or witness via the positive perturbation with the safe parameter."""
    _check_pipeline_input(f)
    profile = profile_of(f)
    S = stereo_of(f)
    base = pick_lambda_pos(profile)
    for attempt in range(retries):
        lam = base.value if attempt == 0 else base.value / (2 * attempt + 1)
        subject = pos_perturb(S, lam)
        res = sos_rur(subject, seed)
        if isinstance(res, NotRadicalSignal):
            continue
        if res.nonneg:
            return replace(res, pert_type=PertType.POSPERT, lam=lam, profile=profile, polynomial=f)
        # The perturbation only adds positive terms, so the transform is negative here too.
        w = witness_transport(f, res.witness.point)
        return Certificate(False, PertType.POSPERT, profile, subject, lam=lam, witness=w, polynomial=f)
    raise CertificationError(f"positive perturbation stayed non-radical after {retries} parameters")


def _known_points(n: int) -> list:
    pts = [tuple([ZERO] * n)]
    for i in range(n):
        for s in (ONE, -ONE):
            v = [ZERO] * n
            v[i] = s
            pts.append(tuple(v))
    return pts


def _snap(point: Sequence[mpq], digits: int = 8) -> tuple:
    """Nearby rationals with small denominators (continued-fraction rounding)."""
    tol = mpq(1, 10**digits)
    return tuple(simplest_between(x - tol, x + tol, False, False) for x in point)


def hj_sos_neg(f: MvPoly, seed: int = 0, k: int = 4, log: NegRunLog | None = None) -> Certificate | FailSignal:
    """Certificate of strict positivity via the negative perturbation, or Fail."""
    _check_pipeline_input(f)
    n = f.nvars
    d = f.degree
    profile = profile_of(f)
    eps = epsilon_bound(profile).value
    S = stereo_of(f)
    log = log if log is not None else NegRunLog()
    known = _known_points(n)

    def probe(points) -> FailSignal | None:
        for y in points:
            v = evaluate(S, y)
            if v <= 0:
                return FailSignal("transform not positive at a rational point", tuple(y), v, log.rejected)
        return None

    fail = probe(known)
    if fail is not None:
        return fail
    gamma = 1
    while True:
        attempt = 0
        while True:
            try:
                lam = pick_lambda_neg(gamma, attempt, k, seed, n=n, d=d)
            except LambdaExhausted:
                break
            attempt += 1
            subject = neg_perturb(S, lam)
            if any(evaluate(subject, y) < 0 for y in known):
                log.attempts.append((gamma, lam.value, "negative"))
                break
            if not is_zero_dim_no_infinity(gradient(subject)):
                log.attempts.append((gamma, lam.value, "infinity"))
                continue
            res = sos_rur(subject, seed)
            if isinstance(res, NotRadicalSignal):
                log.attempts.append((gamma, lam.value, "not-radical"))
                continue
            if res.nonneg:
                log.attempts.append((gamma, lam.value, "certified"))
                return replace(res, pert_type=PertType.NEGPERT, lam=lam.value, profile=profile, polynomial=f)
            log.attempts.append((gamma, lam.value, "negative"))
            new_points = [res.witness.point, _snap(res.witness.point)]
            known.extend(new_points)
            fail = probe(new_points)
            if fail is not None:
                return fail
            break
        if not mpq(1, 1 << gamma) > eps:
            return FailSignal("search window exhausted", rejected=log.rejected)
        gamma *= 2


def _constant_certificate(f: MvPoly, base: MvPoly, variables: tuple) -> Certificate:
    n = f.nvars
    c = base.constant_term
    profile = SizeProfile(max(n, 1), 0, profile_of(base).tau)
    if c < 0:
        pt = tuple([ZERO] * n)
        return Certificate(False, PertType.NOPERT, profile, base, witness=Witness(pt, evaluate(f, pt)),
                           polynomial=f, variables=variables)
    T = UvPoly.T()
    rur = Rur(T, tuple(UvPoly() for _ in range(n)), tuple([ONE] + [ZERO] * (n - 1)), 1)
    sos = WeightedSos((c,), (UvPoly((ONE,), _trusted=True),))
    quotients = tuple(MvPoly.zero(n + 1) for _ in range(n))
    return Certificate(True, PertType.NOPERT, profile, base, rur=rur, sos=sos, quotients=quotients,
                       polynomial=f, variables=variables)


def _finish(cert: Certificate, f: MvPoly, variables: tuple, shift: tuple | None) -> Certificate:
    witness = cert.witness
    if witness is not None and shift is not None:
        pt = tuple(x + c for x, c in zip(witness.point, shift))
        witness = Witness(pt, evaluate(f, pt))
    elif witness is not None:
        witness = Witness(witness.point, evaluate(f, witness.point))
    return replace(cert, polynomial=f, variables=variables, shift=shift, witness=witness)


def hj_sos_rur(f: MvPoly, seed: int = 0, k: int = 4, mode: str = "auto", variables: Sequence[str] | None = None,
               log: NegRunLog | None = None) -> Certificate:
    """Decide nonnegativity of ``f``: unperturbed, then negative, then positive perturbation.

    ``mode`` restricts the run to one stage (``"nopert"``, ``"neg"``, ``"pos"``).
    Rational coefficients are cleared first. When ``f(0) <= 0`` the input is
    translated to a point with positive value (witnesses are mapped back).
    """
    if mode not in ("auto", "nopert", "neg", "pos"):
        raise ValueError(f"unknown mode {mode!r}")
    if f.is_zero():
        raise ValueError("the zero polynomial is not accepted")
    variables = tuple(variables) if variables is not None else tuple(default_variables(f.nvars))
    base = integer_normalization(f)
    if base.degree == 0:
        return _constant_certificate(f, base, variables)
    if base.degree % 2:
        raise ValueError("the polynomial must have even degree")
    shift = None
    if base.constant_term <= 0:
        res = shift_to_positive_constant(base, seed, k)
        if isinstance(res, Witness):
            pt = res.point
            return Certificate(False, PertType.NOPERT, profile_of(base), stereo_of(base),
                               witness=Witness(pt, evaluate(f, pt)), polynomial=f, variables=variables)
        base, shift = res
        shift = tuple(int(c) for c in shift)
    profile = profile_of(base)
    S = stereo_of(base)
    if mode in ("auto", "nopert") and is_zero_dim_no_infinity(gradient(S)):
        res = sos_rur(S, seed)
        if isinstance(res, Certificate):
            if res.nonneg:
                return _finish(replace(res, profile=profile), f, variables, shift)
            w = witness_transport(base, res.witness.point)
            return _finish(Certificate(False, PertType.NOPERT, profile, S, witness=w), f, variables, shift)
    if mode == "nopert":
        raise CertificationError("the unperturbed transform does not meet the solver's requirements")
    if mode in ("auto", "neg"):
        res = hj_sos_neg(base, seed, k, log)
        if isinstance(res, Certificate):
            return _finish(res, f, variables, shift)
        if res.value is not None and res.value < 0:
            w = witness_transport(base, res.point)
            return _finish(Certificate(False, PertType.NOPERT, profile, S, witness=w), f, variables, shift)
        if mode == "neg":
            raise CertificationError(f"negative perturbation failed: {res.reason}")
    return _finish(hj_sos_pos(base, seed), f, variables, shift)


# ---------------------------------------------------------------------------
# Verification


def _expected_base(f: MvPoly, shift: tuple | None) -> MvPoly:
    base = integer_normalization(f)
    if shift is not None:
        base = shift_polynomial(base, shift)
    return base


def _check(checks: list, name: str, fn) -> bool:
    try:
        ok, detail = fn()
    except Exception as exc:  # a malformed certificate must not escape as an exception
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    checks.append((name, bool(ok), detail))
    return bool(ok)


def verify_certificate(f: MvPoly, cert: Any) -> VerificationReport:
    """Re-derive every claim of ``cert`` from ``f`` alone.

    ``cert`` may be a :class:`Certificate`, a parsed JSON document or JSON
    text; structural problems are reported as a failed check.
    """
    checks: list = []
    if not isinstance(cert, Certificate):
        holder = {}

        def parse():
            holder["cert"] = certificate_from_json(cert if isinstance(cert, str) else json.dumps(cert))
            return True, "parsed"

        if not _check(checks, "structure", parse):
            return VerificationReport(tuple(checks))
        cert = holder["cert"]

    def structure():
        if cert.polynomial is not None and cert.polynomial != f:
            return False, "certificate is for a different polynomial"
        if cert.subject.nvars != f.nvars:
            return False, "subject has the wrong number of variables"
        if cert.variables and len(cert.variables) != f.nvars:
            return False, "variable list has the wrong length"
        if cert.nonneg:
            if cert.witness is not None or cert.rur is None or cert.sos is None or cert.quotients is None:
                return False, "nonnegativity certificate must carry rur, sos and quotients only"
            if len(cert.rur.R) != f.nvars or len(cert.rur.L) != f.nvars or len(cert.quotients) != f.nvars:
                return False, "rur or quotient count does not match the variables"
            if len(cert.sos.weights) != len(cert.sos.squares):
                return False, "weights and squares differ in number"
        else:
            if cert.witness is None or any(x is not None for x in (cert.rur, cert.sos, cert.quotients)):
                return False, "witness certificate must carry a witness only"
            if len(cert.witness.point) != f.nvars:
                return False, "witness has the wrong dimension"
        return True, "fields consistent"

    if not _check(checks, "structure", structure):
        return VerificationReport(tuple(checks))

    state: dict = {}

    def reconstruct():
        base = _expected_base(f, cert.shift)
        state["base"] = base
        if base.degree % 2:
            return False, "odd degree"
        profile = profile_of(base)
        state["profile"] = profile
        if cert.profile != profile:
            return False, f"declared profile {cert.profile} differs from {profile}"
        if base.degree == 0:
            if cert.pert_type is not PertType.NOPERT or cert.lam is not None:
                return False, "constants are decided without perturbation"
            ok = cert.subject == base and (not cert.nonneg or all(q.is_zero() for q in cert.quotients))
            return ok, "constant subject"
        if cert.nonneg and base.constant_term <= 0:
            return False, "normalized polynomial must have a positive constant term"
        S = stereo_of(base)
        if cert.pert_type is PertType.NOPERT:
            expected = S
        elif cert.lam is None:
            return False, "perturbed certificate without a parameter"
        elif cert.pert_type is PertType.POSPERT:
            expected = pos_perturb(S, cert.lam)
        else:
            expected = neg_perturb(S, cert.lam)
        return cert.subject == expected, "subject matches the transform and perturbation"

    def lambda_range():
        lam = cert.lam
        if cert.pert_type is PertType.NOPERT:
            return lam is None, "no parameter"
        if lam is None or lam <= 0:
            return False, "parameter must be positive"
        if cert.pert_type is PertType.POSPERT:
            eps = epsilon_bound(state["profile"]).value
            return lam <= eps, "0 < lambda <= eps'"
        f0 = state["base"].constant_term
        return lam < f0, f"0 < lambda < {fmt(f0)}"

    def rur_shape():
        rur = cert.rur
        R0 = rur.R0
        if R0.degree < 1:
            return False, "R0 must be nonconstant"
        if not is_squarefree(R0):
            return False, "R0 is not squarefree"
        if any(Ri.degree >= R0.degree for Ri in rur.R):
            return False, "parametrization degree too large"
        lhs = (UvPoly.T() * R0.derivative()) % R0
        rhs = UvPoly()
        for Li, Ri in zip(rur.L, rur.R):
            rhs = rhs + Ri.scale(Li)
        rhs = rhs % R0
        return lhs == rhs, "R0 squarefree and T*R0' = sum L_i R_i mod R0"

    def inclusion():
        subject = cert.subject
        for i, p in enumerate(gradient(subject)):
            if not rur_substitution_residue(p, cert.rur).is_zero():
                return False, f"partial {i + 1} does not vanish on the parametrized points"
        return True, "parametrized points are critical"

    def coverage():
        subject = cert.subject
        gb = groebner_basis(gradient(subject))
        if gb.unit:
            return False, "no critical points"
        try:
            dim = quotient_basis(gb).dimension
        except PositiveDimensionalError as exc:
            return False, str(exc)
        ok = dim == cert.rur.R0.degree
        return ok, f"quotient dimension {dim}, deg R0 = {cert.rur.R0.degree}"

    def identity():
        if cert.rur.quotient_dim != cert.rur.R0.degree:
            return False, "declared degree differs from deg R0"
        if any(w <= 0 for w in cert.sos.weights):
            return False, "sum-of-squares weights must be positive"
        res = identity_residual(cert.subject, cert.rur, cert.sos, cert.quotients)
        return res.is_zero(), f"residual has {len(res)} terms"

    def witness():
        value = evaluate(f, cert.witness.point)
        if value != cert.witness.value:
            return False, f"recorded value {fmt(cert.witness.value)} differs from f(point) = {fmt(value)}"
        return value < 0, f"f(point) = {fmt(value)}"

    if not _check(checks, "(a) subject", reconstruct):
        return VerificationReport(tuple(checks))
    if not cert.nonneg:
        if state["base"].degree > 0:
            _check(checks, "(b) lambda range", lambda_range)
        _check(checks, "(f) witness", witness)
        return VerificationReport(tuple(checks))
    if state["base"].degree == 0:
        def constant_identity():
            rur = cert.rur
            n = f.nvars
            if rur.R0 != UvPoly.T() or any(not Ri.is_zero() for Ri in rur.R):
                return False, "constant certificates use R0 = T and zero parametrization"
            if tuple(rur.L) != tuple([ONE] + [ZERO] * (n - 1)) or rur.quotient_dim != 1:
                return False, "constant certificates use the form X1 on a one-point quotient"
            if any(w <= 0 for w in cert.sos.weights):
                return False, "sum-of-squares weights must be positive"
            return cert.sos.expand() == UvPoly([cert.subject.constant_term]), "constant equals the weighted squares"

        _check(checks, "(e) identity", constant_identity)
        return VerificationReport(tuple(checks))
    _check(checks, "(b) lambda range", lambda_range)
    _check(checks, "(c) rur", rur_shape)
    _check(checks, "(d) inclusion", inclusion)
    _check(checks, "(d') all critical points", coverage)
    _check(checks, "(e) identity", identity)
    return VerificationReport(tuple(checks))


# ---------------------------------------------------------------------------
# JSON format


def _uv_to_json(p: UvPoly) -> list:
    return [fmt(c) for c in p.coeffs]


def _uv_from_json(data) -> UvPoly:
    if not isinstance(data, list) or not all(isinstance(c, str) for c in data):
        raise ValueError("univariate polynomial must be a list of fraction strings")
    p = UvPoly([Q(c) for c in data])
    if len(p.coeffs) != len(data):
        raise ValueError("univariate coefficient list has trailing zeros")
    return p


def certificate_to_dict(cert: Certificate) -> dict:
    n = cert.subject.nvars
    variables = list(cert.variables) if cert.variables else default_variables(n)
    return {
        "version": FORMAT_VERSION,
        "variables": variables,
        "polynomial": poly_to_terms(cert.polynomial) if cert.polynomial is not None else None,
        "nonneg": cert.nonneg,
        "pert_type": cert.pert_type.value,
        "lambda": fmt(cert.lam) if cert.lam is not None else None,
        "shift": list(cert.shift) if cert.shift is not None else None,
        "profile": {"n": cert.profile.n, "d": cert.profile.d, "tau": cert.profile.tau},
        "subject": poly_to_terms(cert.subject),
        "rur": None if cert.rur is None else {
            "R0": _uv_to_json(cert.rur.R0),
            "R": [_uv_to_json(Ri) for Ri in cert.rur.R],
            "L": [fmt(x) for x in cert.rur.L],
            "D": cert.degree,
        },
        "sos": None if cert.sos is None else {
            "weights": [fmt(w) for w in cert.sos.weights],
            "squares": [_uv_to_json(s) for s in cert.sos.squares],
        },
        "quotients": None if cert.quotients is None else [poly_to_terms(q) for q in cert.quotients],
        "witness": None if cert.witness is None else {
            "point": [fmt(x) for x in cert.witness.point],
            "value": fmt(cert.witness.value),
        },
    }


def certificate_to_json(cert: Certificate) -> str:
    return json.dumps(certificate_to_dict(cert), indent=1) + "\n"


_FIELDS = ("version", "variables", "polynomial", "nonneg", "pert_type", "lambda", "shift", "profile",
           "subject", "rur", "sos", "quotients", "witness")


def certificate_from_json(text: str) -> Certificate:
    """Parse a certificate document; raises ``ValueError`` naming the offending field."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"not JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ValueError("certificate must be a JSON object")
    missing = [k for k in _FIELDS if k not in data]
    if missing:
        raise ValueError(f"missing fields: {missing}")

    def field_error(name):
        return lambda exc: ValueError(f"field {name!r}: {exc}")

    if data["version"] != FORMAT_VERSION:
        raise ValueError(f"field 'version': unsupported {data['version']!r}")
    variables = data["variables"]
    if not isinstance(variables, list) or not variables or not all(isinstance(v, str) for v in variables):
        raise ValueError("field 'variables': expected a nonempty list of names")
    n = len(variables)
    try:
        prof = data["profile"]
        profile = SizeProfile(int(prof["n"]), int(prof["d"]), int(prof["tau"]))
    except Exception as exc:
        raise field_error("profile")(exc) from None
    try:
        subject = poly_from_terms(n, data["subject"])
    except Exception as exc:
        raise field_error("subject")(exc) from None
    polynomial = None
    if data["polynomial"] is not None:
        try:
            polynomial = poly_from_terms(n, data["polynomial"])
        except Exception as exc:
            raise field_error("polynomial")(exc) from None
    if not isinstance(data["nonneg"], bool):
        raise ValueError("field 'nonneg': expected a boolean")
    try:
        pert = PertType(data["pert_type"])
    except Exception as exc:
        raise field_error("pert_type")(exc) from None
    lam = None
    if data["lambda"] is not None:
        if not isinstance(data["lambda"], str):
            raise ValueError("field 'lambda': expected a fraction string")
        lam = Q(data["lambda"])
    shift = None
    if data["shift"] is not None:
        if not isinstance(data["shift"], list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in data["shift"]):
            raise ValueError("field 'shift': expected a list of integers")
        shift = tuple(data["shift"])
    rur = None
    if data["rur"] is not None:
        try:
            d = data["rur"]
            R0 = _uv_from_json(d["R0"])
            R = tuple(_uv_from_json(x) for x in d["R"])
            L = tuple(Q(x) for x in d["L"])
            if not all(isinstance(x, str) for x in d["L"]):
                raise ValueError("L entries must be fraction strings")
            if not isinstance(d["D"], int) or d["D"] != max(subject.degree, 0):
                raise ValueError("D must equal the subject degree")
            rur = Rur(R0, R, L, R0.degree)
        except Exception as exc:
            raise field_error("rur")(exc) from None
    sos = None
    if data["sos"] is not None:
        try:
            d = data["sos"]
            if not all(isinstance(x, str) for x in d["weights"]):
                raise ValueError("weights must be fraction strings")
            sos = WeightedSos(tuple(Q(x) for x in d["weights"]), tuple(_uv_from_json(s) for s in d["squares"]))
        except Exception as exc:
            raise field_error("sos")(exc) from None
    quotients = None
    if data["quotients"] is not None:
        try:
            quotients = tuple(poly_from_terms(n + 1, q) for q in data["quotients"])
        except Exception as exc:
            raise field_error("quotients")(exc) from None
    witness = None
    if data["witness"] is not None:
        try:
            d = data["witness"]
            if not all(isinstance(x, str) for x in d["point"]) or not isinstance(d["value"], str):
                raise ValueError("point and value must be fraction strings")
            witness = Witness(tuple(Q(x) for x in d["point"]), Q(d["value"]))
        except Exception as exc:
            raise field_error("witness")(exc) from None
    return Certificate(data["nonneg"], pert, profile, subject, lam=lam, rur=rur, sos=sos, quotients=quotients,
                       witness=witness, polynomial=polynomial, variables=tuple(variables), shift=shift)
