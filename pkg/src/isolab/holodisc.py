"""Truncated Taylor models on the unit disc and their circle seminorms.

Functions are finite Taylor polynomials; seminorms are suprema or p-th
power means over sampled circles of an increasing radius family.  The
module tests candidate operators for isometry, characterizes isometries
as coefficient rotations, and checks the three-circle log-convexity
inequality with its equality rigidity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "TaylorFunction",
    "DiscExhaustion",
    "RotationOperator",
    "WeightedCompositionOperator",
    "MatrixOperator",
    "DiscOperator",
    "SupFamily",
    "HpFamily",
    "NotCharacterizable",
    "TruncationOverflow",
    "sup_seminorm",
    "hp_seminorm",
    "strict_monotonicity_check",
    "MonotonicityReport",
    "apply_operator",
    "operator_matrix",
    "isometry_test",
    "IsometryReport",
    "characterize_isometry",
    "Characterization",
    "three_circle_check",
    "ThreeCircleReport",
    "random_taylor",
    "standard_probes",
]

DEFAULT_DEGREE_BOUND = 64


class NotCharacterizable(RuntimeError):
    """The operator fails one of the characterization steps.

    The failing check's name is carried in .check; .details holds the
    measured quantity that broke it.
    """

    def __init__(self, check: str, details: str = ""):
        super().__init__(f"not characterizable: {check}" + (f" ({details})" if details else ""))
        self.check = check
        self.details = details


class TruncationOverflow(RuntimeError):
    """Coefficient mass beyond the output budget exceeded the tolerance."""


@dataclass(frozen=True)
class TaylorFunction:
    """Finite Taylor polynomial with complex coefficients, ascending degree.

    Equality compares canonical forms (exact trailing zeros trimmed).
    truncation_residual records the l2 mass dropped by the operation
    that produced this function (0 for exact constructions).
    """

    coefficients: tuple
    truncation_residual: float = field(default=0.0, compare=False)

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a nonempty 1-D sequence")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        trimmed = c
        while trimmed.size > 1 and trimmed[-1] == 0:
            trimmed = trimmed[:-1]
        object.__setattr__(self, "coefficients", tuple(complex(x) for x in trimmed))

    @classmethod
    def one(cls):
        return cls((1.0,))

    @classmethod
    def identity(cls):
        return cls((0.0, 1.0))

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0):
        if k < 0:
            raise ValueError("degree must be nonnegative")
        return cls((0.0,) * k + (complex(c),))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def array(self):
        return np.asarray(self.coefficients)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in reversed(self.coefficients):
            out = out * z + c
        return out

    def __add__(self, other):
        a, b = self.array, other.array
        n = max(a.size, b.size)
        out = np.zeros(n, dtype=complex)
        out[: a.size] += a
        out[: b.size] += b
        return TaylorFunction(tuple(out))

    def __sub__(self, other):
        return self + other.scaled(-1.0)

    def scaled(self, c):
        return TaylorFunction(tuple(np.asarray(self.array) * complex(c)))

    def __mul__(self, other):
        return TaylorFunction(tuple(np.convolve(self.array, other.array)))

    def compose(self, inner: "TaylorFunction") -> "TaylorFunction":
        """Polynomial composition self(inner(z)), exact degree growth."""
        out = np.array([self.coefficients[-1]], dtype=complex)
        for c in reversed(self.coefficients[:-1]):
            out = np.convolve(out, inner.array)
            out[0] += c
        return TaylorFunction(tuple(out))

    def truncated(self, budget: int, tol: float | None = None) -> "TaylorFunction":
        """Drop coefficients beyond the budget, recording their l2 mass."""
        c = self.array
        if c.size <= budget + 1:
            return self
        dropped = float(np.linalg.norm(c[budget + 1 :]))
        if tol is not None and dropped > tol:
            raise TruncationOverflow(
                f"truncation mass {dropped:g} exceeds tolerance {tol:g}"
            )
        return TaylorFunction(tuple(c[: budget + 1]), truncation_residual=dropped)


def random_taylor(rng, degree: int, min_significant: int = 1) -> TaylorFunction:
    """Random polynomial with unit-scale complex Gaussian coefficients.

    Guarantees at least min_significant coefficients of modulus >= 0.1 so
    rigidity tests stay well-posed; the top coefficient is kept away from
    zero so the degree is exact.
    """
    if min_significant > degree + 1:
        raise ValueError("min_significant exceeds the coefficient count")
    while True:
        c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
        if abs(c[-1]) < 0.1:
            c[-1] += 0.2 * (1 + 1j)
        if int(np.sum(np.abs(c) >= 0.1)) >= min_significant:
            return TaylorFunction(tuple(c))


@dataclass(frozen=True)
class DiscExhaustion:
    """Increasing radii in (0, 1) with a shared circle sample count.

    Default radii follow 1 - 1/n for n = 2, 3, ...; the n-indices are
    kept so a family can be restricted to named levels.  samples must be
    a power of two at least 4 * (degree bound).
    """

    radii: tuple
    indices: tuple = ()
    circle_samples: int = 512

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if r.ndim != 1 or r.size == 0:
            raise ValueError("radii must be a nonempty 1-D sequence")
        if np.any(r <= 0) or np.any(r >= 1):
            raise ValueError("radii must lie in (0, 1)")
        if np.any(np.diff(r) <= 0):
            raise ValueError("radii must be strictly increasing")
        if self.circle_samples < 8 or (self.circle_samples & (self.circle_samples - 1)) != 0:
            raise ValueError("circle_samples must be a power of two, at least 8")
        object.__setattr__(self, "radii", tuple(float(x) for x in r))
        if not self.indices:
            object.__setattr__(self, "indices", tuple(range(2, 2 + len(self.radii))))
        elif len(self.indices) != len(self.radii):
            raise ValueError("indices must match radii")

    @classmethod
    def default(cls, count: int = 3, circle_samples: int = 512):
        ns = tuple(range(2, 2 + count))
        return cls(tuple(1.0 - 1.0 / n for n in ns), ns, circle_samples)

    def restrict(self, keep_indices) -> "DiscExhaustion":
        keep = [i for i, n in enumerate(self.indices) if n in set(keep_indices)]
        if not keep:
            raise ValueError("restriction removed every radius")
        return DiscExhaustion(
            tuple(self.radii[i] for i in keep),
            tuple(self.indices[i] for i in keep),
            self.circle_samples,
        )


def _require_samples(f: TaylorFunction, samples: int | None) -> int:
    if samples is None:
        q = 8
        while q < 4 * (f.degree + 1):
            q *= 2
        return max(q, 64)
    if samples < 4 * f.degree:
        raise ValueError("need at least 4 * degree circle samples")
    return samples


def _circle_values(f: TaylorFunction, radius: float, q: int):
    """f on q equispaced points of the radius circle, via an inverse DFT."""
    scaled = f.array * radius ** np.arange(f.degree + 1)
    padded = np.zeros(q, dtype=complex)
    padded[: min(q, scaled.size)] = scaled[:q]
    # handle degree >= q by aliasing explicitly (never hit under the 4D rule)
    for j in range(q, scaled.size):
        padded[j % q] += scaled[j]
    return np.fft.ifft(padded) * q


def _abs2_series(f: TaylorFunction, radius: float):
    """Trig coefficients of |f|^2 on the circle: index m holds frequency m."""
    a = f.array * radius ** np.arange(f.degree + 1)
    pos = np.correlate(a, a, mode="full")[a.size - 1 :]
    return pos  # pos[m] = sum_k a[k+m] conj(a[k]); negative side is conj


def _eval_abs2(pos_coeffs, theta):
    theta = np.atleast_1d(theta)
    m = np.arange(pos_coeffs.size)
    e = np.exp(1j * np.outer(theta, m))
    vals = e @ pos_coeffs
    return 2.0 * vals.real - pos_coeffs[0].real


def _eval_abs2_deriv(pos_coeffs, theta):
    theta = np.atleast_1d(theta)
    m = np.arange(pos_coeffs.size)
    e = np.exp(1j * np.outer(theta, m)) * (1j * m)
    return 2.0 * (e @ pos_coeffs).real


def _eval_abs2_deriv2(pos_coeffs, theta):
    theta = np.atleast_1d(theta)
    m = np.arange(pos_coeffs.size)
    e = np.exp(1j * np.outer(theta, m)) * (-(m**2))
    return 2.0 * (e @ pos_coeffs).real


def _refine_peak(pos_coeffs, th0, h):
    """Sharpen a bracketed circle maximum of |f|^2 to machine precision.

    Newton on the derivative with a bisection safeguard; falls back to
    golden-section if the bracket has no derivative sign change.
    """
    lo, hi = th0 - h, th0 + h
    dlo = float(_eval_abs2_deriv(pos_coeffs, lo)[0])
    dhi = float(_eval_abs2_deriv(pos_coeffs, hi)[0])
    if dlo >= 0 >= dhi:
        a, b = lo, hi
        th = th0
        for _ in range(80):
            d = float(_eval_abs2_deriv(pos_coeffs, th)[0])
            dd = float(_eval_abs2_deriv2(pos_coeffs, th)[0])
            if d >= 0:
                a = th
            else:
                b = th
            step_ok = dd < 0
            nxt = th - d / dd if step_ok else 0.5 * (a + b)
            if not (a <= nxt <= b):
                nxt = 0.5 * (a + b)
            if abs(nxt - th) < 1e-15:
                th = nxt
                break
            th = nxt
        return float(_eval_abs2(pos_coeffs, th)[0])
    # golden section on the value
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = float(_eval_abs2(pos_coeffs, c)[0])
    fd = float(_eval_abs2(pos_coeffs, d)[0])
    for _ in range(90):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = float(_eval_abs2(pos_coeffs, c)[0])
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = float(_eval_abs2(pos_coeffs, d)[0])
    return float(_eval_abs2(pos_coeffs, 0.5 * (a + b))[0])


def _circle_max(f: TaylorFunction, radius: float, q: int, refine: bool) -> float:
    vals2 = np.abs(_circle_values(f, radius, q)) ** 2
    peak = float(np.max(vals2))
    if not refine or peak == 0.0:
        return float(np.sqrt(peak))
    if peak - float(np.min(vals2)) <= 1e-15 * max(peak, 1.0):
        return float(np.sqrt(peak))  # constant modulus (monomials)
    pos_coeffs = _abs2_series(f, radius)
    h = 2.0 * np.pi / q
    # refine the top grid peaks; three suffice to bracket the global max
    order = np.argsort(vals2)[::-1]
    candidates = []
    for idx in order:
        th = idx * h
        if all(abs((th - t + np.pi) % (2 * np.pi) - np.pi) > 2.5 * h for t in candidates):
            candidates.append(th)
        if len(candidates) == 3:
            break
    best = peak
    for th in candidates:
        best = max(best, _refine_peak(pos_coeffs, th, h))
    return float(np.sqrt(max(best, 0.0)))


def sup_seminorm(
    f: TaylorFunction, radius: float, samples: int | None = None, refine: bool = True
) -> float:
    """Supremum of |f| on the circle of the given radius.

    A grid stage takes the max over `samples` equispaced points (at least
    four per degree); with refine=True (default) the top grid brackets
    are sharpened to the true circle maximum so the result is exact to
    machine precision and in particular rotation invariant.  refine=False
    returns the literal grid max.
    """
    if not 0 < radius < 1:
        raise ValueError("radius must lie in (0, 1)")
    q = _require_samples(f, samples)
    return _circle_max(f, radius, q, refine)


def hp_seminorm(
    f: TaylorFunction, p: float, radius: float, samples: int | None = None
) -> float:
    """p-th power circle mean: ((1/2pi) integral |f|^p dtheta)^(1/p).

    Equispaced averaging is exact for p = 2 (Parseval) once the sample
    count clears the degree, and spectrally accurate otherwise.
    """
    if not 0 < radius < 1:
        raise ValueError("radius must lie in (0, 1)")
    if not p >= 1:
        raise ValueError("p must be at least 1")
    q = _require_samples(f, samples)
    vals = np.abs(_circle_values(f, radius, q))
    return float(np.mean(vals**p) ** (1.0 / p))


@dataclass(frozen=True)
class MonotonicityReport:
    values: tuple
    min_gap: float
    strictly_increasing: bool
    constant: bool


def strict_monotonicity_check(
    f: TaylorFunction, p: float, radius_grid, samples: int | None = None
) -> MonotonicityReport:
    """Check the circle means grow strictly along an increasing radius grid.

    Constant functions report constant=True with a zero gap instead.
    """
    radii = np.asarray(radius_grid, dtype=float)
    if np.any(np.diff(radii) <= 0):
        raise ValueError("radius grid must be strictly increasing")
    vals = np.array([hp_seminorm(f, p, r, samples) for r in radii])
    gaps = np.diff(vals)
    min_gap = float(np.min(gaps)) if gaps.size else 0.0
    is_const = f.degree == 0
    return MonotonicityReport(
        tuple(float(v) for v in vals),
        min_gap,
        bool(np.all(gaps > 0)),
        is_const,
    )


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RotationOperator:
    """Coefficient rotation c_k -> alpha * beta^k * c_k; both unimodular."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        for name, val in (("alpha", self.alpha), ("beta", self.beta)):
            if abs(abs(complex(val)) - 1.0) > 1e-12:
                raise ValueError(f"{name} must be unimodular")
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))

    def apply(self, f: TaylorFunction, budget=None, tol=None) -> TaylorFunction:
        k = np.arange(f.degree + 1)
        return TaylorFunction(tuple(self.alpha * self.beta**k * f.array))


@dataclass(frozen=True)
class WeightedCompositionOperator:
    """f -> weight * (f o warp) with the warp mapping the disc to itself.

    The self-map condition is enforced at construction by checking the
    warp's modulus on the unit circle (refined maximum, tolerance 1e-9).
    """

    weight: TaylorFunction
    warp: TaylorFunction

    def __post_init__(self):
        q = 8
        while q < 4 * (self.warp.degree + 1):
            q *= 2
        m = _circle_max(self.warp, 1.0 - 1e-14, max(q, 64), refine=True)
        if m > 1.0 + 1e-9:
            raise ValueError(f"warp must map the disc into itself (max modulus {m:g})")

    def apply(self, f: TaylorFunction, budget=None, tol=None) -> TaylorFunction:
        out = self.weight * f.compose(self.warp)
        if budget is not None:
            out = out.truncated(budget, tol)
        return out


@dataclass(frozen=True)
class MatrixOperator:
    """Linear action on the coefficient vector, given as a square matrix."""

    matrix: tuple  # tuple of row tuples, complex

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("matrix must be square")
        object.__setattr__(
            self, "matrix", tuple(tuple(complex(x) for x in row) for row in m)
        )

    @property
    def array(self):
        return np.asarray(self.matrix)

    def apply(self, f: TaylorFunction, budget=None, tol=None) -> TaylorFunction:
        m = self.array
        n = m.shape[0]
        c = np.zeros(n, dtype=complex)
        src = f.array
        if src.size > n:
            raise ValueError("function degree exceeds the operator matrix size")
        c[: src.size] = src
        out = TaylorFunction(tuple(m @ c))
        if budget is not None:
            out = out.truncated(budget, tol)
        return out


# any of the three concrete operator kinds (plus bare callables in the
# opaque-map entry points)
DiscOperator = RotationOperator | WeightedCompositionOperator | MatrixOperator


def _as_apply(op):
    if hasattr(op, "apply"):
        return op.apply
    if callable(op):
        return lambda f, budget=None, tol=None: op(f)
    raise TypeError("operator must expose .apply or be callable")


def apply_operator(op, f: TaylorFunction, budget=None, tol=None) -> TaylorFunction:
    """Apply any operator form (builtin, matrix, or callable) to f."""
    return _as_apply(op)(f, budget=budget, tol=tol)


def operator_matrix(op, size: int) -> MatrixOperator:
    """Materialize an operator as its matrix on monomials up to the size."""
    apply = _as_apply(op)
    cols = np.zeros((size, size), dtype=complex)
    for k in range(size):
        out = apply(TaylorFunction.monomial(k)).array
        if out.size > size:
            raise ValueError("operator escapes the requested matrix size")
        cols[: out.size, k] = out
    return MatrixOperator(tuple(tuple(row) for row in cols))


# ---------------------------------------------------------------------------
# seminorm families and isometry testing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SupFamily:
    def seminorm(self, f: TaylorFunction, radius: float, samples: int) -> float:
        return sup_seminorm(f, radius, samples=samples, refine=True)

    label = "sup"


@dataclass(frozen=True)
class HpFamily:
    p: float

    def __post_init__(self):
        if not self.p >= 1:
            raise ValueError("p must be at least 1")

    def seminorm(self, f: TaylorFunction, radius: float, samples: int) -> float:
        return hp_seminorm(f, self.p, radius, samples=samples)

    @property
    def label(self):
        return f"hp({self.p:g})"


@dataclass(frozen=True)
class IsometryReport:
    family: str
    max_gap: float
    tol: float
    gaps: tuple  # (probe index, radius, gap)

    @property
    def passed(self) -> bool:
        return self.max_gap <= self.tol

    def as_record(self) -> dict:
        return {
            "family": self.family,
            "max_gap": self.max_gap,
            "tol": self.tol,
            "passed": self.passed,
        }


def standard_probes(rng=None, count: int = 3, degree: int = 8):
    """The constant, the identity, a square, plus seeded random draws."""
    probes = [TaylorFunction.one(), TaylorFunction.identity(), TaylorFunction.monomial(2)]
    if rng is not None:
        probes.extend(random_taylor(rng, degree) for _ in range(count))
    return probes


def isometry_test(
    op, family, circles: DiscExhaustion, probes, tol: float = 1e-9
) -> IsometryReport:
    """Compare seminorms of probes and their images on every circle."""
    if not probes:
        raise ValueError("probe set must be nonempty")
    apply = _as_apply(op)
    gaps = []
    samples = circles.circle_samples
    for i, f in enumerate(probes):
        g = apply(f)
        q = max(samples, _require_samples(g, None), _require_samples(f, None))
        for r in circles.radii:
            a = family.seminorm(f, r, q)
            b = family.seminorm(g, r, q)
            gaps.append((i, r, abs(a - b)))
    max_gap = max(g for _, _, g in gaps)
    return IsometryReport(family.label, float(max_gap), tol, tuple(gaps))


# ---------------------------------------------------------------------------
# characterization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Characterization:
    scalar_alpha: complex
    scalar_beta: complex
    certificate: dict

    def as_record(self) -> dict:
        rec = {
            "alpha": self.scalar_alpha,
            "beta": self.scalar_beta,
        }
        rec.update({f"certificate.{k}": v for k, v in sorted(self.certificate.items())})
        return rec


def characterize_isometry(
    op,
    circles: DiscExhaustion,
    family,
    tol: float = 1e-10,
    rng=None,
) -> Characterization:
    """Identify an isometry as a coefficient rotation and certify it.

    Mirrors the uniqueness argument: the image of the constant must have
    a flat mean curve across the first two radii, must be constant as a
    coefficient vector (relative tail mass below 1e-10), and unimodular;
    the normalized image of the identity must keep three sampled circles
    inside themselves, be linear, and have unimodular slope.  The final
    certificate replays the recovered rotation against random probes.
    Callers are expected to have run isometry_test; a non-isometry fails
    at whichever step first exposes it.

    Raises NotCharacterizable naming the failing check.  For the p = 2
    mean family the certificate carries no_theorem_guarantee = True: the
    computation runs identically but no uniqueness theorem backs it.
    """
    apply = _as_apply(op)
    cert: dict = {}
    if isinstance(family, HpFamily) and family.p == 2:
        cert["no_theorem_guarantee"] = True

    g0 = apply(TaylorFunction.one())
    q = max(circles.circle_samples, _require_samples(g0, None))

    if len(circles.radii) >= 2:
        v1 = family.seminorm(g0, circles.radii[0], q)
        v2 = family.seminorm(g0, circles.radii[1], q)
        cert["mean_flatness_gap"] = abs(v1 - v2)
        if abs(v1 - v2) > tol * max(1.0, v1):
            raise NotCharacterizable(
                "mean-flatness", f"means {v1:g} and {v2:g} differ across radii"
            )

    c0 = g0.array
    tail = float(np.linalg.norm(c0[1:])) if c0.size > 1 else 0.0
    scale = max(float(np.abs(c0[0])), 1e-300)
    cert["constancy_tail"] = tail / scale
    if tail / scale > 1e-10:
        raise NotCharacterizable(
            "constancy", f"image of the constant has relative tail mass {tail / scale:g}"
        )
    alpha = complex(c0[0])
    cert["alpha_modulus_gap"] = abs(abs(alpha) - 1.0)
    if abs(abs(alpha) - 1.0) > tol:
        raise NotCharacterizable(
            "unimodularity", f"|alpha| = {abs(alpha):g} is not 1"
        )

    phi = apply(TaylorFunction.identity()).scaled(np.conj(alpha))
    qphi = max(circles.circle_samples, _require_samples(phi, None))
    circle_gap = 0.0
    for r in circles.radii[:3]:
        vals = np.abs(_circle_values(phi, r, qphi))
        circle_gap = max(circle_gap, float(np.max(np.abs(vals - r))))
    cert["circle_preservation_gap"] = circle_gap
    if circle_gap > max(tol, 1e-9):
        raise NotCharacterizable(
            "circle-preservation", f"sampled circles move by {circle_gap:g}"
        )

    cphi = phi.array
    linear_tail = float(
        np.sqrt(abs(cphi[0]) ** 2 + float(np.sum(np.abs(cphi[2:]) ** 2)))
    ) if cphi.size > 1 else float(np.abs(cphi[0]))
    cert["linearity_gap"] = linear_tail
    if cphi.size < 2 or linear_tail > max(tol, 1e-10):
        raise NotCharacterizable(
            "linearity", f"normalized identity image is not a multiple of z"
        )
    beta = complex(cphi[1])
    cert["beta_modulus_gap"] = abs(abs(beta) - 1.0)
    if abs(abs(beta) - 1.0) > tol:
        raise NotCharacterizable("beta-unimodularity", f"|beta| = {abs(beta):g}")

    rng = np.random.default_rng(0) if rng is None else rng
    model = RotationOperator(alpha / abs(alpha), beta / abs(beta))
    recon_gap = 0.0
    for f in standard_probes(rng, count=3, degree=8):
        got = apply(f)
        want = model.apply(f)
        n = max(got.degree, want.degree) + 1
        a = np.zeros(n, dtype=complex)
        b = np.zeros(n, dtype=complex)
        a[: got.degree + 1] = got.array
        b[: want.degree + 1] = want.array
        recon_gap = max(recon_gap, float(np.max(np.abs(a - b))))
    cert["reconstruction_gap"] = recon_gap
    if recon_gap > max(tol, 1e-9):
        raise NotCharacterizable(
            "reconstruction", f"operator deviates from the rotation by {recon_gap:g}"
        )
    return Characterization(alpha, beta, cert)


# ---------------------------------------------------------------------------
# three-circle inequality
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThreeCircleReport:
    lhs: float
    rhs: float
    slack: float
    rigidity_flag: bool
    monomial: bool

    def as_record(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "rigidity_flag": self.rigidity_flag,
            "monomial": self.monomial,
        }


def three_circle_check(
    f: TaylorFunction,
    r1: float,
    r2: float,
    r3: float,
    samples: int | None = None,
    rigidity_tol: float = 1e-10,
) -> ThreeCircleReport:
    """Log-convexity of the circle maxima across three nested radii.

    slack = rhs - lhs of
        log(r3/r1) log M(r2) <= log(r3/r2) log M(r1) + log(r2/r1) log M(r3)
    and is nonnegative up to machine error; the rigidity flag marks
    equality within rigidity_tol, which happens exactly for monomials.
    The report also carries the coefficient-level monomial test so
    callers can compare the two.
    """
    if not 0 < r1 < r2 < r3 < 1:
        raise ValueError("radii must satisfy 0 < r1 < r2 < r3 < 1")
    ms = [sup_seminorm(f, r, samples=samples, refine=True) for r in (r1, r2, r3)]
    if min(ms) == 0.0:
        raise ValueError("function vanishes on a sampled circle (zero function?)")
    l1, l2, l3 = (np.log(m) for m in ms)
    lhs = float(np.log(r3 / r1) * l2)
    rhs = float(np.log(r3 / r2) * l1 + np.log(r2 / r1) * l3)
    slack = rhs - lhs
    mags = np.abs(f.array)
    monomial = int(np.sum(mags > 1e-10 * float(np.max(mags)))) == 1
    return ThreeCircleReport(lhs, rhs, float(slack), bool(abs(slack) <= rigidity_tol), monomial)
