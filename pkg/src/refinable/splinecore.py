"""Box splines and refinement-equation numerics.

Fourier side: exact/enclosure evaluation of the box-spline transform
prod_j (1 - exp(-2 pi i xi.m_j)) / (2 pi i xi.m_j), truncated products
of mask polynomials, and integer-dilation masks expanded exactly.

Time side: direct convolution of scaled indicators as the ground-truth
spline evaluator, and the cascade fixed-point iteration
f_{k+1}(x) = sum_j c_j f_k(lambda x - d_j) on a uniform grid with linear
interpolation, which approximates the distribution solution supported
in [d_0/(lambda-1), d_N/(lambda-1)].

Grid computations are float64/numpy with fixed summation order, so
outputs are deterministic for fixed inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from typing import Optional, Sequence, Union

import numpy as np
from mpmath import iv

from .errors import (
    Divergence,
    GridTooCoarse,
    InvalidLambda,
    NonIntegerMatrix,
    RankDeficient,
)
from .exactreal import (
    FieldDescriptor,
    FieldElement,
    _iv_fraction,
    _iv_prec,
)
from .qtrig import ComplexBall, QTrigPoly

ExactScalar = Union[int, Fraction, FieldElement]

_trapz = getattr(np, "trapezoid", None) or np.trapz


# ---------------------------------------------------------------------------
# direction matrices


class BoxSplineSpec:
    """An s x n direction matrix of field elements with full rank s.

    ``columns[j]`` is the j-th direction m_j (a length-s tuple).  Rank is
    checked by exact Gaussian elimination over the field.
    """

    __slots__ = ("desc", "s", "columns")

    def __init__(self, desc: FieldDescriptor, columns: Sequence[Sequence[ExactScalar]]):
        cols = []
        for col in columns:
            vec = tuple(x if isinstance(x, FieldElement) else desc.rational(Fraction(x))
                        for x in col)
            if all(x.is_zero for x in vec):
                raise RankDeficient("zero column in direction matrix")
            cols.append(vec)
        if not cols:
            raise RankDeficient("empty direction matrix")
        s = len(cols[0])
        if any(len(c) != s for c in cols):
            raise ValueError("columns have inconsistent dimension")
        self.desc = desc
        self.s = s
        self.columns = tuple(cols)
        if _rank(cols, s, desc) != s:
            raise RankDeficient(f"direction matrix has rank < {s}")

    @staticmethod
    def univariate(desc: FieldDescriptor, directions: Sequence[ExactScalar]) -> "BoxSplineSpec":
        return BoxSplineSpec(desc, [[d] for d in directions])

    @property
    def n(self) -> int:
        return len(self.columns)

    def directions_1d(self) -> tuple[FieldElement, ...]:
        if self.s != 1:
            raise ValueError("not a univariate spec")
        return tuple(col[0] for col in self.columns)

    def is_integer_matrix(self) -> bool:
        return all(x.is_integer for col in self.columns for x in col)

    def __repr__(self) -> str:
        cols = "; ".join(",".join(x.to_text() for x in col) for col in self.columns)
        return f"BoxSplineSpec(s={self.s}, columns=[{cols}])"


def _rank(cols, s: int, desc: FieldDescriptor) -> int:
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(s)]
    rank = 0
    col = 0
    n = len(cols)
    while rank < s and col < n:
        piv = next((r for r in range(rank, s) if not rows[r][col].is_zero), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col].inverse()
        rows[rank] = [v * inv for v in rows[rank]]
        for r in range(s):
            if r != rank and not rows[r][col].is_zero:
                f = rows[r][col]
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


# ---------------------------------------------------------------------------
# masks


class MaskSpec:
    """A dilation lambda > 1 with a normalized mask polynomial H, H(0) = 1.

    The refinement coefficients are c_j = lambda * h_j (so that
    sum_j c_j = lambda exactly) and the translations d_j are the sorted
    exponents of H.
    """

    __slots__ = ("lam", "H")

    def __init__(self, lam: FieldElement, H: QTrigPoly):
        if not isinstance(lam, FieldElement):
            lam = H.desc.rational(Fraction(lam))
        if not lam > 1:
            raise InvalidLambda("mask dilation must be > 1")
        if H.coefficient_sum() != 1:
            raise ValueError("mask must satisfy H(0) = sum h_j = 1")
        self.lam = lam
        self.H = H

    @property
    def desc(self) -> FieldDescriptor:
        return self.H.desc

    @property
    def translations(self) -> tuple[FieldElement, ...]:
        return self.H.exponents()

    @property
    def mask_coefficients(self) -> tuple[Fraction, ...]:
        return tuple(self.H.terms[d] for d in self.translations)

    @property
    def refinement_coefficients(self) -> tuple[FieldElement, ...]:
        return tuple(self.lam * h for h in self.mask_coefficients)

    def support(self) -> tuple[FieldElement, FieldElement]:
        """[d_0/(lambda-1), d_N/(lambda-1)], the solution support hull."""
        d = self.translations
        lm1 = self.lam - 1
        return d[0] / lm1, d[-1] / lm1

    def to_jsonable(self) -> dict:
        desc = self.desc
        return {
            "field": {"n": desc.n, "k": desc.k},
            "lambda": [str(q) for q in self.lam.coeffs],
            "lambda_text": self.lam.to_text(),
            "terms": [
                {"coefficient": str(c), "exponent": [str(q) for q in d.coeffs],
                 "exponent_text": d.to_text(), "exponent_decimal": f"{float(d):.17g}"}
                for d, c in self.H.items()
            ],
        }

    @staticmethod
    def from_jsonable(data: dict) -> "MaskSpec":
        from .exactreal import field_make

        desc = field_make(data["field"]["n"], data["field"]["k"])
        lam = desc.element([Fraction(q) for q in data["lambda"]])
        terms = {
            desc.element([Fraction(q) for q in t["exponent"]]): Fraction(t["coefficient"])
            for t in data["terms"]
        }
        return MaskSpec(lam, QTrigPoly(desc, terms))

    def __repr__(self) -> str:
        return f"MaskSpec(lambda={self.lam.to_text()}, H={self.H.to_text()})"


def bspline_mask(degree: int, m: int) -> MaskSpec:
    """The cardinal B-spline mask ((1 + z + ... + z^(m-1)) / m)^(degree+1)."""
    from .exactreal import QQ
    from .qtrig import geometric

    if m < 2:
        raise InvalidLambda("integer dilation must be >= 2")
    H = QTrigPoly.constant(QQ)
    for _ in range(degree + 1):
        H = H * geometric(QQ, m, 1)
    return MaskSpec(QQ.rational(m), H.scale(Fraction(1, m ** (degree + 1))))


# ---------------------------------------------------------------------------
# grid functions


class GridFunction:
    """Samples of a function on a uniform grid over [a, b].

    Invariants: b - a = h * (len - 1); all samples finite.  Evaluation
    outside [a, b] returns 0.
    """

    __slots__ = ("a", "b", "h", "samples", "meta")

    def __init__(self, a: float, h: float, samples: np.ndarray,
                 meta: Optional[dict] = None):
        samples = np.asarray(samples, dtype=np.float64)
        if samples.ndim != 1 or len(samples) < 2:
            raise ValueError("need a 1-D grid with at least two samples")
        if not np.all(np.isfinite(samples)):
            raise ValueError("grid samples must be finite")
        self.a = float(a)
        self.h = float(h)
        self.b = float(a) + float(h) * (len(samples) - 1)
        self.samples = samples
        self.meta = dict(meta or {})

    @property
    def x(self) -> np.ndarray:
        return self.a + self.h * np.arange(len(self.samples))

    def __call__(self, x) -> np.ndarray:
        return np.interp(np.asarray(x, dtype=float), self.x, self.samples,
                         left=0.0, right=0.0)

    def integral(self) -> float:
        return float(_trapz(self.samples, dx=self.h))

    def sup_distance(self, other: "GridFunction") -> float:
        """Max abs difference, sampled on this function's grid."""
        return float(np.max(np.abs(self.samples - other(self.x))))

    def to_csv(self, path: str) -> None:
        with open(path, "w") as fh:
            fh.write(f"# a={self.a!r} b={self.b!r} h={self.h!r} "
                     f"n={len(self.samples)}\n")
            fh.write("x,f\n")
            for xv, fv in zip(self.x, self.samples):
                fh.write(f"{float(xv)!r},{float(fv)!r}\n")

    def __repr__(self) -> str:
        return (f"GridFunction([{self.a:.6g}, {self.b:.6g}], h={self.h:.3g}, "
                f"n={len(self.samples)})")


# ---------------------------------------------------------------------------
# Fourier side


def _hat_ball(x: ExactScalar, prec: int) -> ComplexBall:
    """Enclosure of (1 - exp(-2 pi i x)) / (2 pi i x), value 1 at x = 0.

    Near zero (relative to the working precision) the factor is computed
    from the degree-8 Taylor polynomial of (1 - e^(-u)) / u at
    u = 2 pi i x with an explicit remainder bound; this keeps the
    evaluation well-defined across the removable singularity.
    """
    if isinstance(x, FieldElement):
        if x.is_zero:
            return ComplexBall.exact(Fraction(1))
        xb = x.ball(prec)
    else:
        x = Fraction(x)
        if x == 0:
            return ComplexBall.exact(Fraction(1))
        xb = _iv_fraction(x)
    ax = abs(xb)
    if float(ax.b) < 2.0 ** (-prec // 2):
        # sum_{t>=0} (-u)^t / (t+1)!  with u = 2 pi i x
        u = ComplexBall(iv.mpf(0) * xb, 2 * iv.pi * xb)  # u = 2 pi i x
        acc = ComplexBall.exact()
        term = ComplexBall.exact(Fraction(1))
        for t in range(0, 9):
            acc = acc + term.scale(Fraction(1, math.factorial(t + 1)))
            term = term * ComplexBall.exact(Fraction(-1)) * u
        mag_u = float((2 * iv.pi * ax).b)
        rem = mag_u ** 9 / math.factorial(10) / max(1e-9, 1 - mag_u / 11)
        pad = iv.mpf([-rem, rem])
        return ComplexBall(acc.re + pad, acc.im + pad)
    ang = 2 * iv.pi * xb
    one_minus = ComplexBall(1 - iv.cos(ang), iv.sin(ang))  # 1 - e^(-i ang)
    denom = 2 * iv.pi * xb
    # multiply by -i then divide by the real 2 pi x
    return ComplexBall(one_minus.im / denom, -one_minus.re / denom)


def boxspline_ft(spec: BoxSplineSpec, xi: Sequence[ExactScalar],
                 prec: int = 64) -> ComplexBall:
    """Enclosure of the box-spline Fourier transform at a real point xi.

    Floats in xi are taken exactly (they are dyadic rationals), so the
    dot products xi . m_j are exact field elements and the removable
    singularities are detected exactly.
    """
    if np.isscalar(xi) or isinstance(xi, (Fraction, FieldElement)):
        xi = [xi]
    point = [x if isinstance(x, FieldElement) else spec.desc.rational(Fraction(x))
             for x in xi]
    if len(point) != spec.s:
        raise ValueError(f"evaluation point must have dimension {spec.s}")
    wp = prec + 16
    while True:
        with _iv_prec(wp):
            out = ComplexBall.exact(Fraction(1))
            for col in spec.columns:
                dot = spec.desc.zero()
                for xc, mc in zip(point, col):
                    dot = dot + xc * mc
                out = out * _hat_ball(dot, wp)
            if out.radius() <= 2.0 ** (1 - prec) or wp > prec + 1024:
                return out
        wp *= 2


def _longdouble(e) -> np.longdouble:
    if isinstance(e, FieldElement):
        if e.is_rational:
            q = e.coeffs[0]
            return np.longdouble(q.numerator) / np.longdouble(q.denominator)
        import mpmath

        return np.longdouble(mpmath.nstr(e.approx(96), 24))
    q = Fraction(e)
    return np.longdouble(q.numerator) / np.longdouble(q.denominator)


def boxspline_ft_f64(spec: BoxSplineSpec, w: np.ndarray) -> np.ndarray:
    """Fast float64 transform values for a univariate spec."""
    dirs = [_longdouble(d) for d in spec.directions_1d()]
    w_l = np.asarray(w, dtype=np.longdouble)
    out = np.ones(w_l.shape, dtype=np.complex128)
    for d in dirs:
        out *= _hat_f64(d * w_l)
    return out


def _hat_f64(x_l: np.ndarray) -> np.ndarray:
    """(1 - e^(-2 pi i x)) / (2 pi i x) with phase folding in extended
    precision; series branch below |x| = 1e-6."""
    x = np.asarray(x_l, dtype=np.float64)
    small = np.abs(x) < 1e-6
    phase = np.mod(x_l, 1.0).astype(np.float64)
    num = 1.0 - np.exp(-2j * np.pi * phase)
    den = 2j * np.pi * np.where(small, 1.0, x)
    with np.errstate(invalid="ignore"):
        direct = num / den
    u = 2j * np.pi * x
    series = 1.0 - u / 2 + u * u / 6 - u * u * u / 24
    return np.where(small, series, direct)


def fourier_product_eval(mask: MaskSpec, w: ExactScalar, J: int,
                         prec: int = 64) -> ComplexBall:
    """Enclosure of prod_{j=1..J} H(lambda^(-j) w).

    Converges to the transform of the refinement solution as J grows,
    since H(0) = 1.  The product is accumulated in increasing j, so the
    value for J+1 equals the value for J times H(lambda^(-(J+1)) w) as
    computed.
    """
    if J < 1:
        raise ValueError("J must be >= 1")
    desc = mask.desc
    w_e = w if isinstance(w, FieldElement) else desc.rational(Fraction(w))
    term_prec = prec + 8 + max(1, J).bit_length()
    with _iv_prec(term_prec):
        out = ComplexBall.exact(Fraction(1))
        arg = w_e
        for _ in range(J):
            arg = arg / mask.lam
            out = out * mask.H.eval_ball(arg, term_prec)
    return out


def fourier_product_f64(mask: MaskSpec, w: np.ndarray, J: int) -> np.ndarray:
    """Float64 truncated product over an array of real points."""
    lamf = _longdouble(mask.lam)
    w_l = np.asarray(w, dtype=np.longdouble)
    out = np.ones(w_l.shape, dtype=np.complex128)
    terms = [(_longdouble(d), float(c)) for d, c in mask.H.items()]
    arg = w_l.copy()
    for _ in range(J):
        arg = arg / lamf
        h = np.zeros(w_l.shape, dtype=np.complex128)
        for d, c in terms:
            phase = np.mod(d * arg, 1.0).astype(np.float64)
            h += c * np.exp(-2j * np.pi * phase)
        out *= h
    return out


# ---------------------------------------------------------------------------
# time side


def spline_time_eval(spec: BoxSplineSpec, n_samples: int = 2048,
                     step: Optional[float] = None) -> GridFunction:
    """Ground-truth univariate box-spline values by iterated convolution.

    Each direction m contributes the scaled indicator of [min(0,m),
    max(0,m)] with height 1/|m|; the factors are cell-averaged on the
    grid and convolved with trapezoid weighting (np.convolve * h).
    Support is [sum_j min(0, m_j), sum_j max(0, m_j)].
    """
    dirs = [float(d) for d in spec.directions_1d()]
    lo = sum(min(0.0, d) for d in dirs)
    hi = sum(max(0.0, d) for d in dirs)
    h = float(step) if step is not None else (hi - lo) / (n_samples - 1)
    min_dir = min(abs(d) for d in dirs)
    if h > min_dir / 8:
        raise GridTooCoarse(f"step {h:.3g} > min|m_j|/8 = {min_dir / 8:.3g}")

    def indicator_cells(m: float) -> tuple[float, np.ndarray]:
        a, b = min(0.0, m), max(0.0, m)
        n = int(math.ceil((b - a) / h)) + 1
        xs = a + h * np.arange(n + 1)
        left = np.clip(xs - h / 2, a, b)
        right = np.clip(xs + h / 2, a, b)
        vals = (right - left) / h / (b - a)
        return a, vals

    origin, acc = indicator_cells(dirs[0])
    for d in dirs[1:]:
        o, cells = indicator_cells(d)
        acc = np.convolve(acc, cells) * h
        origin += o
    return GridFunction(origin, h, acc, meta={"kind": "convolution-oracle"})


def cascade_solve(mask: MaskSpec, grid_size: int = 1024, iters: int = 30,
                  renormalize: bool = True, pad: float = 0.0) -> GridFunction:
    """Cascade iteration f <- sum_j c_j f(lambda x - d_j) on a grid.

    Starts from the normalized indicator of the support interval,
    reads off-grid values by linear interpolation (0 outside), and by
    default renormalizes the discrete integral to 1 each step.  The
    returned metadata records the sup-norm residual between the last two
    iterates and the per-step integral drift.  Residuals growing 10x
    over 5 consecutive steps raise Divergence.
    """
    lamf = float(mask.lam)
    if lamf <= 1:
        raise InvalidLambda("cascade needs lambda > 1 numerically")
    dsup = mask.support()
    A, B = float(dsup[0]), float(dsup[1])
    if pad:
        span = B - A
        A -= pad * span
        B += pad * span
    h = (B - A) / (grid_size - 1)
    x = A + h * np.arange(grid_size)
    sup_lo, sup_hi = float(dsup[0]), float(dsup[1])
    inside = (x >= sup_lo - 1e-12) & (x <= sup_hi + 1e-12)
    f = np.where(inside, 1.0 / (sup_hi - sup_lo), 0.0)
    coeffs = [(float(c), float(d))
              for c, d in zip(mask.refinement_coefficients, mask.translations)]

    residuals: list[float] = []
    drifts: list[float] = []
    integrals: list[float] = []
    for it in range(iters):
        # sum_j c_j = lambda, so the operator preserves the integral
        new = np.zeros_like(f)
        for c, d in coeffs:
            new += c * np.interp(lamf * x - d, x, f, left=0.0, right=0.0)
        integral = float(_trapz(new, dx=h))
        drifts.append(abs(integral - 1.0))
        if renormalize and integral != 0:
            new = new / integral
        integrals.append(float(_trapz(new, dx=h)))
        residuals.append(float(np.max(np.abs(new - f))))
        f = new
        if (len(residuals) >= 6 and residuals[-1] > 10 * residuals[-6]
                and all(residuals[-i] > residuals[-i - 1] for i in range(1, 6))):
            raise Divergence(f"cascade residuals growing at iteration {it}")
    return GridFunction(A, h, f, meta={
        "kind": "cascade",
        "iterations": iters,
        "residual": residuals[-1] if residuals else 0.0,
        "residuals": residuals,
        "integral_drift": drifts,
        "integrals": integrals,
        "support": (sup_lo, sup_hi),
    })

# ---------------------------------------------------------------------------
# integer-dilation box-spline masks


@dataclass(frozen=True)
class MultivariateMask:
    """Mask of an s-variate refinement equation B(x) = sum c_j B(m x - j).

    ``terms`` maps integer translation vectors j to mask coefficients
    h_j with sum h_j = 1; the refinement coefficients are
    c_j = m^s * h_j.
    """

    m: int
    s: int
    terms: dict[tuple[int, ...], Fraction]

    def refinement_coefficient(self, j: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(j), Fraction(0)) * self.m ** self.s

    def to_jsonable(self) -> dict:
        return {
            "dilation": self.m,
            "s": self.s,
            "terms": [
                {"translation": list(j), "h": str(c),
                 "c": str(c * self.m ** self.s)}
                for j, c in sorted(self.terms.items())
            ],
        }


def count_representations(spec: BoxSplineSpec, m: int, j: Sequence[int]) -> int:
    """#{alpha in {0..m-1}^n : M alpha = j}: the refinement coefficient
    of translation j is m^(s-n) times this count.

    Brute-force enumeration; serves as the independent oracle for
    integer_dilation_box_mask (the convention is fixed by the identity
    Bhat(m w) = H(w) Bhat(w), cf. B_0(x) = sum_{t<m} B_0(mx - t)).
    """
    target = tuple(int(v) for v in j)
    cols = [[c.as_integer() for c in col] for col in spec.columns]
    count = 0
    for alpha in iter_product(range(m), repeat=spec.n):
        vec = tuple(sum(a * cols[t][i] for t, a in enumerate(alpha))
                    for i in range(spec.s))
        if vec == target:
            count += 1
    return count


def integer_dilation_box_mask(spec: BoxSplineSpec, m: int):
    """Exact mask of B(x|M) under an integer dilation m >= 2.

    Expands H(w) = m^(-n) prod_j sum_{t=0}^{m-1} exp(-2 pi i t w.m_j).
    Univariate specs give a MaskSpec; s >= 2 gives a MultivariateMask
    whose refinement coefficients c_j = m^s h_j equal
    m^(s-n) #{alpha : M alpha = m j} (cross-checkable with
    count_representations).
    """
    if m < 2:
        raise InvalidLambda("integer dilation must be >= 2")
    if not spec.is_integer_matrix():
        raise NonIntegerMatrix("integer-dilation mask needs an integer matrix")
    if spec.s == 1:
        from .qtrig import geometric

        H = QTrigPoly.constant(spec.desc)
        for d in spec.directions_1d():
            H = H * geometric(spec.desc, m, d)
        return MaskSpec(spec.desc.rational(m), H.scale(Fraction(1, m ** spec.n)))

    terms: dict[tuple[int, ...], Fraction] = {(0,) * spec.s: Fraction(1)}
    for col in spec.columns:
        vec = tuple(c.as_integer() for c in col)
        new: dict[tuple[int, ...], Fraction] = {}
        for d, c in terms.items():
            for t in range(m):
                key = tuple(di + t * vi for di, vi in zip(d, vec))
                new[key] = new.get(key, Fraction(0)) + c
        terms = new
    # each exponent vector d = M alpha is the translation of B(mx - d)
    scale = Fraction(1, m ** spec.n)
    return MultivariateMask(m=m, s=spec.s,
                            terms={d: c * scale for d, c in terms.items()})


# ---------------------------------------------------------------------------
# convolution factorization


@dataclass(frozen=True)
class FactorizationReport:
    """Numeric check that the solution of a non-integer-dilation equation
    factors as alpha * phi(x) * phi(x/lambda) * ... * phi(x/lambda^(k-1)),
    where phi solves the lambda^k equation with coefficients
    c_j lambda^(k-1)."""

    k: int
    alpha: float
    sup_rel_distance: float
    trivial: bool
    grid_size: int
    iters: int
    notes: str = ""

    def to_jsonable(self) -> dict:
        return {
            "k": self.k,
            "alpha": self.alpha,
            "sup_rel_distance": self.sup_rel_distance,
            "trivial": self.trivial,
            "grid_size": self.grid_size,
            "iters": self.iters,
            "notes": self.notes,
        }


def convolution_factorization_check(A: Sequence[FieldElement], lam: FieldElement,
                                    grid_size: int = 4096, iters: int = 30
                                    ) -> FactorizationReport:
    """Check the k-fold convolution factorization for a refinable B(x|A).

    Requires the instance to be accepted by the refinability decision;
    the refutation witness propagates otherwise.  k is the least power
    with lambda^k an integer.  phi is built by cascade iteration of its
    own (integer-dilation lambda^k) equation, the dilated copies are
    convolved on the grid, the scalar alpha is fitted by least squares,
    and the sup-norm relative distance to the direct cascade solution of
    the original equation is reported.
    """
    from .errors import RefinabilityError
    from .refinery import mask_construct_detailed, minimal_integer_power

    mask, witness, _shift = mask_construct_detailed(A, lam)
    if mask is None:
        raise RefinabilityError(
            f"instance is not refinable: {witness.describe()}")
    k = minimal_integer_power(mask.lam)
    if k is None:
        raise RefinabilityError("no power of lambda is an integer")
    if k == 1:
        # integer dilation: the factorization is the identity f = alpha phi
        return FactorizationReport(k=1, alpha=1.0, sup_rel_distance=0.0,
                                   trivial=True, grid_size=grid_size,
                                   iters=iters,
                                   notes="lambda is an integer: f = phi")

    f_direct = cascade_solve(mask, grid_size=grid_size, iters=iters)
    h = f_direct.h
    lamf = float(mask.lam)
    D = lamf ** k

    # phi solves phi(x) = sum_j c_j lambda^(k-1) phi(lambda^k x - d_j); its
    # distribution function G satisfies G(x) = sum_j (c_j/lambda) G(lambda^k x - d_j)
    # and the iteration converges uniformly even when phi has no pointwise
    # density, so phi enters the convolution through exact bin masses.
    trans = [float(d) for d in mask.translations]
    wts = [float(c) / lamf for c in mask.refinement_coefficients]
    A_phi = min(trans) / (D - 1)
    B_phi = max(trans) / (D - 1)
    xg = np.linspace(A_phi, B_phi, grid_size)
    G = np.clip((xg - A_phi) / (B_phi - A_phi), 0.0, 1.0)
    for _ in range(iters):
        new = np.zeros_like(G)
        for w, d in zip(wts, trans):
            new += w * np.interp(D * xg - d, xg, G, left=0.0, right=1.0)
        G = new

    def bin_masses(scale: float) -> np.ndarray:
        count = int(math.floor((B_phi - A_phi) * scale / h)) + 1
        centers = A_phi * scale + np.arange(count) * h
        hi = np.interp(np.minimum((centers + h / 2) / scale, B_phi), xg, G,
                       left=0.0, right=1.0)
        lo = np.interp(np.maximum((centers - h / 2) / scale, A_phi), xg, G,
                       left=0.0, right=1.0)
        return hi - lo

    conv = bin_masses(1.0)
    origin = A_phi
    for r in range(1, k):
        scale = lamf ** r
        conv = np.convolve(conv, bin_masses(scale))
        origin += A_phi * scale
    conv_grid = GridFunction(origin, h, conv / h, meta={"kind": "k-fold convolution"})

    target = f_direct.samples
    probe = conv_grid(f_direct.x)
    denom = float(np.dot(probe, probe))
    alpha = float(np.dot(probe, target) / denom) if denom else 0.0
    dist = float(np.max(np.abs(alpha * probe - target)))
    rel = dist / float(np.max(np.abs(target)))
    return FactorizationReport(k=k, alpha=alpha, sup_rel_distance=rel,
                               trivial=False, grid_size=grid_size, iters=iters)
