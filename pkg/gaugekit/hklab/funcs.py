"""
Catalog of functions with exact evaluation where possible, derivative
metadata, certified moduli and analytic failure sets.

Certificates are supplied per function and never inferred by sampling:

    modulus(x, ε)      radius η with |f(y) - f(x) - f'(x)(y - x)| <= ε|y - x|
                       whenever |y - x| <= η (x off the failure set)
    dini(x)            band n and radius r with |f(y) - f(x)| <= (1 + n)|y - x|
                       whenever |y - x| <= r
    oscillation(cell)  upper bound on sup f - inf f over the cell
    continuity(x, r)   upper bound on |f(y) - f(x)| for |y - x| <= r
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from math import floor, isqrt
from typing import Callable, Dict, List, Optional, Tuple

import mpmath

from .conf import lab_setting
from .core import ONE, ZERO, Iv, RatLike, ValueWithError, parse_rat
from .exceptions import DomainError, UndecidedMembershipError, UnknownNameError, UnsupportedInstanceError
from .sets import (CANTOR, EMPTY, REFLECTED_CANTOR, SVC, Complement, FiniteSet, GapCentres, GeneratedSet,
                   Location, LocationKind, OpenInterval, PointSet, UnionSet, distance, locate)

logger = logging.getLogger(__name__)


class FailureKind(str, Enum):
    EMPTY = 'empty'
    FINITE = 'finite'
    GENERATED = 'generated'
    NULL_SET_WITH_CERTIFICATE = 'null_set_with_certificate'


@dataclass(frozen=True)
class FailureSet:

    """
        Points where the derivative is undefined, as an exact predicate
    """

    kind: FailureKind
    region: PointSet

    @classmethod
    def empty(cls) -> 'FailureSet':
        return cls(FailureKind.EMPTY, EMPTY)

    @classmethod
    def finite(cls, *points: RatLike) -> 'FailureSet':
        return cls(FailureKind.FINITE, FiniteSet.of(*points))

    def contains(self, x: Fraction) -> bool:
        return self.region.contains(x)

    def union(self, other: 'FailureSet') -> 'FailureSet':
        if self.kind is FailureKind.EMPTY:
            return other
        if other.kind is FailureKind.EMPTY:
            return self
        if self.kind is FailureKind.FINITE and other.kind is FailureKind.FINITE:
            return FailureSet.finite(*(self.region.points + other.region.points))
        return FailureSet(FailureKind.NULL_SET_WITH_CERTIFICATE, UnionSet((self.region, other.region)))


@dataclass(frozen=True)
class DiniCertificate:
    band: int
    radius: Fraction


Evaluator = Callable[[Fraction, int], ValueWithError]
PointFn = Callable[[Fraction], ValueWithError]
ModulusFn = Callable[[Fraction, Fraction], Fraction]
DiniFn = Callable[[Fraction], DiniCertificate]
OscillationFn = Callable[[Iv], Fraction]
ContinuityFn = Callable[[Fraction, Fraction], Fraction]


@dataclass(frozen=True)
class FnSpec:

    """
        A catalog function on a closed domain

        ``critical`` is the certified set where the derivative vanishes.
    """

    name: str
    domain: Iv
    evaluate: Evaluator
    exact: bool = True
    deriv: Optional[PointFn] = None
    failure_set: FailureSet = field(default_factory=FailureSet.empty)
    modulus: Optional[ModulusFn] = None
    dini: Optional[DiniFn] = None
    oscillation: Optional[OscillationFn] = None
    continuity: Optional[ContinuityFn] = None
    antiderivative: Optional['FnSpec'] = None
    critical: PointSet = EMPTY

    def __call__(self, x: RatLike, precision: Optional[int] = None) -> ValueWithError:

        """
            Evaluate at x

            :param x: Point of the domain
            :type x: Fraction
            :param precision: Working precision in bits of inexact functions
            :type precision: int

            :return: The value and its error bound
            :rtype: ValueWithError
        """

        x = parse_rat(x)
        if not self.domain.contains(x):
            raise DomainError(f"{self.name} is not defined at {x} (domain {self.domain})", witness=x)
        return self.evaluate(x, precision or lab_setting('PRECISION_BITS'))

    def value(self, x: RatLike) -> Fraction:
        result: ValueWithError = self(x)
        if not result.exact:
            raise UnsupportedInstanceError(f"{self.name}({x}) has no exact value")
        return result.value

    def differentiable_at(self, x: Fraction) -> bool:
        return self.deriv is not None and not self.failure_set.contains(x)

    def derivative(self) -> 'FnSpec':

        """
            The derivative as a function on the whole domain; it takes the
            value 0, flagged ``convention``, on the failure set

            :return: Derivative function
            :rtype: FnSpec
        """

        if self.deriv is None:
            raise UnsupportedInstanceError(f"{self.name} has no derivative certificate")
        deriv: PointFn = self.deriv
        failure: FailureSet = self.failure_set

        def evaluate(x: Fraction, precision: int) -> ValueWithError:
            if failure.contains(x):
                return ValueWithError(ZERO, convention=True)
            return deriv(x)

        return FnSpec(f"{self.name}'", self.domain, evaluate, exact=self.exact, failure_set=failure)

    def zero_on(self, region: PointSet) -> 'FnSpec':

        """
            Same function, replaced by the convention value 0 on the region
        """

        inner: FnSpec = self

        def evaluate(x: Fraction, precision: int) -> ValueWithError:
            if region.contains(x):
                return ValueWithError(ZERO, convention=True)
            return inner.evaluate(x, precision)

        return FnSpec(f"{self.name}|0 on {region.name}", self.domain, evaluate, exact=self.exact,
                      failure_set=self.failure_set)

    def restricted_to(self, domain: Iv) -> 'FnSpec':
        if not self.domain.covers(domain):
            raise DomainError(f"{domain} is not inside the domain {self.domain} of {self.name}", witness=domain)
        return replace(self, domain=domain)

    def require(self, certificate: str) -> None:
        if getattr(self, certificate) is None:
            raise UnsupportedInstanceError(f"{self.name} has no {certificate} certificate")


@dataclass(frozen=True)
class Preimage(PointSet):

    """
        {x : inner(x) ∈ target}
    """

    inner: FnSpec
    target: PointSet

    @property
    def name(self) -> str:
        return f"{self.inner.name}⁻¹({self.target.name})"

    @property
    def is_null(self) -> bool:
        return False

    def contains(self, x: Fraction) -> bool:
        if not self.inner.domain.contains(x):
            return False
        value: ValueWithError = self.inner(x)
        if value.exact:
            return self.target.contains(value.value)
        #An inexact value decides membership only when the target misses its whole bracket
        if not self.target.points_in(Iv(value.lower, value.upper)) and not self.target.contains(value.value):
            return False
        raise UndecidedMembershipError(f"cannot decide whether {self.inner.name}({x}) lies in {self.target.name}",
                                       witness=x)


def _cantor_digits(x: Fraction) -> Fraction:

    """
        Cantor function by base-3 digits: stop at the first digit 1, read
        the 2s as binary 1s. A repeated remainder closes the expansion as
        a geometric series.
    """

    if x == 1:
        return ONE

    result: Fraction = ZERO
    weight: Fraction = Fraction(1, 2)
    seen: Dict[Fraction, Tuple[int, Fraction]] = {}
    step: int = 0
    while x != 0:
        if x in seen:
            start, partial = seen[x]
            period: int = step - start
            return partial + (result - partial) / (1 - Fraction(1, 2 ** period))
        seen[x] = (step, result)

        x *= 3
        digit: int = floor(x)
        x -= digit
        if digit == 1:
            return result + weight
        if digit == 2:
            result += weight
        weight /= 2
        step += 1
    return result


def _holder_bound(r: Fraction) -> Fraction:
    #An interval of length <= 3^-k meets at most two depth-k cells, each carrying 2^-k
    if r == 0:
        return ZERO
    k: int = 0
    while Fraction(1, 3 ** (k + 1)) >= r:
        k += 1
    return min(ONE, Fraction(2, 2 ** k))


def _gap_slack(generated: GeneratedSet, x: Fraction) -> Fraction:
    location: Location = locate(generated, x)
    if location.kind is not LocationKind.GAP:
        raise UnsupportedInstanceError(f"{x} is not in a removed gap of {generated.name}")
    return min(x - location.interval.lo, location.interval.hi - x)


def cantor_fn(x: RatLike) -> Fraction:

    """
        Cantor-Lebesgue function c on [0, 1]

        :param x: Point of [0, 1]
        :type x: Fraction

        :return: Exact value c(x)
        :rtype: Fraction
    """

    x = parse_rat(x)
    if not 0 <= x <= 1:
        raise DomainError(f"cantor_fn is not defined at {x}", witness=x)
    return _cantor_digits(x)


def cantor_abs(x: RatLike) -> Fraction:
    x = parse_rat(x)
    if not -1 <= x <= 1:
        raise DomainError(f"cantor_abs is not defined at {x}", witness=x)
    return _cantor_digits(abs(x))


def svc_dist_fn(x: RatLike) -> ValueWithError:
    x = parse_rat(x)
    if not 0 <= x <= 1:
        raise DomainError(f"svc_dist_fn is not defined at {x}", witness=x)
    return distance(SVC, x)


def _exact_fourth_root(value: int) -> Optional[int]:
    square: int = isqrt(value)
    if square * square != value:
        return None
    root: int = isqrt(square)
    return root if root * root == square else None


def _from_mpf(value: mpmath.mpf) -> Fraction:
    mantissa, exponent = value.man_exp
    if exponent >= 0:
        return Fraction(int(mantissa) * 2 ** exponent)
    return Fraction(int(mantissa), 2 ** -exponent)


def quartic_root(x: RatLike, precision: Optional[int] = None) -> ValueWithError:

    """
        Fourth root with a certified error bound

        Exact when numerator and denominator are fourth powers. Otherwise
        mpmath computes the root and the bound u is certified exactly by
        (r - u)^4 <= x <= (r + u)^4.

        :param x: Nonnegative rational
        :type x: Fraction
        :param precision: Bits of the error bound
        :type precision: int

        :return: The root within 2^-precision (or exact)
        :rtype: ValueWithError
    """

    x = parse_rat(x)
    if x < 0:
        raise DomainError(f"quartic_root is not defined at {x}", witness=x)
    if x == 0:
        return ValueWithError(ZERO)

    numerator: Optional[int] = _exact_fourth_root(x.numerator)
    denominator: Optional[int] = _exact_fourth_root(x.denominator)
    if numerator is not None and denominator is not None:
        return ValueWithError(Fraction(numerator, denominator))

    bits: int = precision or lab_setting('PRECISION_BITS')
    with mpmath.workprec(bits + 16):
        root: Fraction = _from_mpf(mpmath.root(mpmath.mpf(x.numerator) / x.denominator, 4))

    error: Fraction = Fraction(1, 2 ** bits)
    while not (max(root - error, ZERO) ** 4 <= x <= (root + error) ** 4):
        error *= 2
    return ValueWithError(root, error)


def _quartic_derivative(x: Fraction) -> ValueWithError:
    root: ValueWithError = quartic_root(x)
    upper: Fraction = 1 / (4 * root.lower ** 3)
    lower: Fraction = 1 / (4 * root.upper ** 3)
    return ValueWithError((upper + lower) / 2, (upper - lower) / 2)


def _quartic_modulus(x: Fraction, eps: Fraction) -> Fraction:
    #|F''| <= (3/16)(x/2)^(-7/4) on [x/2, 3x/2]; Taylor gives η = (32ε/3)(x/2)^(7/4)
    half: Fraction = x / 2
    scale: Fraction = half * quartic_root(half ** 3).lower
    return min(half, 32 * eps * scale / 3, ONE)


def _quartic_dini(x: Fraction) -> DiniCertificate:
    if x == 0:
        raise UnsupportedInstanceError("quartic_root has an infinite Dini derivative at 0")
    lipschitz: Fraction = _quartic_derivative(x / 2).upper
    return DiniCertificate(floor(lipschitz), x / 2)


def _quartic_oscillation(cell: Iv) -> Fraction:
    return quartic_root(max(cell.hi, ZERO)).upper - quartic_root(max(cell.lo, ZERO)).lower


def _quartic_continuity(x: Fraction, r: Fraction) -> Fraction:
    return quartic_root(r).upper


def monomial(coefficient: RatLike, power: int, name: Optional[str] = None, domain: Iv = Iv(-4, 4)) -> FnSpec:

    """
        c·x^k; certificates are provided for k <= 2

        :param coefficient: Coefficient c
        :type coefficient: Fraction
        :param power: Exponent k >= 0
        :type power: int
        :param name: Catalog name
        :type name: str
        :param domain: Domain of the function
        :type domain: Iv

        :return: Function with its derivative data
        :rtype: FnSpec
    """

    c: Fraction = parse_rat(coefficient)
    k: int = power
    label: str = name or (str(c) if k == 0 else f"{c}*x^{k}")

    def evaluate(x: Fraction, precision: int) -> ValueWithError:
        return ValueWithError(c * x ** k)

    def deriv(x: Fraction) -> ValueWithError:
        return ValueWithError(k * c * x ** (k - 1) if k > 0 else ZERO)

    antiderivative: FnSpec = FnSpec(
        f"∫{label}", domain, lambda x, precision: ValueWithError(c * x ** (k + 1) / (k + 1))
    )
    if k > 2:
        return FnSpec(label, domain, evaluate, deriv=deriv, antiderivative=antiderivative)

    def modulus(x: Fraction, eps: Fraction) -> Fraction:
        #The Taylor remainder of c·x² is c(y - x)²
        if k < 2 or c == 0:
            return ONE
        return min(ONE, eps / abs(c))

    def dini(x: Fraction) -> DiniCertificate:
        if k < 2:
            return DiniCertificate(floor(abs(c)) if k == 1 else 0, ONE)
        band: int = floor(abs(2 * c * x))
        if c == 0:
            return DiniCertificate(0, ONE)
        return DiniCertificate(band, min(ONE, (1 + band - abs(2 * c * x)) / abs(c)))

    def oscillation(cell: Iv) -> Fraction:
        if k == 0:
            return ZERO
        if k == 1:
            return abs(c) * cell.length
        low: Fraction = ZERO if cell.lo <= 0 <= cell.hi else min(cell.lo ** 2, cell.hi ** 2)
        return abs(c) * (max(cell.lo ** 2, cell.hi ** 2) - low)

    def continuity(x: Fraction, r: Fraction) -> Fraction:
        if k == 0:
            return ZERO
        if k == 1:
            return abs(c) * r
        return abs(c) * (2 * abs(x) + r) * r

    critical: PointSet = EMPTY
    if k == 0 or c == 0:
        critical = OpenInterval(domain.lo, domain.hi, name=f"int{domain}")
    elif k == 2:
        critical = FiniteSet.of(0)

    return FnSpec(
        label, domain, evaluate, deriv=deriv, modulus=modulus, dini=dini, oscillation=oscillation,
        continuity=continuity, antiderivative=antiderivative, critical=critical,
    )


def constant(value: RatLike, domain: Iv = Iv(-4, 4)) -> FnSpec:
    c: Fraction = parse_rat(value)
    return monomial(c, 0, name=str(c), domain=domain)


def _piecewise_constant_off(generated: GeneratedSet, name: str, fn: Callable[[Fraction], Fraction]) -> FnSpec:

    """
        A continuous monotone-on-halves function that is constant on every
        removed gap of ``generated``
    """

    def evaluate(x: Fraction, precision: int) -> ValueWithError:
        return ValueWithError(fn(x))

    def deriv(x: Fraction) -> ValueWithError:
        return ValueWithError(ZERO)

    def modulus(x: Fraction, eps: Fraction) -> Fraction:
        return min(_gap_slack(generated, x), ONE)

    def dini(x: Fraction) -> DiniCertificate:
        return DiniCertificate(0, min(_gap_slack(generated, x), ONE))

    def oscillation(cell: Iv) -> Fraction:
        if cell.lo >= 0 or cell.hi <= 0:
            return abs(fn(cell.hi) - fn(cell.lo))
        return max(fn(cell.lo), fn(cell.hi)) - fn(ZERO)

    def continuity(x: Fraction, r: Fraction) -> Fraction:
        return _holder_bound(r)

    return FnSpec(
        name, generated.base, evaluate, deriv=deriv,
        failure_set=FailureSet(FailureKind.GENERATED, generated),
        modulus=modulus, dini=dini, oscillation=oscillation, continuity=continuity,
        critical=Complement(generated),
    )


def _svc_deriv(x: Fraction) -> ValueWithError:
    location: Location = locate(SVC, x)
    if location.kind is not LocationKind.GAP:
        raise UnsupportedInstanceError(f"svc_dist_fn has no derivative at {x}")
    return ValueWithError(ONE if x < location.interval.midpoint else -ONE)


def _svc_modulus(x: Fraction, eps: Fraction) -> Fraction:
    #Linear on each half of a gap
    location: Location = locate(SVC, x)
    if location.kind is not LocationKind.GAP:
        raise UnsupportedInstanceError(f"svc_dist_fn has no modulus at {x}")
    gap: Iv = location.interval
    return min(abs(x - gap.midpoint), x - gap.lo, gap.hi - x, ONE)


SVC_DIST: FnSpec = FnSpec(
    'svc_dist_fn', SVC.base, lambda x, precision: distance(SVC, x),
    deriv=_svc_deriv,
    failure_set=FailureSet(FailureKind.GENERATED, UnionSet((SVC, GapCentres(SVC)))),
    modulus=_svc_modulus,
    dini=lambda x: DiniCertificate(1, ONE),
    oscillation=lambda cell: cell.length,
    continuity=lambda x, r: r,
)

QUARTIC_ROOT: FnSpec = FnSpec(
    'quartic_root', Iv(0, 4), lambda x, precision: quartic_root(x, precision),
    exact=False,
    deriv=_quartic_derivative,
    failure_set=FailureSet.finite(0),
    modulus=_quartic_modulus,
    dini=_quartic_dini,
    oscillation=_quartic_oscillation,
    continuity=_quartic_continuity,
)

def _abs_oscillation(cell: Iv) -> Fraction:
    if cell.lo <= 0 <= cell.hi:
        return max(-cell.lo, cell.hi)
    return abs(abs(cell.hi) - abs(cell.lo))


ABS: FnSpec = FnSpec(
    'abs', Iv(-4, 4), lambda x, precision: ValueWithError(abs(x)),
    deriv=lambda x: ValueWithError(ONE if x > 0 else -ONE),
    failure_set=FailureSet.finite(0),
    modulus=lambda x, eps: min(abs(x), ONE),
    dini=lambda x: DiniCertificate(1, ONE),
    oscillation=_abs_oscillation,
    continuity=lambda x, r: r,
)

CANTOR_FN: FnSpec = _piecewise_constant_off(CANTOR, 'cantor_fn', cantor_fn)
CANTOR_ABS: FnSpec = _piecewise_constant_off(REFLECTED_CANTOR, 'cantor_abs', cantor_abs)


def _value_in(outer: FnSpec, value: ValueWithError, x: Fraction) -> None:
    if not outer.domain.contains(value.value):
        raise DomainError(f"{outer.name} is not defined at the inner value {value.value} (from {x})", witness=x)


def compose(outer: FnSpec, inner: FnSpec) -> FnSpec:

    """
        outer ∘ inner with error propagation and chain-rule certificates

        :param outer: Applied second
        :type outer: FnSpec
        :param inner: Applied first
        :type inner: FnSpec

        :return: The composition on the inner domain
        :rtype: FnSpec
    """

    if outer is IDENTITY:
        return replace(inner, name=f"identity∘{inner.name}")

    def evaluate(x: Fraction, precision: int) -> ValueWithError:
        inner_value: ValueWithError = inner.evaluate(x, precision)
        _value_in(outer, inner_value, x)
        result: ValueWithError = outer.evaluate(inner_value.value, precision)
        if inner_value.exact:
            return result
        if outer.continuity is None:
            raise UnsupportedInstanceError(f"{outer.name} has no continuity certificate to absorb an inner error")
        return ValueWithError(result.value, result.error + outer.continuity(inner_value.value, inner_value.error))

    def exact_inner(x: Fraction) -> Fraction:
        inner_value: ValueWithError = inner(x)
        if not inner_value.exact:
            raise UnsupportedInstanceError(f"{inner.name}({x}) is not exact")
        _value_in(outer, inner_value, x)
        return inner_value.value

    deriv: Optional[PointFn] = None
    if outer.deriv is not None and inner.deriv is not None:
        def deriv(x: Fraction) -> ValueWithError:
            return outer.deriv(exact_inner(x)) * inner.deriv(x)

    modulus: Optional[ModulusFn] = None
    if outer.modulus is not None and inner.modulus is not None and deriv is not None:
        def modulus(x: Fraction, eps: Fraction) -> Fraction:
            gx: Fraction = exact_inner(x)
            k: Fraction = abs(outer.deriv(gx)).upper + 1
            eps_inner: Fraction = min(eps / (2 * k), ONE)
            lipschitz: Fraction = abs(inner.deriv(x)).upper + eps_inner
            eps_outer: Fraction = eps / (2 * lipschitz)
            return min(inner.modulus(x, eps_inner), outer.modulus(gx, eps_outer) / lipschitz)

    dini: Optional[DiniFn] = None
    if outer.dini is not None and inner.dini is not None:
        def dini(x: Fraction) -> DiniCertificate:
            inner_cert: DiniCertificate = inner.dini(x)
            outer_cert: DiniCertificate = outer.dini(exact_inner(x))
            return DiniCertificate(
                (1 + outer_cert.band) * (1 + inner_cert.band) - 1,
                min(inner_cert.radius, outer_cert.radius / (1 + inner_cert.band)),
            )

    oscillation: Optional[OscillationFn] = None
    if outer.oscillation is not None and inner.oscillation is not None:
        def oscillation(cell: Iv) -> Fraction:
            centre: ValueWithError = inner(cell.midpoint)
            spread: Fraction = inner.oscillation(cell) + centre.error
            lo: Fraction = max(centre.value - spread, outer.domain.lo)
            hi: Fraction = min(centre.value + spread, outer.domain.hi)
            return outer.oscillation(Iv(lo, hi))

    continuity: Optional[ContinuityFn] = None
    if outer.continuity is not None and inner.continuity is not None:
        def continuity(x: Fraction, r: Fraction) -> Fraction:
            gx: ValueWithError = inner(x)
            return outer.continuity(gx.value, inner.continuity(x, r) + gx.error)

    failure: FailureSet = inner.failure_set
    if outer.failure_set.kind is not FailureKind.EMPTY:
        failure = failure.union(FailureSet(FailureKind.NULL_SET_WITH_CERTIFICATE,
                                           Preimage(inner, outer.failure_set.region)))

    critical: PointSet = inner.critical
    if outer.critical is not EMPTY:
        critical = UnionSet((inner.critical, Preimage(inner, outer.critical)))

    return FnSpec(
        f"{outer.name}∘{inner.name}", inner.domain, evaluate,
        exact=outer.exact and inner.exact, deriv=deriv, failure_set=failure, modulus=modulus,
        dini=dini, oscillation=oscillation, continuity=continuity, critical=critical,
    )


def product(f: FnSpec, g: FnSpec) -> FnSpec:

    """
        Pointwise product on the common domain
    """

    domain: Optional[Iv] = f.domain.intersection(g.domain)
    if domain is None:
        raise DomainError(f"{f.name} and {g.name} have disjoint domains", witness=(f.domain, g.domain))

    def evaluate(x: Fraction, precision: int) -> ValueWithError:
        return f.evaluate(x, precision) * g.evaluate(x, precision)

    deriv: Optional[PointFn] = None
    if f.deriv is not None and g.deriv is not None:
        def deriv(x: Fraction) -> ValueWithError:
            return f.deriv(x) * g(x) + f(x) * g.deriv(x)

    #The remainder of fg splits into f's remainder times g(y), f(x) times g's
    #remainder and f'(x)·h·(g(y) - g(x)); each gets a third of ε for |h| ≤ 1
    modulus: Optional[ModulusFn] = None
    if f.modulus is not None and g.modulus is not None and deriv is not None:
        def modulus(x: Fraction, eps: Fraction) -> Fraction:
            slope_g: Fraction = abs(g.deriv(x)).upper + 1
            bound_g: Fraction = abs(g(x)).upper + slope_g
            eps_f: Fraction = eps / (3 * bound_g)
            eps_g: Fraction = min(eps / (3 * (abs(f(x)).upper + 1)), ONE)
            cross: Fraction = eps / (3 * (abs(f.deriv(x)).upper + 1) * slope_g)
            return min(f.modulus(x, eps_f), g.modulus(x, eps_g), cross, ONE)

    continuity: Optional[ContinuityFn] = None
    if f.continuity is not None and g.continuity is not None:
        def continuity(x: Fraction, r: Fraction) -> Fraction:
            wf: Fraction = f.continuity(x, r)
            wg: Fraction = g.continuity(x, r)
            return abs(f(x)).upper * wg + abs(g(x)).upper * wf + wf * wg

    return FnSpec(
        f"{f.name}·{g.name}", domain, evaluate, exact=f.exact and g.exact, deriv=deriv,
        failure_set=f.failure_set.union(g.failure_set), modulus=modulus, continuity=continuity,
    )


IDENTITY: FnSpec = monomial(1, 1, name='identity')

_CATALOG: Dict[str, Callable[[], FnSpec]] = {
    'identity': lambda: IDENTITY,
    'one': lambda: constant(1),
    'zero': lambda: constant(0),
    'double': lambda: monomial(2, 1, name='double'),
    'square': lambda: monomial(1, 2, name='square'),
    'abs': lambda: ABS,
    'cantor_fn': lambda: CANTOR_FN,
    'cantor_abs': lambda: CANTOR_ABS,
    'svc_dist_fn': lambda: SVC_DIST,
    'quartic_root': lambda: QUARTIC_ROOT,
    'quartic_root∘svc_dist_fn': lambda: compose(QUARTIC_ROOT, SVC_DIST),
}

ALIASES: Dict[str, str] = {
    'linear': 'identity',
    'x': 'identity',
    'x^2': 'square',
    'cantor': 'cantor_fn',
    'c': 'cantor_fn',
    'G': 'svc_dist_fn',
    'F': 'quartic_root',
    'FG': 'quartic_root∘svc_dist_fn',
    'F∘G': 'quartic_root∘svc_dist_fn',
}


def catalog() -> Dict[str, FnSpec]:

    """
        Every registered function by canonical name
    """

    return {name: factory() for name, factory in _CATALOG.items()}


def lookup(name: str) -> FnSpec:

    """
        Resolve a catalog name, an alias, "const:<rat>" or "<name>_deriv"

        :param name: Name to resolve
        :type name: str

        :return: The function
        :rtype: FnSpec
    """

    if name.startswith('const:'):
        return constant(name.split(':', 1)[1])
    if name.endswith('_deriv'):
        return lookup(name[:-len('_deriv')]).derivative()

    canonical: str = ALIASES.get(name, name)
    factory: Optional[Callable[[], FnSpec]] = _CATALOG.get(canonical)
    if factory is None:
        raise UnknownNameError(f"unknown function '{name}'")
    return factory()


def certificates(f: FnSpec) -> List[str]:
    return [name for name in ('deriv', 'modulus', 'dini', 'oscillation', 'continuity', 'antiderivative')
            if getattr(f, name) is not None]
