"""Newton's identities, characteristic polynomials of a trace and the Cayley-Hamilton check."""

import logging
from typing import Callable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from ptorder.errors import InvalidParameterError
from ptorder.models import Report
from ptorder.qtorus import TorusElement
from ptorder.trace import CentralSubalgebra

logger = logging.getLogger(__name__)

Trace = Callable[[TorusElement], TorusElement]


def newton_coefficients(d: int, power_traces: Sequence[TorusElement]) -> List[TorusElement]:
    """
    c_1 ... c_d from psi_1 ... psi_d via k c_k = sum_{i=1}^{k} (-1)^(i-1) c_(k-i) psi_i, c_0 = 1.
    """
    if d < 1:
        raise InvalidParameterError(f"degree must be >= 1, got {d}")
    if len(power_traces) < d:
        raise InvalidParameterError(f"need {d} power traces, got {len(power_traces)}")
    ring = power_traces[0].ring
    sigma = [ring.one()]
    for k in range(1, d + 1):
        total = ring.zero()
        for i in range(1, k + 1):
            term = sigma[k - i] * power_traces[i - 1]
            total = total + term if i % 2 == 1 else total - term
        sigma.append(total / k)
    return sigma[1:]


class CharPoly(BaseModel):
    """chi(t) = t^d - c_1 t^(d-1) + ... + (-1)^d c_d with central coefficients."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    degree: int
    coeffs: List[TorusElement]
    variables: Optional[CentralSubalgebra] = None

    def evaluate(self, a: TorusElement) -> TorusElement:
        """Horner evaluation at a; the coefficients are central so their side does not matter."""
        result = a.ring.one()
        for k, c in enumerate(self.coeffs, start=1):
            result = result * a + (c if k % 2 == 0 else -c)
        return result

    def _render(self, c: TorusElement) -> str:
        if self.variables is not None:
            return str(self.variables.to_poly(c))
        return str(c)

    def __str__(self) -> str:
        parts = [f"t^{self.degree}" if self.degree > 1 else "t"]
        for k, c in enumerate(self.coeffs, start=1):
            if not c:
                continue
            power = self.degree - k
            t = "" if power == 0 else (" * t" if power == 1 else f" * t^{power}")
            body = self._render(c if k % 2 == 0 else -c)
            if len(c.terms) > 1:
                parts.append(f"+ ({body}){t}")
            elif body.startswith("-"):
                parts.append(f"- {body[1:]}{t}")
            else:
                parts.append(f"+ {body}{t}")
        return " ".join(parts)

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "coefficients": [self._render(c) for c in self.coeffs],
            "polynomial": str(self),
        }


def power_traces(a: TorusElement, d: int, tr: Trace) -> List[TorusElement]:
    out = []
    power = a
    for k in range(1, d + 1):
        out.append(tr(power))
        if k < d:
            power = power * a
    return out


def char_poly(a: TorusElement, d: int, tr: Trace, variables: Optional[CentralSubalgebra] = None) -> CharPoly:
    return CharPoly(degree=d, coeffs=newton_coefficients(d, power_traces(a, d, tr)), variables=variables)


def verify_cayley_hamilton(a: TorusElement, d: int, tr: Trace,
                           variables: Optional[CentralSubalgebra] = None) -> Tuple[TorusElement, Report]:
    """Returns chi_{d,a}(a) and a report that passes iff it vanishes and tr(1) = d."""
    chi = char_poly(a, d, tr, variables)
    residual = chi.evaluate(a)
    trace_one = tr(a.ring.one())
    witnesses = []
    if residual:
        witnesses.append({"kind": "residual", "a": str(a), "residual": str(residual)})
    if trace_one != d:
        witnesses.append({"kind": "trace-of-one", "expected": d, "actual": str(trace_one)})
    logger.debug(f"cayley-hamilton d={d} a={a}: residual {residual}")
    return residual, Report(
        check="cayley-hamilton",
        passed=not witnesses,
        witnesses=witnesses,
        details={"degree": d, "char_poly": chi.to_dict()},
    )
