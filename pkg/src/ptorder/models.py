from typing import Any, Dict, List, Optional
from pydantic import BaseModel, ConfigDict, Field, model_validator

class Report(BaseModel):
    """
    Outcome of a verification: the check name, whether it passed and the
    witnesses of any failure. Serializes to {check, passed, witnesses, details}.
    """
    check: str
    passed: bool
    witnesses: List[Dict[str, Any]] = Field(default_factory=list)
    details: Dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def combine(cls, check: str, parts: List["Report"], details: Optional[Dict[str, Any]] = None) -> "Report":
        """A report that passes iff every part passed; witnesses are tagged with their part."""
        witnesses = []
        for part in parts:
            for w in part.witnesses:
                witnesses.append({"check": part.check, **w})
        merged = {"parts": [{"check": p.check, "passed": p.passed, **p.details} for p in parts]}
        merged.update(details or {})
        return cls(check=check, passed=all(p.passed for p in parts), witnesses=witnesses, details=merged)


class Caps(BaseModel):
    """Resource caps accepted in a spec file; unset values keep the engine defaults."""
    max_basis: Optional[int] = Field(default=None, gt=0)
    max_det: Optional[int] = Field(default=None, gt=0)
    max_det_size: Optional[int] = Field(default=None, gt=0)
    max_gb_steps: Optional[int] = Field(default=None, gt=0)
    max_center: Optional[int] = Field(default=None, gt=0)


class SpecFile(BaseModel):
    """
    The JSON document describing an algebra, as read by the CLI.
    """
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    n: int
    ell: int
    lam: List[List[int]] = Field(alias="lambda")
    invertible: List[bool]
    ex: Optional[List[int]] = None
    btilde: Optional[List[List[int]]] = None
    d: Optional[List[int]] = None
    caps: Optional[Caps] = None
    seed: Optional[int] = None
    name: Optional[str] = None
    description: Optional[str] = None

    @model_validator(mode="after")
    def check_shapes(self) -> "SpecFile":
        if len(self.lam) != self.n or any(len(row) != self.n for row in self.lam):
            raise ValueError(f"lambda must be an {self.n}x{self.n} matrix")
        for i in range(self.n):
            for j in range(self.n):
                if self.lam[i][j] != -self.lam[j][i]:
                    raise ValueError(f"lambda is not skew-symmetric at ({i + 1},{j + 1})")
        if len(self.invertible) != self.n:
            raise ValueError(f"invertible must have {self.n} entries")
        if self.ex is not None and any(not 1 <= k <= self.n for k in self.ex):
            raise ValueError(f"ex indices must lie in [1,{self.n}]")
        return self

    def algebra_kwargs(self) -> Dict[str, Any]:
        def freeze(m):
            return None if m is None else tuple(tuple(row) for row in m)

        return dict(
            n=self.n,
            ell=self.ell,
            lam=freeze(self.lam),
            invertible=tuple(self.invertible),
            ex=None if self.ex is None else tuple(self.ex),
            btilde=freeze(self.btilde),
            d=None if self.d is None else tuple(self.d),
        )
