from typing import Callable, Dict, List, Optional, Sequence

from tqdm import tqdm

from ptorder.cayham import verify_cayley_hamilton
from ptorder.config import EngineConfig
from ptorder.discriminant import (
    containment_report,
    discriminant_ideal,
    is_poisson_ideal,
    verify_der_det,
)
from ptorder.errors import InvalidParameterError
from ptorder.models import Report
from ptorder.poisson import PoissonBracketTable, lift_independence_check, verify_poisson_axioms
from ptorder.qtorus import AlgebraSpec, Derivation, check_derivation, coprime_check, ell_compatible, quantum_torus, strict
from ptorder.trace import (
    CentralSubalgebra,
    ExtensionTrace,
    compose_trace,
    is_poisson_subalgebra,
    reduced_trace_form,
    regular_trace_form,
    tr_red,
    verify_pto,
    verify_trace_axioms,
)
from ptorder.utils import sampling
from ptorder.utils.logging import get_logger, log_report

logger = get_logger(__name__)

SUITES = ("pto-reg", "pto-red", "derdet", "poisson-ideal", "cayley-hamilton", "axioms", "base-change")


class SuiteRunner:
    """
    Runs the named verification suites on one algebra. Every suite draws
    its samples from a generator seeded with ``config.seed``, so identical
    inputs give identical reports.
    """

    def __init__(self, spec: AlgebraSpec, config: EngineConfig, name: Optional[str] = None):
        self.spec = spec
        self.config = config
        self.name = name
        self.ring = quantum_torus(spec)
        self.c0 = CentralSubalgebra.c0(self.ring, config)
        self.table = PoissonBracketTable(self.ring, config)

    def run(self, suite: str, k: Optional[int] = None, trace: str = "reg",
            sublattice: Optional[Sequence[Sequence[int]]] = None,
            samples: Optional[int] = None, centrals: Optional[int] = None) -> Report:
        handlers: Dict[str, Callable[..., Report]] = {
            "pto-reg": lambda: self.pto(trace="reg", samples=samples or 50, centrals=centrals or 50),
            "pto-red": lambda: self.pto(trace="red", samples=samples or 50, centrals=centrals or 50),
            "derdet": lambda: self.derdet(k=k, pairs=samples or 30),
            "poisson-ideal": lambda: self.poisson_ideal(k=k),
            "cayley-hamilton": lambda: self.cayley_hamilton(trace=trace, samples=samples or 25),
            "axioms": lambda: self.axioms(pairs=samples or 100, triples=centrals or 20),
            "base-change": lambda: self.base_change(sublattice, samples=samples or 50),
        }
        if suite not in handlers:
            raise InvalidParameterError(f"unknown suite {suite!r}; expected one of {list(SUITES)}")
        logger.info(f"Starting suite {suite} on {self.name or 'spec'} (seed {self.config.seed})")
        report = handlers[suite]()
        report.details.update({"suite": suite, "seed": self.config.seed})
        if self.name:
            report.details["spec"] = self.name
        log_report(logger, report)
        return report

    def _rng(self):
        return sampling.make_rng(self.config.seed)

    def _progress(self, items, desc: str):
        return tqdm(items, desc=desc, disable=not self.config.progress)

    def _trace(self, trace: str):
        if trace == "reg":
            return regular_trace_form(self.c0), self.spec.rank
        if trace == "red":
            return (lambda r: tr_red(r, self.config)), self.ring.pi_degree(self.config)
        raise InvalidParameterError(f"unknown trace {trace!r}; expected 'reg' or 'red'")

    # -- suites -----------------------------------------------------------
    def pto(self, trace: str, samples: int, centrals: int) -> Report:
        """tr o d_c = d_c o tr for random C0 monomials c and random elements of degree <= 3l."""
        rng = self._rng()
        tr, _ = self._trace(trace)
        cs = [sampling.random_central_monomial(rng, self.c0) for _ in range(centrals)]
        rs = [sampling.random_element(rng, self.ring, 3 * self.spec.ell) for _ in range(samples)]
        report = verify_pto(tr, self.table.derivation, cs, self._progress(rs, f"pto-{trace}"), name=f"pto-{trace}")
        parts = [report]
        if trace == "reg":
            ders = [sampling.random_preserving_derivation(rng, self.c0, self.spec.ell, self.table.derivation)
                    for _ in range(20)]
            ders.insert(0, Derivation.grading(self.ring))
            witnesses = []
            for i, delta in enumerate(self._progress(ders, "tr-reg-derivations")):
                for r in rs[:10]:
                    if tr(delta(r)) != delta(tr(r)):
                        witnesses.append({"derivation": i, "r": str(r)})
            parts.append(Report(check="tr-reg-commutes", passed=not witnesses, witnesses=witnesses,
                                details={"derivations": len(ders)}))
        return Report.combine(f"pto-{trace}", parts)

    def derdet(self, k: Optional[int], pairs: int) -> Report:
        rng = self._rng()
        tr, _ = self._trace("reg")
        pool = sampling.residue_basis(self.c0)
        levels = [k] if k else [1, 2, 3]
        parts = []
        for level in levels:
            if level > len(pool):
                raise InvalidParameterError(f"k={level} exceeds the rank {len(pool)}")
            witnesses = []
            for _ in self._progress(range(pairs), f"derdet k={level}"):
                c = sampling.random_central_monomial(rng, self.c0, max_coord=1)
                delta = self.table.derivation(c)
                rs = sampling.random_tuples(rng, pool, level)
                ss = sampling.random_tuples(rng, pool, level)
                result = verify_der_det(delta, rs, ss, tr, self.c0, config=self.config)
                witnesses.extend({"k": level, "c": str(c), **w} for w in result.witnesses)
            parts.append(Report(check=f"der-det-{level}", passed=not witnesses, witnesses=witnesses,
                                details={"pairs": pairs}))
        return Report.combine("derdet", parts)

    def poisson_ideal(self, k: Optional[int]) -> Report:
        """MD_k is a Poisson ideal for each k; D_k containment and its Poisson check are informational."""
        tr, _ = self._trace("reg")
        brackets = self.table.variable_brackets(self.c0)
        levels = [k] if k else list(range(1, self.spec.ell ** 2 + 1))
        parts = []
        info = {}
        for level in levels:
            md = discriminant_ideal(level, self.c0, tr, modified=True, config=self.config)
            report = is_poisson_ideal(md, brackets)
            parts.append(report.model_copy(update={"check": f"md-{level}-poisson"}))
            d = discriminant_ideal(level, self.c0, tr, modified=False, config=self.config)
            parts.append(containment_report(d, md, check=f"d-{level}-in-md-{level}"))
            info[f"d-{level}-poisson"] = is_poisson_ideal(d, brackets).passed
        return Report.combine("poisson-ideal", parts, details={"d_poisson": info})

    def cayley_hamilton(self, trace: str, samples: int) -> Report:
        rng = self._rng()
        tr, degree = self._trace(trace)
        target = self.c0 if trace == "reg" else None
        witnesses = []
        max_degree = 2 if trace == "reg" else self.spec.ell
        for _ in self._progress(range(samples), f"cayley-hamilton-{trace}"):
            a = sampling.random_element(rng, self.ring, max_degree)
            _, report = verify_cayley_hamilton(a, degree, tr, target)
            witnesses.extend(report.witnesses)
        return Report(check=f"cayley-hamilton-{trace}", passed=not witnesses, witnesses=witnesses,
                      details={"d": degree, "samples": samples})

    def axioms(self, pairs: int, triples: int) -> Report:
        rng = self._rng()
        ring = self.ring
        z = CentralSubalgebra.full_center(ring, self.config)
        reg = regular_trace_form(self.c0)
        red = reduced_trace_form(ring, self.config)
        sample_pairs = sampling.random_pairs(rng, ring, pairs, ring.ell)
        c0_mons = [sampling.random_central_monomial(rng, self.c0, max_coord=1) for _ in range(3)]
        z_mons = [sampling.random_central_monomial(rng, z, max_coord=1) for _ in range(3)]
        parts = [
            verify_trace_axioms(reg, self._progress(sample_pairs, "tr-reg"), c0_mons, name="tr-reg-axioms"),
            verify_trace_axioms(red, self._progress(sample_pairs, "tr-red"), z_mons, name="tr-red-axioms"),
            verify_poisson_axioms(self.table, sampling.central_triples(rng, z, triples)),
        ]
        for g in self.c0.generators():
            c = ring.monomial(g)
            perturbations = [sampling.random_element(rng, ring, ring.ell, max_terms=2) for _ in range(5)]
            parts.append(lift_independence_check(c, perturbations).model_copy(
                update={"check": f"lift-independence {c}"}))
            parts.append(check_derivation(self.table.derivation(c)))
        details = {}
        if self.spec.has_cluster:
            details["cluster"] = {
                "ell_compatible": ell_compatible(self.spec.btilde, self.spec.omega, self.spec.d,
                                                 self.spec.ell, self.spec.ex0),
                "strict": strict(self.spec.btilde, self.spec.lam, self.spec.d, self.spec.ex0),
                "coprime": coprime_check(self.spec.ell, self.spec.d),
            }
        return Report.combine("axioms", parts, details=details)

    def default_sublattice(self) -> List[List[int]]:
        """Index-2 extension of C0: the first generator doubled."""
        ell, n = self.spec.ell, self.spec.n
        return [[(2 * ell if i == 0 else ell) if i == j else 0 for j in range(n)] for i in range(n)]

    def base_change(self, sublattice: Optional[Sequence[Sequence[int]]], samples: int) -> Report:
        rng = self._rng()
        basis = sublattice or self.default_sublattice()
        a = CentralSubalgebra.from_basis(self.ring, basis, name="A", config=self.config)
        ext = ExtensionTrace(self.c0, a, self.config)
        composite = compose_trace(regular_trace_form(self.c0), ext)
        subalgebra = is_poisson_subalgebra(a, self.table.bracket)
        parts = [Report(check="poisson-subalgebra", passed=subalgebra,
                        witnesses=[] if subalgebra else [{"basis": [list(b) for b in basis]}])]
        cs = [sampling.random_central_monomial(rng, a) for _ in range(5)]
        rs = [sampling.random_element(rng, self.ring, 3 * self.spec.ell) for _ in range(samples)]
        parts.append(verify_pto(composite, self.table.derivation, cs, self._progress(rs, "base-change"),
                                name="composite-pto"))
        pairs = sampling.random_pairs(rng, self.ring, samples, self.spec.ell)
        parts.append(verify_trace_axioms(composite, pairs, cs[:2], name="composite-axioms"))
        return Report.combine("base-change", parts, details={
            "sublattice": [list(g) for g in a.generators()],
            "degree": ext.degree,
        })
