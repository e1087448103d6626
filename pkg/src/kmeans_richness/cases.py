"""Case classification of valid configurations and the adversarial seedings
attached to each case.

Every consulted comparison must be strict; an equality raises
:class:`ClassificationTieError`.  Gap shapes: a gap is *ascending* when
a_m < p < a_{m+1}, *descending* when a_m > p > a_{m+1}, a *pit* when it is
below both neighbours and a *peak* when above both.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .model import DistanceConfig, Seeding, mirror_seeding, validate

UNCLASSIFIED = "UNCLASSIFIED"


class ClassificationTieError(Exception):
    """A region-defining comparison came out equal."""

    def __init__(self, description: str):
        self.description = description
        super().__init__(f"region predicate tie: {description}")


class UnclassifiedConfigError(Exception):
    """No prescribed seeding for this configuration; use exhaustive search."""


@dataclass(frozen=True)
class CaseLabel:
    """Region tag, optionally mirrored, with a gap/pair index where required.

    ``param`` is the ascending-gap position for BC and the index of the
    longest intra-pair distance for BD.
    """

    tag: str
    mirrored: bool = False
    param: int | None = None

    def __str__(self) -> str:
        text = self.tag if self.param is None else f"{self.tag}({self.param})"
        return text + ("~" if self.mirrored else "")

    def matches(self, target: str) -> bool:
        """Compare against a target like ``"AA"``, ``"AB~"`` or ``"BC(3)~"``.

        A target without parentheses matches any param.
        """
        other = CaseLabel.parse(target)
        if (self.tag, self.mirrored) != (other.tag, other.mirrored):
            return False
        return other.param is None or other.param == self.param

    @classmethod
    def parse(cls, text: str) -> CaseLabel:
        m = re.fullmatch(r"([A-Z']+)(?:\((\d+)\))?(~?)", text.strip())
        if not m:
            raise ValueError(f"bad case label {text!r}")
        tag, param, tilde = m.groups()
        return cls(tag, mirrored=bool(tilde), param=int(param) if param else None)


class PlanSemantics(Enum):
    ALL_MUST_FAIL = "all-must-fail"
    ANY_MUST_FAIL = "any-must-fail"


@dataclass(frozen=True)
class AdversarialPlan:
    """Seeding candidates and what the case claims about them.

    ``ALL_MUST_FAIL``: every candidate avoids the pairing partition.
    ``ANY_MUST_FAIL``: at least one candidate avoids it.
    """

    label: CaseLabel
    candidates: tuple[Seeding, ...]
    names: tuple[str | None, ...]
    semantics: PlanSemantics

    def __post_init__(self):
        if len(self.names) != len(self.candidates):
            raise ValueError("one name slot per candidate")
        if not self.candidates:
            raise ValueError("plan needs at least one candidate")


def _strict_cmp(lhs: Fraction, rhs: Fraction, description: str) -> int:
    if lhs == rhs:
        raise ClassificationTieError(description)
    return -1 if lhs < rhs else 1


def _require_valid(cfg: DistanceConfig) -> None:
    report = validate(cfg)
    if not report.valid:
        raise ValueError(f"config not valid: constraint fails at gaps {list(report.violations)}")


def _end_tag(left: Fraction, gap: Fraction, right: Fraction, names: tuple[str, str, str]) -> str | None:
    """AA ascending, AB descending, ACA/ACB pit split at (2*gap+right)/3, None peak."""
    c1 = _strict_cmp(left, gap, f"{names[0]} = {names[1]}")
    c2 = _strict_cmp(gap, right, f"{names[1]} = {names[2]}")
    if c1 < 0 and c2 < 0:
        return "AA"
    if c1 > 0 and c2 > 0:
        return "AB"
    if c1 > 0 and c2 < 0:
        threshold = (2 * gap + right) / 3
        c3 = _strict_cmp(left, threshold, f"{names[0]} = (2*{names[1]}+{names[2]})/3")
        return "ACA" if c3 < 0 else "ACB"
    return None


def classify4(cfg: DistanceConfig) -> CaseLabel:
    """Classify a valid k=4 configuration into its case region.

    Precedence: the left end triple (a1, p12, a2) first; if it is a peak,
    the right end triple (a4, p34, a3) with the mirrored flag; if both ends
    are peaks, the middle triple (a2, p23, a3) decides between ADA, ADB
    (its mirror image), the ADC threshold split, and ADD.
    """
    if cfg.k != 4:
        raise ValueError(f"classify4 needs k=4, got k={cfg.k}")
    _require_valid(cfg)
    a1, a2, a3, a4 = cfg.a
    p12, p23, p34 = cfg.p
    tag = _end_tag(a1, p12, a2, ("a1", "p12", "a2"))
    if tag is not None:
        return CaseLabel(tag)
    tag = _end_tag(a4, p34, a3, ("a4", "p34", "a3"))
    if tag is not None:
        return CaseLabel(tag, mirrored=True)
    c1 = _strict_cmp(a2, p23, "a2 = p23")
    c2 = _strict_cmp(p23, a3, "p23 = a3")
    if c1 < 0 and c2 < 0:
        return CaseLabel("ADA")
    if c1 > 0 and c2 > 0:
        return CaseLabel("ADB")
    if c1 > 0 and c2 < 0:
        threshold = (2 * p23 + a3) / 3
        c3 = _strict_cmp(a2, threshold, "a2 = (2*p23+a3)/3")
        return CaseLabel("ADCA" if c3 > 0 else "ADCB")
    return CaseLabel("ADD")


_SEEDS4 = {
    "AA": (2, 4, 5, 7),
    "AB": (1, 3, 5, 7),
    "ACA": (2, 4, 5, 7),
    "ACB": (1, 3, 5, 7),
    "ADA": (2, 4, 6, 7),
    "ADB": (2, 3, 5, 7),  # mirror image of the ADA seeding
    "ADCA": (2, 3, 5, 7),
    "ADCB": (2, 4, 6, 7),
}

# Candidate set for the all-peaks middle (ADD): no single seeding is claimed
# to work everywhere, but at least one of these always avoids the pairing.
PAIRING_BREAKERS = (
    ("S1", (2, 5, 7, 8)),
    ("S2", (1, 2, 4, 7)),
    ("S7", (4, 6, 7, 8)),
    ("S7'", (1, 2, 3, 5)),
)


def adversarial_plan4(cfg: DistanceConfig) -> AdversarialPlan:
    """The prescribed seeding(s) for a valid k=4 configuration."""
    label = classify4(cfg)
    if label.tag == "ADD":
        return AdversarialPlan(
            label,
            tuple(Seeding(s) for _, s in PAIRING_BREAKERS),
            tuple(name for name, _ in PAIRING_BREAKERS),
            PlanSemantics.ANY_MUST_FAIL,
        )
    seeding = Seeding(_SEEDS4[label.tag])
    if label.mirrored:
        seeding = mirror_seeding(seeding, 4)
    return AdversarialPlan(label, (seeding,), (None,), PlanSemantics.ALL_MUST_FAIL)


def classify_k(cfg: DistanceConfig) -> CaseLabel:
    """Classify a valid k>4 configuration.

    Precedence: BA/BB on the first gap; the smallest ascending gap (BC(m));
    the smallest ascending gap of the mirrored configuration (BC(m)
    mirrored); all-pits (BD(i), i the unique longest intra-pair distance);
    all-peaks (BE); otherwise UNCLASSIFIED (mixed pits and peaks with no
    monotone gap, which the case analysis does not cover).
    """
    if cfg.k <= 4:
        raise ValueError(f"classify_k needs k>4, got k={cfg.k}")
    _require_valid(cfg)
    k = cfg.k
    a, p = cfg.a, cfg.p
    left = [_strict_cmp(a[m], p[m], f"a{m + 1} = p{m + 1},{m + 2}") for m in range(k - 1)]
    right = [_strict_cmp(p[m], a[m + 1], f"p{m + 1},{m + 2} = a{m + 2}") for m in range(k - 1)]
    ascending = [m for m in range(k - 1) if left[m] < 0 and right[m] < 0]
    descending = [m for m in range(k - 1) if left[m] > 0 and right[m] > 0]
    if 0 in ascending:
        return CaseLabel("BA")
    if 0 in descending:
        return CaseLabel("BB")
    if ascending:
        return CaseLabel("BC", param=ascending[0] + 1)
    if descending:
        # gap g of the original is gap k-g of the mirror; the smallest
        # ascending mirror gap comes from the largest descending one here
        return CaseLabel("BC", mirrored=True, param=k - (max(descending) + 1))
    if all(left[m] > 0 and right[m] < 0 for m in range(k - 1)):
        longest = max(a)
        if a.count(longest) > 1:
            raise ClassificationTieError("longest intra-pair distance is tied")
        return CaseLabel("BD", param=a.index(longest) + 1)
    if all(left[m] < 0 and right[m] > 0 for m in range(k - 1)):
        return CaseLabel("BE")
    return CaseLabel(UNCLASSIFIED)


def _bc_seeding(m: int, k: int) -> Seeding:
    indices = tuple(2 * j for j in range(1, m + 1))
    indices += (2 * m + 2,)
    indices += tuple(2 * j - 1 for j in range(m + 2, k + 1))
    return Seeding(indices)


def adversarial_plan_k(cfg: DistanceConfig) -> AdversarialPlan:
    """The prescribed seeding(s) for a valid k>4 configuration."""
    label = classify_k(cfg)
    k = cfg.k
    if label.tag == UNCLASSIFIED:
        raise UnclassifiedConfigError(
            "mixed pit/peak configuration with no monotone gap; fall back to exhaustive search"
        )
    if label.tag == "BA":
        seeds = (Seeding((2, 4) + tuple(2 * j - 1 for j in range(3, k + 1))),)
        return AdversarialPlan(label, seeds, (None,), PlanSemantics.ALL_MUST_FAIL)
    if label.tag == "BB":
        seeds = (Seeding((1,) + tuple(2 * j - 1 for j in range(2, k + 1))),)
        return AdversarialPlan(label, seeds, (None,), PlanSemantics.ALL_MUST_FAIL)
    if label.tag == "BC":
        assert label.param is not None
        base = _bc_seeding(label.param, k)
        seeding = mirror_seeding(base, k) if label.mirrored else base
        return AdversarialPlan(label, (seeding,), (None,), PlanSemantics.ALL_MUST_FAIL)
    if label.tag == "BD":
        assert label.param is not None
        i = label.param
        indices = tuple(2 * j - 1 for j in range(1, i + 1))
        indices += tuple(2 * j - 2 for j in range(i + 1, k + 1))
        return AdversarialPlan(label, (Seeding(indices),), (None,), PlanSemantics.ALL_MUST_FAIL)
    # BE: reuse the k=4 candidate set on the first eight points, one seed per
    # remaining pair at its odd point
    tail = tuple(2 * j - 1 for j in range(5, k + 1))
    seeds = tuple(Seeding(base + tail) for _, base in PAIRING_BREAKERS)
    names = tuple(name for name, _ in PAIRING_BREAKERS)
    return AdversarialPlan(label, seeds, names, PlanSemantics.ANY_MUST_FAIL)


def classify(cfg: DistanceConfig) -> CaseLabel:
    """Dispatch on k; no case analysis exists below k=4."""
    if cfg.k == 4:
        return classify4(cfg)
    if cfg.k > 4:
        return classify_k(cfg)
    raise ValueError(f"no case analysis for k={cfg.k}")


def adversarial_plan(cfg: DistanceConfig) -> AdversarialPlan:
    if cfg.k == 4:
        return adversarial_plan4(cfg)
    if cfg.k > 4:
        return adversarial_plan_k(cfg)
    raise ValueError(f"no case analysis for k={cfg.k}")
