"""
Formality Witnesses

A witness is a zig-zag of stages connecting an object to its homology,
each stage carrying its map in full and the degree range up to which it
was verified to be a quasi-isomorphism.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional


logger = logging.getLogger(__name__)


class Direction(Enum):
    """Orientation of a stage relative to the zig-zag read left to right."""
    FORWARD = "forward"
    BACKWARD = "backward"


class StageKind(Enum):
    CHAIN = "chain"      # degree-preserving chain map
    HO = "ho"            # ho-morphism (f, F) between endo-complexes
    DGA = "dga"          # multiplicative map of weighted dg-algebras


@dataclass
class WitnessStage:
    """One arrow of a zig-zag; `source` and `target` name entries of FormalityWitness.objects."""
    name: str
    source: str
    target: str
    direction: Direction
    kind: StageKind
    maps: Any                      # GradedMap for complexes, one matrix for dg-algebras
    homotopy: Optional[Any] = None
    quasi_iso: bool = False
    verified_N: Optional[int] = None  # None means every degree
    options: Dict[str, Any] = field(default_factory=dict)  # ranges used when re-checking the map

    def describe(self) -> str:
        arrow = "=>" if self.direction is Direction.FORWARD else "<="
        bound = "all degrees" if self.verified_N is None else f"degrees <= {self.verified_N}"
        return f"{self.name}: {self.source} {arrow} {self.target} ({bound})"


@dataclass
class FormalityWitness:
    """Zig-zag of verified stages plus the degree bound it certifies."""
    alpha: Fraction
    modulus: Optional[int]
    overall_N: Optional[int]
    objects: Dict[str, Any] = field(default_factory=dict)
    stages: List[WitnessStage] = field(default_factory=list)
    composite_identity: bool = False
    endomorphisms: Dict[str, Any] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)

    # Status
    success: bool = False
    error_message: Optional[str] = None
    locus: Optional[Any] = None        # (degree, weight) or stage where the zig-zag was refused

    def stage(self, name: str) -> WitnessStage:
        for stage in self.stages:
            if stage.name == name:
                return stage
        raise KeyError(name)

    def summary(self) -> str:
        lines = [
            f"alpha = {self.alpha}, modulus = {self.modulus if self.modulus is not None else 'Z'}, "
            f"N = {self.overall_N if self.overall_N is not None else 'all'}"
        ]
        for stage in self.stages:
            status = "✅" if stage.quasi_iso else "❌"
            lines.append(f"  {status} {stage.describe()}")
        if self.error_message:
            lines.append(f"  ❌ {self.error_message}")
        return "\n".join(lines)
