"""
Built-in example inputs.

Each entry is a presentation, a Hodge specification for ``central-model`` or
an extension specification for ``lefschetz-extend``, together with the
command ``corpus run NAME`` executes on it.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .errors import UnknownCorpusEntry
from .presentation import PresentationFile, parse_text

# Configure logging
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    kind: str  # presentation | hodge | extension
    description: str
    command: str
    args: Dict[str, Any] = field(default_factory=dict)
    text: Optional[str] = None
    payload: Optional[Dict[str, Any]] = None


DOT = """
name dot
basis a bidegree (0,0)
"""

SQUARE = """
name square
basis a bidegree (0,0)
basis b bidegree (1,0)
basis c bidegree (0,1)
basis e bidegree (1,1)
del a = 1 * b
delbar a = 1 * c
del c = 1 * e
delbar b = -1 * e
"""

# a -> b and a -> c with nothing in (1,1): the smallest non-square staircase
ZIGZAG2 = """
name zigzag2
basis a bidegree (0,0)
basis b bidegree (1,0)
basis c bidegree (0,1)
del a = 1 * b
delbar a = 1 * c
"""

CP1_RING = """
name cp1-ring
sd-target 1
basis one bidegree (0,0)
basis x bidegree (1,1)
mul x x = 0
"""

CP2_RING = """
name cp2-ring
sd-target 2
basis one bidegree (0,0)
basis x bidegree (1,1)
basis xx bidegree (2,2)
mul x x = 1 * xx
"""

CP1XCP1_RING = """
name cp1xcp1-ring
sd-target 2
basis one bidegree (0,0)
basis a bidegree (1,1)
basis b bidegree (1,1)
basis ab bidegree (2,2)
mul a b = 1 * ab
mul b a = 1 * ab
"""

CP1_MODEL = """
name cp1-model
truncation 5
sd-target 1
generator x bidegree (1,1)
generator r bidegree (1,1)
generator rp bidegree (2,1)
generator rq bidegree (1,2)
del r = 1 * rp
delbar r = 1 * rq
delbar rp = -1 * x*x
del rq = 1 * x*x
"""

CP2_MODEL = """
name cp2-model
truncation 6
sd-target 2
generator x bidegree (1,1)
generator r bidegree (2,2)
generator rp bidegree (3,2)
generator rq bidegree (2,3)
del r = 1 * rp
delbar r = 1 * rq
delbar rp = -1 * x*x*x
del rq = 1 * x*x*x
"""

# ℂP³ below the relation x⁴ = 0
CP3_MODEL = """
name cp3-model
truncation 7
sd-target 3
generator x bidegree (1,1)
"""

# holomorphic structure equations of the Iwasawa manifold and their conjugates
IWASAWA_STYLE = """
name iwasawa-style
truncation 6
generator f1 bidegree (1,0)
generator f2 bidegree (1,0)
generator f3 bidegree (1,0)
generator g1 bidegree (0,1)
generator g2 bidegree (0,1)
generator g3 bidegree (0,1)
del f3 = -1 * f1*f2
delbar g3 = -1 * g1*g2
"""

# b2 = 0: only the unit, middle-degree classes and the top class
CLEMENS_SHAPE = """
name clemens-shape
sd-target 3
basis one bidegree (0,0)
basis a bidegree (2,1)
basis b bidegree (1,2)
basis c bidegree (3,0)
basis cb bidegree (0,3)
basis top bidegree (3,3)
mul a b = 1 * top
mul b a = -1 * top
mul c cb = 1 * top
mul cb c = -1 * top
"""

K3_SHAPE_REDUCED = """
name k3-shape-reduced
sd-target 2
basis one bidegree (0,0)
basis s bidegree (2,0)
basis sb bidegree (0,2)
basis u bidegree (1,1)
basis v bidegree (1,1)
basis top bidegree (2,2)
mul s sb = 1 * top
mul sb s = 1 * top
mul u u = 1 * top
mul v v = -1 * top
"""

_ENTRIES: List[CorpusEntry] = [
    CorpusEntry("dot", "presentation", "a single dot", "ddbar-check", text=DOT),
    CorpusEntry("square", "presentation", "one square a, ∂a, ∂̄a, ∂∂̄a", "ddbar-check", text=SQUARE),
    CorpusEntry("zigzag2", "presentation", "a two-arrow zigzag, fails the ∂∂̄-Lemma", "ddbar-check",
                text=ZIGZAG2),
    CorpusEntry("cp1-ring", "presentation", "cohomology ring of ℂP¹", "sd-check", {"n": 1}, text=CP1_RING),
    CorpusEntry("cp2-ring", "presentation", "cohomology ring of ℂP²", "sd-check", {"n": 2}, text=CP2_RING),
    CorpusEntry("cp1xcp1-ring", "presentation", "cohomology ring of ℂP¹×ℂP¹", "sd-check", {"n": 2},
                text=CP1XCP1_RING),
    CorpusEntry("cp1-model", "presentation", "minimal model of ℂP¹ truncated at 5", "promote", {"n": 1},
                text=CP1_MODEL),
    CorpusEntry("cp2-model", "presentation", "minimal model of ℂP² truncated at 6", "promote", {"n": 2},
                text=CP2_MODEL),
    CorpusEntry("cp3-model", "presentation", "model of ℂP³ truncated below x⁴", "s-strong", {"s": 2},
                text=CP3_MODEL),
    CorpusEntry("iwasawa-style", "presentation", "Iwasawa-type structure equations, not ∂∂̄", "s-strong",
                {"s": 2}, text=IWASAWA_STYLE),
    CorpusEntry("central-n3-generic", "hodge", "threefold with h^{1,1} = 1 and dim P₃ = 4", "central-model",
                payload={"name": "central-n3-generic", "n": 3,
                         "primitive": {3: {"(3,0)": 1, "(2,1)": 1, "(1,2)": 1, "(0,3)": 1}}}),
    CorpusEntry("central-n3-special", "hodge", "threefold with h^{1,1} = 2 and [η²] = [x²]", "central-model",
                payload={"name": "central-n3-special", "n": 3, "primitive": {},
                         "special": {"m": 1, "h_mm": 2, "a": "1", "b": "0"}}),
    CorpusEntry("clemens-shape", "presentation", "b₂ = 0 threefold ring, classes in degree 3 only",
                "relations-check", {"n": 3}, text=CLEMENS_SHAPE),
    CorpusEntry("clemens-model", "presentation", "model of the b₂ = 0 threefold ring, promoted",
                "relations-model", {"n": 3}, text=CLEMENS_SHAPE),
    CorpusEntry("k3-shape-reduced", "presentation", "K3-shaped 2-SD ring with h^{1,1} reduced to 2", "sd-check",
                {"n": 2}, text=K3_SHAPE_REDUCED),
    CorpusEntry("cp2-to-cp1", "extension", "ℂP² model restricted to a line", "lefschetz-extend",
                payload={"model": "corpus:cp2-model", "target": "corpus:cp1-ring",
                         "restriction": {"x": "1 * x", "r": "0", "rp": "0", "rq": "0"},
                         "n": 1, "truncation": 6}),
    CorpusEntry("cp3-to-k3", "extension", "ℂP³ model restricted to the K3-shaped ring", "lefschetz-extend",
                payload={"model": "corpus:cp3-model", "target": "corpus:k3-shape-reduced",
                         "restriction": {"x": "1 * u"}, "n": 2, "truncation": 6}),
]

CORPUS: Dict[str, CorpusEntry] = {e.name: e for e in _ENTRIES}


def names() -> List[str]:
    return list(CORPUS)


def entry(name: str) -> CorpusEntry:
    if name not in CORPUS:
        raise UnknownCorpusEntry(f"no corpus entry named '{name}'")
    return CORPUS[name]


def presentation(name: str) -> PresentationFile:
    """The parsed presentation of a corpus entry of presentation kind."""
    e = entry(name)
    if e.text is None:
        raise UnknownCorpusEntry(f"corpus entry '{name}' is a {e.kind} specification, not a presentation")
    logger.debug("Loading corpus presentation %s", name)
    return parse_text(e.text, default_name=name)
