from pydantic import BaseModel, Field, model_validator
from typing import Dict, List, Optional, Tuple


class OperadDocument(BaseModel):
    """A finite operad table.

    ``ops`` maps an arity to signatures ``"in1,in2->out"`` and their operation
    names; ``compose`` holds ``[outer, slot, inner, result]`` and
    ``sym_action`` holds ``[op, perm, result]``.
    """
    name: str = "custom"
    colors: List[str]
    ops: Dict[str, Dict[str, List[str]]]
    identities: Dict[str, str]
    units: Dict[str, str] = Field(default_factory=dict)
    compose: List[Tuple[str, int, str, str]] = Field(default_factory=list)
    sym_action: List[Tuple[str, List[int], str]] = Field(default_factory=list)
    arity_bound: Optional[int] = None

    def signatures(self) -> Dict[str, Tuple[Tuple[str, ...], str]]:
        found = {}
        for arity, table in self.ops.items():
            for key, names in table.items():
                inputs, out = parse_signature(key)
                for name in names:
                    found[name] = (inputs, out)
        return found

    @model_validator(mode="after")
    def check_tables(self) -> "OperadDocument":
        colors = set(self.colors)
        seen = set()
        for arity, table in self.ops.items():
            if not arity.isdigit():
                raise ValueError(f"arity key {arity!r} is not a number")
            for key, names in table.items():
                inputs, out = parse_signature(key)
                if len(inputs) != int(arity):
                    raise ValueError(f"signature {key!r} listed under arity {arity}")
                if out not in colors or any(c not in colors for c in inputs):
                    raise ValueError(f"signature {key!r} uses an unknown color")
                for name in names:
                    if name in seen:
                        raise ValueError(f"operation {name} is listed twice")
                    seen.add(name)
        for outer, slot, inner, result in self.compose:
            for name in (outer, inner, result):
                if name not in seen:
                    raise ValueError(f"composition names unknown operation {name}")
        for op, perm, result in self.sym_action:
            if op not in seen or result not in seen:
                raise ValueError(f"action entry {op} -> {result} names an unknown operation")
            if sorted(perm) != list(range(len(perm))):
                raise ValueError(f"{perm} is not a permutation")
        for color, name in list(self.identities.items()) + list(self.units.items()):
            if color not in colors or name not in seen:
                raise ValueError(f"{name} for color {color} is unknown")
        return self


def parse_signature(key: str) -> Tuple[Tuple[str, ...], str]:
    """Split ``"a,b->c"`` (``->`` or the arrow sign) into inputs and output."""
    text = key.replace("→", "->")
    if "->" not in text:
        raise ValueError(f"signature {key!r} has no arrow")
    left, right = text.split("->", 1)
    inputs = tuple(c.strip() for c in left.split(",") if c.strip())
    return inputs, right.strip()
