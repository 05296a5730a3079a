"""Figure specifications: what to read, which layout, where to write."""

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import SpecError

FIGURE_KINDS = (
    "frame-sweep", "per-slot", "power-surface", "doppler-optimum",
    "bound-curve", "window-compare", "mismatch", "mc-validate",
)

IMAGE_FORMATS = ("png", "svg")


@dataclass(frozen=True)
class FigureSpec:
    """One figure: input CSV(s), layout kind, labels and output file."""

    inputs: tuple
    kind: str
    output: str
    image_format: str = "png"
    title: str = ""
    x_label: str = ""
    y_label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(str(p) for p in self.inputs))
        if not self.inputs:
            raise SpecError("spec needs at least one input CSV")
        if self.kind not in FIGURE_KINDS:
            raise SpecError(f"unknown figure kind {self.kind!r}; expected one "
                            f"of {', '.join(FIGURE_KINDS)}")
        if self.image_format not in IMAGE_FORMATS:
            raise SpecError(f"unknown image format {self.image_format!r}")
        if not self.output:
            raise SpecError("spec needs an output path")


_SPEC_KEYS = {"inputs", "kind", "output", "image_format", "title",
              "x_label", "y_label"}


def load_spec(path) -> FigureSpec:
    """Load a figure spec from a JSON file."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise SpecError(f"cannot read spec {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise SpecError("spec must be a JSON object")
    unknown = set(raw) - _SPEC_KEYS
    if unknown:
        raise SpecError(f"unknown spec key {sorted(unknown)[0]!r}")
    missing = {"inputs", "kind", "output"} - set(raw)
    if missing:
        raise SpecError(f"spec is missing {sorted(missing)[0]!r}")
    inputs = raw["inputs"]
    if isinstance(inputs, str):
        inputs = [inputs]
    return FigureSpec(inputs=tuple(inputs), kind=raw["kind"],
                      output=raw["output"],
                      image_format=raw.get("image_format", "png"),
                      title=raw.get("title", ""),
                      x_label=raw.get("x_label", ""),
                      y_label=raw.get("y_label", ""))
