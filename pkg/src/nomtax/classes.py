"""Subject-concord markers and their nominal-class tags.

Swahili nominal classes are indexed per Bantu tradition; the dictionary
annotates entries with subject concord markers, which we use as a proxy for
the class. Several markers are shared between classes, so some tags are
disjunctions (written with ``|``). The plural-only marker ``ya-`` has no
settled tag; it defaults to ``"6?"`` and can be overridden in config.
"""

from __future__ import annotations

from dataclasses import dataclass

# The nine markers retained by class filtering on the full dictionary,
# ordered by their Bantu class numbering.
NAMED_CONCORDS: tuple[str, ...] = (
    "a-/wa-",
    "u-/i-",
    "li-/ya-",
    "ki-/vi-",
    "i-/zi-",
    "u-",
    "i-",
    "u-/zi-",
    "ya-",
)

DEFAULT_YA_NOMINAL = "6?"

_CONCORD_TO_NOMINAL = {
    "a-/wa-": "1/2",
    "u-/i-": "3/4",
    "li-/ya-": "5/6",
    "ki-/vi-": "7/8",
    "i-/zi-": "9/10",
    "u-": "11|14",
    "i-": "4|9",
    "u-/zi-": "(11|14)/10",
    # "ya-" resolved at call time (configurable)
}

UNKNOWN_NOMINAL = "?"


def is_named_concord(concord: str) -> bool:
    return concord in NAMED_CONCORDS


def nominal_class_for(concord: str, ya_nominal: str = DEFAULT_YA_NOMINAL) -> str:
    """Nominal-class tag for a concord marker; ``"?"`` for unknown markers."""
    if concord == "ya-":
        return ya_nominal
    return _CONCORD_TO_NOMINAL.get(concord, UNKNOWN_NOMINAL)


@dataclass(frozen=True, order=True)
class ClassLabel:
    """A subject concord marker plus its nominal-class tag."""

    concord: str
    nominal_class: str

    @property
    def is_named(self) -> bool:
        return is_named_concord(self.concord)


def make_class_label(concord: str, ya_nominal: str = DEFAULT_YA_NOMINAL) -> ClassLabel:
    return ClassLabel(concord=concord, nominal_class=nominal_class_for(concord, ya_nominal))
