"""JSON serialization of complexes."""

import json
from pathlib import Path
from typing import Union

from feeclab.core.exceptions import ValidationError
from feeclab.core.models import ComplexRep


def dump_complex(rep: ComplexRep, path: Union[str, Path]) -> None:
    """Write a complex as {"levels": [{"dim", "gram", "diff"}]}; the top level has no diff."""
    Path(path).write_text(json.dumps(rep.to_dict(), indent=2), encoding="utf-8")


def load_complex(path: Union[str, Path]) -> ComplexRep:
    """Read a complex written by :func:`dump_complex`.

    Raises
    ------
        ValidationError: The document is malformed

    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ValidationError("path", f"not a JSON document: {e}", str(path)) from e
    if not isinstance(data, dict):
        raise ValidationError("path", "expected a JSON object", str(path))
    try:
        return ComplexRep.from_dict(data)
    except (KeyError, TypeError, ValueError) as e:
        raise ValidationError("levels", f"malformed level entry: {e}") from e
