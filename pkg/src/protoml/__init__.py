"""protoml: an editor-agnostic toolkit for ML prototyping notebooks.

Operates on ``.ipynb`` files: data-flow explanation, quality review against
stakeholder personas, branching snapshot history with an experiment tree,
similarity-based recommendations, prototype cards, and a knowledge-source
catalog with trace links. Library, CLI (``protoml``), and a local JSON API
(``protoml serve``) share one engine.
"""

__version__ = "0.1.0"

from .errors import ProtomlError
from .model import Cell, ContentHash, Notebook, canonical_hash, parse_notebook

__all__ = [
    "Cell",
    "ContentHash",
    "Notebook",
    "ProtomlError",
    "__version__",
    "canonical_hash",
    "parse_notebook",
]
