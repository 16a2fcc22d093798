"""Toolkit for natural medicinal material (NMM) knowledge engineering.

Subpackages:

* :mod:`nmmkit.snnmm`   systematic names, generic names and NMM IDs
* :mod:`nmmkit.mlmd`    Multilingual Markdown parser, writer and HTML renderer
* :mod:`nmmkit.cgs`     coreference graph search over primary terms
* :mod:`nmmkit.kb`      knowledge base with full-text and vector search
* :mod:`nmmkit.nmtcpt`  glossary-constrained translation with term annotation
* :mod:`nmmkit.rag`     retrieval-augmented chat answering
"""

__version__ = "0.1.0"
