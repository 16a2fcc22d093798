"""Full-text inverted index and cosine-similarity vector index."""

from __future__ import annotations

import hashlib
from collections import Counter
from typing import Protocol

import numpy as np

from .tokenizer import Tokenizer


class IndexError_(LookupError):
    """Index missing, empty or built with an incompatible embedder."""


class InvertedIndex:
    """Token -> {doc key: term frequency}.

    Scoring counts the query's tokens found in a document, each token
    capped at its multiplicity in the query (no idf). A document queried
    by its own full text therefore reaches the maximum possible score.
    Ties go to the shorter document, then to the smaller key.
    """

    def __init__(self, tokenizer: Tokenizer):
        self.tokenizer = tokenizer
        self.postings: dict[str, dict[str, int]] = {}
        self.doc_len: dict[str, int] = {}

    def __len__(self) -> int:
        return len(self.doc_len)

    def add(self, key: str, text: str) -> None:
        if key in self.doc_len:
            self.remove(key)
        counts = Counter(self.tokenizer.tokenize_for_search(text))
        self.doc_len[key] = sum(counts.values())
        for tok, tf in counts.items():
            self.postings.setdefault(tok, {})[key] = tf

    def remove(self, key: str) -> None:
        self.doc_len.pop(key, None)
        for tok in list(self.postings):
            docs = self.postings[tok]
            docs.pop(key, None)
            if not docs:
                del self.postings[tok]

    def search(self, query: str, k: int = 10, keep=None) -> list[tuple[str, float]]:
        q = Counter(self.tokenizer.tokenize_for_search(query))
        scores: Counter[str] = Counter()
        for tok, qtf in q.items():
            for key, tf in self.postings.get(tok, {}).items():
                if keep is None or keep(key):
                    scores[key] += min(tf, qtf)
        ranked = sorted(scores.items(), key=lambda kv: (-kv[1], self.doc_len[kv[0]], kv[0]))
        return [(key, float(s)) for key, s in ranked[:k]]


class Embedder(Protocol):
    dim: int

    def embed(self, text: str) -> np.ndarray: ...


class HashingEmbedder:
    """Deterministic bag-of-tokens embedding, L2-normalized.

    Every token adds 1 to ``n_hashes`` slots chosen by BLAKE2b, so two
    different tokens share a whole footprint only rarely.
    """

    def __init__(self, tokenizer: Tokenizer, dim: int = 64, n_hashes: int = 2):
        if dim < 1 or n_hashes < 1:
            raise ValueError("dim and n_hashes must be positive")
        self.tokenizer = tokenizer
        self.dim = dim
        self.n_hashes = n_hashes

    def slots(self, token: str) -> list[int]:
        digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8 * self.n_hashes).digest()
        return [int.from_bytes(digest[8 * i : 8 * i + 8], "little") % self.dim for i in range(self.n_hashes)]

    def embed(self, text: str) -> np.ndarray:
        vec = np.zeros(self.dim)
        for tok in self.tokenizer.tokenize_for_search(text):
            for s in self.slots(tok):
                vec[s] += 1.0
        norm = np.linalg.norm(vec)
        return vec / norm if norm > 0 else vec


class VectorIndex:
    def __init__(self, dim: int):
        self.dim = dim
        self.keys: list[str] = []
        self._rows: list[np.ndarray] = []
        self._matrix: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.keys)

    def add(self, key: str, vector) -> None:
        v = np.asarray(vector, dtype=float)
        if v.shape != (self.dim,):
            raise IndexError_(f"embedding dimension {v.shape} does not match index dimension {self.dim}")
        self.keys.append(key)
        self._rows.append(v)
        self._matrix = None

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            self._matrix = np.vstack(self._rows) if self._rows else np.zeros((0, self.dim))
        return self._matrix

    def search(self, vector, k: int = 10, keep=None) -> list[tuple[str, float]]:
        if not self.keys:
            raise IndexError_("vector index is empty")
        q = np.asarray(vector, dtype=float)
        if q.shape != (self.dim,):
            raise IndexError_(f"query dimension {q.shape} does not match index dimension {self.dim}")
        m = self.matrix
        norms = np.linalg.norm(m, axis=1) * np.linalg.norm(q)
        sims = np.divide(m @ q, norms, out=np.zeros(len(self.keys)), where=norms > 0)
        order = sorted(
            (i for i in range(len(self.keys)) if keep is None or keep(self.keys[i])),
            key=lambda i: (-round(float(sims[i]), 12), self.keys[i]),
        )
        return [(self.keys[i], float(sims[i])) for i in order[:k]]


def cosine(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    denom = np.linalg.norm(a) * np.linalg.norm(b)
    return float(a @ b / denom) if denom else 0.0
