"""IBM Model 1 word alignment and alignment symmetrization."""

from __future__ import annotations

import math
from collections import defaultdict
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator

from ._validation import check_is_fitted, check_pairs

NULL = "<null>"
HEURISTICS = ("intersection", "union", "grow-diag")

Links = frozenset  # of (source index, target index)


class IBMModel1(BaseEstimator):
    """Lexical translation table ``t(target word | source word)`` learned by EM.

    Parameters
    ----------
    n_iter : int
        Number of EM iterations, starting from a uniform table.
    null : bool
        Whether target words may be generated by an empty source word.
    direction : {"forward", "reverse"}
        ``"reverse"`` swaps the sides of every training pair, so the table
        holds ``t(source word | target word)``. :meth:`align` always takes
        and returns pairs in the original orientation.

    Attributes
    ----------
    table_ : dict[str, dict[str, float]]
        ``table_[f][e] = t(e | f)`` for the generating side ``f``.
    log_likelihood_ : list[float]
        Corpus log-likelihood before each iteration and after the last one.
    """

    def __init__(self, n_iter: int = 5, null: bool = True, direction: str = "forward"):
        self.n_iter = n_iter
        self.null = null
        self.direction = direction

    def _orient(self, src, tgt):
        return (tgt, src) if self.direction == "reverse" else (src, tgt)

    def fit(self, pairs: Iterable, y=None) -> "IBMModel1":
        if self.n_iter < 1:
            raise ValueError("n_iter must be >= 1")
        if self.direction not in ("forward", "reverse"):
            raise ValueError(f"unknown direction {self.direction!r}")
        bitext = [self._orient(s, t) for s, t in check_pairs(pairs, name="alignment corpus")]
        if self.null:
            bitext = [((NULL,) + f, e) for f, e in bitext]

        e_vocab = {e for _, es in bitext for e in es}
        init = 1.0 / len(e_vocab)
        table: dict[str, dict[str, float]] = {}
        for fs, es in bitext:
            for f in fs:
                row = table.setdefault(f, {})
                for e in es:
                    row.setdefault(e, init)

        history = []
        for _ in range(self.n_iter):
            counts: dict[str, dict[str, float]] = defaultdict(lambda: defaultdict(float))
            loglik = 0.0
            for fs, es in bitext:
                log_norm = math.log(len(fs))
                for e in es:
                    z = 0.0
                    for f in fs:
                        z += table[f][e]
                    loglik += math.log(z) - log_norm
                    for f in fs:
                        counts[f][e] += table[f][e] / z
            history.append(loglik)
            table = {}
            for f, row in counts.items():
                total = sum(row.values())
                table[f] = {e: c / total for e, c in row.items()}
        self.table_ = table
        history.append(_log_likelihood(bitext, table))
        self.log_likelihood_ = history
        return self

    def prob(self, e: str, f: str) -> float:
        """``t(e | f)``; zero for pairs that never co-occurred."""
        check_is_fitted(self, "table_")
        return self.table_.get(f, {}).get(e, 0.0)

    def align(self, source: Sequence[str], target: Sequence[str]) -> Links:
        """Viterbi links as (source index, target index), NULL links omitted.

        Each generated word picks the generating word with the highest
        ``t``; ties go to the smallest index and NULL wins only strictly.
        """
        check_is_fitted(self, "table_")
        fs, es = self._orient(tuple(source), tuple(target))
        links = set()
        for j, e in enumerate(es):
            best_i, best_p = None, self.prob(e, NULL) if self.null else -1.0
            for i, f in enumerate(fs):
                p = self.prob(e, f)
                if p > best_p or (best_i is None and p == best_p):
                    best_i, best_p = i, p
            if best_i is not None:
                links.add((j, best_i) if self.direction == "reverse" else (best_i, j))
        return frozenset(links)

    def to_tsv(self, path) -> None:
        check_is_fitted(self, "table_")
        rows = sorted((f, e, p) for f, row in self.table_.items() for e, p in row.items())
        with open(path, "w", encoding="utf-8") as fh:
            for f, e, p in rows:
                fh.write(f"{f}\t{e}\t{p!r}\n")

    @classmethod
    def from_tsv(cls, path, direction: str = "forward") -> "IBMModel1":
        table: dict[str, dict[str, float]] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                cols = line.rstrip("\n").split("\t")
                if len(cols) != 3:
                    raise ValueError(f"{path}:{lineno}: expected source<TAB>target<TAB>probability")
                table.setdefault(cols[0], {})[cols[1]] = float(cols[2])
        model = cls(direction=direction, null=NULL in table)
        model.table_ = table
        model.log_likelihood_ = []
        return model


def _log_likelihood(bitext, table) -> float:
    total = 0.0
    for fs, es in bitext:
        log_norm = math.log(len(fs))
        for e in es:
            total += math.log(sum(table[f][e] for f in fs)) - log_norm
    return total


def train_ibm1(pairs: Iterable, iterations: int = 5, direction: str = "forward",
               null: bool = True) -> IBMModel1:
    return IBMModel1(n_iter=iterations, null=null, direction=direction).fit(pairs)


def viterbi_align(pair, table: IBMModel1) -> Links:
    src, tgt = (pair.source, pair.target) if hasattr(pair, "source") else pair
    return table.align(src, tgt)


def symmetrize(forward: Iterable[tuple[int, int]], reverse: Iterable[tuple[int, int]],
               heuristic: str = "grow-diag") -> Links:
    """Combine two directional link sets.

    ``grow-diag`` starts from the intersection and keeps adding union links
    that touch an accepted link (including diagonally), scanning row-major,
    until nothing changes.
    """
    fwd, rev = set(forward), set(reverse)
    if heuristic not in HEURISTICS:
        raise ValueError(f"unknown symmetrization heuristic {heuristic!r}")
    if heuristic == "intersection":
        return frozenset(fwd & rev)
    union = fwd | rev
    if heuristic == "union":
        return frozenset(union)
    current = fwd & rev
    candidates = sorted(union - current)
    changed = True
    while changed:
        changed = False
        for i, j in candidates:
            if (i, j) in current:
                continue
            if any((i + di, j + dj) in current
                   for di in (-1, 0, 1) for dj in (-1, 0, 1) if di or dj):
                current.add((i, j))
                changed = True
    return frozenset(current)


def format_pharaoh(links: Iterable[tuple[int, int]]) -> str:
    return " ".join(f"{i}-{j}" for i, j in sorted(links))


def parse_pharaoh(line: str) -> Links:
    links = set()
    for item in line.split():
        i, _, j = item.partition("-")
        links.add((int(i), int(j)))
    return frozenset(links)


class WordAligner(BaseEstimator):
    """Both-direction IBM Model 1 plus symmetrization, as one estimator.

    ``transform`` maps sentence pairs to symmetrized link sets.
    """

    def __init__(self, n_iter: int = 5, null: bool = True, heuristic: str = "grow-diag"):
        self.n_iter = n_iter
        self.null = null
        self.heuristic = heuristic

    def fit(self, pairs: Iterable, y=None) -> "WordAligner":
        pairs = check_pairs(pairs)
        self.forward_ = IBMModel1(self.n_iter, self.null, "forward").fit(pairs)
        self.reverse_ = IBMModel1(self.n_iter, self.null, "reverse").fit(pairs)
        return self

    def transform(self, pairs: Iterable) -> list[Links]:
        check_is_fitted(self, "forward_")
        return [symmetrize(self.forward_.align(s, t), self.reverse_.align(s, t), self.heuristic)
                for s, t in check_pairs(pairs)]

    def fit_transform(self, pairs: Iterable, y=None) -> list[Links]:
        pairs = check_pairs(pairs)
        return self.fit(pairs).transform(pairs)
