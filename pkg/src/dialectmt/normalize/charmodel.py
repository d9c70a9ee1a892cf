"""Character-level encoder-decoder that rewrites single words.

Source words get a ``:`` start-of-word marker before the first letter,
which is stripped again from outputs. Batches have a fixed width; the last
incomplete batch is filled with empty (all-padding) rows both in training
and in translation, so every input gets exactly one output.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path
from typing import Sequence

import numpy as np
import torch
from sklearn.base import BaseEstimator
from torch import nn

from .._validation import check_is_fitted

PAD, BOS, EOS, UNK = "<pad>", "<s>", "</s>", "<unk>"
SPECIALS = (PAD, BOS, EOS, UNK)
START_SYMBOL = ":"
MAX_WORD_LEN = 40

CHECKPOINT_MAGIC = b"DMTCHAR\x00"
CHECKPOINT_VERSION = 1


class QRNNLayer(nn.Module):
    """Quasi-recurrent layer: width-2 causal convolution gates, fo-pooling."""

    def __init__(self, input_size: int, hidden_size: int):
        super().__init__()
        self.hidden_size = hidden_size
        self.gates = nn.Linear(2 * input_size, 3 * hidden_size)

    def forward(self, x, state=None):
        batch = x.shape[0]
        if state is None:
            prev_x = x.new_zeros(batch, x.shape[2])
            c = x.new_zeros(batch, self.hidden_size)
        else:
            prev_x, c = state
        shifted = torch.cat([prev_x.unsqueeze(1), x[:, :-1]], dim=1)
        z, f, o = self.gates(torch.cat([shifted, x], dim=-1)).chunk(3, dim=-1)
        z, f, o = torch.tanh(z), torch.sigmoid(f), torch.sigmoid(o)
        hs, cs = [], []
        for t in range(x.shape[1]):
            c = f[:, t] * c + (1 - f[:, t]) * z[:, t]
            cs.append(c)
            hs.append(o[:, t] * c)
        return torch.stack(hs, 1), torch.stack(cs, 1), x[:, -1]


class _Seq2Seq(nn.Module):
    def __init__(self, n_symbols: int, embedding_size: int, hidden_size: int, cell: str):
        super().__init__()
        self.cell = cell
        self.embed = nn.Embedding(n_symbols, embedding_size, padding_idx=0)
        if cell == "gru":
            self.encoder = nn.GRU(embedding_size, hidden_size, batch_first=True)
            self.decoder = nn.GRU(embedding_size, hidden_size, batch_first=True)
        elif cell == "qrnn":
            self.encoder = QRNNLayer(embedding_size, hidden_size)
            self.decoder = QRNNLayer(embedding_size, hidden_size)
        else:
            raise ValueError(f"unknown cell type {cell!r}")
        self.out = nn.Linear(hidden_size, n_symbols)

    def encode(self, src, lengths):
        idx = (lengths - 1).clamp(min=0)
        rows = torch.arange(src.shape[0])
        if self.cell == "gru":
            outputs, _ = self.encoder(self.embed(src))
            return outputs[rows, idx].unsqueeze(0)
        _, cs, _ = self.encoder(self.embed(src))
        c = cs[rows, idx]
        return (c.new_zeros(c.shape[0], self.embed.embedding_dim), c)

    def decode_step(self, inp, state):
        """``inp``: (batch, steps) symbol ids; returns logits and new state."""
        emb = self.embed(inp)
        if self.cell == "gru":
            h, state = self.decoder(emb, state)
        else:
            h, cs, last_x = self.decoder(emb, state)
            state = (last_x, cs[:, -1])
        return self.out(h), state

    def forward(self, src, lengths, dec_in):
        logits, _ = self.decode_step(dec_in, self.encode(src, lengths))
        return logits


class CharSeq2Seq(BaseEstimator):
    """Word-to-word character translation model.

    Parameters
    ----------
    hidden_size, embedding_size : int
        Recurrent state and character embedding widths.
    batch_size : int
        Fixed minibatch width; incomplete batches are padded with empty rows.
    epochs : int
        Passes over the training pairs.
    learning_rate : float
        Adam step size.
    cell : {"gru", "qrnn"}
        Recurrent layer type for encoder and decoder.
    seed : int
        Seeds initialization and batch shuffling.
    max_len : int
        Longest accepted input word and longest generated output.

    Attributes
    ----------
    symbols_ : list[str]
        Character vocabulary; the first entries are the special symbols.
    loss_history_ : list[float]
        Mean per-character training loss of each epoch.
    """

    def __init__(self, hidden_size: int = 320, embedding_size: int = 64, batch_size: int = 16,
                 epochs: int = 30, learning_rate: float = 1e-3, cell: str = "gru",
                 seed: int = 0, max_len: int = MAX_WORD_LEN):
        self.hidden_size = hidden_size
        self.embedding_size = embedding_size
        self.batch_size = batch_size
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.cell = cell
        self.seed = seed
        self.max_len = max_len

    # -- encoding helpers ----------------------------------------------------

    def _check_len(self, word: str) -> None:
        if not isinstance(word, str) or not word:
            raise ValueError("words must be non-empty strings")
        if len(word) > self.max_len:
            raise ValueError(
                f"word {word!r} has {len(word)} characters; the limit is {self.max_len}")

    def _ids(self, text: str) -> list[int]:
        unk = self._index[UNK]
        return [self._index.get(ch, unk) for ch in text]

    def _source_batch(self, words: Sequence[str | None]):
        seqs = [self._ids(START_SYMBOL + w) if w is not None else [] for w in words]
        width = max(max(len(s) for s in seqs), 1)
        src = torch.zeros(len(seqs), width, dtype=torch.long)
        for r, s in enumerate(seqs):
            src[r, :len(s)] = torch.tensor(s, dtype=torch.long)
        lengths = torch.tensor([len(s) for s in seqs], dtype=torch.long)
        return src, lengths

    def _target_batch(self, words: Sequence[str | None]):
        bos, eos = self._index[BOS], self._index[EOS]
        seqs = [self._ids(w) + [eos] if w is not None else [] for w in words]
        width = max(max(len(s) for s in seqs), 1)
        dec_in = torch.zeros(len(seqs), width, dtype=torch.long)
        gold = torch.zeros(len(seqs), width, dtype=torch.long)
        for r, s in enumerate(seqs):
            if s:
                gold[r, :len(s)] = torch.tensor(s, dtype=torch.long)
                dec_in[r, :len(s)] = torch.tensor([bos] + s[:-1], dtype=torch.long)
        return dec_in, gold

    def _padded_batches(self, items: list):
        """Fixed-width chunks; the tail chunk is filled up with ``None`` rows."""
        for start in range(0, len(items), self.batch_size):
            chunk = items[start:start + self.batch_size]
            yield chunk + [None] * (self.batch_size - len(chunk))

    # -- training ------------------------------------------------------------

    def fit(self, X: Sequence[str], y: Sequence[str]) -> "CharSeq2Seq":
        if len(X) != len(y):
            raise ValueError(f"{len(X)} source words but {len(y)} target words")
        pairs = list(dict.fromkeys(zip(X, y)))
        if not pairs:
            raise ValueError("no training pairs")
        for src, tgt in pairs:
            self._check_len(src)
            self._check_len(tgt)
        chars = sorted({ch for s, t in pairs for ch in s + t} | {START_SYMBOL})
        self.symbols_ = list(SPECIALS) + chars
        self._index = {s: i for i, s in enumerate(self.symbols_)}

        with torch.random.fork_rng(devices=[]):
            torch.manual_seed(self.seed)
            self.net_ = _Seq2Seq(len(self.symbols_), self.embedding_size, self.hidden_size,
                                 self.cell)
        optimizer = torch.optim.Adam(self.net_.parameters(), lr=self.learning_rate)
        loss_fn = nn.CrossEntropyLoss(ignore_index=0, reduction="sum")
        rng = np.random.RandomState(self.seed)
        self.loss_history_ = []
        self.net_.train()
        for _ in range(self.epochs):
            order = rng.permutation(len(pairs))
            epoch_loss, epoch_chars = 0.0, 0
            for batch in self._padded_batches([pairs[i] for i in order]):
                src, lengths = self._source_batch([p[0] if p else None for p in batch])
                dec_in, gold = self._target_batch([p[1] if p else None for p in batch])
                logits = self.net_(src, lengths, dec_in)
                n_chars = int((gold != 0).sum())
                loss = loss_fn(logits.reshape(-1, logits.shape[-1]), gold.reshape(-1))
                optimizer.zero_grad()
                (loss / n_chars).backward()
                optimizer.step()
                epoch_loss += loss.item()
                epoch_chars += n_chars
            self.loss_history_.append(epoch_loss / epoch_chars)
        self.net_.eval()
        return self

    # -- inference -----------------------------------------------------------

    @torch.no_grad()
    def _decode(self, words: list[str | None]) -> list[str]:
        src, lengths = self._source_batch(words)
        state = self.net_.encode(src, lengths)
        bos, eos = self._index[BOS], self._index[EOS]
        inp = torch.full((len(words), 1), bos, dtype=torch.long)
        outputs = [[] for _ in words]
        done = [w is None for w in words]
        for _ in range(self.max_len):
            logits, state = self.net_.decode_step(inp, state)
            step = logits[:, -1].argmax(-1)
            for r, sym in enumerate(step.tolist()):
                if done[r]:
                    continue
                if sym == eos:
                    done[r] = True
                else:
                    outputs[r].append(sym)
            if all(done):
                break
            inp = step.unsqueeze(1)
        skip = {self._index[s] for s in SPECIALS} | {self._index[START_SYMBOL]}
        return ["".join(self.symbols_[s] for s in out if s not in skip) for out in outputs]

    def predict(self, X: Sequence[str]) -> list[str]:
        """Translate every word; output length always equals input length."""
        check_is_fitted(self, "net_")
        words = list(X)
        for w in words:
            self._check_len(w)
        results: list[str] = []
        for batch in self._padded_batches(words):
            decoded = self._decode(batch)
            results.extend(d for d, w in zip(decoded, batch) if w is not None)
        return results

    def translate(self, word: str) -> str:
        return self.predict([word])[0]

    def score(self, X: Sequence[str], y: Sequence[str]) -> float:
        """Exact-match accuracy."""
        pred = self.predict(X)
        return float(np.mean([p == t for p, t in zip(pred, y)])) if len(y) else 0.0

    # -- checkpoint ----------------------------------------------------------

    def save(self, path) -> None:
        """Binary checkpoint: magic, version, JSON header, raw float32 tensors."""
        check_is_fitted(self, "net_")
        state = self.net_.state_dict()
        header = {
            "params": self.get_params(),
            "symbols": self.symbols_,
            "loss_history": self.loss_history_,
            "tensors": [{"name": k, "shape": list(v.shape), "dtype": "float32"}
                        for k, v in state.items()],
        }
        blob = json.dumps(header, ensure_ascii=False).encode("utf-8")
        with open(path, "wb") as fh:
            fh.write(CHECKPOINT_MAGIC)
            fh.write(struct.pack("<II", CHECKPOINT_VERSION, len(blob)))
            fh.write(blob)
            for v in state.values():
                fh.write(v.detach().cpu().numpy().astype("<f4").tobytes())

    @classmethod
    def load(cls, path) -> "CharSeq2Seq":
        data = Path(path).read_bytes()
        if not data.startswith(CHECKPOINT_MAGIC):
            raise ValueError(f"{path} is not a character-model checkpoint")
        offset = len(CHECKPOINT_MAGIC)
        version, hlen = struct.unpack_from("<II", data, offset)
        if version != CHECKPOINT_VERSION:
            raise ValueError(f"{path}: unsupported checkpoint version {version}")
        offset += 8
        header = json.loads(data[offset:offset + hlen].decode("utf-8"))
        offset += hlen
        model = cls(**header["params"])
        model.symbols_ = header["symbols"]
        model._index = {s: i for i, s in enumerate(model.symbols_)}
        model.loss_history_ = header["loss_history"]
        model.net_ = _Seq2Seq(len(model.symbols_), model.embedding_size, model.hidden_size,
                              model.cell)
        state = {}
        for spec in header["tensors"]:
            count = int(np.prod(spec["shape"])) if spec["shape"] else 1
            arr = np.frombuffer(data, dtype="<f4", count=count, offset=offset)
            offset += 4 * count
            state[spec["name"]] = torch.from_numpy(arr.copy().reshape(spec["shape"]))
        if offset != len(data):
            raise ValueError(f"{path}: trailing bytes after tensor data")
        model.net_.load_state_dict(state)
        model.net_.eval()
        return model


def train_char_model(pairs: Sequence[tuple[str, str]], **hyperparams) -> CharSeq2Seq:
    pairs = list(pairs)
    return CharSeq2Seq(**hyperparams).fit([s for s, _ in pairs], [t for _, t in pairs])


def char_translate_word(model: CharSeq2Seq, word: str) -> str:
    return model.translate(word)
