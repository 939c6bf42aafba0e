"""Constraint phrases, the token trie, and per-hypothesis match state.

A hypothesis tracks at most one in-progress phrase (the active trie path).
Tokens that neither extend the active path nor complete it reset the state
to the root with a single re-offer against the root children; no full
suffix re-matching is attempted, so overlapping self-similar phrases can
undercount partial progress (documented limitation).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .text import Vocabulary, split_text, BOS, EOS

log = logging.getLogger(__name__)


class ConstraintError(ValueError):
    """Raised for malformed or unrepresentable constraint phrases."""


@dataclass(frozen=True)
class ConstraintPhrase:
    tokens: tuple
    source_text: str = ""

    def __post_init__(self):
        if len(self.tokens) == 0:
            raise ConstraintError("constraint phrase must be nonempty")
        object.__setattr__(self, "tokens", tuple(self.tokens))

    def __len__(self):
        return len(self.tokens)


class ConstraintSet:
    """Ordered, deduplicated collection of constraint phrases."""

    def __init__(self, phrases):
        seen = set()
        kept = []
        for p in phrases:
            if p.tokens in seen:
                log.warning("dropping duplicate constraint phrase %r", p.source_text)
                continue
            seen.add(p.tokens)
            kept.append(p)
        self.phrases = kept
        self.total_tokens = sum(len(p) for p in kept)

    def __len__(self):
        return len(self.phrases)

    def __iter__(self):
        return iter(self.phrases)

    def __bool__(self):
        return bool(self.phrases)

    @classmethod
    def from_texts(cls, texts, vocab: Vocabulary) -> "ConstraintSet":
        phrases = []
        for text in texts:
            toks = split_text(text)
            if not toks:
                raise ConstraintError(f"constraint {text!r} tokenizes to nothing")
            bad = [t for t in toks if t in (BOS, EOS)]
            if bad:
                raise ConstraintError(f"constraint {text!r} contains reserved tokens")
            ids = [vocab.id_of(t) for t in toks]
            if vocab.unk_id in ids:
                missing = [t for t in toks if vocab.id_of(t) == vocab.unk_id]
                raise ConstraintError(
                    f"constraint {text!r} not representable: unknown tokens {missing}"
                )
            phrases.append(ConstraintPhrase(tuple(ids), text))
        return cls(phrases)

    def surface_texts(self) -> list[str]:
        return [p.source_text for p in self.phrases]


class TrieNode:
    __slots__ = ("children", "phrase_index", "depth")

    def __init__(self, depth: int = 0):
        self.children: dict[int, TrieNode] = {}
        self.phrase_index: int | None = None  # terminal marker
        self.depth = depth


class ConstraintTrie:
    """Token trie over a ConstraintSet; immutable after build."""

    def __init__(self, cs: ConstraintSet):
        self.constraint_set = cs
        self.root = TrieNode()
        self.phrase_lengths = [len(p) for p in cs.phrases]
        self.total_tokens = cs.total_tokens
        for idx, phrase in enumerate(cs.phrases):
            node = self.root
            for tok in phrase.tokens:
                nxt = node.children.get(tok)
                if nxt is None:
                    nxt = TrieNode(node.depth + 1)
                    node.children[tok] = nxt
                node = nxt
            if node.phrase_index is not None:
                raise ConstraintError("duplicate phrase reached the trie")
            node.phrase_index = idx

    def num_phrases(self) -> int:
        return len(self.phrase_lengths)

    def initial_state(self) -> "ConstraintState":
        return ConstraintState(
            completed=(False,) * self.num_phrases(),
            node=self.root,
        )


@dataclass(frozen=True)
class ConstraintState:
    """Per-hypothesis satisfaction progress: completed flags + active path."""

    completed: tuple
    node: TrieNode = field(compare=False)

    @property
    def partial_len(self) -> int:
        return self.node.depth

    def met_tokens(self, trie: ConstraintTrie) -> int:
        done = sum(
            trie.phrase_lengths[i] for i, c in enumerate(self.completed) if c
        )
        return done + self.node.depth

    def all_satisfied(self) -> bool:
        return all(self.completed)


def build_trie(cs: ConstraintSet) -> ConstraintTrie:
    return ConstraintTrie(cs)


def _step_into(state: ConstraintState, trie: ConstraintTrie,
               child: TrieNode) -> ConstraintState:
    idx = child.phrase_index
    if idx is not None and not state.completed[idx]:
        completed = tuple(
            True if i == idx else c for i, c in enumerate(state.completed)
        )
        # Completing a phrase resets the active path; a longer phrase
        # sharing this path loses its partial progress (single active
        # match keeps the state O(1)).
        return ConstraintState(completed=completed, node=trie.root)
    if _subtree_has_unmet(child, state.completed):
        return ConstraintState(completed=state.completed, node=child)
    # Path leads only to already-completed phrases: no progress to bank.
    return ConstraintState(completed=state.completed, node=trie.root)


def advance(state: ConstraintState, trie: ConstraintTrie,
            token: int) -> ConstraintState:
    """Advance the match state by one generated token."""
    child = state.node.children.get(token)
    if child is not None:
        return _step_into(state, trie, child)
    if state.node is trie.root:
        return state
    # Abandon the partial match; re-offer the token once against the root.
    root_child = trie.root.children.get(token)
    if root_child is not None:
        return _step_into(state, trie, root_child)
    return ConstraintState(completed=state.completed, node=trie.root)


def num_met_tokens(state: ConstraintState, trie: ConstraintTrie) -> int:
    return state.met_tokens(trie)


def all_satisfied(state: ConstraintState) -> bool:
    return state.all_satisfied()


def constraint_tokens(state: ConstraintState, trie: ConstraintTrie) -> set[int]:
    """Tokens that advance the state: active-path continuations plus root
    children of phrases not yet completed."""
    toks = set()
    for node in (state.node, trie.root):
        for tok, child in node.children.items():
            if _subtree_has_unmet(child, state.completed):
                toks.add(tok)
    return toks


def _subtree_has_unmet(node: TrieNode, completed: tuple) -> bool:
    if node.phrase_index is not None and not completed[node.phrase_index]:
        return True
    return any(_subtree_has_unmet(c, completed) for c in node.children.values())


def unmet_phrases(state: ConstraintState, trie: ConstraintTrie):
    return [
        trie.constraint_set.phrases[i]
        for i, c in enumerate(state.completed)
        if not c
    ]


def contains_phrase(seq, phrase: ConstraintPhrase) -> bool:
    """True iff the phrase occurs contiguously in the sequence."""
    needle = tuple(phrase.tokens)
    n = len(needle)
    if n == 0 or n > len(seq):
        return False
    seq = tuple(seq)
    return any(seq[i:i + n] == needle for i in range(len(seq) - n + 1))
