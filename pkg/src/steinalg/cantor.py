"""Clopen subsets of the Cantor space {0,1}^N.

A clopen set is a finite union of cylinders ``cyl(w)`` (all sequences with
prefix w).  Sets are kept in canonical form: no stored word is a prefix of
another and sibling cylinders are merged, so two clopen sets are equal as
point sets exactly when their word tuples coincide.  Set algebra runs on a
binary trie; membership of eventually-zero points is a prefix walk.
"""

from __future__ import annotations

# trie nodes: True (full subtree), False (empty), or (zero_child, one_child)


def _norm(node):
    if node is True or node is False:
        return node
    z, o = node
    if z is True and o is True:
        return True
    if z is False and o is False:
        return False
    return (z, o)


def _insert(node, word):
    if node is True:
        return True
    if not word:
        return True
    if node is False:
        node = (False, False)
    z, o = node
    if word[0] == "0":
        return _norm((_insert(z, word[1:]), o))
    return _norm((z, _insert(o, word[1:])))


def _union(a, b):
    if a is True or b is True:
        return True
    if a is False:
        return b
    if b is False:
        return a
    return _norm((_union(a[0], b[0]), _union(a[1], b[1])))


def _inter(a, b):
    if a is False or b is False:
        return False
    if a is True:
        return b
    if b is True:
        return a
    return _norm((_inter(a[0], b[0]), _inter(a[1], b[1])))


def _diff(a, b):
    if a is False or b is True:
        return False
    if b is False:
        return a
    if a is True:
        a = (True, True)
    return _norm((_diff(a[0], b[0]), _diff(a[1], b[1])))


def _words(node, prefix=""):
    if node is True:
        yield prefix
    elif node is not False:
        yield from _words(node[0], prefix + "0")
        yield from _words(node[1], prefix + "1")


def _depth(node):
    if node is True or node is False:
        return 0
    return 1 + max(_depth(node[0]), _depth(node[1]))


class ClopenSet:
    """Canonical finite union of binary cylinder sets."""

    __slots__ = ("words",)

    def __init__(self, words=()):
        node = False
        for w in words:
            if not isinstance(w, str) or any(ch not in "01" for ch in w):
                raise ValueError(f"bad cylinder word {w!r}")
            node = _insert(node, w)
        self.words = tuple(sorted(_words(node)))

    @classmethod
    def _from_node(cls, node) -> "ClopenSet":
        out = cls.__new__(cls)
        out.words = tuple(sorted(_words(node)))
        return out

    @classmethod
    def full(cls) -> "ClopenSet":
        return cls([""])

    @classmethod
    def empty(cls) -> "ClopenSet":
        return cls()

    def _node(self):
        node = False
        for w in self.words:
            node = _insert(node, w)
        return node

    def __or__(self, other):
        return ClopenSet._from_node(_union(self._node(), other._node()))

    def __and__(self, other):
        return ClopenSet._from_node(_inter(self._node(), other._node()))

    def __sub__(self, other):
        return ClopenSet._from_node(_diff(self._node(), other._node()))

    def complement(self) -> "ClopenSet":
        return ClopenSet._from_node(_diff(True, self._node()))

    def is_empty(self) -> bool:
        return not self.words

    def is_full(self) -> bool:
        return self.words == ("",)

    def contains_point(self, word: str) -> bool:
        """Membership of the eventually-zero sequence word*000..."""
        node = self._node()
        i = 0
        while node is not True and node is not False:
            bit = word[i] if i < len(word) else "0"
            node = node[0] if bit == "0" else node[1]
            i += 1
        return node is True

    def contains_base(self) -> bool:
        return self.contains_point("")

    def subset_of(self, other: "ClopenSet") -> bool:
        return (self - other).is_empty()

    def depth(self) -> int:
        return max((len(w) for w in self.words), default=0)

    def __eq__(self, other):
        return isinstance(other, ClopenSet) and self.words == other.words

    def __hash__(self):
        return hash(self.words)

    def __repr__(self):
        inner = ",".join(f'"{w}"' for w in self.words)
        return f"ClopenSet({inner})"
