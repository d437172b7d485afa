from __future__ import annotations

from collections.abc import Iterable


class LabelIndex:
    """
    First-appearance interning of text labels into dense ids 0..n-1.

    The same sequence of labels always yields the same ids, so loads are deterministic
    across platforms and runs.
    """

    def __init__(self, labels: Iterable[str] = ()) -> None:
        self._ids: dict[str, int] = {}
        self._labels: list[str] = []
        for label in labels:
            self.intern(label)

    def intern(self, label: str) -> int:
        label = label.strip()
        existing = self._ids.get(label)
        if existing is not None:
            return existing
        new_id = len(self._labels)
        self._ids[label] = new_id
        self._labels.append(label)
        return new_id

    def get(self, label: str) -> int | None:
        return self._ids.get(label.strip())

    def __contains__(self, label: str) -> bool:
        return label.strip() in self._ids

    def __len__(self) -> int:
        return len(self._labels)

    def labels(self) -> tuple[str, ...]:
        return tuple(self._labels)
