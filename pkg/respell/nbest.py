"""
Bounded best-first list of distinct hypotheses.
"""


class NBestList:
    """
    Keeps the best score seen for each key, and only the top entries.

    Usage:
        nbest = NBestList(max_entries=5)
        nbest.add("Katie", -1.2, payload=units)
        for key, score, payload in nbest.get_top(3):
            ...
    """

    def __init__(self, max_entries):
        """
        Args:
            max_entries: Maximum number of distinct keys to keep (None = unlimited)
        """
        if max_entries is not None and max_entries < 1:
            raise ValueError(f"max_entries must be >= 1, got {max_entries}")
        self.max_entries = max_entries
        self._entries = {}

    @staticmethod
    def _rank_key(item):
        key, (score, payload) = item
        return (-score, key, payload)

    def add(self, key, score, payload=()):
        """
        Offer a scored hypothesis.

        A key already present keeps the higher score; on an exact tie the
        smaller payload wins so results do not depend on arrival order.
        """
        current = self._entries.get(key)
        if current is None or (-score, payload) < (-current[0], current[1]):
            self._entries[key] = (score, payload)

        if self.max_entries is not None and len(self._entries) > self.max_entries:
            worst = max(self._entries.items(), key=self._rank_key)
            del self._entries[worst[0]]

    def get_top(self, n=None):
        """Best entries first, as (key, score, payload) tuples."""
        ranked = sorted(self._entries.items(), key=self._rank_key)
        if n is not None:
            ranked = ranked[:n]
        return [(key, score, payload) for key, (score, payload) in ranked]

    def __len__(self):
        return len(self._entries)
