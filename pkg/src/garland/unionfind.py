"""Disjoint-set forest keyed by arbitrary hashable items."""


class UnionFind:
    def __init__(self, items=()):
        self.parent = {}
        self.size = {}
        for x in items:
            self.add(x)

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return rx
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]
        return rx

    def groups(self):
        """Map root -> members, members in insertion order."""
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out

    def __len__(self):
        return sum(1 for x in self.parent if self.parent[x] == x)
