class UnionFind:
    """Disjoint sets over arbitrary hashable items."""

    def __init__(self, items=()):
        self.parent = {}
        for x in items:
            self.parent[x] = x

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb
        return ra != rb

    def count(self):
        return sum(1 for x in self.parent if self.parent[x] == x)
