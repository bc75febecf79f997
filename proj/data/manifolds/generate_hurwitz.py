#!/usr/bin/env python3
"""Generate tile-adjacency graphs of {7,3} Hurwitz surface tessellations.

The orientation-preserving symmetry group of a Hurwitz surface is a quotient
of the (2,3,7) triangle group. For G = PSL(2, q) we search for a generating
pair (face rotation `a` of order 7, edge flip `t` of order 2) whose product
`a*t` has order 3. Darts are group elements; heptagonal tiles are the right
cosets g<a>; tiles g<a> and g*t<a> share an edge.

  q = 7  -> Klein quartic, genus 3, 24 tiles
  q = 13 -> a genus-14 surface, 156 tiles

Usage: generate_hurwitz.py q name > file
"""
import itertools
import sys


def mat_mul(x, y, q):
    return ((x[0] * y[0] + x[1] * y[2]) % q, (x[0] * y[1] + x[1] * y[3]) % q,
            (x[2] * y[0] + x[3] * y[2]) % q, (x[2] * y[1] + x[3] * y[3]) % q)


def canon(x, q):
    # PSL: identify x with -x
    neg = tuple((-v) % q for v in x)
    return min(x, neg)


def psl(q):
    out = set()
    for a, b, c, d in itertools.product(range(q), repeat=4):
        if (a * d - b * c) % q == 1:
            out.add(canon((a, b, c, d), q))
    return sorted(out)


def order(x, q):
    ident = canon((1, 0, 0, 1), q)
    y, k = x, 1
    while y != ident:
        y = canon(mat_mul(y, x, q), q)
        k += 1
    return k


def generated(gens, q, target):
    seen = {canon((1, 0, 0, 1), q)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                p = canon(mat_mul(g, h, q), q)
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
    return len(seen) == target


def main():
    q = int(sys.argv[1])
    name = sys.argv[2]
    group = psl(q)
    sevens = [g for g in group if order(g, q) == 7]
    twos = [g for g in group if order(g, q) == 2]
    a = sevens[0]
    for t in twos:
        if order(canon(mat_mul(a, t, q), q), q) == 3 and generated([a, t], q, len(group)):
            break
    else:
        raise SystemExit("no Hurwitz generating pair")
    power = [canon((1, 0, 0, 1), q)]
    for _ in range(6):
        power.append(canon(mat_mul(power[-1], a, q), q))
    tile_of = {}
    tiles = 0
    for g in group:
        if g in tile_of:
            continue
        for p in power:
            tile_of[canon(mat_mul(g, p, q), q)] = tiles
        tiles += 1
    edges = set()
    for g in group:
        u = tile_of[g]
        v = tile_of[canon(mat_mul(g, t, q), q)]
        if u == v:
            raise SystemExit("tile adjacent to itself")
        edges.add((min(u, v), max(u, v)))
    print(f"# {name}: heptagonal tiles of the {{7,3}} tessellation on the PSL(2,{q}) Hurwitz surface")
    print(f"# generated by generate_hurwitz.py {q} {name}")
    print(f"n {tiles}")
    for u, v in sorted(edges):
        print(f"e {u} {v}")


if __name__ == "__main__":
    main()
