#!/usr/bin/env python3
"""Recheck a catalog group with sympy's coset enumeration.

Usage: crosscheck_witness.py <file.pcp> <group name>

Builds the finitely presented group from the pc relations (commutators as
x^-1 y^-1 x y), converts it to a permutation group, and prints the order,
element-order counts, |Omega_1|, |G^p|, |G'| and d = log_p |G : G'G^p|.
"""
import math
import re
import sys

from sympy.combinatorics import PermutationGroup
from sympy.combinatorics.fp_groups import FpGroup
from sympy.combinatorics.free_groups import free_group


def read_group(path, name):
    lines, inside, header = [], False, None
    for raw in open(path):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("group "):
            inside = line.split()[1] == name
            if inside:
                header = line
            continue
        if inside:
            lines.append(line)
    if header is None:
        sys.exit(f"no group {name} in {path}")
    p = int(re.search(r"p=(\d+)", header).group(1))
    n = int(re.search(r"n=(\d+)", header).group(1))
    return p, n, lines


def word(gens, text):
    w = gens[0] ** 0
    for tok in text.split():
        g, e = tok.split("^") if "^" in tok else (tok, "1")
        w = w * gens[int(g) - 1] ** int(e)
    return w


def main():
    path, name = sys.argv[1], sys.argv[2]
    p, n, lines = read_group(path, name)
    F, *gens = free_group(" ".join(f"g{i}" for i in range(1, n + 1)))
    comm = lambda x, y: x**-1 * y**-1 * x * y
    power = {i: gens[0] ** 0 for i in range(n)}
    commutator = {(j, i): gens[0] ** 0 for j in range(n) for i in range(j)}
    for line in lines:
        lhs, rhs = line.split(":", 1)
        parts = lhs.split()
        if parts[0] == "pow":
            power[int(parts[1]) - 1] = word(gens, rhs)
        else:
            commutator[(int(parts[1]) - 1, int(parts[2]) - 1)] = word(gens, rhs)
    rels = [gens[i] ** p * power[i] ** -1 for i in range(n)]
    rels += [comm(gens[j], gens[i]) * w**-1 for (j, i), w in commutator.items()]
    P, _ = FpGroup(F, rels)._to_perm_group()
    elems = list(P.generate())
    orders = {}
    for g in elems:
        orders[g.order()] = orders.get(g.order(), 0) + 1
    omega = PermutationGroup([g for g in elems if g.order() == p] or [P.identity])
    agemo = PermutationGroup([g**p for g in elems])
    derived = P.derived_subgroup()
    frattini = PermutationGroup(list(agemo.generators) + list(derived.generators))
    print(f"order {P.order()}")
    print(f"element orders {dict(sorted(orders.items()))}")
    print(f"|Omega_1| {omega.order()} abelian {omega.is_abelian}")
    print(f"|G^p| {agemo.order()}  |G'| {derived.order()}")
    print(f"d {round(math.log(P.order() // frattini.order(), p))}")
    print(f"powerful {derived.is_subgroup(agemo)}")


if __name__ == "__main__":
    main()
