"""Finite groups as multiplication tables over element ids 0..order-1.

Element id 0 is always the identity.  Groups built by closing permutation
generators get a canonical breadth-first element order, which downstream
code (automorphism search, stem extension data files) relies on.
"""

import os
import random
from dataclasses import dataclass
from . import perms

DEFAULT_ORDER_BOUND = 120
FULL_ASSOC_CHECK_BOUND = 128
SAMPLED_ASSOC_TRIALS = 20000


class GroupError(ValueError):
    pass


class FiniteGroup:
    def __init__(self, name, table, validate=False, gen_ids=None, words=None):
        """table is a flat list of order**2 ids, row a column b = a*b."""
        order = int(round(len(table) ** 0.5))
        if order * order != len(table):
            raise GroupError("table length %d is not a square" % len(table))
        if order == 0:
            raise GroupError("empty group description")
        self.name = name
        self.order = order
        self._table = list(table)
        self._inv = self._build_inverse()
        self._gen_ids = gen_ids
        self._words = words
        self._abelian = None
        self._element_orders = None
        self._autcache = None
        if validate:
            self.check()

    # -- core arithmetic ------------------------------------------------------

    def mul(self, a, b):
        return self._table[a * self.order + b]

    def inv(self, a):
        return self._inv[a]

    def conj(self, a, b):
        """a * b * a^-1"""
        return self.mul(self.mul(a, b), self._inv[a])

    def comm(self, a, b):
        """[a, b] = a b a^-1 b^-1"""
        return self.mul(self.mul(a, b), self.mul(self._inv[a], self._inv[b]))

    def mul_word(self, ids):
        acc = 0
        for x in ids:
            acc = self.mul(acc, x)
        return acc

    def power(self, a, k):
        if k < 0:
            return self.power(self._inv[a], -k)
        acc = 0
        base = a
        while k:
            if k & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            k >>= 1
        return acc

    def elements(self):
        return range(self.order)

    def element_order(self, a):
        if self._element_orders is None:
            self._element_orders = [0] * self.order
        cached = self._element_orders[a]
        if cached:
            return cached
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        self._element_orders[a] = k
        return k

    def is_abelian(self):
        if self._abelian is None:
            self._abelian = all(
                self.mul(a, b) == self.mul(b, a)
                for a in range(self.order) for b in range(a))
        return self._abelian

    def is_perfect(self):
        return len(commutator_subgroup(self).members) == self.order

    # -- validation ------------------------------------------------------------

    def _build_inverse(self):
        n = self.order
        inv = [-1] * n
        for a in range(n):
            row = self._table[a * n:(a + 1) * n]
            if sorted(row) != list(range(n)):
                raise GroupError("row %d of the table is not a bijection" % a)
            for b in range(n):
                if row[b] == 0:
                    inv[a] = b
        for a in range(n):
            if self.mul(inv[a], a) != 0:
                raise GroupError("inverse table inconsistent at %d" % a)
        return inv

    def check(self, rng=None):
        """Identity, bijectivity and associativity checks.

        Associativity is verified on all triples up to order 128; above that
        a documented number of random triples is sampled.
        """
        n = self.order
        for a in range(n):
            if self.mul(0, a) != a or self.mul(a, 0) != a:
                raise GroupError("id 0 is not a two-sided identity")
        cols = [[self._table[a * n + b] for a in range(n)] for b in range(n)]
        for b in range(n):
            if sorted(cols[b]) != list(range(n)):
                raise GroupError("column %d of the table is not a bijection" % b)
        if n <= FULL_ASSOC_CHECK_BOUND:
            for a in range(n):
                for b in range(n):
                    ab = self.mul(a, b)
                    for c in range(n):
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)):
                            raise GroupError(
                                "not associative at (%d,%d,%d)" % (a, b, c))
        else:
            rng = rng or random.Random(0)
            for _ in range(SAMPLED_ASSOC_TRIALS):
                a, b, c = (rng.randrange(n) for _ in range(3))
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                    raise GroupError("not associative at (%d,%d,%d)" % (a, b, c))
        return self

    # -- construction -----------------------------------------------------------

    @classmethod
    def from_table(cls, name, table, validate=True):
        return cls(name, table, validate=validate)

    @classmethod
    def from_perm_gens(cls, name, gens, degree=0):
        """Close permutation generators breadth-first into a full table.

        Element 0 is the identity; elements appear in discovery order, which
        makes the id assignment deterministic for a fixed generator list.
        """
        gens = [tuple(g) for g in gens]
        if not gens:
            raise GroupError("empty generator list")
        n = max([degree] + [len(g) for g in gens])
        gens = [tuple(g) + tuple(range(len(g), n)) for g in gens]
        for g in gens:
            perms.check_perm(g)
        ident = perms.identity_perm(n)
        elems = [ident]
        index = {ident: 0}
        words = []  # build steps (element, parent, gen index)
        i = 0
        while i < len(elems):
            for gi, g in enumerate(gens):
                c = perms.mult(elems[i], g)
                if c not in index:
                    index[c] = len(elems)
                    elems.append(c)
                    words.append((len(elems) - 1, i, gi))
            i += 1
        order = len(elems)
        table = [0] * (order * order)
        for a in range(order):
            for b in range(order):
                table[a * order + b] = index[perms.mult(elems[a], elems[b])]
        gen_ids = [index[g] for g in gens]
        grp = cls(name, table, gen_ids=gen_ids, words=words)
        grp._perm_elems = elems
        return grp

    @classmethod
    def cyclic(cls, n, name=None):
        table = [(a + b) % n for a in range(n) for b in range(n)]
        return cls(name or ("Z%d" % n), table)

    @classmethod
    def trivial(cls):
        return cls("1", [0])

    # -- generators and words -----------------------------------------------------

    def generator_data(self):
        """A generating id list plus breadth-first build steps.

        Returns (gen_ids, steps) where steps is a list of triples
        (element, parent, gen_index) with element = parent * gens[gen_index],
        covering every non-identity element, parents always built first.
        For groups closed from permutation generators this is the original
        closure data; otherwise a small generating set is found greedily.
        """
        if self._gen_ids is None or self._words is None:
            gen_ids = []
            reached = {0}
            while len(reached) < self.order:
                best = None
                for g in range(1, self.order):
                    if g in reached:
                        continue
                    closure = close_under_product(self, sorted(reached | {g}))
                    if best is None or len(closure) > best[1]:
                        best = (g, len(closure), closure)
                        if len(closure) == self.order:
                            break
                gen_ids.append(best[0])
                reached = set(best[2])
            steps = []
            seen = {0}
            queue = [0]
            while queue:
                a = queue.pop(0)
                for gi, g in enumerate(gen_ids):
                    c = self.mul(a, g)
                    if c not in seen:
                        seen.add(c)
                        steps.append((c, a, gi))
                        queue.append(c)
            self._gen_ids = gen_ids
            self._words = steps
        return self._gen_ids, self._words

    def __repr__(self):
        return "FiniteGroup(%s, order=%d)" % (self.name, self.order)


def close_under_product(G, seed_ids):
    """Subgroup closure of a set of element ids, as a sorted tuple."""
    members = set(seed_ids)
    members.add(0)
    queue = list(members)
    while queue:
        a = queue.pop()
        for b in list(members):
            for c in (G.mul(a, b), G.mul(b, a)):
                if c not in members:
                    members.add(c)
                    queue.append(c)
        c = G.inv(a)
        if c not in members:
            members.add(c)
            queue.append(c)
    return tuple(sorted(members))


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    members: tuple

    def __post_init__(self):
        mem = set(self.members)
        if 0 not in mem:
            raise GroupError("subgroup misses the identity")
        for a in self.members:
            if self.parent.inv(a) not in mem:
                raise GroupError("subgroup not closed under inverse")
            for b in self.members:
                if self.parent.mul(a, b) not in mem:
                    raise GroupError("subgroup not closed under product")

    @property
    def order(self):
        return len(self.members)

    def contains(self, other):
        return set(other.members) <= set(self.members)

    def is_normal(self):
        G = self.parent
        mem = set(self.members)
        return all(G.conj(g, h) in mem
                   for g in G.elements() for h in self.members)

    def as_group(self, name=None):
        """Reindex the subgroup as a standalone FiniteGroup.

        Members keep their sorted order, so id 0 stays the identity.
        """
        ids = sorted(self.members)
        pos = {x: i for i, x in enumerate(ids)}
        n = len(ids)
        table = [0] * (n * n)
        for i, a in enumerate(ids):
            for j, b in enumerate(ids):
                table[i * n + j] = pos[self.parent.mul(a, b)]
        return FiniteGroup(name or ("%s^sub%d" % (self.parent.name, n)), table)


@dataclass
class SubgroupLattice:
    group: FiniteGroup
    subgroups: list        # list of Subgroup, sorted by (order, members)
    contains: list         # contains[i][j] True iff subgroups[j] <= subgroups[i]

    def index_of(self, members):
        key = tuple(sorted(members))
        for i, H in enumerate(self.subgroups):
            if H.members == key:
                return i
        raise KeyError("subgroup not in lattice")


def subgroup_lattice(G, order_bound=DEFAULT_ORDER_BOUND):
    """All subgroups of G with their containment relation.

    Breadth-first growth: start from cyclic subgroups, then repeatedly close
    each known subgroup together with one extra element.
    """
    if G.order > order_bound:
        raise GroupError(
            "order %d exceeds subgroup-lattice bound %d" % (G.order, order_bound))
    found = {close_under_product(G, [])}
    frontier = set()
    for g in G.elements():
        frontier.add(close_under_product(G, [g]))
    found |= frontier
    while frontier:
        new = set()
        for H in frontier:
            if len(H) == G.order:
                continue
            mem = set(H)
            for g in G.elements():
                if g in mem:
                    continue
                K = close_under_product(G, list(H) + [g])
                if K not in found:
                    found.add(K)
                    new.add(K)
        frontier = new
    subs = [Subgroup(G, mem) for mem in sorted(found, key=lambda m: (len(m), m))]
    contains = [[set(B.members) <= set(A.members) for B in subs] for A in subs]
    return SubgroupLattice(G, subs, contains)


def subgroup_membership_masks(G, order_bound=DEFAULT_ORDER_BOUND):
    """Per-element bitmasks over the subgroup lattice: bit i of mask[e] is
    set when subgroups[i] contains e.  A tuple generates G exactly when the
    AND of its masks is the full group's bit alone."""
    cached = getattr(G, "_mask_cache", None)
    if cached is not None:
        return cached
    lattice = subgroup_lattice(G, order_bound=order_bound)
    masks = [0] * G.order
    for i, H in enumerate(lattice.subgroups):
        for e in H.members:
            masks[e] |= 1 << i
    full_bit = 1 << (len(lattice.subgroups) - 1)
    G._mask_cache = (masks, full_bit)
    return G._mask_cache


def commutator_subgroup(G):
    comms = {G.comm(a, b) for a in G.elements() for b in G.elements()}
    return Subgroup(G, close_under_product(G, sorted(comms)))


@dataclass
class AbelianizationMap:
    quotient: FiniteGroup
    projection: tuple     # element id of G -> element id of quotient

    def __call__(self, a):
        return self.projection[a]


def quotient_by_normal(G, normal_members, name=None):
    """Quotient of G by a normal subgroup, with the projection map.

    Cosets are keyed by their minimal member; the identity coset gets id 0
    and the rest follow in key order.
    """
    D = set(normal_members)
    cosets = {}
    for g in G.elements():
        key = min(G.mul(g, d) for d in D)
        cosets.setdefault(key, set()).add(g)
    id_key = next(k for k, mem in cosets.items() if 0 in mem)
    ordered = [id_key] + sorted(k for k in cosets if k != id_key)
    idx = {k: i for i, k in enumerate(ordered)}
    proj = [0] * G.order
    for k, members in cosets.items():
        for g in members:
            proj[g] = idx[k]
    n = len(ordered)
    table = [0] * (n * n)
    for i, k1 in enumerate(ordered):
        for j, k2 in enumerate(ordered):
            table[i * n + j] = proj[G.mul(k1, k2)]
    Q = FiniteGroup(name or (G.name + "_quo"), table)
    return Q, tuple(proj)


def abelianization(G):
    """Quotient of G by its commutator subgroup, with the projection map."""
    D = commutator_subgroup(G).members
    Q, proj = quotient_by_normal(G, D, name=G.name + "_ab")
    if not Q.is_abelian():
        raise GroupError("abelianization quotient is not abelian")
    return AbelianizationMap(Q, proj)


# -- automorphisms ------------------------------------------------------------


def _hom_from_gen_images(G, H, steps, images):
    """Extend generator images to a full map G -> H via build steps.

    Returns the image list, or None if the extension is not multiplicative.
    """
    img = [None] * G.order
    img[0] = 0
    for elem, parent, gi in steps:
        img[elem] = H.mul(img[parent], images[gi])
    for a in range(G.order):
        ia = img[a]
        for b in range(G.order):
            if img[G.mul(a, b)] != H.mul(ia, img[b]):
                return None
    return img


def find_isomorphism(G, H):
    """An isomorphism G -> H as an image list, or None.

    Brute force over order-compatible images of a small generating set of G;
    fine for the desk-scale orders this package targets.
    """
    if G.order != H.order:
        return None
    gen_ids, steps = G.generator_data()
    orders = [G.element_order(g) for g in gen_ids]
    pools = [[h for h in H.elements() if H.element_order(h) == o] for o in orders]

    def rec(k, chosen):
        if k == len(gen_ids):
            img = _hom_from_gen_images(G, H, steps, chosen)
            if img is not None and len(set(img)) == G.order:
                return img
            return None
        for h in pools[k]:
            out = rec(k + 1, chosen + [h])
            if out is not None:
                return out
        return None

    return rec(0, [])


def automorphisms(G, order_bound=DEFAULT_ORDER_BOUND):
    """The full automorphism group of G as element-id permutations."""
    if G.order > order_bound:
        raise GroupError(
            "order %d exceeds automorphism bound %d" % (G.order, order_bound))
    if G._autcache is not None:
        return G._autcache
    gen_ids, steps = G.generator_data()
    pools = [[h for h in G.elements()
              if G.element_order(h) == G.element_order(g)] for g in gen_ids]
    out = []

    def rec(k, chosen):
        if k == len(gen_ids):
            img = _hom_from_gen_images(G, G, steps, chosen)
            if img is not None and len(set(img)) == G.order:
                out.append(tuple(img))
            return
        for h in pools[k]:
            rec(k + 1, chosen + [h])

    rec(0, [])
    for phi in out:
        for a in G.elements():
            for b in G.elements():
                if phi[G.mul(a, b)] != G.mul(phi[a], phi[b]):
                    raise GroupError("automorphism search produced a non-hom")
    G._autcache = out
    return out


# -- stem extensions -------------------------------------------------------------


@dataclass
class StemExtension:
    cover: FiniteGroup
    projection: tuple     # cover element id -> base element id
    center_ids: tuple

    def validate(self, base):
        C, proj, Z = self.cover, self.projection, set(self.center_ids)
        if len(proj) != C.order:
            raise GroupError("projection length mismatch")
        if set(proj) != set(range(base.order)):
            raise GroupError("projection is not surjective")
        for a in range(C.order):
            for b in range(C.order):
                if proj[C.mul(a, b)] != base.mul(proj[a], proj[b]):
                    raise GroupError("projection is not a homomorphism")
        kernel = {a for a in range(C.order) if proj[a] == 0}
        if kernel != Z:
            raise GroupError("projection kernel differs from the center ids")
        for z in Z:
            for g in range(C.order):
                if C.mul(z, g) != C.mul(g, z):
                    raise GroupError("center ids are not central")
        derived = set(commutator_subgroup(C).members)
        if not Z <= derived:
            raise GroupError("center ids not inside the commutator subgroup")
        return self


def direct_product(G, H, name=None):
    """G x H with pair encoding id = a*|H| + b."""
    n = G.order * H.order
    table = [0] * (n * n)
    oh = H.order
    for a1 in range(G.order):
        for b1 in range(oh):
            x = a1 * oh + b1
            for a2 in range(G.order):
                for b2 in range(oh):
                    y = a2 * oh + b2
                    table[x * n + y] = G.mul(a1, a2) * oh + H.mul(b1, b2)
    return FiniteGroup(name or ("%sx%s" % (G.name, H.name)), table)


# -- file formats -----------------------------------------------------------------


def parse_group_text(text, name_hint="G"):
    toks = text.split()
    if not toks:
        raise GroupError("empty group description")
    if toks[0] != "group":
        raise GroupError("group file must start with 'group <name> <order>'")
    name, order = toks[1], int(toks[2])
    mode = toks[3]
    if mode == "table":
        ids = [int(t) for t in toks[4:]]
        if len(ids) != order * order:
            raise GroupError("expected %d table entries, got %d"
                             % (order * order, len(ids)))
        return FiniteGroup.from_table(name, ids)
    if mode == "perm-gens":
        body = text.split("perm-gens", 1)[1]
        gens = [perms.parse_cycles(line)
                for line in body.splitlines() if line.strip()]
        degree = max(len(g) for g in gens)
        G = FiniteGroup.from_perm_gens(name, gens, degree=degree)
        if G.order != order:
            raise GroupError("declared order %d but closure has %d"
                             % (order, G.order))
        return G
    raise GroupError("unknown group file mode %r" % mode)


def load_group(path):
    with open(path) as fh:
        return parse_group_text(fh.read())


def write_group_file(path, G, perm_gens=None):
    with open(path, "w") as fh:
        if perm_gens is not None:
            fh.write("group %s %d\nperm-gens\n" % (G.name, G.order))
            for g in perm_gens:
                fh.write(perms.format_cycles(g) + "\n")
        else:
            fh.write("group %s %d\ntable\n" % (G.name, G.order))
            n = G.order
            for a in range(n):
                fh.write(" ".join(str(G.mul(a, b)) for b in range(n)) + "\n")


def load_stem_extension(path, base):
    """Read a stem-extension file and validate it against the base group."""
    with open(path) as fh:
        text = fh.read()
    toks = text.split()
    fields = {}
    i = 0
    while i < len(toks):
        key = toks[i]
        if key == "cover":
            fields["cover"] = toks[i + 1]
            i += 2
        elif key in ("project", "center"):
            vals = []
            i += 1
            while i < len(toks) and toks[i] not in ("cover", "project", "center"):
                vals.append(int(toks[i]))
                i += 1
            fields[key] = vals
        else:
            raise GroupError("unknown stem-extension key %r" % key)
    cover_path = os.path.join(os.path.dirname(os.path.abspath(path)),
                              fields["cover"])
    cover = load_group(cover_path)
    ext = StemExtension(cover, tuple(fields["project"]), tuple(fields["center"]))
    return ext.validate(base)
