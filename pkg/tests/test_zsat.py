import itertools
import random

import pytest

from homcount.circuits import BooleanCircuit
from homcount.groups import FiniteGroup
from homcount.gsets import rubik_membership
from homcount.zsat import (ZAlphabet, ZsatError, compile_gate, compile_zsat,
                           data_rsat_instance, extend_to_rubik,
                           postcomputation_gate, square_action, verify_gates,
                           zsat_from_table)


def predicate_gate(zal, rng, density=0.5):
    """A data gate moving a random set of initialization words onto
    finalization words, composed with a random relabeling."""
    data, i_orb, f_orb = zal.data_quotient()
    nd = len(data)
    perm = list(range(nd * nd))
    iwords = [(a, b) for a in i_orb for b in i_orb]
    fwords = [(a, b) for a in f_orb for b in f_orb]
    rng.shuffle(fwords)
    chosen = [w for w in iwords if rng.random() < density]
    for src_t, dst_t in zip(chosen, fwords):
        src = src_t[0] * nd + src_t[1]
        dst = dst_t[0] * nd + dst_t[1]
        perm[src], perm[dst] = perm[dst], perm[src]
    return tuple(perm)


def test_alphabet_invariants(z2, z3):
    zal = ZAlphabet(z2)
    assert zal.size == 23
    assert len(zal.init) == 4 and len(zal.final) == 4
    assert len(zal.warning) == len(set(zal.init) | set(zal.final)) + 2 * 2
    assert zal.size >= 2 * len(set(zal.init) | set(zal.final)) + 3 * 2 + 1
    assert zal.action.fixed_points == [0]
    with pytest.raises(ZsatError):
        ZAlphabet(z2, n_init_orbits=1)
    with pytest.raises(ZsatError):
        ZAlphabet(FiniteGroup.trivial())


def test_identity_compilation(z2):
    zal = ZAlphabet(z2)
    inst = data_rsat_instance(zal, 2, [])
    zi = compile_zsat(inst, zal)
    assert zi.eval((0, 0)) == (0, 0)
    assert zi.count() == 1           # only the all-zombie input survives
    assert verify_gates(zi)


def test_zombie_relation_structured(z2, z3):
    rng = random.Random(77)
    for gamma in (z2, z3):
        zal = ZAlphabet(gamma)
        for width in (2, 3):
            for _ in range(3):
                gates = []
                for _ in range(rng.randint(1, 3)):
                    pos = rng.randrange(width - 1)
                    gates.append((pos, predicate_gate(zal, rng)))
                inst = data_rsat_instance(zal, width, gates)
                c = inst.count()
                zi = compile_zsat(inst, zal)
                assert zi.count() == gamma.order * c + 1


def test_single_zombie_never_finalizes(z2):
    zal = ZAlphabet(z2)
    rng = random.Random(3)
    inst = data_rsat_instance(zal, 3, [(0, predicate_gate(zal, rng, 1.0))])
    zi = compile_zsat(inst, zal)
    fin = set(zal.final) | {0}
    for word in itertools.product((0,) + zal.init, repeat=3):
        nz = sum(1 for x in word if x == 0)
        if 0 < nz < 3:
            out = zi.eval(word)
            assert not all(x in fin for x in out)
            assert any(x in zal.warning for x in out)


def test_misaligned_inputs_never_finalize(z2):
    zal = ZAlphabet(z2)
    inst = data_rsat_instance(zal, 2, [])
    zi = compile_zsat(inst, zal)
    fin = set(zal.final) | {0}
    for a in zal.init:
        for b in zal.init:
            out = zi.eval((a, b))
            if zal.aligned(a, b):
                continue
            assert not all(x in fin for x in out)


def test_main_gates_preserve_zombies_and_alignment(z2):
    zal = ZAlphabet(z2)
    rng = random.Random(21)
    gate = compile_gate(predicate_gate(zal, rng), zal)
    A = zal.size
    data = zal.init + zal.final
    for a in data:
        # zombie slots stay zombie, data slot stays data
        img = gate[0 * A + a]
        assert img // A == 0 and img % A != 0
        img = gate[a * A + 0]
        assert img % A == 0 and img // A != 0
    for a in data:
        for b in data:
            img = gate[a * A + b]
            x, y = img // A, img % A
            assert x in data and y in data
            assert zal.aligned(a, b) == zal.aligned(x, y)


def test_all_compiled_gates_pass_membership(z3):
    zal = ZAlphabet(z3)
    rng = random.Random(4)
    inst = data_rsat_instance(zal, 3, [(0, predicate_gate(zal, rng)),
                                       (1, predicate_gate(zal, rng))])
    zi = compile_zsat(inst, zal)
    assert verify_gates(zi)
    act = square_action(zal)
    alpha = postcomputation_gate(zal)
    assert rubik_membership(alpha, act)


def test_extension_repairs_parity(z2):
    # a single data-orbit transposition induces an odd orbit permutation;
    # the extension must repair it on the scratch orbits
    zal = ZAlphabet(z2)
    data, _, _ = zal.data_quotient()
    nd = len(data)
    perm = list(range(nd * nd))
    perm[0], perm[1] = perm[1], perm[0]
    gate = compile_gate(tuple(perm), zal)
    act = square_action(zal)
    assert rubik_membership(gate, act)


def test_extension_needs_scratch(z2):
    zal = ZAlphabet(z2)
    act = square_action(zal)
    # a partial map claiming the scratch orbits is rejected
    A = zal.size
    s = zal.scratch[0]
    partial = {0: 0, s * A + s: s * A + s}
    with pytest.raises(ZsatError):
        extend_to_rubik(partial, zal)


def test_table_bridge(z2):
    zal = ZAlphabet(z2)
    and2 = BooleanCircuit(2, [("AND", (0, 1), (2,))], 2)
    inst = zsat_from_table(and2, zal)
    assert inst.count() == 1
    zi = compile_zsat(inst, zal)
    assert zi.count() == 2 * 1 + 1
    or2 = BooleanCircuit(2, [("OR", (0, 1), (2,))], 2)
    inst = zsat_from_table(or2, zal)
    assert inst.count() == 3
    assert compile_zsat(inst, zal).count() == 7
