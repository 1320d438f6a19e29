"""Boolean and reversible circuit IR plus the staged reduction pipeline
from circuit satisfiability to alphabet-packed reversible satisfiability.

Stage chain: a Boolean circuit is dilated gatewise into a reversible circuit
with ancillas (stage 1), wrapped by uncomputation so half the wires are zero
at both ends (stage 2), regrouped into pair symbols and embedded into a
chosen alphabet with initialization and finalization sets (stage 3), and
packed into an arbitrary conforming target alphabet (stage 4).  Exact count
preservation at every stage is the package's acceptance contract.
"""

import itertools
from dataclasses import dataclass, field
from . import perms
from .counting import WorkBoundExceeded, DEFAULT_LIMITS


class CircuitError(ValueError):
    pass


BOOL_OPS = {"AND": (2, 1), "OR": (2, 1), "NOT": (1, 1), "COPY": (1, 2)}


class BooleanCircuit:
    """Directed acyclic circuit over AND, OR, NOT, COPY with one output."""

    def __init__(self, n_inputs, gates, output):
        self.n_inputs = n_inputs
        self.gates = []
        n_nodes = n_inputs
        for op, ins, outs in gates:
            if op not in BOOL_OPS:
                raise CircuitError("unknown op %r" % op)
            arity, n_out = BOOL_OPS[op]
            if len(ins) != arity or len(outs) != n_out:
                raise CircuitError("bad arity for %s" % op)
            for i in ins:
                if not (0 <= i < n_nodes):
                    raise CircuitError("gate input %d not yet defined" % i)
            for o in outs:
                if o != n_nodes:
                    raise CircuitError("gate outputs must be consecutive")
                n_nodes += 1
            self.gates.append((op, tuple(ins), tuple(outs)))
        self.n_nodes = n_nodes
        if not (0 <= output < n_nodes):
            raise CircuitError("output node out of range")
        self.output = output

    def eval(self, bits):
        vals = list(bits) + [0] * (self.n_nodes - self.n_inputs)
        for op, ins, outs in self.gates:
            if op == "AND":
                vals[outs[0]] = vals[ins[0]] & vals[ins[1]]
            elif op == "OR":
                vals[outs[0]] = vals[ins[0]] | vals[ins[1]]
            elif op == "NOT":
                vals[outs[0]] = 1 - vals[ins[0]]
            else:
                vals[outs[0]] = vals[ins[0]]
                vals[outs[1]] = vals[ins[0]]
        return vals[self.output]

    def count_sat(self, limits=DEFAULT_LIMITS):
        if 2 ** self.n_inputs > limits.max_enumeration:
            raise WorkBoundExceeded("CSAT enumeration over budget")
        return sum(self.eval(bits)
                   for bits in itertools.product((0, 1), repeat=self.n_inputs))

    def format(self):
        lines = ["in %d" % self.n_inputs]
        for op, ins, outs in self.gates:
            lines.append("%s %s -> %s" % (op, " ".join(map(str, ins)),
                                          " ".join(map(str, outs))))
        lines.append("out %d" % self.output)
        return "\n".join(lines) + "\n"


def parse_boolean_text(text):
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("in "):
        raise CircuitError("boolean circuit file must start with 'in n'")
    n = int(lines[0].split()[1])
    gates = []
    output = None
    for ln in lines[1:]:
        if ln.startswith("out "):
            output = int(ln.split()[1])
            continue
        head, _, tail = ln.partition("->")
        toks = head.split()
        gates.append((toks[0], tuple(int(t) for t in toks[1:]),
                      tuple(int(t) for t in tail.split())))
    if output is None:
        raise CircuitError("missing 'out' line")
    return BooleanCircuit(n, gates, output)


def load_boolean(path):
    with open(path) as fh:
        return parse_boolean_text(fh.read())


# -- reversible window circuits -------------------------------------------------------


def encode_word(word, q):
    acc = 0
    for x in word:
        acc = acc * q + x
    return acc


def decode_word(code, q, k):
    out = [0] * k
    for i in range(k - 1, -1, -1):
        out[i] = code % q
        code //= q
    return tuple(out)


class ReversibleCircuit:
    """Planar reversible circuit: gates act on contiguous wire windows.

    Each gate is (position, k, perm) with perm a permutation of A^k indexed
    by base-q encodings of the window content.
    """

    def __init__(self, q, width, gates=()):
        self.q = q
        self.width = width
        self.gates = []
        for pos, k, perm in gates:
            self.add_gate(pos, k, perm)

    def add_gate(self, pos, k, perm):
        if k not in (1, 2, 3):
            raise CircuitError("gate arity %d outside 1..3" % k)
        if not (0 <= pos and pos + k <= self.width):
            raise CircuitError("gate window out of range")
        perm = tuple(perm)
        if sorted(perm) != list(range(self.q ** k)):
            raise CircuitError("gate table is not a permutation")
        self.gates.append((pos, k, perm))

    def eval(self, word):
        if len(word) != self.width:
            raise CircuitError("word width mismatch")
        if any(not (0 <= x < self.q) for x in word):
            raise CircuitError("symbol out of alphabet")
        word = list(word)
        for pos, k, perm in self.gates:
            code = encode_word(word[pos:pos + k], self.q)
            word[pos:pos + k] = decode_word(perm[code], self.q, k)
        return tuple(word)

    def inverse(self):
        inv = ReversibleCircuit(self.q, self.width)
        for pos, k, perm in reversed(self.gates):
            ip = [0] * len(perm)
            for i, j in enumerate(perm):
                ip[j] = i
            inv.add_gate(pos, k, tuple(ip))
        return inv

    def format(self):
        lines = ["alphabet %d" % self.q, "width %d" % self.width]
        for pos, k, perm in self.gates:
            lines.append("gate %d %d %s" % (pos, k, " ".join(map(str, perm))))
        return "\n".join(lines) + "\n"


def parse_reversible_text(text):
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    q = width = None
    init = final = None
    gates = []
    for ln in lines:
        toks = ln.split()
        if toks[0] == "alphabet":
            q = int(toks[1])
        elif toks[0] == "width":
            width = int(toks[1])
        elif toks[0] == "init":
            init = tuple(int(t) for t in toks[1:])
        elif toks[0] == "final":
            final = tuple(int(t) for t in toks[1:])
        elif toks[0] == "gate":
            gates.append((int(toks[1]), int(toks[2]),
                          tuple(int(t) for t in toks[3:])))
        else:
            raise CircuitError("unknown circuit line %r" % ln)
    if q is None or width is None:
        raise CircuitError("circuit file needs alphabet and width")
    circ = ReversibleCircuit(q, width, gates)
    return circ, init, final


def load_reversible(path):
    with open(path) as fh:
        return parse_reversible_text(fh.read())


# -- structural bit-level circuits (stages 1 and 2) -------------------------------------


def _apply_opcodes(opcodes, bits):
    bits = list(bits)
    for op in opcodes:
        if op[0] == "NOT":
            bits[op[1]] ^= 1
        elif op[0] == "CNOT":
            bits[op[2]] ^= bits[op[1]]
        else:  # CCNOT
            bits[op[3]] ^= bits[op[1]] & bits[op[2]]
    return bits


def _opcode_window_circuit(width, opcodes):
    """Planar window form of a NOT/CNOT/CCNOT opcode list, with SWAP routing."""
    circ = ReversibleCircuit(2, width)
    swap = (0, 2, 1, 3)
    not1 = (1, 0)
    cnot = (0, 1, 3, 2)                      # (c,t): t ^= c
    ccnot = tuple(code ^ 1 if code >> 1 == 3 else code for code in range(8))

    def route(src, dst):
        """Emit SWAPs moving wire src adjacent to position dst (src > dst)."""
        for p in range(src - 1, dst - 1, -1):
            circ.add_gate(p, 2, swap)

    for op in opcodes:
        if op[0] == "NOT":
            circ.add_gate(op[1], 1, not1)
            continue
        wires = sorted(set(op[1:]))
        if len(wires) != len(op) - 1:
            raise CircuitError("opcode with repeated wires")
        # bring wires together at the lowest position, apply, undo
        moves = []
        base = wires[0]
        for offset, w in enumerate(wires[1:], start=1):
            target = base + offset
            for p in range(w - 1, target - 1, -1):
                circ.add_gate(p, 2, swap)
                moves.append(p)
        relabel = {w: base + i for i, w in enumerate(wires)}
        if op[0] == "CNOT":
            c, t = relabel[op[1]], relabel[op[2]]
            lo = min(c, t)
            table = []
            for code in range(4):
                b = list(decode_word(code, 2, 2))
                b[t - lo] ^= b[c - lo]
                table.append(encode_word(b, 2))
            circ.add_gate(lo, 2, tuple(table))
        else:
            c1, c2, t = (relabel[op[1]], relabel[op[2]], relabel[op[3]])
            lo = min(c1, c2, t)
            table = []
            for code in range(8):
                b = list(decode_word(code, 2, 3))
                b[t - lo] ^= b[c1 - lo] & b[c2 - lo]
                table.append(encode_word(b, 2))
            circ.add_gate(lo, 3, tuple(table))
        for p in reversed(moves):
            circ.add_gate(p, 2, swap)
    return circ


@dataclass
class Rsat1:
    """Reversible circuit over bits; ancilla wires start at 0 and the
    decision output is the value of wire 0."""
    width: int
    n_ancillas: int
    opcodes: list

    @property
    def variable_wires(self):
        return list(range(self.n_ancillas, self.width))

    def count(self, limits=DEFAULT_LIMITS):
        nvar = self.width - self.n_ancillas
        if 2 ** nvar > limits.max_enumeration:
            raise WorkBoundExceeded("RSAT1 enumeration over budget")
        total = 0
        for bits in itertools.product((0, 1), repeat=nvar):
            word = [0] * self.n_ancillas + list(bits)
            total += _apply_opcodes(self.opcodes, word)[0]
        return total

    def window_circuit(self):
        return _opcode_window_circuit(self.width, self.opcodes)


@dataclass
class Rsat2:
    """Reversible bit circuit with the same wires zeroed at input and output."""
    width: int
    zero_wires: tuple
    opcodes: list

    def __post_init__(self):
        if len(self.zero_wires) * 2 != self.width:
            raise CircuitError("zero wires must be exactly half the width")

    @property
    def variable_wires(self):
        zs = set(self.zero_wires)
        return [w for w in range(self.width) if w not in zs]

    def count(self, limits=DEFAULT_LIMITS):
        var = self.variable_wires
        if 2 ** len(var) > limits.max_enumeration:
            raise WorkBoundExceeded("RSAT2 enumeration over budget")
        zs = list(self.zero_wires)
        total = 0
        for bits in itertools.product((0, 1), repeat=len(var)):
            word = [0] * self.width
            for w, b in zip(var, bits):
                word[w] = b
            out = _apply_opcodes(self.opcodes, word)
            if all(out[z] == 0 for z in zs):
                total += 1
        return total

    def window_circuit(self):
        return _opcode_window_circuit(self.width, self.opcodes)


def dilate_to_reversible(bc):
    """Stage 1: replace each irreversible gate by its reversible dilation
    with a fresh zero ancilla; the decision lands on wire 0."""
    n = bc.n_inputs
    # the decision wire is the output gate's own ancilla when that gate
    # allocates one; input nodes and forwarded COPY outputs need a dedicated
    # decision ancilla plus one copy gate
    out_needs_copy = bc.output < n or any(
        op == "COPY" and outs[0] == bc.output for op, _, outs in bc.gates)
    n_anc = sum(1 for _ in bc.gates) + (1 if out_needs_copy else 0)
    wire_of = {}
    for i in range(n):
        wire_of[i] = n_anc + i
    opcodes = []
    next_anc = [1]

    def fresh_anc(node):
        if node == bc.output and not out_needs_copy:
            return 0
        w = next_anc[0]
        next_anc[0] += 1
        return w

    for op, ins, outs in bc.gates:
        if op == "AND":
            w = fresh_anc(outs[0])
            wire_of[outs[0]] = w
            a, b = wire_of[ins[0]], wire_of[ins[1]]
            if a == b:
                opcodes.append(("CNOT", a, w))
            else:
                opcodes.append(("CCNOT", a, b, w))
        elif op == "OR":
            w = fresh_anc(outs[0])
            wire_of[outs[0]] = w
            a, b = wire_of[ins[0]], wire_of[ins[1]]
            if a == b:
                opcodes.append(("CNOT", a, w))
            else:
                opcodes.append(("CNOT", a, w))
                opcodes.append(("CNOT", b, w))
                opcodes.append(("CCNOT", a, b, w))
        elif op == "NOT":
            w = fresh_anc(outs[0])
            wire_of[outs[0]] = w
            opcodes.append(("CNOT", wire_of[ins[0]], w))
            opcodes.append(("NOT", w))
        else:  # COPY: first output keeps the wire, second gets the ancilla
            wire_of[outs[0]] = wire_of[ins[0]]
            w = fresh_anc(outs[1])
            wire_of[outs[1]] = w
            opcodes.append(("CNOT", wire_of[ins[0]], w))
    if out_needs_copy:
        opcodes.append(("CNOT", wire_of[bc.output], 0))
    return Rsat1(n_anc + n, n_anc, opcodes)


def uncompute_wrap(r1):
    """Stage 2: C, copy-negate the decision to a fresh wire, then C^-1;
    pad per the three width cases so zeroed wires are exactly half."""
    n = r1.width - r1.n_ancillas
    k = r1.n_ancillas
    if n == 0:
        raise CircuitError("uncompute needs at least one variable input")
    inverse = list(reversed(r1.opcodes))    # NOT/CNOT/CCNOT are involutions
    b = r1.width
    opcodes = list(r1.opcodes)
    opcodes.append(("CNOT", 0, b))
    opcodes.append(("NOT", b))
    opcodes.extend(inverse)
    width = r1.width + 1
    zero = list(range(k)) + [b]
    if n > k + 1:
        pads = list(range(width, width + (n - k - 1)))
        width += len(pads)
        zero.extend(pads)
    elif n < k + 1:
        junk = list(range(width, width + (k + 1 - n)))
        width += len(junk)
        targets = [w for w in range(k - 1, -1, -1)][:len(junk)]
        for j, t in zip(junk, targets):
            opcodes.append(("CNOT", j, t))
    return Rsat2(width, tuple(sorted(zero)), opcodes)


# -- stage 3: pair symbols and embed ------------------------------------------------------


@dataclass
class RsatIF:
    """RSAT instance over an alphabet with initialization and finalization
    sets; gates are permutations attached to arbitrary wire tuples, with a
    planar window form available via planarize()."""
    q: int
    width: int
    init: tuple
    final: tuple
    gates: list = field(default_factory=list)   # (wires tuple, perm over q^k)

    def add_gate(self, wires, perm):
        wires = tuple(wires)
        if len(set(wires)) != len(wires):
            raise CircuitError("repeated wire in gate")
        if any(not (0 <= w < self.width) for w in wires):
            raise CircuitError("gate wire out of range")
        perm = tuple(perm)
        if sorted(perm) != list(range(self.q ** len(wires))):
            raise CircuitError("gate table is not a permutation")
        self.gates.append((wires, perm))

    def eval(self, word):
        word = list(word)
        q = self.q
        for wires, perm in self.gates:
            code = encode_word([word[w] for w in wires], q)
            sub = decode_word(perm[code], q, len(wires))
            for w, x in zip(wires, sub):
                word[w] = x
        return tuple(word)

    def count(self, limits=DEFAULT_LIMITS):
        if len(self.init) ** self.width > limits.max_enumeration:
            raise WorkBoundExceeded("RSAT enumeration over budget")
        fin = set(self.final)
        total = 0
        for word in itertools.product(self.init, repeat=self.width):
            out = self.eval(word)
            if all(x in fin for x in out):
                total += 1
        return total

    def planarize(self):
        """Window form: SWAP-conjugate every gate onto contiguous wires."""
        circ = ReversibleCircuit(self.q, self.width)
        q = self.q
        swap = [0] * (q * q)
        for a in range(q):
            for b in range(q):
                swap[a * q + b] = b * q + a
        swap = tuple(swap)
        for wires, perm in self.gates:
            order = sorted(wires)
            moves = []
            base = order[0]
            for offset, w in enumerate(order[1:], start=1):
                target = base + offset
                for p in range(w - 1, target - 1, -1):
                    circ.add_gate(p, 2, swap)
                    moves.append(p)
            relabel = {w: base + i for i, w in enumerate(order)}
            k = len(wires)
            table = [0] * (q ** k)
            for code in range(q ** k):
                window = decode_word(code, q, k)
                local = [window[relabel[w] - base] for w in wires]
                image = decode_word(perm[encode_word(local, q)], q, k)
                out = list(window)
                for w, x in zip(wires, image):
                    out[relabel[w] - base] = x
                table[code] = encode_word(out, q)
            circ.add_gate(base, k, tuple(table))
            for p in reversed(moves):
                circ.add_gate(p, 2, swap)
        return circ


def _perm_parity_of_table(perm):
    return perms.perm_parity(tuple(perm))


@dataclass
class EmbeddingData:
    psi: tuple          # A1 symbol (0..3, data + 2*anc) -> A2 symbol id
    f_images: tuple     # where the two finalizable symbols land in F2
    pairs: list         # (data wire, zero wire) per symbol position


def regroup_embed(r2, q2, init2, final2):
    """Stage 3: pair each variable wire with a zero wire into one symbol of
    Z/2 x Z/2, then embed into the target alphabet.

    Bit gates become symbol gates: within one symbol a unary gate, across
    two symbols a binary gate, and a three-symbol Toffoli becomes four
    binary gates by the messenger construction.  Embedded gates are extended
    by the identity (freezing any symbol outside the embedded image) and
    evenized, using states built from finalization symbols, which are
    unreachable before the final relabeling.
    """
    init2, final2 = tuple(init2), tuple(final2)
    if set(init2) & set(final2):
        raise CircuitError("stage-3 target needs disjoint init and final sets")
    spares = [s for s in range(q2) if s not in init2 and s not in final2]
    if len(spares) < 2:
        raise CircuitError("stage-3 target needs two symbols outside init+final")
    if len(init2) < 2 or len(final2) < 2:
        raise CircuitError("init and final need at least two symbols")

    zeros = sorted(r2.zero_wires)
    return _regroup_embed_impl(r2, q2, init2, final2, spares, zeros)


def _regroup_embed_impl(r2, q2, init2, final2, spares, zeros):
    varw = r2.variable_wires
    pairs = list(zip(varw, zeros))
    m = len(pairs)
    slot = {}
    for s, (dv, zv) in enumerate(pairs):
        slot[dv] = (s, 0)
        slot[zv] = (s, 1)
    psi = (init2[0], init2[1], spares[0], spares[1])
    f_images = (final2[0], final2[1])
    inst = RsatIF(q2, m, init2, final2)

    def a1_of(sym_id):
        """Inverse of psi on its image, else None."""
        for a1, s in enumerate(psi):
            if s == sym_id:
                return a1
        return None

    def lift_unary(fn):
        """A2 permutation acting as fn on A1 via psi, identity elsewhere."""
        table = list(range(q2))
        for a1 in range(4):
            table[psi[a1]] = psi[fn(a1)]
        return table

    def evenize_unary(table):
        if _perm_parity_of_table(table) == 1:
            table[f_images[0]], table[f_images[1]] = \
                table[f_images[1]], table[f_images[0]]
        return tuple(table)

    def lift_binary(fn):
        """A2^2 permutation acting as fn on A1^2, identity elsewhere."""
        table = list(range(q2 * q2))
        for x in range(4):
            for y in range(4):
                fx, fy = fn(x, y)
                table[psi[x] * q2 + psi[y]] = psi[fx] * q2 + psi[fy]
        if _perm_parity_of_table(table) == 1:
            a = f_images[0] * q2 + f_images[0]
            b = f_images[1] * q2 + f_images[1]
            table[a], table[b] = table[b], table[a]
        return tuple(table)

    def bit_get(a1, sl):
        return (a1 >> sl) & 1

    def bit_set(a1, sl, v):
        return (a1 & ~(1 << sl)) | (v << sl)

    def emit_not(w):
        s, sl = slot[w]
        inst.add_gate((s,), evenize_unary(lift_unary(
            lambda a: bit_set(a, sl, 1 - bit_get(a, sl)))))

    def emit_cnot(c, t):
        sc, slc = slot[c]
        st, slt = slot[t]
        if sc == st:
            inst.add_gate((sc,), evenize_unary(lift_unary(
                lambda a: bit_set(a, slt, bit_get(a, slt) ^ bit_get(a, slc)))))
        else:
            def fn(x, y):
                if bit_get(x, slc):
                    y = bit_set(y, slt, 1 - bit_get(y, slt))
                return x, y
            inst.add_gate((sc, st), lift_binary(fn))

    def emit_ccnot(c1, c2, t):
        s1, sl1 = slot[c1]
        s2, sl2 = slot[c2]
        st, slt = slot[t]
        symbols = {s1, s2, st}
        if len(symbols) == 1:
            raise CircuitError("three bits in one symbol cannot happen")
        if len(symbols) == 2:
            if s1 == s2:
                def fn(x, y):
                    if bit_get(x, sl1) and bit_get(x, sl2):
                        y = bit_set(y, slt, 1 - bit_get(y, slt))
                    return x, y
                inst.add_gate((s1, st), lift_binary(fn))
            elif s1 == st:
                def fn(x, y):
                    if bit_get(x, sl1) and bit_get(y, sl2):
                        x = bit_set(x, slt, 1 - bit_get(x, slt))
                    return x, y
                inst.add_gate((s1, s2), lift_binary(fn))
            else:  # s2 == st
                def fn(x, y):
                    if bit_get(x, sl1) and bit_get(y, sl2):
                        y = bit_set(y, slt, 1 - bit_get(y, slt))
                    return x, y
                inst.add_gate((s1, s2), lift_binary(fn))
            return
        # three distinct symbols: messenger trick through the spare bit of
        # the middle symbol: (U V)^2 with U = CNOT(c1 -> partner), V =
        # CCNOT(c2, partner -> t); the partner bit is restored
        partner_slot = 1 - sl2

        def u_fn(x, y):
            if bit_get(x, sl1):
                y = bit_set(y, partner_slot, 1 - bit_get(y, partner_slot))
            return x, y

        def v_fn(x, y):
            if bit_get(x, sl2) and bit_get(x, partner_slot):
                y = bit_set(y, slt, 1 - bit_get(y, slt))
            return x, y

        u = lift_binary(u_fn)
        v = lift_binary(v_fn)
        for _ in range(2):
            inst.add_gate((s1, s2), u)
            inst.add_gate((s2, st), v)

    for op in r2.opcodes:
        if op[0] == "NOT":
            emit_not(op[1])
        elif op[0] == "CNOT":
            emit_cnot(op[1], op[2])
        else:
            emit_ccnot(op[1], op[2], op[3])

    # final relabeling: carry the finalizable symbols psi(0), psi(1) into the
    # finalization set; two disjoint transpositions keep the gate even
    rho = list(range(q2))
    rho[psi[0]], rho[f_images[0]] = rho[f_images[0]], rho[psi[0]]
    rho[psi[1]], rho[f_images[1]] = rho[f_images[1]], rho[psi[1]]
    rho = evenize_unary(rho) if _perm_parity_of_table(rho) == 1 else tuple(rho)
    for s in range(m):
        inst.add_gate((s,), rho)
    return inst, EmbeddingData(psi, f_images, pairs)


# -- stage 4: alphabet packing --------------------------------------------------------------


def pack_parameters(q3, i3, f3):
    """Minimal k with |A3|^k >= |I3|^k + |F3|^k + 2, plus the derived
    stage-3 target alphabet."""
    if not (2 <= len(i3) < q3 and 2 <= len(f3) < q3):
        raise CircuitError("packing needs 2 <= |I|, |F| < |A|")
    k = 1
    while q3 ** k < len(i3) ** k + len(f3) ** k + 2:
        k += 1
    q2 = q3 ** k
    i2 = sorted(encode_word(w, q3) for w in itertools.product(i3, repeat=k))
    f3k = sorted(encode_word(w, q3) for w in itertools.product(f3, repeat=k))
    return k, q2, tuple(i2), tuple(f3k)


@dataclass
class PackedRsat4:
    """Stage-4 instance over the target alphabet, stored in grouped form:
    the inner circuit works on symbols of A3^k, and the final unary gate has
    already carried finalization onto the F3^k grid."""
    inner: RsatIF
    k: int
    q3: int
    init3: tuple
    final3: tuple

    @property
    def width3(self):
        return self.inner.width * self.k

    def count(self, limits=DEFAULT_LIMITS):
        return self.inner.count(limits)

    def eval3(self, word3):
        """Evaluate on a width3 word over A3 via the grouped circuit."""
        if len(word3) != self.width3:
            raise CircuitError("A3 word width mismatch")
        grouped = [encode_word(word3[i * self.k:(i + 1) * self.k], self.q3)
                   for i in range(self.inner.width)]
        out = self.inner.eval(grouped)
        flat = []
        for sym in out:
            flat.extend(decode_word(sym, self.q3, self.k))
        return tuple(flat)

    def count3(self, limits=DEFAULT_LIMITS):
        """Independent count over A3 words; must equal count()."""
        n3 = self.width3
        if len(self.init3) ** n3 > limits.max_enumeration:
            raise WorkBoundExceeded("RSAT4 A3 enumeration over budget")
        fin = set(self.final3)
        total = 0
        for word in itertools.product(self.init3, repeat=n3):
            if all(x in fin for x in self.eval3(word)):
                total += 1
        return total


def pack_alphabet(r3, embed, k, q3, init3, final3):
    """Stage 4: append the unary relabeling taking the stage-3 finalization
    onto the F3^k grid, then reinterpret symbols as k-tuples over A3.

    The relabeling is constructed explicitly and checked against the set of
    symbols reachable before it: reachable finals land in F3^k, every other
    reachable symbol stays out.
    """
    q2 = q3 ** k
    if r3.q != q2:
        raise CircuitError("stage-3 alphabet does not match the packing")
    f3k = sorted(encode_word(w, q3) for w in itertools.product(final3, repeat=k))
    f2 = sorted(r3.final)
    if len(f2) != len(f3k):
        raise CircuitError("stage-3 finalization size mismatch")
    reachable_final = set(embed.f_images)
    reachable_other = set(r3.init) | {embed.psi[2], embed.psi[3],
                                      embed.psi[0], embed.psi[1]}
    reachable_other -= reachable_final
    sigma = list(range(q2))
    # pair F2 with the F3^k grid by transpositions
    for a, b in zip(f2, f3k):
        if sigma[a] != b:
            i = sigma.index(a)
            j = sigma.index(b)
            sigma[i], sigma[j] = sigma[j], sigma[i]
    # verify reachability safety, then fix parity on untouched symbols
    if _perm_parity_of_table(sigma) == 1:
        free = [s for s in range(q2)
                if sigma[s] == s and s not in reachable_final
                and s not in reachable_other and s not in f3k]
        if len(free) < 2:
            raise CircuitError("no room to evenize the packing relabeling")
        sigma[free[0]], sigma[free[1]] = sigma[free[1]], sigma[free[0]]
    image_final = {sigma[s] for s in reachable_final}
    if not image_final <= set(f3k):
        raise CircuitError("packing relabeling misses the final grid")
    bad = {sigma[s] for s in reachable_other} & set(f3k)
    if bad:
        raise CircuitError("packing relabeling leaks %r into the final grid"
                           % sorted(bad))
    inst = RsatIF(q2, r3.width, r3.init, tuple(f3k),
                  list(r3.gates))
    for s in range(r3.width):
        inst.add_gate((s,), tuple(sigma))
    return PackedRsat4(inst, k, q3, tuple(init3), tuple(final3))


# -- pipeline driver -----------------------------------------------------------------------


@dataclass
class PipelineReport:
    csat: int
    rsat1: int
    rsat2: int
    rsat3: int
    rsat4: int
    zsat: int = None
    gamma_order: int = None
    ok: bool = False

    def stage_counts(self):
        out = [self.csat, self.rsat1, self.rsat2, self.rsat3, self.rsat4]
        if self.zsat is not None:
            out.append(self.zsat)
        return out


def reduce_pipeline(bc, q3=4, init3=(0, 1), final3=(2, 3)):
    """Run stages 1..4 and return all intermediate instances."""
    k, q2, i2, f3k = pack_parameters(q3, init3, final3)
    # the stage-3 finalization is the F3^k grid when disjoint from I2;
    # otherwise pick the first free symbols
    i2set = set(i2)
    if not (set(f3k) & i2set):
        f2 = f3k
    else:
        f2 = tuple(sorted(set(range(q2)) - i2set))[:len(f3k)]
    r1 = dilate_to_reversible(bc)
    r2 = uncompute_wrap(r1)
    r3, embed = regroup_embed(r2, q2, i2, f2)
    r4 = pack_alphabet(r3, embed, k, q3, init3, final3)
    return r1, r2, r3, r4


def verify_parsimony(bc, q3=4, init3=(0, 1), final3=(2, 3),
                     limits=DEFAULT_LIMITS, zsat_stage=None):
    """Count-preservation report across the reduction stages.

    zsat_stage, if given, is a callable bc -> (zsat_count, gamma_order)
    supplied by the zombie module; the report then also checks the affine
    relation zsat = |Gamma| * rsat4 + 1.
    """
    r1, r2, r3, r4 = reduce_pipeline(bc, q3, init3, final3)
    c0 = bc.count_sat(limits)
    c1 = r1.count(limits)
    c2 = r2.count(limits)
    c3 = r3.count(limits)
    c4 = r4.count(limits)
    rep = PipelineReport(c0, c1, c2, c3, c4)
    rep.ok = (c0 == c1 == c2 == c3 == c4)
    if zsat_stage is not None:
        zc, go = zsat_stage(bc)
        rep.zsat = zc
        rep.gamma_order = go
        rep.ok = rep.ok and (zc == go * c4 + 1)
    return rep
