"""Opcode constants shared by the formula-lowering code and both kernels.

A lowered program is a nested tuple tree whose first entry is one of the
opcodes below.  Node shapes:

    (OP_TRUE,)                  (OP_FALSE,)
    (OP_EQ, slot_i, slot_j)
    (OP_REL1, rel_index, slot_i)
    (OP_REL2, rel_index, slot_i, slot_j)
    (OP_RELK, rel_index, (slot, ...))
    (OP_DIST, dist_index, slot_i, slot_j)
    (OP_NOT, sub)
    (OP_AND, (sub, ...))        (OP_OR, (sub, ...))
    (OP_EXISTS, slot, sub)      (OP_FORALL, slot, sub)

The matching structure encoding is

    enc = (n, rel1, rel2, relk, dist)

where ``rel1[i]`` is a bitmask of elements, ``rel2[i]`` is a tuple of
per-element out-neighbour bitmasks, ``relk[i]`` is a frozenset of tuples,
and ``dist[i]`` is a tuple of per-element bitmasks of the elements within
some fixed distance.

The C kernel mirrors these constants; ``tests/test_kernel_parity.py``
asserts the two stay in sync.
"""

OP_TRUE = 0
OP_FALSE = 1
OP_EQ = 2
OP_REL1 = 3
OP_REL2 = 4
OP_RELK = 5
OP_DIST = 6
OP_NOT = 7
OP_AND = 8
OP_OR = 9
OP_EXISTS = 10
OP_FORALL = 11

# Largest number of variable slots a lowered program may use.  The C
# kernel allocates its environment on the stack with this bound.
MAX_SLOTS = 128
