"""Generators and checkers for the anchor-compression laws."""
import random

import numpy as np

from sublcs.exact import Compressor, apply_compression, stand_in_length
from sublcs.oracle import brute_force_period

HASH = 1000


def occurrences(p, s):
    p, s = list(p), list(s)
    return [i for i in range(len(s) - len(p) + 1) if s[i:i + len(p)] == p]


def compressor_for(Q, tau) -> Compressor:
    Q = np.asarray(Q, dtype=np.int64)
    per = brute_force_period(Q)
    if per > 4 * tau:
        return Compressor(Q, np.array([HASH], dtype=np.int64), None, len(Q) - 1)
    qp = Q[:stand_in_length(len(Q), per, tau)]
    return Compressor(Q, qp, per, len(Q) - len(qp))


def make_case(rng: random.Random):
    """Anchor, compressor and a host string ``S`` with ``|S| <= |Q| + 4 tau``."""
    tau = rng.randint(1, 4)
    kind = rng.choice(["periodic", "periodic", "aperiodic", "low", "high"])
    if kind == "aperiodic":
        while True:
            Q = [rng.randrange(3) for _ in range(rng.randint(8 * tau, 14 * tau))]
            if brute_force_period(Q) > 4 * tau:
                break
    else:
        if kind == "low":  # stand-in of length exactly 8 tau
            per = rng.choice([p for p in range(1, 4 * tau + 1) if (8 * tau) % p == 0])
            qlen = per * rng.randint(-(-8 * tau // per), -(-12 * tau // per))
        elif kind == "high":  # stand-in of length 12 tau - 1
            per = 4 * tau
            qlen = 4 * tau * rng.randint(2, 3) + 4 * tau - 1
        else:
            per = rng.randint(1, 4 * tau)
            qlen = rng.randint(8 * tau, 14 * tau)
        unit = [rng.randrange(2) for _ in range(per)]
        Q = (unit * (qlen // per + 1))[:qlen]
    comp = compressor_for(Q, tau)
    Q = [int(x) for x in comp.Q]
    room = 4 * tau if rng.random() < 0.4 else rng.randint(0, 4 * tau)
    mode = rng.random()
    if mode < 0.45 and comp.per:
        # run of the period around the anchor, so several occurrences overlap
        per = comp.per
        left = rng.randint(0, room)
        # S[x] = Q[(x - left) mod per] outside the anchor copy
        S = [Q[(x - left) % per] for x in range(left)] + Q
        S += [Q[(len(Q) + i) % per] for i in range(room - left)]
    elif mode < 0.9:
        left = rng.randint(0, room)
        S = [rng.randrange(3) for _ in range(left)] + Q + [rng.randrange(3) for _ in range(room - left)]
    else:
        S = [rng.randrange(3) for _ in range(len(Q) + room)]
    if rng.random() < 0.15 and S:
        S[rng.randrange(len(S))] = rng.randrange(3)
    return tau, comp, S


def check_case(comp: Compressor, S, rng: random.Random) -> None:
    Q, Qp = [int(x) for x in comp.Q], [int(x) for x in comp.Qp]
    rS = [int(x) for x in apply_compression(comp, S)]
    occ = occurrences(Q, S)
    if not occ:
        assert rS == []
        return
    # replacing any occurrence of the anchor gives the same image
    for i in occ:
        assert S[:i] + Qp + S[i + len(Q):] == rS
    # replacing any occurrence of the stand-in in the image gives back S
    for j in occurrences(Qp, rS):
        assert rS[:j] + Q + rS[j + len(Qp):] == S
    # occurrences of patterns containing the anchor are preserved position by position
    i = rng.choice(occ)
    for _ in range(4):
        a = rng.randint(0, i)
        b = rng.randint(i + len(Q), len(S))
        P = S[a:b]
        if rng.random() < 0.3:
            k = rng.randrange(len(P))
            P = P[:k] + [rng.randrange(3)] + P[k + 1:]
        if not occurrences(Q, P):
            continue
        rP = [int(x) for x in apply_compression(comp, P)]
        assert occurrences(P, S) == occurrences(rP, rS)
