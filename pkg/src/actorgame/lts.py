"""Transition systems over processes and over strategies.

Both sides share one channel discipline: a state knows how many global
channels exist, numbered 1..num_channels in creation order, and every
local attachment is a tuple of global channel numbers. Because creation
order is pinned by the transition sequence, labels mentioning global
channel numbers are directly comparable between the process side and
the strategy side; the weak bisimulation between them is checked on
these labels.

Closed world: the only steps are tick, silent fork and silent sync.
Edge labels are StepLabel values carrying the move kind plus which
actors moved and which summands or branches they chose.

Interface: the subject additionally interacts with an environment that
knows some of the global channels through the handle map h (a tuple of
global channel numbers, one per environment handle, not necessarily
injective). Observable labels are tick, in(a), out(a,b), forkL and
forkR, with a and b global channel numbers; sync and fork stay silent.
A receive adds one fresh channel known to both sides; an emit teaches
the environment the emitted channel; an observed fork half hands the
dropped sibling to the environment along one fresh shared channel.

The optional link rule lets the environment feed a receiver a fresh
channel while naming a second handle it got it from; it is off by
default and never changes h.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

from .arena import Fork, Heartbeat, MoveKind, Sync, kind_label
from .strategy import Definite, interpret, strat_key
from .term import Par, Process, Recv, Send, Sum, Tick, sort_key, typecheck

# ------------------------------------------------------------- states


@dataclass(frozen=True)
class PlayerState:
    attach: tuple[int, ...]
    strat: Definite


def player_key(ps: PlayerState) -> tuple:
    return (len(ps.attach), ps.attach, strat_key(ps.strat))


@dataclass(frozen=True)
class GameState:
    num_channels: int
    players: tuple[PlayerState, ...]


def game_state(num_channels: int, players: Iterable[PlayerState]) -> GameState:
    ps = sorted(players, key=player_key)
    for p in ps:
        if len(p.attach) != p.strat.arity:
            raise ValueError(
                f"player attached to {len(p.attach)} channels runs a strategy "
                f"of arity {p.strat.arity}"
            )
        for c in p.attach:
            if not 1 <= c <= num_channels:
                raise ValueError(f"attachment {c} outside 1..{num_channels}")
    return GameState(num_channels, tuple(ps))


@dataclass(frozen=True)
class Thread:
    proc: Process
    env: tuple[int, ...]


def thread_key(t: Thread) -> tuple:
    return (sort_key(t.proc), t.env)


@dataclass(frozen=True)
class ProcState:
    num_channels: int
    threads: tuple[Thread, ...]


def proc_state(num_channels: int, threads: Iterable[Thread]) -> ProcState:
    ts = sorted(threads, key=thread_key)
    for t in ts:
        for c in t.env:
            if not 1 <= c <= num_channels:
                raise ValueError(f"environment entry {c} outside 1..{num_channels}")
    return ProcState(num_channels, tuple(ts))


def root_strategy(p: Process, gamma: int) -> GameState:
    """One player running the strategy of ``p``, attached to 1..gamma."""
    return game_state(gamma, [PlayerState(tuple(range(1, gamma + 1)), interpret(p, gamma))])


def root_process(p: Process, gamma: int) -> ProcState:
    """One thread running ``p`` with the identity environment."""
    typecheck(p, gamma)
    return proc_state(gamma, [Thread(p, tuple(range(1, gamma + 1)))])


# ------------------------------------------------------------- labels


def _kind_key(kind: MoveKind) -> tuple:
    return (type(kind).__name__,) + tuple(
        getattr(kind, f) for f in kind.__dataclass_fields__
    )


_CLOSED_TAG = {"Heartbeat": "tick", "Fork": "fork", "Sync": "sync"}


@dataclass(frozen=True)
class StepLabel:
    """Closed-world edge label: the move kind, the indices of the actors
    in the source state, and the summand or branch indices chosen."""

    kind: MoveKind
    actors: tuple[int, ...]
    choice: tuple[int, ...]

    @property
    def tag(self) -> str:
        return _CLOSED_TAG[type(self.kind).__name__]

    @property
    def is_tick(self) -> bool:
        return self.tag == "tick"

    @property
    def is_silent(self) -> bool:
        return self.tag in SILENT_TAGS

    def render(self) -> str:
        a = ",".join(str(i) for i in self.actors)
        ch = ",".join(str(i) for i in self.choice)
        return f"{kind_label(self.kind)}@{a}#{ch}"

    def sort_key(self) -> tuple:
        return (_kind_key(self.kind), self.actors, self.choice)


@dataclass(frozen=True)
class ALab:
    """Interface edge label. Observable tags: tick, in, out, forkL,
    forkR, link; silent tags: sync, fork. Arguments are global channel
    numbers."""

    tag: str
    args: tuple[int, ...] = ()

    @property
    def is_tick(self) -> bool:
        return self.tag == "tick"

    @property
    def is_silent(self) -> bool:
        return self.tag in SILENT_TAGS

    def render(self) -> str:
        if not self.args:
            return self.tag
        return f"{self.tag}({','.join(str(a) for a in self.args)})"

    def sort_key(self) -> tuple:
        return (self.tag, self.args)


SILENT_TAGS = frozenset({"sync", "fork"})


@dataclass(frozen=True)
class AState:
    """Interface state: handle map of the environment plus the subject."""

    h: tuple[int, ...]
    subject: Union[GameState, ProcState]

    @property
    def delta(self) -> int:
        return len(self.h)


# ------------------------------------------------- closed world, game


@dataclass(frozen=True)
class RawStep:
    """A closed step with enough detail to rebuild the arena move:
    which actors moved and the player or thread states they became."""

    label: StepLabel
    state: Union[GameState, ProcState]
    actors: tuple[int, ...]
    avatars: tuple[tuple, ...]
    created: int


def _replace_game(g: GameState, repl: dict[int, tuple[PlayerState, ...]], created: int) -> GameState:
    players: list[PlayerState] = []
    for i, ps in enumerate(g.players):
        players.extend(repl.get(i, (ps,)))
    return game_state(g.num_channels + created, players)


def _replace_proc(s: ProcState, repl: dict[int, tuple[Thread, ...]], created: int) -> ProcState:
    threads: list[Thread] = []
    for i, t in enumerate(s.threads):
        threads.extend(repl.get(i, (t,)))
    return proc_state(s.num_channels + created, threads)


def raw_closed_game_steps(g: GameState) -> list[RawStep]:
    out: list[RawStep] = []
    for p, ps in enumerate(g.players):
        n = ps.strat.arity
        for i, d in enumerate(ps.strat.lookup(("heart",)).summands):
            av = (PlayerState(ps.attach, d),)
            out.append(
                RawStep(
                    StepLabel(Heartbeat(n), (p,), (i,)),
                    _replace_game(g, {p: av}, 0),
                    (p,),
                    (av,),
                    0,
                )
            )
    for p, ps in enumerate(g.players):
        n = ps.strat.arity
        lefts = ps.strat.lookup(("forkL",)).summands
        rights = ps.strat.lookup(("forkR",)).summands
        fresh = g.num_channels + 1
        for i, dl in enumerate(lefts):
            for j, dr in enumerate(rights):
                av = (
                    PlayerState(ps.attach + (fresh,), dl),
                    PlayerState(ps.attach + (fresh,), dr),
                )
                out.append(
                    RawStep(
                        StepLabel(Fork(n), (p,), (i, j)),
                        _replace_game(g, {p: av}, 1),
                        (p,),
                        (av,),
                        1,
                    )
                )
    for q, qs in enumerate(g.players):
        for key_out in qs.strat.keys():
            if key_out[0] != "out":
                continue
            _, c, d = key_out
            shared = qs.attach[c - 1]
            outs = qs.strat.lookup(key_out).summands
            for p, rs in enumerate(g.players):
                if p == q:
                    continue
                for key_in in rs.strat.keys():
                    if key_in[0] != "in" or rs.attach[key_in[1] - 1] != shared:
                        continue
                    a = key_in[1]
                    ins = rs.strat.lookup(key_in).summands
                    kind = Sync(len(rs.attach), a, len(qs.attach), c, d)
                    for i, ds in enumerate(outs):
                        for j, dr in enumerate(ins):
                            send_av = (PlayerState(qs.attach, ds),)
                            recv_av = (
                                PlayerState(rs.attach + (qs.attach[d - 1],), dr),
                            )
                            out.append(
                                RawStep(
                                    StepLabel(kind, (q, p), (i, j)),
                                    _replace_game(
                                        g, {q: send_av, p: recv_av}, 0
                                    ),
                                    (q, p),
                                    (send_av, recv_av),
                                    0,
                                )
                            )
    return out


def raw_closed_proc_steps(s: ProcState) -> list[RawStep]:
    out: list[RawStep] = []
    for t, th in enumerate(s.threads):
        if not isinstance(th.proc, Sum):
            continue
        n = len(th.env)
        for bi, (pf, cont) in enumerate(th.proc.branches):
            if isinstance(pf, Tick):
                av = (Thread(cont, th.env),)
                out.append(
                    RawStep(
                        StepLabel(Heartbeat(n), (t,), (bi,)),
                        _replace_proc(s, {t: av}, 0),
                        (t,),
                        (av,),
                        0,
                    )
                )
    for t, th in enumerate(s.threads):
        if not isinstance(th.proc, Par):
            continue
        fresh = s.num_channels + 1
        env2 = th.env + (fresh,)
        av = (Thread(th.proc.left, env2), Thread(th.proc.right, env2))
        out.append(
            RawStep(
                StepLabel(Fork(len(th.env)), (t,), ()),
                _replace_proc(s, {t: av}, 1),
                (t,),
                (av,),
                1,
            )
        )
    for q, qt in enumerate(s.threads):
        if not isinstance(qt.proc, Sum):
            continue
        for bi, (pf, cont_s) in enumerate(qt.proc.branches):
            if not isinstance(pf, Send):
                continue
            shared = qt.env[pf.subject - 1]
            obj = qt.env[pf.obj - 1]
            for p, rt in enumerate(s.threads):
                if p == q or not isinstance(rt.proc, Sum):
                    continue
                for bj, (pg, cont_r) in enumerate(rt.proc.branches):
                    if not isinstance(pg, Recv) or rt.env[pg.subject - 1] != shared:
                        continue
                    kind = Sync(
                        len(rt.env), pg.subject, len(qt.env), pf.subject, pf.obj
                    )
                    send_av = (Thread(cont_s, qt.env),)
                    recv_av = (Thread(cont_r, rt.env + (obj,)),)
                    out.append(
                        RawStep(
                            StepLabel(kind, (q, p), (bi, bj)),
                            _replace_proc(s, {q: send_av, p: recv_av}, 0),
                            (q, p),
                            (send_av, recv_av),
                            0,
                        )
                    )
    return out


def closed_world_steps(state: Union[GameState, ProcState]) -> list[tuple[StepLabel, object]]:
    raws = (
        raw_closed_game_steps(state)
        if isinstance(state, GameState)
        else raw_closed_proc_steps(state)
    )
    return [(r.label, r.state) for r in raws]


# --------------------------------------------------- interface, game


def _game_interface_steps(ast: AState, enable_link: bool) -> list[tuple[ALab, AState]]:
    g: GameState = ast.subject
    h = ast.h
    known = set(h)
    out: list[tuple[ALab, AState]] = []
    for p, ps in enumerate(g.players):
        for key in ps.strat.keys():
            tag = key[0]
            plain = ps.strat.lookup(key)
            if tag == "heart":
                for d in plain.summands:
                    nxt = _replace_game(g, {p: (PlayerState(ps.attach, d),)}, 0)
                    out.append((ALab("tick"), AState(h, nxt)))
            elif tag == "in":
                ch = ps.attach[key[1] - 1]
                if ch in known:
                    fresh = g.num_channels + 1
                    for d in plain.summands:
                        nxt = _replace_game(
                            g, {p: (PlayerState(ps.attach + (fresh,), d),)}, 1
                        )
                        out.append((ALab("in", (ch,)), AState(h + (fresh,), nxt)))
            elif tag == "out":
                ch = ps.attach[key[1] - 1]
                if ch in known:
                    obj = ps.attach[key[2] - 1]
                    for d in plain.summands:
                        nxt = _replace_game(g, {p: (PlayerState(ps.attach, d),)}, 0)
                        out.append((ALab("out", (ch, obj)), AState(h + (obj,), nxt)))
            elif tag in ("forkL", "forkR"):
                fresh = g.num_channels + 1
                for d in plain.summands:
                    nxt = _replace_game(
                        g, {p: (PlayerState(ps.attach + (fresh,), d),)}, 1
                    )
                    out.append((ALab(tag), AState(h + (fresh,), nxt)))
        if enable_link:
            for key in ps.strat.keys():
                if key[0] != "in":
                    continue
                ch = ps.attach[key[1] - 1]
                if ch not in known:
                    continue
                fresh = g.num_channels + 1
                for src in sorted(known - {ch}):
                    for d in ps.strat.lookup(key).summands:
                        nxt = _replace_game(
                            g, {p: (PlayerState(ps.attach + (fresh,), d),)}, 1
                        )
                        out.append((ALab("link", (ch, fresh, src)), AState(h, nxt)))
    for r in raw_closed_game_steps(g):
        if r.label.tag in SILENT_TAGS:
            out.append((ALab(r.label.tag), AState(h, r.state)))
    return out


def _proc_interface_steps(ast: AState, enable_link: bool) -> list[tuple[ALab, AState]]:
    s: ProcState = ast.subject
    h = ast.h
    known = set(h)
    out: list[tuple[ALab, AState]] = []
    for t, th in enumerate(s.threads):
        if isinstance(th.proc, Par):
            fresh = s.num_channels + 1
            env2 = th.env + (fresh,)
            for tag, kept in (("forkL", th.proc.left), ("forkR", th.proc.right)):
                nxt = _replace_proc(s, {t: (Thread(kept, env2),)}, 1)
                out.append((ALab(tag), AState(h + (fresh,), nxt)))
            continue
        for pf, cont in th.proc.branches:
            if isinstance(pf, Tick):
                nxt = _replace_proc(s, {t: (Thread(cont, th.env),)}, 0)
                out.append((ALab("tick"), AState(h, nxt)))
            elif isinstance(pf, Recv):
                ch = th.env[pf.subject - 1]
                if ch in known:
                    fresh = s.num_channels + 1
                    nxt = _replace_proc(s, {t: (Thread(cont, th.env + (fresh,)),)}, 1)
                    out.append((ALab("in", (ch,)), AState(h + (fresh,), nxt)))
                if enable_link:
                    if ch in known:
                        fresh = s.num_channels + 1
                        for src in sorted(known - {ch}):
                            nxt = _replace_proc(
                                s, {t: (Thread(cont, th.env + (fresh,)),)}, 1
                            )
                            out.append(
                                (ALab("link", (ch, fresh, src)), AState(h, nxt))
                            )
            else:
                ch = th.env[pf.subject - 1]
                if ch in known:
                    obj = th.env[pf.obj - 1]
                    nxt = _replace_proc(s, {t: (Thread(cont, th.env),)}, 0)
                    out.append((ALab("out", (ch, obj)), AState(h + (obj,), nxt)))
    for r in raw_closed_proc_steps(s):
        if r.label.tag in SILENT_TAGS:
            out.append((ALab(r.label.tag), AState(h, r.state)))
    return out


def interface_steps(ast: AState, enable_link: bool = False) -> list[tuple[ALab, AState]]:
    if isinstance(ast.subject, GameState):
        return _game_interface_steps(ast, enable_link)
    return _proc_interface_steps(ast, enable_link)


# -------------------------------------------------------------- graphs


@dataclass
class LtsGraph:
    """Finite rooted graph; vertex 0 is the root, edges are sorted."""

    states: list
    edges: list[tuple]

    @property
    def root(self) -> int:
        return 0

    @property
    def num_edges(self) -> int:
        return sum(len(e) for e in self.edges)

    def dump(self) -> str:
        lines = [
            f"lts-v1 vertices={len(self.states)} edges={self.num_edges} root=0"
        ]
        for src in range(len(self.states)):
            for label, dst in self.edges[src]:
                lines.append(f"{src} -{label.render()}-> {dst}")
        return "\n".join(lines) + "\n"


def build_graph(root, successors: Callable, max_states: int = 200000) -> LtsGraph:
    """BFS the reachable states. Successor lists are deduplicated and
    sorted by label then target, so vertex numbering and edge order are
    functions of the root alone."""
    index = {root: 0}
    states = [root]
    edges: list[tuple] = []
    frontier = 0
    while frontier < len(states):
        state = states[frontier]
        seen = set()
        outs = []
        for label, nxt in successors(state):
            if nxt not in index:
                if len(states) >= max_states:
                    raise RuntimeError(f"state space exceeds {max_states} states")
                index[nxt] = len(states)
                states.append(nxt)
            pair = (label, index[nxt])
            if pair not in seen:
                seen.add(pair)
                outs.append(pair)
        outs.sort(key=lambda p: (p[0].sort_key(), p[1]))
        edges.append(tuple(outs))
        frontier += 1
    return LtsGraph(states, edges)


def closed_graph(state: Union[GameState, ProcState], max_states: int = 200000) -> LtsGraph:
    return build_graph(state, closed_world_steps, max_states)


def strategy_lts(p: Process, gamma: int, enable_link: bool = False, max_states: int = 200000) -> LtsGraph:
    root = AState(tuple(range(1, gamma + 1)), root_strategy(p, gamma))
    return build_graph(root, lambda a: interface_steps(a, enable_link), max_states)


def process_lts(p: Process, gamma: int, enable_link: bool = False, max_states: int = 200000) -> LtsGraph:
    root = AState(tuple(range(1, gamma + 1)), root_process(p, gamma))
    return build_graph(root, lambda a: interface_steps(a, enable_link), max_states)


# ---------------------------------------------------------- weak bisim


@dataclass(frozen=True)
class BisimResult:
    equivalent: bool
    witness: tuple[str, ...]
    num_blocks: int


def _tau_closure(n: int, silent_adj: list[list[int]]) -> list[frozenset[int]]:
    out = []
    for v in range(n):
        seen = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in silent_adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        out.append(frozenset(seen))
    return out


def weak_bisim(g1: LtsGraph, g2: LtsGraph, witness_depth: int = 16) -> BisimResult:
    """Decide weak bisimilarity of the two roots.

    Signature refinement over the disjoint union: silent edges may be
    absorbed, every other label (tick included) is observable. When the
    roots differ the witness is a label sequence tracing one spine of a
    distinguishing experiment; it is a hint, not a certificate.
    """
    n1 = len(g1.states)
    n = n1 + len(g2.states)
    silent_adj: list[list[int]] = [[] for _ in range(n)]
    obs_adj: list[list[tuple[ALab, int]]] = [[] for _ in range(n)]
    for src in range(n1):
        for label, dst in g1.edges[src]:
            (silent_adj if label.is_silent else obs_adj)[src].append(
                dst if label.is_silent else (label, dst)
            )
    for src in range(len(g2.states)):
        for label, dst in g2.edges[src]:
            (silent_adj if label.is_silent else obs_adj)[src + n1].append(
                dst + n1 if label.is_silent else (label, dst + n1)
            )

    tau = _tau_closure(n, silent_adj)
    weak: list[dict[ALab, frozenset[int]]] = []
    for v in range(n):
        acc: dict[ALab, set[int]] = {}
        for u in tau[v]:
            for label, w in obs_adj[u]:
                acc.setdefault(label, set()).update(tau[w])
        weak.append({label: frozenset(ws) for label, ws in acc.items()})

    block = [0] * n
    num_blocks = 1
    while True:
        sigs = []
        for v in range(n):
            obs_sig = frozenset(
                (label, block[w]) for label, ws in weak[v].items() for w in ws
            )
            tau_sig = frozenset(block[u] for u in tau[v])
            sigs.append((block[v], obs_sig, tau_sig))
        ranks: dict = {}
        for v in range(n):
            if sigs[v] not in ranks:
                ranks[sigs[v]] = len(ranks)
        new_block = [ranks[sigs[v]] for v in range(n)]
        if len(ranks) == num_blocks:
            block = new_block
            break
        block = new_block
        num_blocks = len(ranks)

    r1, r2 = 0, n1
    if block[r1] == block[r2]:
        return BisimResult(True, (), num_blocks)

    def distinguish(x: int, y: int, depth: int) -> list[str]:
        if depth == 0:
            return []
        labels = sorted(set(weak[x]) | set(weak[y]), key=lambda l: l.sort_key())
        for label in labels:
            bx = {block[w] for w in weak[x].get(label, ())}
            by = {block[w] for w in weak[y].get(label, ())}
            if bx == by:
                continue
            if bx - by:
                extra, src, other = min(bx - by), x, weak[y].get(label, frozenset())
            else:
                extra, src, other = min(by - bx), y, weak[x].get(label, frozenset())
            if not other:
                return [label.render()]
            w1 = min(w for w in weak[src][label] if block[w] == extra)
            w2 = min(other)
            return [label.render()] + distinguish(w1, w2, depth - 1)
        bx = {block[u] for u in tau[x]}
        by = {block[u] for u in tau[y]}
        if bx != by:
            if bx - by:
                extra, src, osrc = min(bx - by), x, y
            else:
                extra, src, osrc = min(by - bx), y, x
            u1 = min(u for u in tau[src] if block[u] == extra)
            return distinguish(u1, min(tau[osrc]), depth - 1)
        return []

    return BisimResult(False, tuple(distinguish(r1, r2, witness_depth)), num_blocks)


# -------------------------------------------------------- arena bridge


def arena_position(g: GameState):
    """The current strategy-side state as a string-diagram position."""
    from . import arena

    chan_ids = {c: arena.new_id() for c in range(1, g.num_channels + 1)}
    players = {}
    for ps in g.players:
        players[arena.new_id()] = arena.Player(tuple(chan_ids[c] for c in ps.attach))
    return arena.Position(frozenset(chan_ids.values()), players)


def arena_trace(g0: GameState, indices: Sequence[int]):
    """Replay closed steps chosen by index as an arena play.

    Index k selects the k-th raw successor in enumeration order: ticks
    by player, then forks, then sync pairs, summand products innermost.
    Channel and player traces are exact identity embeddings, so the
    resulting moves compose on the nose.
    """
    from . import arena

    chan_ids = {c: arena.new_id() for c in range(1, g0.num_channels + 1)}
    pids = [arena.new_id() for _ in g0.players]
    pos = arena.Position(
        frozenset(chan_ids.values()),
        {
            pids[i]: arena.Player(tuple(chan_ids[c] for c in ps.attach))
            for i, ps in enumerate(g0.players)
        },
    )
    play = arena.identity_play(pos)
    state = g0
    for idx in indices:
        raws = raw_closed_game_steps(state)
        if not 0 <= idx < len(raws):
            raise IndexError(
                f"edge index {idx} out of range: state has {len(raws)} raw steps"
            )
        r = raws[idx]
        if r.created:
            chan_ids[state.num_channels + 1] = arena.new_id()
        repl = dict(zip(r.actors, r.avatars))
        pairs: list[tuple[PlayerState, int]] = []
        player_map: dict[int, tuple[int, ...]] = {}
        moving = frozenset(pids[i] for i in r.actors)
        for i, ps in enumerate(state.players):
            if i in repl:
                fresh_pids = tuple(arena.new_id() for _ in repl[i])
                player_map[pids[i]] = fresh_pids
                pairs.extend(zip(repl[i], fresh_pids))
            else:
                player_map[pids[i]] = (pids[i],)
                pairs.append((state.players[i], pids[i]))
        pairs.sort(key=lambda pr: player_key(pr[0]))
        final = arena.Position(
            frozenset(chan_ids[c] for c in range(1, r.state.num_channels + 1)),
            {
                pid: arena.Player(tuple(chan_ids[c] for c in ps.attach))
                for ps, pid in pairs
            },
        )
        move = arena.Move(
            r.label.kind,
            pos,
            final,
            {c: c for c in pos.channels},
            player_map,
            moving,
        )
        assert tuple(ps for ps, _ in pairs) == r.state.players
        play = arena.compose(arena.play_of(move), play)
        pos = final
        pids = [pid for _, pid in pairs]
        state = r.state
    return play
