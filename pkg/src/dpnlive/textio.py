"""Text format for networks, plus report serialization.

Grammar, one declaration per line (``#`` starts a comment)::

    network <id>
    channel <id> <producer> -> <consumer>
    task <id> mode=<deterministic|nondeterministic>
    init -> <state> [produce <ch>:<qty>[,<ch>:<qty>]*]
    [<label>:] <state> -> <state> [consume <ch>:<qty>,...] [produce <ch>:<qty>,...]

Transition lines attach to the most recent ``task``.  Unlabelled
transitions are named ``t1``, ``t2``, ... in order of appearance within
their task.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .model import (
    INITIAL_STATE,
    Channel,
    InitialTransition,
    Network,
    Task,
    TaskMode,
    Transition,
    validate,
)

__all__ = [
    "SourceSpan",
    "ErrorKind",
    "ParseError",
    "ParseFailure",
    "parse",
    "emit_network",
    "emit_report",
    "report_dict",
    "format_rational",
]

MAX_QUANTITY = 2**63 - 1


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int


class ErrorKind(enum.Enum):
    SYNTAX = "Syntax"
    UNKNOWN_REFERENCE = "UnknownReference"
    DUPLICATE_DEFINITION = "DuplicateDefinition"
    ROLE_VIOLATION = "RoleViolation"
    INVALID = "Invalid"


@dataclass(frozen=True)
class ParseError:
    span: SourceSpan
    kind: ErrorKind
    message: str

    def __str__(self):
        return f"{self.span.line}:{self.span.column}: {self.kind.value}: {self.message}"


class ParseFailure(Exception):
    def __init__(self, errors: list[ParseError]):
        self.errors = errors
        super().__init__("\n".join(str(e) for e in errors))


_TOKEN = re.compile(r"\S+")


@dataclass
class _Tok:
    text: str
    col: int  # 1-based


def _tokens(line: str) -> list[_Tok]:
    return [_Tok(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]


@dataclass
class _TaskDraft:
    id: str
    mode: TaskMode
    line: int
    init: InitialTransition | None = None
    transitions: list[Transition] = field(default_factory=list)
    # transition id -> (line, column, length)
    spans: dict[str, SourceSpan] = field(default_factory=dict)
    # (channel, role, span) references to check once all channels are known
    refs: list[tuple[str, str, SourceSpan, str]] = field(default_factory=list)


class _LineError(Exception):
    def __init__(self, kind: ErrorKind, col: int, length: int, message: str):
        self.kind, self.col, self.length, self.message = kind, col, length, message


_IDENT = re.compile(r"[A-Za-z0-9_]+\Z")


def _ident(tok: _Tok, what: str) -> str:
    if not _IDENT.match(tok.text):
        raise _LineError(ErrorKind.SYNTAX, tok.col, len(tok.text), f"bad {what} identifier {tok.text!r}")
    return tok.text


def _rates(toks: list[_Tok], i: int, keyword: str, out_refs: list[tuple[str, int, int]]):
    """Parse ``<ch>:<qty>[,<ch>:<qty>]*`` starting at toks[i]; returns (rates, next index)."""
    if i >= len(toks):
        raise _LineError(ErrorKind.SYNTAX, toks[i - 1].col, len(toks[i - 1].text),
                         f"'{keyword}' needs a <channel>:<quantity> list")
    # allow "f:1, g:2" split over several tokens
    parts: list[tuple[str, int]] = []  # (piece, col)
    while True:
        tok = toks[i]
        col = tok.col
        for piece in tok.text.split(","):
            if piece:
                parts.append((piece, col))
            col += len(piece) + 1
        i += 1
        if not (tok.text.endswith(",") or (i < len(toks) and toks[i].text.startswith(","))):
            break
        if i >= len(toks):
            raise _LineError(ErrorKind.SYNTAX, tok.col, len(tok.text), "dangling ','")
    rates: dict[str, int] = {}
    for piece, col in parts:
        m = re.fullmatch(r"([A-Za-z0-9_]+):([0-9]+)", piece)
        if not m:
            raise _LineError(ErrorKind.SYNTAX, col, len(piece), f"expected <channel>:<quantity>, got {piece!r}")
        ch, qty = m.group(1), int(m.group(2))
        if qty <= 0 or qty > MAX_QUANTITY:
            raise _LineError(ErrorKind.SYNTAX, col + len(ch) + 1, len(m.group(2)),
                             f"quantity must be in 1..{MAX_QUANTITY}")
        if ch in rates:
            raise _LineError(ErrorKind.DUPLICATE_DEFINITION, col, len(ch), f"channel {ch} listed twice")
        rates[ch] = qty
        out_refs.append((ch, col, len(ch)))
    return rates, i


def parse(text: str) -> Network:
    """Parse a network description; raises ParseFailure listing every error found."""
    errors: list[ParseError] = []
    name: str | None = None
    name_span = SourceSpan(1, 1, 1)
    channels: dict[str, tuple[Channel, SourceSpan, int, int]] = {}
    tasks: dict[str, _TaskDraft] = {}
    current: _TaskDraft | None = None

    def err(kind, line, col, length, message):
        errors.append(ParseError(SourceSpan(line, col, max(length, 1)), kind, message))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        head = toks[0]
        try:
            if head.text == "network":
                if len(toks) != 2:
                    raise _LineError(ErrorKind.SYNTAX, head.col, len(line.strip()), "expected 'network <id>'")
                if name is not None:
                    raise _LineError(ErrorKind.DUPLICATE_DEFINITION, head.col, len(head.text),
                                     "network declared more than once")
                name = _ident(toks[1], "network")
                name_span = SourceSpan(lineno, toks[1].col, len(name))
            elif head.text == "channel":
                if len(toks) != 5 or toks[3].text != "->":
                    raise _LineError(ErrorKind.SYNTAX, head.col, len(line.strip()),
                                     "expected 'channel <id> <producer> -> <consumer>'")
                cid = _ident(toks[1], "channel")
                producer = _ident(toks[2], "task")
                consumer = _ident(toks[4], "task")
                if cid in channels:
                    raise _LineError(ErrorKind.DUPLICATE_DEFINITION, toks[1].col, len(cid),
                                     f"channel {cid} already declared")
                # registered even when invalid, so later uses don't cascade
                channels[cid] = (Channel(cid, producer, consumer), SourceSpan(lineno, toks[1].col, len(cid)),
                                 toks[2].col, toks[4].col)
                if producer == consumer:
                    raise _LineError(ErrorKind.ROLE_VIOLATION, toks[2].col, toks[4].col + len(consumer) - toks[2].col,
                                     f"channel {cid} has the same producer and consumer")
            elif head.text == "task":
                if len(toks) != 3 or not toks[2].text.startswith("mode="):
                    raise _LineError(ErrorKind.SYNTAX, head.col, len(line.strip()),
                                     "expected 'task <id> mode=<deterministic|nondeterministic>'")
                tid = _ident(toks[1], "task")
                mode_text = toks[2].text[len("mode="):]
                if tid in tasks:
                    # swallow the duplicate's body instead of reporting each line
                    current = _TaskDraft(tid, TaskMode.NONDETERMINISTIC, lineno)
                    raise _LineError(ErrorKind.DUPLICATE_DEFINITION, toks[1].col, len(tid),
                                     f"task {tid} already declared")
                try:
                    mode = TaskMode(mode_text)
                except ValueError:
                    mode = TaskMode.NONDETERMINISTIC
                    err(ErrorKind.SYNTAX, lineno, toks[2].col + 5, len(mode_text), f"unknown mode {mode_text!r}")
                current = _TaskDraft(tid, mode, lineno)
                tasks[tid] = current
            else:
                _transition_line(toks, lineno, current, channels)
        except _LineError as e:
            err(e.kind, lineno, e.col, e.length, e.message)

    if name is None:
        err(ErrorKind.SYNTAX, 1, 1, 1, "missing 'network <id>' declaration")
        name = "unnamed"

    for cid, (ch, span, pcol, ccol) in channels.items():
        for tid, col in ((ch.producer, pcol), (ch.consumer, ccol)):
            if tid not in tasks:
                err(ErrorKind.UNKNOWN_REFERENCE, span.line, col, len(tid), f"task {tid} is not declared")

    for draft in tasks.values():
        if draft.init is None:
            err(ErrorKind.SYNTAX, draft.line, 1, len("task"), f"task {draft.id} has no 'init' line")
        for cid, role, span, who in draft.refs:
            ch = channels[cid][0]
            owner = ch.producer if role == "produce" else ch.consumer
            if owner != draft.id:
                verb = "produces on" if role == "produce" else "consumes from"
                errors.append(ParseError(span, ErrorKind.ROLE_VIOLATION,
                                         f"{who} {verb} {cid}, which belongs to {owner}"))

    if errors:
        raise ParseFailure(_sorted(errors))

    net = Network(
        name,
        tuple(Task(d.id, d.mode, d.init, tuple(d.transitions)) for d in tasks.values()),
        tuple(c for c, *_ in channels.values()),
    )
    for v in validate(net):
        span = name_span
        if v.rule == "effectiveness":
            tid, _, trid = v.entity.partition(".")
            span = tasks[tid].spans.get(trid, span)
        elif v.entity in tasks:
            span = SourceSpan(tasks[v.entity].line, 1, len("task"))
        errors.append(ParseError(span, ErrorKind.INVALID, f"{v.rule}: {v.entity}: {v.message}"))
    if errors:
        raise ParseFailure(_sorted(errors))
    return net


def _sorted(errors: list[ParseError]) -> list[ParseError]:
    return sorted(errors, key=lambda e: (e.span.line, e.span.column))


def _transition_line(toks: list[_Tok], lineno: int, current: _TaskDraft | None, channels) -> None:
    label_tok = None
    if toks[0].text.endswith(":") and toks[0].text != ":":
        label_tok = _Tok(toks[0].text[:-1], toks[0].col)
        toks = toks[1:]
        if not toks:
            raise _LineError(ErrorKind.SYNTAX, label_tok.col, len(label_tok.text) + 1, "label without transition")
    if len(toks) < 3 or toks[1].text != "->":
        raise _LineError(ErrorKind.SYNTAX, toks[0].col, len(toks[0].text),
                         f"unrecognized declaration starting with {toks[0].text!r}")
    if current is None:
        raise _LineError(ErrorKind.SYNTAX, toks[0].col, len(toks[0].text), "transition outside of any task")

    is_init = toks[0].text == INITIAL_STATE
    if is_init and label_tok is not None:
        raise _LineError(ErrorKind.SYNTAX, label_tok.col, len(label_tok.text), "the initial transition takes no label")
    source = None if is_init else _ident(toks[0], "state")
    target = _ident(toks[2], "state")
    if target == INITIAL_STATE:
        raise _LineError(ErrorKind.SYNTAX, toks[2].col, len(target), "no transition may enter the initial state")

    refs: list[tuple[str, int, int]] = []
    pending: list[tuple[str, str, SourceSpan]] = []
    consume: dict[str, int] = {}
    produce: dict[str, int] = {}
    i = 3
    seen_kw: set[str] = set()
    while i < len(toks):
        kw = toks[i]
        if kw.text not in ("consume", "produce"):
            raise _LineError(ErrorKind.SYNTAX, kw.col, len(kw.text), f"expected 'consume' or 'produce', got {kw.text!r}")
        if kw.text in seen_kw:
            raise _LineError(ErrorKind.DUPLICATE_DEFINITION, kw.col, len(kw.text), f"'{kw.text}' given twice")
        if kw.text == "consume" and "produce" in seen_kw:
            raise _LineError(ErrorKind.SYNTAX, kw.col, len(kw.text), "'consume' must precede 'produce'")
        if is_init and kw.text == "consume":
            raise _LineError(ErrorKind.SYNTAX, kw.col, len(kw.text), "the initial transition cannot consume")
        seen_kw.add(kw.text)
        start = len(refs)
        rates, i = _rates(toks, i + 1, kw.text, refs)
        (consume if kw.text == "consume" else produce).update(rates)
        for ch, col, length in refs[start:]:
            if ch not in channels:
                raise _LineError(ErrorKind.UNKNOWN_REFERENCE, col, length, f"channel {ch} is not declared")
            pending.append((ch, kw.text, SourceSpan(lineno, col, length)))

    if is_init:
        if current.init is not None:
            raise _LineError(ErrorKind.DUPLICATE_DEFINITION, toks[0].col, len(INITIAL_STATE),
                             f"task {current.id} already has an initial transition")
        current.init = InitialTransition(target, produce)
        who = f"{current.id}.{INITIAL_STATE}"
    else:
        if label_tok is not None:
            tid = _ident(label_tok, "transition")
        else:
            tid = f"t{len(current.transitions) + 1}"
        if tid in current.spans:
            col = label_tok.col if label_tok else toks[0].col
            raise _LineError(ErrorKind.DUPLICATE_DEFINITION, col, len(tid),
                             f"transition {current.id}.{tid} already declared")
        current.transitions.append(Transition(tid, source, target, consume, produce))
        first = label_tok or toks[0]
        current.spans[tid] = SourceSpan(lineno, first.col, toks[2].col + len(target) - first.col)
        who = f"{current.id}.{tid}"
    current.refs.extend((ch, role, span, who) for ch, role, span in pending)


def _rates_text(rates: dict[str, int]) -> str:
    return ",".join(f"{c}:{q}" for c, q in rates.items())


def emit_network(network: Network) -> str:
    """Canonical text: channels then tasks, each sorted by id, all transitions labelled."""
    lines = [f"network {network.name}"]
    for c in network.channels:
        lines.append(f"channel {c.id} {c.producer} -> {c.consumer}")
    for t in network.tasks:
        lines.append(f"task {t.id} mode={t.mode.value}")
        init = f"{INITIAL_STATE} -> {t.initial_transition.target}"
        if t.initial_transition.produce:
            init += " produce " + _rates_text(t.initial_transition.produce)
        lines.append(init)
        for tr in t.transitions:
            s = f"{tr.id}: {tr.source} -> {tr.target}"
            if tr.consume:
                s += " consume " + _rates_text(tr.consume)
            if tr.produce:
                s += " produce " + _rates_text(tr.produce)
            lines.append(s)
    return "\n".join(lines) + "\n"


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _json_number(value) -> Any:
    value = Fraction(value)
    return value.numerator if value.denominator == 1 else format_rational(value)


def report_dict(report, *, command: str | None = None, network: str | None = None) -> dict[str, Any]:
    """Turn a Verdict, DimensionResult or ExplorationResult into the stable JSON shape."""
    from .analyzer import DimensionResult, Verdict
    from .oracle import ExplorationResult

    out: dict[str, Any] = {}
    if command is not None:
        out["command"] = command
    if network is not None:
        out["network"] = network

    if isinstance(report, Verdict):
        out["verdict"] = report.kind
        out["method"] = report.method
        if report.witness is not None:
            out["witness"] = {
                "assignment": {k: _json_number(v) for k, v in sorted(report.witness.items())},
                "branch": list(report.branch or ()),
            }
        if report.reason:
            out["reason"] = report.reason
    elif isinstance(report, DimensionResult):
        out["result"] = report.kind
        out["method"] = report.method
        if report.kind == "bounded-live":
            out["z_ip"] = report.z_ip
        elif report.kind == "unbounded":
            out["z_ip"] = "unbounded"
        if report.lp_unbounded or (report.kind == "unbounded" and report.z_lp is None):
            out["z_lp"] = "unbounded"
        elif report.z_lp is not None:
            out["z_lp"] = _json_number(report.z_lp)
        if report.recommended is not None:
            out["recommended_dims"] = dict(report.recommended.capacities)
        if report.witness is not None:
            out["witness"] = {
                "assignment": {k: _json_number(v) for k, v in sorted(report.witness.items())},
                "branch": list(report.branch or ()),
            }
        if report.reason:
            out["reason"] = report.reason
    elif isinstance(report, ExplorationResult):
        out["result"] = "blocked" if report.blocked else ("truncated" if report.truncated else "no-deadlock")
        if report.blocked:
            first = report.blocked[0]
            out["witness"] = {
                "trace": [f"{t}.{tr}" for t, tr in first.trace],
                "states": dict(first.configuration.task_state),
                "contents": dict(first.configuration.contents),
            }
        out["stats"] = {"configs": report.configurations_visited, "cuts": 0, "pivots": 0}
    else:
        raise TypeError(f"cannot serialize {type(report).__name__}")

    branches = getattr(report, "branches", None)
    if branches is not None:
        out["branches"] = {
            "total": branches.total,
            "feasible": branches.feasible,
            "infeasible": branches.infeasible,
            "unbounded": branches.unbounded,
        }
    stats = getattr(report, "stats", None)
    if stats is not None and not isinstance(report, ExplorationResult):
        s = {"configs": stats.configs, "cuts": stats.cuts, "pivots": stats.pivots}
        if stats.millis is not None:
            s["millis"] = stats.millis
        out["stats"] = s
    return out


def _text_report(d: dict[str, Any]) -> str:
    lines = []
    if "verdict" in d:
        head = d["verdict"].upper()
        lines.append(f"{head} ({d['method']})")
    else:
        lines.append(d["result"].upper() + (f" ({d['method']})" if "method" in d else ""))
    for key in ("z_ip", "z_lp"):
        if key in d:
            lines.append(f"{key}: {d[key]}")
    if "recommended_dims" in d:
        lines.append("recommended: " + ",".join(f"{k}={v}" for k, v in d["recommended_dims"].items()))
    if "reason" in d:
        lines.append(f"note: {d['reason']}")
    if "branches" in d:
        b = d["branches"]
        lines.append(
            f"branches: total={b['total']} feasible={b['feasible']} "
            f"infeasible={b['infeasible']} unbounded={b['unbounded']}"
        )
    if "witness" in d:
        w = d["witness"]
        if "assignment" in w:
            if w["branch"]:
                lines.append("witness branch: " + "; ".join(w["branch"]))
            lines.append("witness: " + ", ".join(f"{k}={v}" for k, v in w["assignment"].items()))
        else:
            lines.append("blocked configuration: "
                         + ", ".join(f"{k}@{v}" for k, v in w["states"].items())
                         + " | " + ", ".join(f"{k}={v}" for k, v in w["contents"].items()))
            lines.append("trace:")
            lines.extend(f"  {step}" for step in w["trace"])
    if "stats" in d:
        lines.append("stats: " + " ".join(f"{k}={v}" for k, v in d["stats"].items()))
    return "\n".join(lines) + "\n"


def emit_report(report, fmt: str = "text", *, command: str | None = None, network: str | None = None) -> str:
    d = report_dict(report, command=command, network=network)
    if fmt == "json":
        return json.dumps(d, indent=2) + "\n"
    if fmt == "text":
        return _text_report(d)
    raise ValueError(f"unknown report format {fmt!r}")
