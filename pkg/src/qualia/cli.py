"""Command-line entry point: ``qualia run|validate|diff|repl``."""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from pathlib import Path
from typing import TextIO

from .cognition import KnowledgeGraph, PlanStage, Stage, parse_graph
from .config import EngineConfig, parse_config
from .errors import ParseError, QualiaError
from .events import InstinctEvent
from .manager import AgentState, init_agent, qualia_cycle, think
from .memory import recall
from .scenario import (
    parse_event_tokens,
    parse_stage_tokens,
    check_expected,
    diff_trace,
    format_step,
    parse_scenario,
    parse_trace,
    run_scenario,
)
from .states import Registry, bundled_text, default_registry, load_registry, validate_trace

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE = 0, 1, 2


def _read_source(path: str) -> tuple[str, str]:
    """Read ``path``; bare names of bundled scenarios (``scenario1.qs``) also resolve."""
    p = Path(path)
    if p.exists():
        return str(p), p.read_text(encoding="utf-8")
    name = p.name if p.suffix else p.name + ".qs"
    try:
        return name, bundled_text(name)
    except (FileNotFoundError, OSError):
        raise FileNotFoundError(path) from None


def _registry(path: str | None) -> Registry:
    return load_registry(Path(path).read_text(encoding="utf-8")) if path else default_registry()


def _parse_failure(where: str, exc: ParseError, err: TextIO) -> int:
    print(f"{where}:{exc.line}:{exc.column}: {exc.message}", file=err)
    return EXIT_PARSE


def cmd_run(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    try:
        where, text = _read_source(args.file)
        scenario = parse_scenario(text)
        registry = _registry(args.registry)
        base = parse_config(Path(args.config).read_text(encoding="utf-8")) if args.config else None
        if base is not None:
            scenario.config = {**base.to_mapping(), **scenario.config}
    except ParseError as exc:
        return _parse_failure(args.file, exc, err)
    except FileNotFoundError as exc:
        print(f"no such scenario: {exc}", file=err)
        return EXIT_PARSE

    try:
        report = run_scenario(scenario, args.seed, registry)
    except QualiaError as exc:
        print(f"runtime error: {exc}", file=err)
        return EXIT_PARSE

    trace_text = "\n".join(format_step(s) for s in report.trace) + "\n"
    if args.trace:
        Path(args.trace).write_text(trace_text, encoding="utf-8")
    else:
        out.write(trace_text)
    if args.report:
        Path(args.report).write_text(report.to_text(), encoding="utf-8")
    print("summary " + json.dumps(report.summary(), sort_keys=True), file=out)

    if not args.strict:
        return EXIT_OK
    if not scenario.expected:
        print(f"{where}: no expected trace to check", file=err)
        return EXIT_OK
    diff = check_expected(report, scenario)
    if diff.equal:
        print(f"strict: {len(scenario.expected)} expected state sequences matched", file=out)
        return EXIT_OK
    for line in diff.lines():
        print("strict: " + line, file=out)
    return EXIT_MISMATCH


def cmd_validate(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    try:
        where, text = _read_source(args.file)
        registry = _registry(args.registry)
        if text.lstrip().startswith("step "):
            report = validate_trace(parse_trace(text), registry)
            for f in report.findings:
                print(f"{where}: step {f.step}: {f.kind}: {f.message}", file=out)
            print(f"{where}: {'ok' if report.ok else f'{len(report)} finding(s)'}", file=out)
            return EXIT_OK if report.ok else EXIT_MISMATCH
        scenario = parse_scenario(text)
    except ParseError as exc:
        return _parse_failure(args.file, exc, err)
    except FileNotFoundError as exc:
        print(f"no such file: {exc}", file=err)
        return EXIT_PARSE
    problems = []
    for sg in scenario.goals:
        for st in sg.stages:
            try:
                registry.derive(st.action)
            except QualiaError as exc:
                problems.append(f"{sg.goal.id}.{st.label}: {exc}")
    for p in problems:
        print(f"{where}: {p}", file=out)
    n_stages = sum(len(sg.stages) for sg in scenario.goals)
    print(f"{where}: {len(scenario.goals)} goals, {n_stages} stages, {len(scenario.expected)} expectations", file=out)
    return EXIT_MISMATCH if problems else EXIT_OK


def cmd_diff(args: argparse.Namespace, out: TextIO, err: TextIO) -> int:
    try:
        a = parse_trace(Path(args.trace_a).read_text(encoding="utf-8"))
        b = parse_trace(Path(args.trace_b).read_text(encoding="utf-8"))
    except ParseError as exc:
        return _parse_failure("trace", exc, err)
    except OSError as exc:
        print(str(exc), file=err)
        return EXIT_PARSE
    diff = diff_trace(a, b)
    for line in diff.lines():
        print(line, file=out)
    print("traces equal" if diff.equal else "traces differ", file=out)
    return EXIT_OK if diff.equal else EXIT_MISMATCH


class Repl:
    """Line-driven session on one live agent.

    Event lines (``percept``/``stimulus``/``instinct``, bare or as
    ``event at <goal>.<label> ...``) queue up and apply at the next cycle.
    """

    GOAL = "repl"

    def __init__(self, config: EngineConfig | None = None, graph: KnowledgeGraph | None = None, seed: int = 0):
        self.agent: AgentState = init_agent(config, graph, seed=seed)
        self.queue: list = []
        self.n_stages = 0

    def handle(self, line: str) -> list[str]:
        try:
            tokens = shlex.split(line, comments=True)
        except ValueError as exc:
            return [f"error: {exc}"]
        if not tokens:
            return []
        head = tokens[0]
        try:
            if head in ("quit", "exit", "halt"):
                self.agent.alive = False
                return ["bye"]
            if head == "event":
                if len(tokens) < 4 or tokens[1] != "at":
                    raise ParseError("expected: event at <goal>.<label> <event...>")
                tokens = tokens[3:]
                head = tokens[0]
            if head in ("percept", "stimulus", "instinct"):
                ev = parse_event_tokens(tokens, 0, line)
                self.queue.append(ev)
                return [f"queued {ev.line()}"]
            if head == "stage":
                self.n_stages += 1
                label = f"s{self.n_stages}"
                _, stage = parse_stage_tokens(["stage", f"{self.GOAL}.{label}", *tokens[1:]], 0, line)
                return self._cycle(stage)
            if head == "tick":
                return self._cycle(None)
            if head == "think":
                return [f"thought {t.trigger} {'>'.join(t.path)}" for t in think(self.agent, self.GOAL)] or ["no graph"]
            if head == "recall":
                hits = recall(self.agent.stores, " ".join(tokens[1:]), 5)
                return ["memory " + r.log_line() for r in hits] or ["nothing recalled"]
            if head == "status":
                return [self._status()]
            if head == "help":
                return ["commands: stage <verb>[+mod..] \"note\" | percept|stimulus|instinct ... | tick | think | recall <q> | status | quit"]
            return [f"error: unknown command {head!r}"]
        except QualiaError as exc:
            return [f"error: {exc}"]

    def _cycle(self, stage: Stage | None) -> list[str]:
        planned = PlanStage(stage, self.agent.registry.derive(stage.action)) if stage else None
        events, self.queue = self.queue, []
        res = qualia_cycle(self.agent, planned, events, self.GOAL)
        lines = []
        if res.step is not None:
            lines.append(format_step(res.step))
        if planned is not None and not res.consumed:
            # preempted: the stage and its non-instinct events go back in line
            self.queue = [e for e in events if not isinstance(e, InstinctEvent)]
            lines.append("stage preempted; re-enter it to execute")
        lines.extend(e.line() for e in res.expressions)
        if not lines:
            lines.append(f"tick {self.agent.tick}")
        return lines

    def _status(self) -> str:
        emo = " ".join(f"{k}={v:.2f}" for k, v in self.agent.emotion.as_dict().items())
        drives = " ".join(f"{s.kind}={s.level:.2f}" for s in self.agent.instincts)
        return f"tick={self.agent.tick} {emo} {drives} memories={len(self.agent.stores.log)}"


def cmd_repl(args: argparse.Namespace, inp: TextIO, out: TextIO, err: TextIO) -> int:
    try:
        config = parse_config(Path(args.config).read_text(encoding="utf-8")) if args.config else None
        graph = parse_graph(Path(args.graph).read_text(encoding="utf-8")) if args.graph else None
    except ParseError as exc:
        return _parse_failure("config", exc, err)
    repl = Repl(config, graph, args.seed)
    for line in inp:
        for reply in repl.handle(line):
            print(reply, file=out)
        out.flush()
        if not repl.agent.alive:
            break
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qualia", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="replay a scenario script")
    run.add_argument("file")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--trace", help="write trace lines here instead of stdout")
    run.add_argument("--report", help="write the full run report here")
    run.add_argument("--strict", action="store_true", help="exit 1 unless the expected trace matches")
    run.add_argument("--config", help="key=value engine config applied under the scenario's own")
    run.add_argument("--registry", help="state registry / rule table file")

    val = sub.add_parser("validate", help="check a scenario script or a trace file")
    val.add_argument("file")
    val.add_argument("--registry")

    diff = sub.add_parser("diff", help="compare two trace files")
    diff.add_argument("trace_a")
    diff.add_argument("trace_b")

    repl = sub.add_parser("repl", help="interactive session")
    repl.add_argument("--config")
    repl.add_argument("--graph")
    repl.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: list[str] | None = None, stdin: TextIO | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    args = build_parser().parse_args(argv)
    out, err = stdout or sys.stdout, stderr or sys.stderr
    if args.command == "run":
        return cmd_run(args, out, err)
    if args.command == "validate":
        return cmd_validate(args, out, err)
    if args.command == "diff":
        return cmd_diff(args, out, err)
    return cmd_repl(args, stdin or sys.stdin, out, err)


if __name__ == "__main__":
    sys.exit(main())
