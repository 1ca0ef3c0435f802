"""Command-line entry point: ``python -m app.main <command> [options]``."""

import argparse
import logging
import sys
from typing import Any, List, Literal, Optional, Sequence

from pydantic import BaseModel, ValidationError, field_validator
from pydantic import Field as PydanticField

from app.api.commands import CommandResult, router
from app.core.config import DEFAULT_FIELD, DEFAULT_SAMPLES, DEFAULT_SEED, LOG_LEVEL
from app.core.field import Field, FieldError
from app.core.sampling import SamplingContext
from app.services.calculus import CalculusError
from app.services.components import ComponentError
from app.services.endomorphisms import DecompositionError
from app.services.ext import ExtError
from app.services.leclerc import DEFAULT_LAMBDAS, FixtureError
from app.services.quiver import QuiverError
from app.services.representation import RepresentationError
from app.services.roots import RootSystemError
from app.services.serialization import SerializationError, dumps

logger = logging.getLogger("app")

EXIT_OK, EXIT_FAILED_CHECK, EXIT_USAGE = 0, 1, 2

INPUT_ERRORS = (
    SerializationError,
    FieldError,
    QuiverError,
    RepresentationError,
    RootSystemError,
    ComponentError,
    CalculusError,
    ExtError,
    FixtureError,
    ValidationError,
)


class RunConfig(BaseModel):
    command: str
    field: str = DEFAULT_FIELD
    seed: int = DEFAULT_SEED
    samples: int = PydanticField(DEFAULT_SAMPLES, ge=1)
    format: Literal["json", "table"] = "json"
    out: Optional[str] = None
    log_level: str = LOG_LEVEL

    @field_validator("field")
    @classmethod
    def check_field(cls, v: str) -> str:
        try:
            Field.parse(v)
        except FieldError as e:
            raise ValueError(str(e)) from e
        return v

    def context(self) -> SamplingContext:
        return SamplingContext(Field.parse(self.field), self.seed, self.samples)


class _Formatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        base = super().format(record)
        extras = {k: v for k, v in record.__dict__.items() if k in ("seed", "samples", "field", "check", "dims", "labels")}
        return f"{base} {extras}" if extras else base


class _StderrHandler(logging.StreamHandler):
    """Writes to whatever ``sys.stderr`` is when a record is emitted."""

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value) -> None:
        pass


def configure_logging(level: str) -> None:
    root = logging.getLogger()
    for handler in [h for h in root.handlers if isinstance(h, _StderrHandler)]:
        root.removeHandler(handler)
    handler = _StderrHandler()
    handler.setFormatter(_Formatter("%(levelname)s %(name)s: %(message)s"))
    root.addHandler(handler)
    root.setLevel(level.upper())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default=DEFAULT_FIELD, help="'q' or 'fp:PRIME'")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--log-level", default=LOG_LEVEL)

    parser = argparse.ArgumentParser(prog="quivrep", description="Exact computations with Dynkin quiver representations")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text)

    add("roots", "positive roots of a Dynkin type").add_argument("type")
    add("relations", "preprojective relations of a Dynkin type").add_argument("type")
    for name, help_text in (("hom", "dim Hom(A, B)"), ("ext", "dim Ext¹(A, B)")):
        p = add(name, help_text)
        p.add_argument("a")
        p.add_argument("b")
    for name, help_text in (
        ("decompose", "Krull-Schmidt decomposition of a module"),
        ("label", "component label of a module"),
        ("census", "middle terms of self-extensions"),
        ("rigid", "distinct summands of a rigid module"),
    ):
        add(name, help_text).add_argument("a")

    p = add("sample", "generic point of a component")
    p.add_argument("type")
    p.add_argument("alpha")
    p.add_argument("--index", type=int, default=0)
    for name, help_text in (("mu", "generic parameter count"), ("canonical", "canonical decomposition")):
        p = add(name, help_text)
        p.add_argument("type")
        p.add_argument("alpha")
    for name, help_text in (("component-ext", "generic ext between components"),
                            ("sum-component", "whether the direct sum of two components is a component")):
        p = add(name, help_text)
        p.add_argument("type")
        p.add_argument("alpha")
        p.add_argument("beta")

    p = add("search", "maximal orthogonal sets of labels")
    p.add_argument("type")
    p.add_argument("--max-sum", type=int, default=2)
    p.add_argument("--max-dim", type=int, default=None)

    add("theorem1", "two natural combinations of N+1 labels with equal sums").add_argument("labels")

    p = add("verify-leclerc", "checks around the A5 family M_λ")
    p.add_argument("--lambdas", type=str, nargs="+", default=[str(x) for x in DEFAULT_LAMBDAS])

    add("metadata", "recorded quantum identity of the A5 example")
    return parser


def _flatten(prefix: str, value: Any, out: List[str]) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append(f"{prefix}\t{value}")


def render(report: BaseModel, fmt: str) -> str:
    if fmt == "json":
        return dumps(report)
    lines: List[str] = []
    _flatten("", report.model_dump(mode="json", by_alias=True), lines)
    return "\n".join(lines) + "\n"


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    try:
        config = RunConfig(
            command=args.command, field=args.field, seed=args.seed, samples=args.samples,
            format=args.format, out=args.out, log_level=args.log_level,
        )
        ctx = config.context()
        if config.command == "verify-leclerc":
            args.lambdas = [ctx.field.parse_scalar(x) for x in args.lambdas]
        result: CommandResult = router.dispatch(config.command, args, ctx)
    except INPUT_ERRORS as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE
    except DecompositionError as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_FAILED_CHECK

    text = render(result.report, config.format)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if result.ok else EXIT_FAILED_CHECK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
