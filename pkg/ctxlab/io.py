"""
JSON file formats for scenarios, distributions and edge labelings.
Files are checked against the bundled schemas, then parsed into pydantic
models, then into library values.
"""
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from jsonschema import Draft202012Validator
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .config import config
from .errors import CtxlabError, ParseError, WrongOutcomeArity, WrongSemiring
from .schema_registry import DISTRIBUTION, LABELS, SCENARIO, get_schema
from .scenario import Scenario
from .semiring import Dist, Kind, format_value
from .simpdist import SimpDist, matrix_from_rows, matrix_rows

logger = logging.getLogger(__name__)

Entry = Union[str, int]


class EdgeEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    source: str
    target: str


class ScenarioFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    d: Optional[int] = None
    vertices: List[str]
    edges: List[EdgeEntry] = Field(default_factory=list)


class DistributionFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario: Union[str, ScenarioFile]
    d: Optional[int] = None
    kind: str = "rational"
    edges: Dict[str, List[List[Entry]]]
    vertices: Dict[str, List[Entry]] = Field(default_factory=dict)
    seed: Optional[int] = None


class LabelsFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    d: Optional[int] = None
    labels: Dict[str, int]


# -- parsing -------------------------------------------------------------------


def parse_json(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{source}: {e.msg}", e.lineno, e.colno) from None


def read_json(path: Union[str, Path]) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"Cannot read {path}: {e.strerror}") from None
    return parse_json(text, str(path))


def validate_document(data: Any, schema_name: str, source: str = "<input>") -> None:
    validator = Draft202012Validator(get_schema(schema_name))
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        where = "/".join(str(p) for p in first.absolute_path) or "<root>"
        raise ParseError(f"{source}: schema {schema_name} violated at {where}: {first.message}")


def _model(cls: type, data: Any, source: str) -> Any:
    try:
        return cls.model_validate(data)
    except ValidationError as e:
        raise ParseError(f"{source}: {e.errors()[0]['msg']}") from None


def _kind(name: str) -> Kind:
    try:
        return Kind(name)
    except ValueError:
        raise ParseError(f"Unknown semiring kind {name!r}") from None


def _value(raw: Entry, kind: Kind) -> Any:
    try:
        return kind.coerce(raw)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"Bad entry {raw!r}; expected an integer or 'num/den'") from None
    except WrongSemiring as e:
        raise ParseError(f"Bad entry: {e}") from None


def scenario_from_dict(data: Any, source: str = "<input>") -> Scenario:
    validate_document(data, SCENARIO, source)
    model: ScenarioFile = _model(ScenarioFile, data, source)
    return Scenario.build(model.vertices, [(e.id, e.source, e.target) for e in model.edges])


def load_scenario(path: Union[str, Path]) -> Scenario:
    return scenario_from_dict(read_json(path), str(path))


def _infer_d(model: DistributionFile, scenario_d: Optional[int]) -> int:
    sizes = {len(rows) for rows in model.edges.values()} | {len(q) for q in model.vertices.values()}
    declared = model.d or scenario_d
    if declared is not None:
        if sizes - {declared}:
            raise WrongOutcomeArity(f"Matrices of size {sorted(sizes)} do not match d={declared}")
        return declared
    if len(sizes) > 1:
        raise WrongOutcomeArity(f"Matrices have mixed sizes {sorted(sizes)}")
    return sizes.pop() if sizes else config.DEFAULT_D


def distribution_from_dict(data: Any, base_dir: Optional[Path] = None, source: str = "<input>") -> SimpDist:
    validate_document(data, DISTRIBUTION, source)
    model: DistributionFile = _model(DistributionFile, data, source)
    if isinstance(model.scenario, str):
        ref = Path(model.scenario)
        if base_dir is not None and not ref.is_absolute():
            ref = base_dir / ref
        raw_scenario = read_json(ref)
        scenario = scenario_from_dict(raw_scenario, str(ref))
        scenario_d = raw_scenario.get("d")
    else:
        scenario = scenario_from_dict(model.scenario.model_dump(exclude_none=True), source)
        scenario_d = model.scenario.d
    kind = _kind(model.kind)
    d = _infer_d(model, scenario_d)
    matrices = {}
    for edge_id, rows in model.edges.items():
        if any(len(row) != d for row in rows):
            raise WrongOutcomeArity(f"Edge {edge_id!r} is not a {d}x{d} matrix")
        matrices[edge_id] = matrix_from_rows([[_value(v, kind) for v in row] for row in rows], kind)
    isolated = {
        v: Dist.from_weights({a: _value(w, kind) for a, w in enumerate(weights)}, kind)
        for v, weights in model.vertices.items()
    }
    return SimpDist.create(scenario, d, matrices, isolated, kind)


def load_distribution(path: Union[str, Path]) -> SimpDist:
    path = Path(path)
    return distribution_from_dict(read_json(path), path.parent, str(path))


def labels_from_dict(data: Any, source: str = "<input>") -> LabelsFile:
    validate_document(data, LABELS, source)
    return _model(LabelsFile, data, source)


def load_labels(path: Union[str, Path]) -> LabelsFile:
    return labels_from_dict(read_json(path), str(path))


# -- serialization ----------------------------------------------------------------


def _entry(value: Any, kind: Kind) -> Entry:
    if kind is Kind.BOOLEAN:
        return int(value)
    return format_value(Fraction(value))


def scenario_to_dict(s: Scenario, d: Optional[int] = None) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    if d is not None:
        out["d"] = d
    out["vertices"] = list(s.vertices)
    out["edges"] = [{"id": e.id, "source": e.source, "target": e.target} for e in s.edges]
    return out


def distribution_to_dict(
    p: SimpDist, scenario_ref: Optional[str] = None, seed: Optional[int] = None
) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "scenario": scenario_ref if scenario_ref is not None else scenario_to_dict(p.scenario),
        "d": p.d,
        "kind": p.kind.value,
        "edges": {e: [[_entry(v, p.kind) for v in row] for row in matrix_rows(m, p.d)] for e, m in p.matrices},
    }
    if p.isolated:
        out["vertices"] = {v: [_entry(q[a], p.kind) for a in range(p.d)] for v, q in p.isolated}
    if seed is not None:
        out["seed"] = seed
    return out


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def write_json(path: Union[str, Path], data: Any) -> None:
    path = Path(path)
    try:
        path.write_text(dumps(data), encoding="utf-8")
    except OSError as e:
        raise CtxlabError(f"Cannot write {path}: {e.strerror}") from None
    logger.debug(f"Wrote {path}")
