from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator

from utils.graph_core import (
    Decomposition,
    DecompositionSpec,
    Graph,
    certificate_from_decomposition,
    decomposition_from_certificate,
)

BoundValue = Union[int, Literal["inf"]]


class SpecModel(BaseModel):
    kind: Literal["linear", "star"]
    k: BoundValue
    l: Optional[BoundValue] = None

    def to_spec(self) -> DecompositionSpec:
        if self.kind == "star":
            return DecompositionSpec.star(self.k)
        return DecompositionSpec.linear(self.k, 1 if self.l is None else self.l)


class CertificateModel(BaseModel):
    spec: SpecModel
    matching: List[Tuple[int, int]]
    forest: List[Tuple[int, int]]

    @classmethod
    def from_decomposition(cls, d: Decomposition) -> "CertificateModel":
        return cls.model_validate(certificate_from_decomposition(d))

    def to_decomposition(self, g: Graph) -> Decomposition:
        return decomposition_from_certificate(g, self.model_dump())


class PinSidecarModel(BaseModel):
    kind: str
    k: int
    ell: Optional[int] = None
    pins: Dict[str, int]
    pin_edges: Dict[str, Tuple[int, int]] = Field(default_factory=dict)


class AssignmentModel(BaseModel):
    assignment: Dict[str, bool]

    @field_validator("assignment")
    @classmethod
    def variables_are_positive(cls, value: Dict[str, bool]) -> Dict[str, bool]:
        for name in value:
            if not name.isdigit() or int(name) < 1:
                raise ValueError(f"variable names must be positive integers, got {name!r}")
        return value

    @classmethod
    def from_assignment(cls, assignment: Dict[int, bool]) -> "AssignmentModel":
        return cls(assignment={str(x): assignment[x] for x in sorted(assignment)})

    def to_assignment(self) -> Dict[int, bool]:
        return {int(x): value for x, value in self.assignment.items()}


class CommandReport(BaseModel):
    command: str
    status: str
    exit_code: int
    result: Dict[str, Any] = Field(default_factory=dict)
