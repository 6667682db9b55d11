"""Four-level photonic realization of the two-symbol code.

Logical basis states are carried by polarization and path of a single
photon: ``|1> = |H,a>``, ``|2> = |V,a>``, ``|3> = |H,b>`` and ``|0> = |V,b>``.
Three half-wave plates and a phase shifter prepare

    cos2t1 cos2t2 |H,a> + cos2t1 sin2t2 |V,a>
        + e^{i phi} (sin2t1 sin2t3 |H,b> - sin2t1 cos2t3 |V,b>)

This module ingests the measured success probabilities for all sixteen
encodings and compares them with the ideal value and the classical bound.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .classical import classical_success
from .errors import InvalidArgument, ParseError
from .linalg import check_symbol, computational_basis, fidelity, fourier_basis, outcome_prob
from .qrac2 import encode2, success2_closed

D = 4
COLUMNS = [
    "label", "x0", "x1", "theta1_deg", "theta2_deg", "theta3_deg",
    "phi_rad", "pz", "pz_err", "px", "px_err",
]
N_RECORDS = 16
# optical mode order (H,a), (V,a), (H,b), (V,b) -> logical index
LOGICAL_INDEX = (1, 2, 3, 0)


@dataclass(frozen=True)
class OpticsSetting:
    theta1: float
    theta2: float
    theta3: float
    phi: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.theta1, self.theta2, self.theta3, self.phi)):
            raise InvalidArgument("optics angles must be finite")


@dataclass(frozen=True)
class ExperimentRecord:
    label: str
    x0: int
    x1: int
    setting: OpticsSetting
    pz: float
    pz_err: float
    px: float
    px_err: float

    def __post_init__(self):
        check_symbol(self.x0, D, "x0")
        check_symbol(self.x1, D, "x1")
        for name in ("pz", "px"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise InvalidArgument(f"{name} = {getattr(self, name)} is not a probability")
        for name in ("pz_err", "px_err"):
            if not getattr(self, name) >= 0.0:
                raise InvalidArgument(f"{name} = {getattr(self, name)} must be non-negative")


def prepare_optics_state(setting):
    """Amplitudes in optical mode order ``(H,a), (V,a), (H,b), (V,b)``."""
    t1, t2, t3 = (math.radians(2 * t) for t in (setting.theta1, setting.theta2, setting.theta3))
    ph = np.exp(1j * setting.phi)
    return np.array(
        [
            math.cos(t1) * math.cos(t2),
            math.cos(t1) * math.sin(t2),
            ph * math.sin(t1) * math.sin(t3),
            -ph * math.sin(t1) * math.cos(t3),
        ],
        dtype=complex,
    )


def to_logical(optical):
    logical = np.zeros(D, dtype=complex)
    for mode, index in enumerate(LOGICAL_INDEX):
        logical[index] = optical[mode]
    return logical


def ideal_success(x0, x1, question):
    """Ideal success of encoding ``(x0, x1)`` for question ``"Z"`` (x0) or ``"X"`` (x1)."""
    psi = encode2(D, x0, x1)
    if question == "Z":
        return outcome_prob(psi, computational_basis(D), x0)
    if question == "X":
        return outcome_prob(psi, fourier_basis(D), x1)
    raise InvalidArgument(f"question must be 'Z' or 'X', got {question!r}")


def preparation_fidelity(record):
    """Overlap of the prepared optical state (as logical ket) with the ideal encoding."""
    return fidelity(to_logical(prepare_optics_state(record.setting)), encode2(D, record.x0, record.x1))


def _default_table():
    return resources.files("qudit_rac").joinpath("data/table2.csv").read_text(encoding="utf-8")


def parse_table2(text):
    """Parse the Table-2 CSV schema; ``#`` lines are comments."""
    records = []
    header_seen = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = next(csv.reader([line]))
        if not header_seen:
            if [f.strip() for f in fields] != COLUMNS:
                raise ParseError(f"expected header {','.join(COLUMNS)}", lineno)
            header_seen = True
            continue
        if len(fields) != len(COLUMNS):
            raise ParseError(f"expected {len(COLUMNS)} fields, got {len(fields)}", lineno)
        try:
            row = dict(zip(COLUMNS, (f.strip() for f in fields)))
            records.append(
                ExperimentRecord(
                    label=row["label"],
                    x0=int(row["x0"]),
                    x1=int(row["x1"]),
                    setting=OpticsSetting(
                        float(row["theta1_deg"]),
                        float(row["theta2_deg"]),
                        float(row["theta3_deg"]),
                        float(row["phi_rad"]),
                    ),
                    pz=float(row["pz"]),
                    pz_err=float(row["pz_err"]),
                    px=float(row["px"]),
                    px_err=float(row["px_err"]),
                )
            )
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from exc
    if not header_seen:
        raise ParseError("missing header")
    if len(records) != N_RECORDS:
        raise ParseError(f"expected {N_RECORDS} records, found {len(records)}")
    return records


def load_table2(path=None):
    """Records from ``path``, or the bundled transcription when ``path`` is None."""
    text = _default_table() if path is None else Path(path).read_text(encoding="utf-8")
    return parse_table2(text)


def dump_table2(records):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in records:
        s = r.setting
        writer.writerow(
            [r.label, r.x0, r.x1, repr(s.theta1), repr(s.theta2), repr(s.theta3), repr(s.phi),
             repr(r.pz), repr(r.pz_err), repr(r.px), repr(r.px_err)]
        )
    return buf.getvalue()


@dataclass(frozen=True)
class RowReport:
    label: str
    x0: int
    x1: int
    dev_z: float
    dev_x: float
    fidelity: float


@dataclass(frozen=True)
class ExperimentReport:
    mean: float
    mean_row_first: float
    mean_uncertainty: float
    classical_bound: float
    ideal: float
    classical_violated: bool
    consistent_with_ideal: bool
    rows: tuple = field(default=())

    def as_dict(self):
        return asdict(self)

    def to_text(self):
        lines = [
            f"mean success (32 entries): {self.mean:.4f} +/- {self.mean_uncertainty:.4f}",
            f"mean success (per row first): {self.mean_row_first:.4f}",
            f"ideal: {self.ideal:.4f}  classical bound: {self.classical_bound:.4f}",
            f"classical bound {self.classical_bound:g} violated: {'yes' if self.classical_violated else 'no'}",
            f"consistent with ideal: {'yes' if self.consistent_with_ideal else 'no'}",
            "label  dev_z    dev_x    prep_fidelity",
        ]
        for r in self.rows:
            lines.append(f"{r.label:6s} {r.dev_z:+.4f}  {r.dev_x:+.4f}  {r.fidelity:.4f}")
        return "\n".join(lines) + "\n"


def analyze(records):
    """Summary statistics of the measured probabilities.

    The classical bound counts as violated when the mean exceeds it by more
    than three mean quoted uncertainties.
    """
    records = list(records)
    if len(records) != N_RECORDS:
        raise InvalidArgument(f"expected {N_RECORDS} records, got {len(records)}")
    values = [r.pz for r in records] + [r.px for r in records]
    errors = [r.pz_err for r in records] + [r.px_err for r in records]
    mean = float(np.mean(values))
    mean_err = float(np.mean(errors))
    bound = float(classical_success(2, D))
    ideal = success2_closed(D)
    rows = tuple(
        RowReport(
            label=r.label,
            x0=r.x0,
            x1=r.x1,
            dev_z=r.pz - ideal_success(r.x0, r.x1, "Z"),
            dev_x=r.px - ideal_success(r.x0, r.x1, "X"),
            fidelity=preparation_fidelity(r),
        )
        for r in records
    )
    return ExperimentReport(
        mean=mean,
        mean_row_first=float(np.mean([(r.pz + r.px) / 2 for r in records])),
        mean_uncertainty=mean_err,
        classical_bound=bound,
        ideal=ideal,
        classical_violated=mean - bound > 3 * mean_err,
        consistent_with_ideal=abs(mean - ideal) < mean_err,
        rows=rows,
    )
