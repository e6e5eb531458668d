"""Instrument administration and scoring.

Four instrument kinds: an SRL-skills Likert scale scored as an item mean, a
knowledge quiz scored one point per correct answer, an engagement scale whose
overall score is the sum of four subscale means, and a trust scale averaged
after reverse-coding the distrust items. Reverse flags, subscale mappings, and
answer keys are all fixture data; the scorers are agnostic.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union


class AssessmentError(Exception):
    """Base class for scoring failures."""


class LengthMismatch(AssessmentError):
    """Response count differs from the instrument's item count."""


class OutOfRange(AssessmentError):
    """A response falls outside [scale_min, scale_max]."""


class UnmappedItem(AssessmentError):
    """An engagement item is missing a subscale assignment."""


class KindMismatch(AssessmentError):
    """Scorer called with the wrong instrument kind."""


class InstrumentKind(str, enum.Enum):
    ASLQ = "aslq"
    KNOWLEDGE_QUIZ = "knowledge_quiz"
    UES = "ues"
    TRUST = "trust"


UES_SUBSCALES = ("FA", "PA", "AE", "RW")


@dataclass
class ItemDef:
    text: str
    subscale: Optional[str] = None
    reverse: bool = False
    key: Optional[int] = None  # correct option index, knowledge quiz only
    options: Optional[list[str]] = None


@dataclass
class Instrument:
    instrument_id: str
    kind: InstrumentKind
    items: list[ItemDef]
    scale_min: int
    scale_max: int
    notes: str = ""

    @property
    def reverse_flags(self) -> set[int]:
        """1-based indices of reverse-coded items."""
        return {i for i, item in enumerate(self.items, start=1) if item.reverse}

    @property
    def subscale_map(self) -> dict[int, str]:
        """1-based item index to subscale name, for instruments that use one."""
        return {
            i: item.subscale
            for i, item in enumerate(self.items, start=1)
            if item.subscale is not None
        }


@dataclass
class ResponseSheet:
    instrument_id: str
    responses: list[int]
    respondent_id: str = "anonymous"
    timestamp: int = 0


@dataclass
class ScoreReport:
    instrument_id: str
    respondent_id: str
    overall: float
    subscales: Optional[dict[str, float]] = None
    correct_count: Optional[int] = None


def load_instrument(path: Union[str, Path]) -> Instrument:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    items = [
        ItemDef(
            text=item["text"],
            subscale=item.get("subscale"),
            reverse=bool(item.get("reverse", False)),
            key=item.get("key"),
            options=item.get("options"),
        )
        for item in doc["items"]
    ]
    return Instrument(
        instrument_id=doc["instrument_id"],
        kind=InstrumentKind(doc["kind"]),
        items=items,
        scale_min=doc["scale_min"],
        scale_max=doc["scale_max"],
        notes=doc.get("notes", ""),
    )


def reverse_code(value: int, scale_min: int, scale_max: int) -> int:
    """The involution (min+max) - x; the only range-preserving reversal."""
    return scale_min + scale_max - value


def _check_sheet(instrument: Instrument, sheet: ResponseSheet, likert: bool = True) -> None:
    if sheet.instrument_id != instrument.instrument_id:
        raise KindMismatch(
            f"sheet for {sheet.instrument_id!r} scored against {instrument.instrument_id!r}"
        )
    if len(sheet.responses) != len(instrument.items):
        raise LengthMismatch(
            f"{len(sheet.responses)} responses for {len(instrument.items)} items"
        )
    if likert:
        for i, value in enumerate(sheet.responses, start=1):
            if not (instrument.scale_min <= value <= instrument.scale_max):
                raise OutOfRange(f"item {i}: response {value} outside the scale")
    else:
        for i, (item, value) in enumerate(zip(instrument.items, sheet.responses), start=1):
            if item.options is not None and not (0 <= value < len(item.options)):
                raise OutOfRange(f"item {i}: option index {value} out of range")


def _transformed(instrument: Instrument, sheet: ResponseSheet) -> list[int]:
    return [
        reverse_code(v, instrument.scale_min, instrument.scale_max) if item.reverse else v
        for item, v in zip(instrument.items, sheet.responses)
    ]


def score_likert_mean(instrument: Instrument, sheet: ResponseSheet) -> ScoreReport:
    """Mean of all items after reverse coding; the SRL-skills scale scoring rule."""
    if instrument.kind is not InstrumentKind.ASLQ:
        raise KindMismatch(f"expected an aslq instrument, got {instrument.kind.value}")
    _check_sheet(instrument, sheet)
    values = _transformed(instrument, sheet)
    return ScoreReport(
        instrument_id=instrument.instrument_id,
        respondent_id=sheet.respondent_id,
        overall=sum(values) / len(values),
    )


def score_trust(instrument: Instrument, sheet: ResponseSheet) -> ScoreReport:
    """Mean of all items with distrust items reverse-coded (x -> min+max-x)."""
    if instrument.kind is not InstrumentKind.TRUST:
        raise KindMismatch(f"expected a trust instrument, got {instrument.kind.value}")
    _check_sheet(instrument, sheet)
    values = _transformed(instrument, sheet)
    return ScoreReport(
        instrument_id=instrument.instrument_id,
        respondent_id=sheet.respondent_id,
        overall=sum(values) / len(values),
    )


def score_ues(instrument: Instrument, sheet: ResponseSheet) -> ScoreReport:
    """Per-subscale means summed into the overall engagement score."""
    if instrument.kind is not InstrumentKind.UES:
        raise KindMismatch(f"expected a ues instrument, got {instrument.kind.value}")
    _check_sheet(instrument, sheet)
    unmapped = [i for i, item in enumerate(instrument.items, start=1) if item.subscale is None]
    if unmapped:
        raise UnmappedItem(f"items without a subscale: {unmapped}")
    values = _transformed(instrument, sheet)
    buckets: dict[str, list[int]] = {}
    for item, value in zip(instrument.items, values):
        buckets.setdefault(item.subscale, []).append(value)
    subscales = {name: sum(vals) / len(vals) for name, vals in buckets.items()}
    return ScoreReport(
        instrument_id=instrument.instrument_id,
        respondent_id=sheet.respondent_id,
        overall=sum(subscales.values()),
        subscales=subscales,
    )


def score_quiz(instrument: Instrument, sheet: ResponseSheet) -> ScoreReport:
    """One point per response equal to the item's answer key."""
    if instrument.kind is not InstrumentKind.KNOWLEDGE_QUIZ:
        raise KindMismatch(f"expected a knowledge_quiz instrument, got {instrument.kind.value}")
    _check_sheet(instrument, sheet, likert=False)
    correct = sum(
        1 for item, v in zip(instrument.items, sheet.responses) if v == item.key
    )
    return ScoreReport(
        instrument_id=instrument.instrument_id,
        respondent_id=sheet.respondent_id,
        overall=float(correct),
        correct_count=correct,
    )


_SCORER_OF_KIND = {
    InstrumentKind.ASLQ: score_likert_mean,
    InstrumentKind.TRUST: score_trust,
    InstrumentKind.UES: score_ues,
    InstrumentKind.KNOWLEDGE_QUIZ: score_quiz,
}


def score_sheet(instrument: Instrument, sheet: ResponseSheet) -> ScoreReport:
    """Dispatch to the instrument kind's scoring rule."""
    return _SCORER_OF_KIND[instrument.kind](instrument, sheet)


def reports_to_csv(reports: Sequence[ScoreReport]) -> str:
    """CSV rows: respondent, instrument, overall, subscales, correct count."""
    subscale_names = sorted({name for r in reports if r.subscales for name in r.subscales})
    header = ["respondent_id", "instrument_id", "overall", *subscale_names, "correct_count"]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for r in reports:
        row = [r.respondent_id, r.instrument_id, f"{r.overall:.6g}"]
        for name in subscale_names:
            value = (r.subscales or {}).get(name)
            row.append("" if value is None else f"{value:.6g}")
        row.append("" if r.correct_count is None else str(r.correct_count))
        writer.writerow(row)
    return buffer.getvalue()
