"""In-process inverted index over series documents.

Keyword values post to per-field and global value tables, free text posts
tokenized, numbers and dates sit in per-field value maps for range scans.
Mutations serialize through a seqlock writer; readers run lock-free with
retry.  An optional NDJSON journal (one full document per line) makes the
index rebuildable by replay.
"""

from __future__ import annotations

import csv
import io
import json
import os
import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, Union

from ..concurrency import SeqLock
from ..dicom_core import DicomObject
from .document import (
    DATE,
    KW,
    NUM,
    PN,
    TEXT,
    FieldValue,
    SeriesDocument,
    canonical_number,
    doc_from_json,
    doc_to_json,
    merge_instance,
    normalize_date,
    to_document,
)
from .errors import FieldNotInDistribution, MissingSeriesUid, UnknownSeries
from .query import (
    And,
    FieldMatch,
    MatchAll,
    Node,
    Not,
    Or,
    Phrase,
    Range,
    Term,
    compile_pattern,
    has_wildcards,
)

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

# Fields that exist independently of any DICOM header.
_BUILTIN_FIELDS = {
    "series_uid": KW,
    "instance_count": NUM,
    "has_pixel_data": KW,
    "ingest_time": NUM,
    "tags": KW,
    "anatomical_structures": KW,
    "body_part": KW,
}

MAX_PAGE_SIZE = 1000


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.casefold())


@dataclass(frozen=True)
class SearchResults:
    total: int
    hits: tuple[tuple[str, float], ...]
    page: tuple[int, int]
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class FieldFacet:
    buckets: tuple[tuple[str, int], ...]
    missing_count: int


@dataclass(frozen=True)
class FacetDistribution:
    per_field: dict[str, FieldFacet]
    warnings: tuple[str, ...] = ()


class _Bucket:
    __slots__ = ("uids", "variants")

    def __init__(self):
        self.uids: set[str] = set()
        self.variants: dict[str, int] = {}

    def add(self, uid: str, variant: str) -> None:
        self.uids.add(uid)
        self.variants[variant] = self.variants.get(variant, 0) + 1

    def remove(self, uid: str, variant: str) -> None:
        self.uids.discard(uid)
        n = self.variants.get(variant, 0) - 1
        if n <= 0:
            self.variants.pop(variant, None)
        else:
            self.variants[variant] = n

    def display(self) -> str:
        # Values compare case-insensitively but display in original case;
        # pick the smallest variant for a deterministic label.
        return min(self.variants)


def _effective_fields(doc: SeriesDocument) -> Iterable[tuple[str, FieldValue]]:
    yield "series_uid", FieldValue(KW, (doc.series_uid,))
    yield "instance_count", FieldValue(NUM, (float(doc.instance_count),))
    yield "has_pixel_data", FieldValue(KW, ("true" if doc.has_pixel_data else "false",))
    yield "ingest_time", FieldValue(NUM, (doc.ingest_time,))
    if doc.tags:
        yield "tags", FieldValue(KW, doc.tags)
    if doc.anatomical_structures:
        yield "anatomical_structures", FieldValue(KW, doc.anatomical_structures)
    if doc.body_part:
        yield "body_part", FieldValue(KW, (doc.body_part,))
    yield from doc.fields.items()


class MetadataIndex:
    def __init__(
        self,
        journal_path: Union[str, os.PathLike, None] = None,
        lock: Optional[SeqLock] = None,
    ):
        self._lock = lock or SeqLock()
        self._docs: dict[str, SeriesDocument] = {}
        self._field_info: dict[str, tuple[str, str]] = {
            name: (name, kind) for name, kind in _BUILTIN_FIELDS.items()
        }
        self._kw: dict[str, dict[str, _Bucket]] = {}
        self._tok: dict[str, dict[str, set[str]]] = {}
        self._vals: dict[str, dict[str, FieldValue]] = {}
        self._any_kw: dict[str, set[str]] = {}
        self._any_tok: dict[str, set[str]] = {}
        self._journal_path = Path(journal_path) if journal_path is not None else None
        self._journal_fh = None
        if self._journal_path is not None:
            self._replay_journal()
            self._journal_path.parent.mkdir(parents=True, exist_ok=True)
            self._journal_fh = open(self._journal_path, "a", encoding="utf-8")

    # ---------------- lifecycle ----------------

    def close(self) -> None:
        if self._journal_fh is not None:
            self._journal_fh.close()
            self._journal_fh = None

    def _replay_journal(self) -> None:
        if not self._journal_path.exists():
            return
        with open(self._journal_path, "r", encoding="utf-8", errors="replace") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    doc = doc_from_json(json.loads(line))
                except (json.JSONDecodeError, KeyError, TypeError, ValueError):
                    continue  # torn tail line (or damage); last write still wins
                self._apply_upsert(doc)

    def _journal_write(self, doc: SeriesDocument) -> None:
        if self._journal_fh is None:
            return
        self._journal_fh.write(json.dumps(doc_to_json(doc), ensure_ascii=False) + "\n")
        self._journal_fh.flush()

    # ---------------- write path ----------------

    def _index_doc(self, uid: str, doc: SeriesDocument) -> None:
        for name, fv in _effective_fields(doc):
            lower = name.lower()
            if lower not in self._field_info:
                self._field_info[lower] = (name, fv.kind)
            self._vals.setdefault(lower, {})[uid] = fv
            if fv.kind in (KW, PN):
                buckets = self._kw.setdefault(lower, {})
                for v in fv.values:
                    sv = str(v)
                    cf = sv.casefold()
                    bucket = buckets.get(cf)
                    if bucket is None:
                        bucket = buckets[cf] = _Bucket()
                    bucket.add(uid, sv)
                    self._any_kw.setdefault(cf, set()).add(uid)
            if fv.kind in (TEXT, PN):
                toks = self._tok.setdefault(lower, {})
                for v in fv.values:
                    for t in tokenize(str(v)):
                        toks.setdefault(t, set()).add(uid)
                        self._any_tok.setdefault(t, set()).add(uid)

    def _unindex_doc(self, uid: str, doc: SeriesDocument) -> None:
        for name, fv in _effective_fields(doc):
            lower = name.lower()
            per_field = self._vals.get(lower)
            if per_field is not None:
                per_field.pop(uid, None)
                if not per_field:
                    del self._vals[lower]
            if fv.kind in (KW, PN):
                buckets = self._kw.get(lower, {})
                for v in fv.values:
                    sv = str(v)
                    cf = sv.casefold()
                    bucket = buckets.get(cf)
                    if bucket is not None:
                        bucket.remove(uid, sv)
                        if not bucket.uids:
                            del buckets[cf]
                    still = self._remains_in_kw(uid, cf)
                    if not still:
                        posted = self._any_kw.get(cf)
                        if posted is not None:
                            posted.discard(uid)
                            if not posted:
                                del self._any_kw[cf]
            if fv.kind in (TEXT, PN):
                toks = self._tok.get(lower, {})
                for v in fv.values:
                    for t in tokenize(str(v)):
                        posted = toks.get(t)
                        if posted is not None:
                            posted.discard(uid)
                            if not posted:
                                del toks[t]
                        if not self._remains_in_tok(uid, t):
                            gl = self._any_tok.get(t)
                            if gl is not None:
                                gl.discard(uid)
                                if not gl:
                                    del self._any_tok[t]

    def _remains_in_kw(self, uid: str, cf: str) -> bool:
        for buckets in self._kw.values():
            b = buckets.get(cf)
            if b is not None and uid in b.uids:
                return True
        return False

    def _remains_in_tok(self, uid: str, t: str) -> bool:
        for toks in self._tok.values():
            s = toks.get(t)
            if s is not None and uid in s:
                return True
        return False

    def _apply_upsert(self, doc: SeriesDocument) -> str:
        old = self._docs.get(doc.series_uid)
        if old is not None:
            self._unindex_doc(doc.series_uid, old)
        self._docs[doc.series_uid] = doc
        self._index_doc(doc.series_uid, doc)
        return "updated" if old is not None else "created"

    def upsert(self, doc: SeriesDocument) -> str:
        if not doc.series_uid:
            raise MissingSeriesUid("document has no series_uid")
        with self._lock.writing():
            outcome = self._apply_upsert(doc)
            self._journal_write(doc)
        return outcome

    def add_instance(self, obj: DicomObject, ingest_time: Optional[float] = None) -> tuple[str, str]:
        """Route one parsed instance into its series document."""
        with self._lock.writing():
            probe = to_document(obj, ingest_time=ingest_time)
            existing = self._docs.get(probe.series_uid)
            doc = probe if existing is None else merge_instance(existing, obj)
            outcome = self._apply_upsert(doc)
            self._journal_write(doc)
        return doc.series_uid, outcome

    def _replace_doc(self, uid: str, mutate: Callable[[SeriesDocument], SeriesDocument]):
        doc = self._docs.get(uid)
        if doc is None:
            raise UnknownSeries(f"series {uid} is not indexed")
        new = mutate(doc)
        self._apply_upsert(new)
        self._journal_write(new)
        return doc, new

    def set_tags(self, series_uid: str, tags: Sequence[str]) -> tuple[str, ...]:
        deduped = tuple(dict.fromkeys(str(t) for t in tags))
        with self._lock.writing():
            old, _ = self._replace_doc(series_uid, lambda d: replace(d, tags=deduped))
        return old.tags

    def set_structures(self, series_uid: str, structures: Sequence[str]) -> tuple[str, ...]:
        deduped = tuple(dict.fromkeys(str(s) for s in structures))
        with self._lock.writing():
            old, _ = self._replace_doc(
                series_uid, lambda d: replace(d, anatomical_structures=deduped)
            )
        return old.anatomical_structures

    def set_body_part(self, series_uid: str, body_part: Optional[str]) -> Optional[str]:
        with self._lock.writing():
            old, _ = self._replace_doc(series_uid, lambda d: replace(d, body_part=body_part))
        return old.body_part

    # ---------------- read path ----------------

    def __len__(self) -> int:
        return len(self._docs)

    def get_document(self, series_uid: str) -> Optional[SeriesDocument]:
        return self._lock.read(lambda: self._docs.get(series_uid))

    def all_documents(self) -> list[SeriesDocument]:
        return self._lock.read(lambda: list(self._docs.values()))

    def field_names(self) -> list[str]:
        return self._lock.read(
            lambda: sorted(display for display, _ in self._field_info.values())
        )

    def has_field(self, field: str) -> bool:
        return self._lock.read(lambda: self._resolve(field) is not None)

    def search(
        self,
        ast: Node,
        from_: int = 0,
        size: int = 10,
        sort: Optional[str] = None,
    ) -> SearchResults:
        if size > MAX_PAGE_SIZE:
            raise ValueError(f"size {size} exceeds the maximum of {MAX_PAGE_SIZE}")
        if size < 0 or from_ < 0:
            raise ValueError("from/size must be non-negative")
        return self._lock.read(lambda: self._search(ast, from_, size, sort))

    def aggregate(self, ast: Node, fields: Sequence[str]) -> FacetDistribution:
        if not fields:
            raise ValueError("aggregate requires at least one field")
        return self._lock.read(lambda: self._aggregate(ast, tuple(fields)))

    def autocomplete(self, field: str, prefix: str, limit: int) -> list[tuple[str, int]]:
        if limit < 1:
            raise ValueError("limit must be >= 1")
        return self._lock.read(lambda: self._autocomplete(field, prefix, limit))

    # ---------------- evaluation internals (called under read guard) ----------------

    def _resolve(self, field: str) -> Optional[tuple[str, str, str]]:
        """(lower, display, kind) or None when the field was never seen."""
        lower = field.lower()
        info = self._field_info.get(lower)
        if info is None:
            return None
        return lower, info[0], info[1]

    def _eval(self, node: Node, warnings: list[str]) -> set[str]:
        if isinstance(node, MatchAll):
            return set(self._docs)
        if isinstance(node, Term):
            return self._eval_term(node.text)
        if isinstance(node, Phrase):
            return self._eval_phrase(node.text)
        if isinstance(node, FieldMatch):
            return self._eval_field_match(node, warnings)
        if isinstance(node, Range):
            return self._eval_range(node, warnings)
        if isinstance(node, Not):
            return set(self._docs) - self._eval(node.child, warnings)
        if isinstance(node, And):
            out: Optional[set[str]] = None
            for child in node.children:
                got = self._eval(child, warnings)
                out = got if out is None else out & got
                if not out:
                    return set()
            return out or set()
        if isinstance(node, Or):
            out = set()
            for child in node.children:
                out |= self._eval(child, warnings)
            return out
        raise TypeError(f"not a query node: {node!r}")

    def _eval_term(self, text: str) -> set[str]:
        if has_wildcards(text):
            rx = compile_pattern(text)
            out: set[str] = set()
            for cf, uids in self._any_kw.items():
                if rx.fullmatch(cf):
                    out |= uids
            for tok, uids in self._any_tok.items():
                if rx.fullmatch(tok):
                    out |= uids
            return out
        cf = text.casefold()
        return set(self._any_kw.get(cf, ())) | set(self._any_tok.get(cf, ()))

    def _doc_has_token_run(self, doc: SeriesDocument, run: list[str]) -> bool:
        for fv in doc.fields.values():
            if fv.kind not in (TEXT, PN):
                continue
            for v in fv.values:
                toks = tokenize(str(v))
                for i in range(len(toks) - len(run) + 1):
                    if toks[i : i + len(run)] == run:
                        return True
        return False

    def _eval_phrase(self, text: str) -> set[str]:
        out = set(self._any_kw.get(text.casefold(), ()))
        run = tokenize(text)
        if run:
            candidates: Optional[set[str]] = None
            for t in run:
                posted = self._any_tok.get(t)
                if posted is None:
                    candidates = set()
                    break
                candidates = set(posted) if candidates is None else candidates & posted
            for uid in candidates or ():
                doc = self._docs.get(uid)
                if doc is not None and self._doc_has_token_run(doc, run):
                    out.add(uid)
        return out

    def _eval_field_match(self, node: FieldMatch, warnings: list[str]) -> set[str]:
        resolved = self._resolve(node.field)
        if resolved is None:
            warnings.append(f"unknown field: {node.field}")
            return set()
        lower, _, kind = resolved
        literal = node.quoted or not has_wildcards(node.pattern)
        rx = None if literal else compile_pattern(node.pattern)

        if kind in (KW, PN):
            buckets = self._kw.get(lower, {})
            if literal:
                bucket = buckets.get(node.pattern.casefold())
                return set(bucket.uids) if bucket is not None else set()
            out: set[str] = set()
            for cf, bucket in buckets.items():
                if rx.fullmatch(cf):
                    out |= bucket.uids
            return out

        values_map = self._vals.get(lower, {})
        out = set()
        if kind == TEXT:
            target = node.pattern.casefold()
            for uid, fv in values_map.items():
                for v in fv.values:
                    cf = str(v).casefold()
                    if (cf == target) if literal else bool(rx.fullmatch(cf)):
                        out.add(uid)
                        break
            return out
        if kind == DATE:
            pat = node.pattern
            normalized = normalize_date(pat)
            if normalized is not None:
                pat = normalized
            target = pat.casefold()
            prx = None if literal else compile_pattern(pat)
            for uid, fv in values_map.items():
                for v in fv.values:
                    cf = str(v).casefold()
                    if (cf == target) if literal else bool(prx.fullmatch(cf)):
                        out.add(uid)
                        break
            return out
        # numbers match against their canonical text form
        target = node.pattern.casefold()
        for uid, fv in values_map.items():
            for v in fv.values:
                canon = canonical_number(float(v))
                if (canon.casefold() == target) if literal else bool(rx.fullmatch(canon.casefold())):
                    out.add(uid)
                    break
        return out

    def _eval_range(self, node: Range, warnings: list[str]) -> set[str]:
        resolved = self._resolve(node.field)
        if resolved is None:
            warnings.append(f"unknown field: {node.field}")
            return set()
        lower, display, kind = resolved
        values_map = self._vals.get(lower, {})
        out: set[str] = set()

        if kind == NUM:
            try:
                lo = None if node.lo == "*" else float(node.lo)
                hi = None if node.hi == "*" else float(node.hi)
            except ValueError:
                warnings.append(f"bad numeric range bound on {display}")
                return set()
            for uid, fv in values_map.items():
                for v in fv.values:
                    x = float(v)
                    if lo is not None and (x < lo or (x == lo and not node.inclusive_lo)):
                        continue
                    if hi is not None and (x > hi or (x == hi and not node.inclusive_hi)):
                        continue
                    out.add(uid)
                    break
            return out

        if kind == DATE:
            lo = None if node.lo == "*" else (normalize_date(node.lo) or node.lo)
            hi = None if node.hi == "*" else (normalize_date(node.hi) or node.hi)
            for uid, fv in values_map.items():
                for v in fv.values:
                    s = str(v)
                    if lo is not None and (s < lo or (s == lo and not node.inclusive_lo)):
                        continue
                    if hi is not None and (s > hi or (s == hi and not node.inclusive_hi)):
                        continue
                    out.add(uid)
                    break
            return out

        warnings.append(f"range query unsupported on {display} (not a number or date field)")
        return set()

    def _sort_uids(
        self, uids: set[str], sort: Optional[str], warnings: list[str]
    ) -> list[str]:
        desc = False
        field = sort
        if field:
            if field.startswith("-"):
                desc = True
                field = field[1:]
            resolved = self._resolve(field)
            if resolved is None:
                warnings.append(f"unknown sort field: {field}")
                field = None
        if not field:
            # Default ordering: newest first, uid as tiebreak.
            ordered = sorted(uids)
            ordered.sort(key=lambda u: self._docs[u].ingest_time, reverse=True)
            return ordered

        lower = resolved[0]
        values_map = self._vals.get(lower, {})

        def key(uid: str):
            fv = values_map.get(uid)
            if fv is None or not fv.values:
                return None
            v = fv.values[0]
            if fv.kind == NUM:
                return (0, float(v))
            return (1, str(v).casefold())

        present = [u for u in uids if key(u) is not None]
        missing = sorted(u for u in uids if key(u) is None)
        present.sort()  # uid ascending tiebreak survives the stable sort below
        present.sort(key=key, reverse=desc)
        return present + missing

    def _search(
        self, ast: Node, from_: int, size: int, sort: Optional[str]
    ) -> SearchResults:
        warnings: list[str] = []
        matched = self._eval(ast, warnings)
        ordered = self._sort_uids(matched, sort, warnings)
        hits = tuple((uid, 1.0) for uid in ordered[from_ : from_ + size])
        return SearchResults(
            total=len(ordered),
            hits=hits,
            page=(from_, size),
            warnings=tuple(dict.fromkeys(warnings)),
        )

    def _aggregate(self, ast: Node, fields: tuple[str, ...]) -> FacetDistribution:
        warnings: list[str] = []
        matched = self._eval(ast, warnings)
        per_field: dict[str, FieldFacet] = {}
        for requested in fields:
            resolved = self._resolve(requested)
            if resolved is None:
                warnings.append(f"unknown field: {requested}")
                per_field[requested] = FieldFacet(buckets=(), missing_count=len(matched))
                continue
            lower, _, kind = resolved
            values_map = self._vals.get(lower, {})
            if kind == NUM:
                per_field[requested] = self._facet_numbers(matched, values_map)
            else:
                per_field[requested] = self._facet_keywords(matched, values_map)
        return FacetDistribution(per_field=per_field, warnings=tuple(dict.fromkeys(warnings)))

    def _facet_keywords(
        self, matched: set[str], values_map: dict[str, FieldValue]
    ) -> FieldFacet:
        counts: dict[str, int] = {}
        display: dict[str, str] = {}
        missing = 0
        for uid in matched:
            fv = values_map.get(uid)
            if fv is None or not fv.values:
                missing += 1
                continue
            for cf in {str(v).casefold() for v in fv.values}:
                counts[cf] = counts.get(cf, 0) + 1
            for v in fv.values:
                sv = str(v)
                cf = sv.casefold()
                if cf not in display or sv < display[cf]:
                    display[cf] = sv
        buckets = sorted(
            ((display[cf], n) for cf, n in counts.items()),
            key=lambda b: (-b[1], b[0]),
        )
        return FieldFacet(buckets=tuple(buckets), missing_count=missing)

    def _facet_numbers(
        self, matched: set[str], values_map: dict[str, FieldValue]
    ) -> FieldFacet:
        per_doc: list[tuple[str, tuple[float, ...]]] = []
        missing = 0
        distinct: set[float] = set()
        for uid in matched:
            fv = values_map.get(uid)
            if fv is None or not fv.values:
                missing += 1
                continue
            vals = tuple(sorted({float(v) for v in fv.values}))
            per_doc.append((uid, vals))
            distinct.update(vals)

        if not per_doc:
            return FieldFacet(buckets=(), missing_count=missing)

        if len(distinct) <= 50:
            counts: dict[float, int] = {}
            for _, vals in per_doc:
                for v in vals:
                    counts[v] = counts.get(v, 0) + 1
            buckets = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
            return FieldFacet(
                buckets=tuple((canonical_number(v), n) for v, n in buckets),
                missing_count=missing,
            )

        lo = min(distinct)
        hi = max(distinct)
        width = (hi - lo) / 10.0
        edges = [lo + i * width for i in range(11)]
        bin_counts = [0] * 10
        for _, vals in per_doc:
            bins = set()
            for v in vals:
                idx = 9 if v >= edges[9] else int((v - lo) / width)
                idx = min(max(idx, 0), 9)
                bins.add(idx)
            for idx in bins:
                bin_counts[idx] += 1
        buckets = [
            (f"[{canonical_number(edges[i])}..{canonical_number(edges[i + 1])})", bin_counts[i], i)
            for i in range(10)
            if bin_counts[i] > 0
        ]
        buckets.sort(key=lambda b: (-b[1], b[2]))  # count desc, then bin order
        return FieldFacet(
            buckets=tuple((label, n) for label, n, _ in buckets),
            missing_count=missing,
        )

    def _autocomplete(self, field: str, prefix: str, limit: int) -> list[tuple[str, int]]:
        resolved = self._resolve(field)
        if resolved is None:
            return []
        lower, _, kind = resolved
        want = prefix.casefold()

        if kind in (KW, PN):
            buckets = self._kw.get(lower, {})
            rows = [
                (bucket.display(), len(bucket.uids))
                for cf, bucket in buckets.items()
                if cf.startswith(want)
            ]
        else:
            # dates, numbers, free text: count docs per stored value
            counts: dict[str, int] = {}
            display: dict[str, str] = {}
            for fv in self._vals.get(lower, {}).values():
                seen = set()
                for v in fv.values:
                    sv = canonical_number(float(v)) if kind == NUM else str(v)
                    cf = sv.casefold()
                    if cf in seen:
                        continue
                    seen.add(cf)
                    counts[cf] = counts.get(cf, 0) + 1
                    if cf not in display or sv < display[cf]:
                        display[cf] = sv
            rows = [(display[cf], n) for cf, n in counts.items() if cf.startswith(want)]

        rows.sort(key=lambda r: (-r[1], r[0]))
        return rows[:limit]


def export_csv(dist: FacetDistribution, field: str) -> bytes:
    facet = dist.per_field.get(field)
    if facet is None:
        raise FieldNotInDistribution(f"field {field!r} not present in this distribution")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(["value", "count"])
    for value, count in facet.buckets:
        writer.writerow([value, count])
    if facet.missing_count > 0:
        writer.writerow(["__missing__", facet.missing_count])
    return buf.getvalue().encode("utf-8")
