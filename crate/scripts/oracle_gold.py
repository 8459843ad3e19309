#!/usr/bin/env python3
"""Brute-force gold answers for the toy benchmark.

Each benchmark question is paired with a hand-written structured query.
Answers are computed by scanning every fact of the KB file, with no
indexes and none of the Rust code, and the benchmark file is printed to
stdout (or compared with an existing file via --check).
"""

import argparse
import calendar
import datetime as dt
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
KB = ROOT / "crates/core/data/toy.kb"
BENCH = ROOT / "crates/core/data/toy.bench"


def read_facts(path):
    facts = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if fields[0] == "F":
            _, s, p, o, c = fields
            facts.append((s, p, o, None if c == "-" else c))
    return facts


def lower(iso):
    parts = [int(x) for x in iso.split("-")]
    return dt.date(parts[0], parts[1] if len(parts) > 1 else 1, parts[2] if len(parts) > 2 else 1)


def upper(iso):
    parts = [int(x) for x in iso.split("-")]
    y = parts[0]
    m = parts[1] if len(parts) > 1 else 12
    d = parts[2] if len(parts) > 2 else calendar.monthrange(y, m)[1]
    return dt.date(y, m, d)


NEG, POS = dt.date.min, dt.date.max


def scope(facts, compound, begin_pred, end_pred):
    b = [o for (_, p, o, c) in facts if c == compound and p == begin_pred]
    e = [o for (_, p, o, c) in facts if c == compound and p == end_pred]
    return (lower(b[0]) if b else NEG, upper(e[0]) if e else POS)


def candidates(facts, subject, predicate, begin_pred, end_pred):
    out = []
    for (s, p, o, c) in facts:
        if s == subject and p == predicate:
            out.append((o, scope(facts, c, begin_pred, end_pred)))
    return out


def holds(relation, ans, cons):
    (ba, ea), (bc, ec) = ans, cons
    if relation == "BEFORE":
        return ea <= bc
    if relation == "AFTER":
        return ba >= ec
    if relation == "DURING_WHILE_WHEN":
        return ba <= ec <= ea
    if relation == "SINCE_UNTIL_IN":
        return ba <= bc <= ea
    if relation == "SAME_TIME_AS":
        return bc <= ba <= ea <= ec
    raise ValueError(relation)


def date_of(facts, pred, subject=None, mentions=()):
    for (s, p, o, c) in facts:
        if p != pred or (subject and s != subject):
            continue
        if mentions:
            members = [f for f in facts if f[3] == c and c is not None]
            ents = {x for f in members for x in (f[0], f[2])}
            if not all(m in ents for m in mentions):
                continue
        return o
    raise LookupError(pred)


def period(facts, begin_pred, end_pred, **kw):
    return (lower(date_of(facts, begin_pred, **kw)), upper(date_of(facts, end_pred, **kw)))


def point(iso):
    return (lower(iso), upper(iso))


def select(cands, relation=None, cons=None, ordinal=None):
    if relation:
        cands = [c for c in cands if holds(relation, c[1], cons)]
    if ordinal:
        ranked = sorted(cands, key=lambda c: (c[1], c[0]))
        index = {"FIRST": 0, "LAST": len(ranked) - 1}.get(ordinal, None)
        if index is None:
            index = int(ordinal) - 1
        cands = [ranked[index]] if 0 <= index < len(ranked) else []
    return [c[0] for c in cands]


def questions(f):
    clubs = candidates(f, "neymar", "footballPlayer.team", "footballPlayer.team.joinedOnDate",
                       "footballPlayer.team.leftOnDate")
    spouses = candidates(f, "julia_roberts", "marriage.spouse", "marriage.from", "marriage.to")
    captains = candidates(f, "brazil_team", "team.captain", "team.captain.from", "team.captain.to")
    joined_psg = point(date_of(f, "footballPlayer.team.joinedOnDate", mentions=("neymar", "paris_sg")))
    wc2010 = period(f, "event.startDate", "event.endDate", subject="wc2010")
    neymar_captain = period(f, "team.captain.from", "team.captain.to", mentions=("brazil_team", "neymar"))
    year = lambda iso: iso[:4]
    return [
        ("which club did neymar play for in 2014?",
         select(clubs, "SINCE_UNTIL_IN", point("2014")), "EXPLICIT"),
        ("who was the spouse of julia roberts in 1994?",
         select(spouses, "SINCE_UNTIL_IN", point("1994")), "EXPLICIT"),
        ("where did neymar play before 2014?",
         select(clubs, "BEFORE", point("2014")), "EXPLICIT"),
        ("which club did neymar play for in august 2018?",
         select(clubs, "SINCE_UNTIL_IN", point("2018-08")), "EXPLICIT"),
        ("which teams did neymar play for before joining psg?",
         select(clubs, "BEFORE", joined_psg), "IMPLICIT"),
        ("which team did neymar play for before joining psg?",
         select(clubs, "BEFORE", joined_psg, "LAST"), "IMPLICIT"),
        ("where did neymar play during south africa world cup?",
         select(clubs, "DURING_WHILE_WHEN", wc2010), "IMPLICIT"),
        ("who was the brazil team captain before neymar?",
         select(captains, "BEFORE", neymar_captain), "IMPLICIT"),
        ("who was the first spouse of julia roberts?", select(spouses, ordinal="FIRST"), "ORDINAL"),
        ("what was the first team neymar played for?", select(clubs, ordinal="FIRST"), "ORDINAL"),
        ("who was the last brazil team captain?", select(captains, ordinal="LAST"), "ORDINAL"),
        ("who was the second spouse of julia roberts?", select(spouses, ordinal="2"), "ORDINAL"),
        ("when did neymar join psg?",
         [date_of(f, "footballPlayer.team.joinedOnDate", mentions=("neymar", "paris_sg"))], "TEMPORAL_ANSWER"),
        ("in what year was neymar born?",
         [year(date_of(f, "person.bornOnDate", subject="neymar"))], "TEMPORAL_ANSWER"),
        ("when did the 2014 world cup start?",
         [date_of(f, "event.startDate", subject="wc2014")], "TEMPORAL_ANSWER"),
        ("what year did neymar join santos?",
         [year(date_of(f, "footballPlayer.team.joinedOnDate", mentions=("neymar", "santos_fc")))],
         "TEMPORAL_ANSWER"),
    ]


def render(facts):
    lines = ["# question<TAB>gold[|gold...]<TAB>category, generated by scripts/oracle_gold.py"]
    for question, gold, category in questions(facts):
        assert gold, question
        lines.append(f"{question}\t{'|'.join(gold)}\t{category}")
    return "\n".join(lines) + "\n"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kb", type=Path, default=KB)
    parser.add_argument("--check", type=Path, nargs="?", const=BENCH,
                        help="compare with a benchmark file instead of printing")
    args = parser.parse_args()
    text = render(read_facts(args.kb))
    if args.check:
        if args.check.read_text(encoding="utf-8") != text:
            print(f"{args.check} differs from oracle output", file=sys.stderr)
            return 1
        print("ok")
        return 0
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
