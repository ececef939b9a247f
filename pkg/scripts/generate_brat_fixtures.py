"""Generate the Brat round-trip fixture set under tests/fixtures/brat/.

Good fixtures are written in canonical form (tab-separated, ids numbered in
order, "\n" endings) directly from string templates. Malformed fixtures each
carry one defect; bad/manifest.json records the offending line number.
"""

from __future__ import annotations

import json
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
GOOD = ROOT / "tests" / "fixtures" / "brat" / "good"
BAD = ROOT / "tests" / "fixtures" / "brat" / "bad"

WORDS = [
    "aspirine", "doliprane", "fièvre", "toux", "angine", "diabète",
    "insuline", "morphine", "douleur", "vertige", "nausée", "fatigue",
]


def continuous_fixture(i: int) -> tuple[str, str]:
    w1 = WORDS[i % len(WORDS)]
    w2 = WORDS[(i + 3) % len(WORDS)]
    text = f"Patient numéro {i} sous {w1} pour {w2} depuis hier."
    s1 = text.index(w1)
    s2 = text.index(w2, s1 + len(w1))
    ann = (
        f"T1\tDrug {s1} {s1 + len(w1)}\t{w1}\n"
        f"T2\tSymptom {s2} {s2 + len(w2)}\t{w2}\n"
    )
    return text, ann


def attribute_fixture(i: int) -> tuple[str, str]:
    w = WORDS[i % len(WORDS)]
    text = f"Pas de {w} signalée ce jour, examen {i} normal."
    s = text.index(w)
    ann = (
        f"T1\tFinding {s} {s + len(w)}\t{w}\n"
        f"A1\tnegated T1\n"
        f"A2\tcertainty T1 high\n"
    )
    return text, ann


def relation_fixture(i: int) -> tuple[str, str]:
    w1 = WORDS[i % len(WORDS)]
    w2 = WORDS[(i + 5) % len(WORDS)]
    text = f"Le {w1} prescrit contre la {w2}, dossier {i}."
    s1 = text.index(w1)
    s2 = text.index(w2, s1 + len(w1))
    ann = (
        f"T1\tDrug {s1} {s1 + len(w1)}\t{w1}\n"
        f"T2\tProblem {s2} {s2 + len(w2)}\t{w2}\n"
        f"R1\ttreats Arg1:T1 Arg2:T2\n"
    )
    return text, ann


def discontinuous_fixture(i: int) -> tuple[str, str]:
    w1 = WORDS[i % len(WORDS)]
    text = f"Douleur {i} aiguë du genou gauche après {w1}."
    a, b = text.index("Douleur"), text.index("du genou")
    surface = f"{text[a:a + 7]} {text[b:b + 8]}"
    ann = (
        f"T1\tSymptom {a} {a + 7};{b} {b + 8}\t{surface}\n"
        f"A1\tlaterality T1 left\n"
    )
    return text, ann


def mixed_fixture(i: int) -> tuple[str, str]:
    w1 = WORDS[i % len(WORDS)]
    w2 = WORDS[(i + 1) % len(WORDS)]
    w3 = WORDS[(i + 7) % len(WORDS)]
    text = f"Cas {i} : {w1} et {w2} associés, sans {w3} retrouvée."
    s1 = text.index(w1)
    s2 = text.index(w2, s1 + len(w1))
    s3 = text.index(w3, s2 + len(w2))
    ann = (
        f"T1\tDrug {s1} {s1 + len(w1)}\t{w1}\n"
        f"T2\tDrug {s2} {s2 + len(w2)}\t{w2}\n"
        f"T3\tFinding {s3} {s3 + len(w3)}\t{w3}\n"
        f"A1\tnegated T3\n"
        f"R1\tcombined_with Arg1:T1 Arg2:T2\n"
    )
    return text, ann


def main() -> None:
    GOOD.mkdir(parents=True, exist_ok=True)
    BAD.mkdir(parents=True, exist_ok=True)

    makers = [
        continuous_fixture,
        attribute_fixture,
        relation_fixture,
        discontinuous_fixture,
        mixed_fixture,
    ]
    n = 0
    for round_idx in range(6):
        for maker in makers:
            text, ann = maker(n)
            stem = f"fixture_{n:02d}"
            (GOOD / f"{stem}.txt").write_text(text, encoding="utf-8")
            (GOOD / f"{stem}.ann").write_text(ann, encoding="utf-8")
            n += 1

    base_text = "Patient sous aspirine pour fièvre."
    s = base_text.index("aspirine")
    good_t = f"T1\tDrug {s} {s + 8}\taspirine\n"
    bad_cases = {
        "bad_00": (f"T1 Drug {s} {s + 8} aspirine\n", 1),  # spaces instead of tabs
        "bad_01": (f"T1\tDrug {s}\taspirine\n", 1),  # missing end offset
        "bad_02": (f"T1\tDrug {s + 8} {s}\taspirine\n", 1),  # start > end
        "bad_03": (f"T1\tDrug {s} {s + 8}\tibuprofène\n", 1),  # surface mismatch
        "bad_04": (good_t + "A1\tnegated T9\n", 2),  # unknown attribute target
        "bad_05": (good_t + "R1\ttreats Arg1:T1 Arg2:T9\n", 2),  # unknown relation arg
        "bad_06": (good_t + f"T1\tDrug {s} {s + 8}\taspirine\n", 2),  # duplicate id
        "bad_07": (f"T1\tDrug 10 999\taspirine\n", 1),  # out of bounds
        "bad_08": (good_t + "R1\ttreats Arg1:T1\n", 2),  # missing Arg2
        "bad_09": (f"T1\tDrug {s} 21;14 18\taspirine ent \n", 1),  # unsorted fragments
    }
    manifest = {}
    for stem, (ann, line_no) in bad_cases.items():
        (BAD / f"{stem}.txt").write_text(base_text, encoding="utf-8")
        (BAD / f"{stem}.ann").write_text(ann, encoding="utf-8")
        manifest[stem] = line_no
    (BAD / "manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )
    print(f"{n} good fixtures, {len(bad_cases)} bad fixtures")


if __name__ == "__main__":
    main()
