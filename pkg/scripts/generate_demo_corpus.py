"""Regenerate the bundled demo corpus, reference annotations, and configs.

The corpus is synthetic French clinical text. Reference .ann files are built
from the known drug positions recorded during text assembly, not by running
any matcher. Deterministic: same output on every run.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from annopipe.core import Entity, create_document  # noqa: E402
from annopipe.io.brat import emit_brat  # noqa: E402
from annopipe.spans import Span  # noqa: E402

DATA = ROOT / "src" / "annopipe" / "data" / "demo"

# (term, label, ATC code). Terms the regex matcher misses: oméprazole,
# ésoméprazole, lopéramide; "dafalgan" is known to neither tool.
DICTIONARY = [
    ("aspirine", "Drug", "B01AC06"),
    ("paracétamol", "Drug", "N02BE01"),
    ("doliprane", "Drug", "N02BE01"),
    ("ibuprofène", "Drug", "M01AE01"),
    ("amoxicilline", "Drug", "J01CA04"),
    ("metformine", "Drug", "A10BA02"),
    ("insuline", "Drug", "A10AB01"),
    ("oméprazole", "Drug", "A02BC01"),
    ("atorvastatine", "Drug", "C10AA05"),
    ("lévothyroxine", "Drug", "H03AA01"),
    ("tramadol", "Drug", "N02AX02"),
    ("morphine", "Drug", "N02AA01"),
    ("ésoméprazole", "Drug", "A02BC05"),
    ("lopéramide", "Drug", "A07DA03"),
]

# A document is a list of parts; ("D", name) marks a drug mention that goes
# into the reference annotations. Plain strings are glue text, including
# words that fool the suffix-regex matcher (migraine, alcool, routine...).
DOCUMENTS = {
    "note_01": [
        "Consultation du 12/03/2021. Patient vu pour migraine persistante. ",
        "Prise de ",
        ("D", "paracétamol"),
        " sans amélioration. Prescription d'",
        ("D", "ibuprofène"),
        " 400 mg.",
    ],
    "note_02": [
        "Le 05/06/2020, introduction de ",
        ("D", "metformine"),
        " pour diabète de type 2. Pas d'",
        ("D", "insuline"),
        " à ce stade.",
    ],
    "note_03": [
        "Patient né le 01/01/1950. Traitement habituel : ",
        ("D", "aspirine"),
        " et ",
        ("D", "atorvastatine"),
        ". Consommation d'alcool occasionnelle.",
    ],
    "note_04": [
        "Angine traitée par ",
        ("D", "amoxicilline"),
        " depuis le 10/02/2022. Surveillance de routine.",
    ],
    "note_05": [
        "Reflux gastrique : ",
        ("D", "oméprazole"),
        " 20 mg le matin. Revu le 15/09/2021.",
    ],
    "note_06": [
        "Hypothyroïdie substituée par ",
        ("D", "lévothyroxine"),
        ". Dosage de la protéine C réactive le 03/03/2023.",
    ],
    "note_07": [
        "Douleurs lombaires. ",
        ("D", "tramadol"),
        " introduit le 20/11/2019, relais par ",
        ("D", "morphine"),
        " si besoin.",
    ],
    "note_08": [
        "Céphalées depuis le 07/07/2021. ",
        ("D", "doliprane"),
        " 1 g trois fois par jour. Pas de signe de gravité.",
    ],
    "note_09": [
        "Patient sous ",
        ("D", "aspirine"),
        " au long cours. Arrêt avant la chirurgie du 22/04/2022.",
    ],
    "note_10": [
        "Antécédent de migraine. Essai de ",
        ("D", "dafalgan"),
        " le 11/05/2020, peu efficace.",
    ],
    "note_11": [
        "Diabète équilibré sous ",
        ("D", "metformine"),
        ". Hémoglobine glyquée du 30/08/2022 correcte.",
    ],
    "note_12": [
        "Éruption cutanée après ",
        ("D", "amoxicilline"),
        " le 14/01/2023. Allergie suspectée, arrêt immédiat.",
    ],
    "note_13": [
        "Gastro-entérite le 02/10/2021. ",
        ("D", "lopéramide"),
        " prescrit, hydratation en routine.",
    ],
    "note_14": [
        "Suivi du 09/09/2020 : poursuite de l'",
        ("D", "atorvastatine"),
        ". Bilan lipidique stable. Pas d'alcool.",
    ],
    "note_15": [
        "Insomnie. Médecine du travail consultée le 25/03/2021. Aucun traitement hormis ",
        ("D", "paracétamol"),
        " ponctuel.",
    ],
    "note_16": [
        "Ulcère traité par ",
        ("D", "ésoméprazole"),
        " depuis le 18/12/2022. Contrôle endoscopique prévu.",
    ],
    "note_17": [
        "Fièvre le 28/02/2023 : ",
        ("D", "doliprane"),
        " puis ",
        ("D", "ibuprofène"),
        " en alternance. Protéine C élevée.",
    ],
    "note_18": [
        "Patient diabétique sous ",
        ("D", "insuline"),
        " lente depuis le 06/06/2018. Glycémies en routine.",
    ],
    "note_19": [
        "Crise de goutte le 21/07/2022. Éviter l'",
        ("D", "aspirine"),
        ". Consommation d'alcool à réduire.",
    ],
    "note_20": [
        "Lombalgie chronique : ",
        ("D", "tramadol"),
        " majoré le 13/04/2021. Kinésithérapie en routine.",
    ],
    "note_21": [
        "Le 17/10/2020, pneumonie traitée par ",
        ("D", "amoxicilline"),
        " forte dose. Évolution favorable.",
    ],
    "note_22": [
        "Migraine cataméniale. ",
        ("D", "ibuprofène"),
        " dès le début de la crise, noté le 08/08/2022.",
    ],
    "note_23": [
        "Hypothyroïdie : ",
        ("D", "lévothyroxine"),
        " 75 µg depuis le 19/05/2019. TSH en routine.",
    ],
    "note_24": [
        "Prévention secondaire : ",
        ("D", "aspirine"),
        " et ",
        ("D", "atorvastatine"),
        " depuis le 23/11/2021. Pas de morphine en cours.",
    ],
}

DEID_RULES = [
    {"pattern": r"\b\d{2}/\d{2}/\d{4}\b", "placeholder": "[DATE]"},
    {"pattern": r"\b0\d(?: \d{2}){4}\b", "placeholder": "[PHONE]"},
]

REGEX_DRUG_RULES = [
    {"pattern": r"\b[a-zà-ÿ]+(?:ine|ol|ène|ane)\b", "label": "Drug"}
]

PREPROCESS_STEPS = [
    {"op": "to_segment", "params": {}, "inputs": ["doc"], "outputs": ["full_text"]},
    {
        "op": "split_sentences",
        "params": {"punct_chars": ".!?", "keep_punct": True},
        "inputs": ["full_text"],
        "outputs": ["sentences"],
    },
    {
        "op": "deidentify",
        "params": {"rules": DEID_RULES},
        "inputs": ["sentences"],
        "outputs": ["deid_sentences", "phi_entities"],
    },
]


def dictionary_entries() -> list[dict]:
    return [
        {"term": term, "label": label, "norm_id": code}
        for term, label, code in DICTIONARY
    ]


def pipelines() -> dict[str, dict]:
    orange = {
        "name": "orange_drug_ner",
        "inputs": ["doc"],
        "outputs": ["entities", "brat"],
        "steps": PREPROCESS_STEPS
        + [
            {
                "op": "match_regex",
                "params": {"rules": REGEX_DRUG_RULES},
                "inputs": ["deid_sentences"],
                "outputs": ["entities"],
            },
            {
                "op": "emit_brat",
                "params": {},
                "inputs": ["doc", "entities"],
                "outputs": ["brat"],
            },
        ],
    }
    drug_ner_dict = {
        "name": "drug_ner_dict",
        "inputs": ["doc"],
        "outputs": ["entities"],
        "steps": PREPROCESS_STEPS
        + [
            {
                "op": "match_dictionary",
                "params": {"entries": dictionary_entries(), "strip_accents": True},
                "inputs": ["deid_sentences"],
                "outputs": ["entities"],
            }
        ],
    }
    drug_ner_regex = {
        "name": "drug_ner_regex",
        "inputs": ["doc"],
        "outputs": ["entities"],
        "steps": PREPROCESS_STEPS
        + [
            {
                "op": "match_regex",
                "params": {"rules": REGEX_DRUG_RULES},
                "inputs": ["deid_sentences"],
                "outputs": ["entities"],
            }
        ],
    }
    return {
        "orange": orange,
        "drug_ner_dict": drug_ner_dict,
        "drug_ner_regex": drug_ner_regex,
    }


def main() -> None:
    corpus = DATA / "corpus"
    reference = DATA / "reference"
    pipe_dir = DATA / "pipelines"
    for directory in (corpus, reference, pipe_dir):
        directory.mkdir(parents=True, exist_ok=True)

    for stem, parts in DOCUMENTS.items():
        text = ""
        drug_spans = []
        for part in parts:
            if isinstance(part, tuple):
                _, name = part
                drug_spans.append((len(text), len(text) + len(name)))
                text += name
            else:
                text += part
        text += "\n"
        (corpus / f"{stem}.txt").write_text(text, encoding="utf-8")

        doc = create_document(text)
        entities = [
            Entity(label="Drug", text=text[s:e], spans=[Span(s, e)])
            for s, e in drug_spans
        ]
        (reference / f"{stem}.ann").write_text(
            emit_brat(doc, entities), encoding="utf-8"
        )

    lines = ["# term,label,norm_id"]
    lines += [f"{term},{label},{code}" for term, label, code in DICTIONARY]
    (DATA / "drug_dictionary.csv").write_text(
        "\n".join(lines) + "\n", encoding="utf-8"
    )

    for name, config in pipelines().items():
        (pipe_dir / f"{name}.json").write_text(
            json.dumps(config, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )
    print(f"demo assets written under {DATA}")


if __name__ == "__main__":
    main()
