#!/usr/bin/env python3
"""Generate data/sample_corpus/: a deterministic ~100 KB demo corpus.

Twelve synthetic reports (one .txt file each, form-feed page separators)
with the artifacts the cleaning pipeline targets: in-text citations of both
supported styles, formula-dense lines, non-ASCII lines, wrapped paragraphs,
and two trailing reference pages per report. The generator finishes by
running the preprocessing and vocabulary-induction stages and asserting that
the demo's override files stay applicable.

Run from the repository root:  python3 scripts/make_sample_corpus.py
"""

from __future__ import annotations

import random
import sys
import textwrap
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from domainprep.bpe import train_bpe  # noqa: E402
from domainprep.corpus import preprocess_corpus, read_raw_documents  # noqa: E402

OUT_DIR = REPO / "data" / "sample_corpus"
SEED = 20240101
N_DOCS = 12

ADJECTIVES = """austenitic ferritic thermal mechanical structural radial
axial primary secondary residual effective nominal typical uniform coarse
fine stable transient critical elevated moderate severe""".split()

NOUNS = """temperature pressure stress strain creep fatigue corrosion
hardness toughness conductivity resistance density porosity viscosity
microstructure composition distribution deformation elongation expansion
diffusion oxidation precipitation solidification velocity flux dose
burnup reactivity lethargy luminescence polarisation emissivity""".split()

DOMAIN_NOUNS = """tellurium cerium zirconium plutonium uranium thorium
boron carbide oxides pellets cladding weld flange plenum vapour machining
lubricant lubrication lubricated irradiation annealing sintering
densification passivation recrystallization metallography dosimetry
thermocouple eutectic actinide lanthanide martensitic pyrometer
embrittlement weldments""".split()

OBJECTS = """fuel pin fuel pellet pressure vessel steam generator heat
exchanger control rod reactor core coolant channel blanket assembly
sodium loop test loop weld joint clad tube steel specimen alloy specimen
pump impeller turbine blade""".split()

NAMES = """Walters Cockraft Coleman Ivarsson Sandstrom Eggeler Segle Kumar
Sharma Gupta Murthy Rao Singh Iyer Menon Bhat Krishnan Pillai Nair Das
Bose Mitra Saha Ghosh Reddy Naidu""".split()

JOURNALS = ["Journal of Nuclear Materials", "Materials Science Letters",
            "Journal of Pressure Vessel Technology",
            "Transactions of the Metallurgical Society",
            "Annals of Nuclear Energy", "Corrosion Science Reports"]

NON_ASCII_LINES = [
    "Die Temperaturverteilung wurde für höhere Güte gemessen.",
    "Étude des réactions à haute température dans le cœur.",
    "Les résultats étaient conformes aux prévisions théoriques.",
    "Die Prüfung erfolgte gemäß der gültigen Norm für Stähle.",
    "La durée de l'expérience était limitée à quarante heures.",
]

FORMULA_TEMPLATES = [
    "k_eff = (nu * sigma_f) / (sigma_a + D * B^2)",
    "sigma = E * epsilon + alpha * dT",
    "q = -k * (dT/dx) + h * (T_s - T_inf)",
    "phi(x) = phi_0 * exp(-x/L) / (1 + x^2)",
    "d = d_0 + A * t^n * exp(-Q/(R*T))",
    "eta = (T_h - T_c)/T_h * 100",
]


def _sentence(rng: random.Random) -> str:
    kind = rng.randrange(8)
    adj = rng.choice(ADJECTIVES)
    noun = rng.choice(NOUNS)
    dnoun = rng.choice(DOMAIN_NOUNS)
    obj = rng.choice(OBJECTS)
    name = rng.choice(NAMES)
    year = rng.randrange(1955, 1999)
    if kind == 0:
        s = (f"The {adj} {noun} of the {obj} was measured during "
             f"{dnoun} under steady operating conditions.")
    elif kind == 1:
        s = (f"{name} et al. ({year}) studied the {noun} of {dnoun} "
             f"in the {obj} by the finite element method.")
    elif kind == 2:
        s = (f"Studies on the {noun} of {dnoun} were carried out in the "
             f"laboratory in order to predict the behaviour of the {obj}.")
    elif kind == 3:
        s = (f"It was observed that {dnoun} can cause {noun} of the "
             f"{obj} at elevated temperature.")
    elif kind == 4:
        s = (f"The effect of {dnoun} on the {adj} {noun} was examined "
             f"for specimens subjected to {rng.choice(DOMAIN_NOUNS)}.")
    elif kind == 5:
        s = (f"Results indicate that the {noun} increased with "
             f"{dnoun} while the {rng.choice(NOUNS)} remained stable.")
    elif kind == 6:
        s = (f"Fig. {rng.randrange(1, 14)} shows the variation of {noun} "
             f"with {dnoun} for the {adj} {obj}.")
    else:
        s = (f"The {obj} was inspected after {dnoun} and no significant "
             f"{noun} was detected, e.g. by ultrasonic examination.")
    r = rng.random()
    if r < 0.14:
        s += f" [{rng.randrange(1, 40)}]"
    elif r < 0.20:
        n = rng.randrange(1, 40)
        s += f" [{n}, {n + rng.randrange(1, 5)}]" if rng.random() < 0.5 \
            else f" [{n}-{n + rng.randrange(1, 6)}]"
    elif r < 0.28:
        other = rng.choice(NAMES)
        style = rng.random()
        if style < 0.4:
            s += f" ({name}, {year})"
        elif style < 0.7:
            s += f" ({name} and {other}, {year})"
        else:
            s += f" ({name} et al., {year})"
    return s


def _paragraph(rng: random.Random) -> str:
    text = " ".join(_sentence(rng) for _ in range(rng.randrange(3, 8)))
    return textwrap.fill(text, width=88)


def _content_page(rng: random.Random) -> str:
    blocks = []
    for _ in range(rng.randrange(3, 6)):
        blocks.append(_paragraph(rng))
        r = rng.random()
        if r < 0.22:
            blocks.append(rng.choice(FORMULA_TEMPLATES))
        elif r < 0.34:
            blocks.append(rng.choice(NON_ASCII_LINES))
    return "\n\n".join(blocks)


def _reference_page(rng: random.Random, start: int) -> str:
    lines = []
    for i in range(start, start + rng.randrange(8, 14)):
        a, b = rng.choice(NAMES), rng.choice(NAMES)
        lines.append(
            f"[{i}] {a[0]}. {a} and {b[0]}. {b}, "
            f"{rng.choice(JOURNALS)}, vol. {rng.randrange(3, 80)}, "
            f"pp. {rng.randrange(1, 400)}-{rng.randrange(401, 900)}, "
            f"{rng.randrange(1950, 1999)}."
        )
    return "\n".join(lines)


def main() -> None:
    rng = random.Random(SEED)
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for old in OUT_DIR.glob("*.txt"):
        old.unlink()
    total = 0
    for d in range(N_DOCS):
        pages = [_content_page(rng) for _ in range(rng.randrange(4, 7))]
        pages.append(_reference_page(rng, 1))
        pages.append(_reference_page(rng, 15))
        text = "\x0c".join(pages)
        path = OUT_DIR / f"report_{d:02d}.txt"
        path.write_text(text, encoding="utf-8")
        total += len(text.encode("utf-8"))
    print(f"wrote {N_DOCS} documents, {total} bytes")
    assert 80_000 <= total <= 140_000, f"corpus size {total} out of range"

    # The bundled override files must stay applicable to this corpus.
    docs, stats = preprocess_corpus(read_raw_documents(OUT_DIR))
    sentences = [s for doc in docs for s in doc.sentences]
    assert sentences, "cleaning removed everything"
    custom = train_bpe(sentences, target_size=12_000, min_pair_freq=2)
    tokens = set(custom.tokens())
    for needed in ("machining", "lubricant", "lubrication", "lubricated",
                   "tellurium"):
        assert needed in tokens, f"{needed!r} missing from induced vocabulary"
    print(f"cleaning: {stats.lines_in} lines in, "
          f"{stats.lines_dropped_formula} formula, "
          f"{stats.lines_dropped_non_ascii} non-ascii, "
          f"{stats.citations_removed} citations removed; "
          f"induced vocabulary {len(custom)} tokens")


if __name__ == "__main__":
    main()
