#!/usr/bin/env python3
"""Generate data/base_vocab.txt: the bundled uncased base vocabulary.

The file follows the standard BERT vocab.txt layout ([PAD], 994 [unusedN]
slots, [UNK]/[CLS]/[SEP]/[MASK], single characters, words, ## continuations)
and is constructed so that the reference tokenization behaviors the test
suite pins down hold under greedy longest-match. The script derives, from
the expected tokenizations, every vocabulary entry that must exist and every
entry that must not (any longer in-position match would preempt an expected
fragment), then verifies the generated file before writing it.

Run from the repository root:  python3 scripts/make_base_vocab.py
"""

from __future__ import annotations

import string
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from domainprep.tokenizer import Vocab, wordpiece_tokenize  # noqa: E402

OUT_PATH = REPO / "data" / "base_vocab.txt"

# Reference greedy tokenizations the generated vocabulary must reproduce.
EXPECTED_TOKENIZATIONS: dict[str, list[str]] = {
    "irradiation": ["ir", "##rad", "##iation"],
    "reactivity": ["react", "##ivity"],
    "weld": ["w", "##eld"],
    "plenum": ["pl", "##en", "##um"],
    "electrochemical": ["electro", "##chemical"],
    "carbide": ["car", "##bid", "##e"],
    "boron": ["bo", "##ron"],
    "pellets": ["pe", "##llet", "##s"],
    "oxides": ["oxide", "##s"],
    "annealing": ["anne", "##aling"],
    "conductivity": ["conduct", "##ivity"],
    "neutrons": ["neutron", "##s"],
    "ultrasonic": ["ultra", "##sonic"],
    "shutdown": ["shut", "##down"],
    "exchanger": ["exchange", "##r"],
    "polarisation": ["polar", "##isation"],
    "radiography": ["radio", "##graphy"],
    "warranty": ["warrant", "##y"],
    "lethargy": ["let", "##har", "##gy"],
    "lubricant": ["lu", "##bri", "##can", "##t"],
    "lubricated": ["lu", "##bri", "##cated"],
    "lubrication": ["lu", "##bri", "##cation"],
    "luminescence": ["lu", "##mine", "##sc", "##ence"],
    "machining": ["mach", "##ining"],
    "ferritic": ["fe", "##rri", "##tic"],
    "vapour": ["va", "##pour"],
    "flange": ["fl", "##ange"],
}

WORDS = """
about above absorption according account acid acids active activity actual
added addition additional advanced after against aging agreement air alloy
alloys alpha already also although aluminium among amongst amount analysed
analysis analytical and angle anne any apparatus applicable application
applied apply approach approximately are area areas argon around arrangement
assembly associated assumed atomic austenite available average axial axis
back band bar base based basic beam beams bearing because become been before
behavior behaviour being below bend bending beta between blanket block bo
body boiling bond both bottom breeder bundle burn but calculated calculation
calculations can capacity car carbon carried case cases cause caused cell
cells cent center central centre ceramic cerium certain change changes
channel channels chapter characteristic characteristics charge chemical
chemistry chromium circuit circular clad cladding close closed coarse
coating cobalt code coefficient coefficients cold column combination
combined common compared comparison complete completely component components
composition compound compounds concentration concentrations concept
concrete condition conditions conduct conduction conductor configuration
confirmed consider considerable considered consists constant constants
construction contact contain contained containing contains content
continuous control cooling copper core corresponding corrosion corrosive
cost could count counter couple cracking creep critical cross crystal
current curve curves cycle cycles damage data decay decrease decreased
defect defects defined deformation degree degrees density dependence
dependent depending depends depth described design designed detail detailed
detection detector determination determine determined develop developed
development deviation diagram diameter did difference differences different
diffusion dimension dimensional dimensions direct direction directly
discussed displacement distance distribution divided does done dose down
drop due during dynamic each early earth edge effect effective effects
efficiency eight either elastic electric electrical electricity electrode
electron electronic electrons element elements embrittlement emission end
ends energy engineering enough entire environment equal equation equations
equilibrium equipment error essential estimate estimated evaluated
evaluation even event every examination examined example excess exchange
exist existing exit expansion expected experiment experimental experiments
explained exposure expression extent external fact factor factors failure
fast fatigue fe feed ferrite few field fields figure filled film final fine
finite first fission five fl flow fluid flux foil follow followed following
follows for force forces form formation formed forms found four fracture
frequency friction from fuel fuels full fully function furnace further
fusion gamma gap gas gases general generally generated generation geometry
germanium give given gives glass grade grain grains graphite gray greater
grid growth had half hand hard hardening hardness has have heat heating
heavy height held helium hence here high higher highest hold holes hot hour
hours how however hydrogen identified impact important improved impurities
inch incident include included includes including increase increased
increases increasing indicate indicated indicates indium induced industrial
industry influence information initial initially inlet inner input inside
inspection installed instead instrument integral intensity interaction
interest interface intergranular internal into investigated investigation
involved ion ions ir iron irradiated its itself joint joints junction just
kelvin kept kinetics known laboratory large larger laser last later lattice
layer layers lead leakage least left length less let level levels life like
limit limited limits line linear lines liquid literature little load
loading local location long longer loop lose loss losses low lower lowest
lu machine machinery made magnetic magnitude main mainly maintained major
make manufacturing many martensite mass match material materials matrix
maximum may mean means measure measured measurement measurements measuring
mechanical mechanism mechanisms melt melting metal metallic metallurgical
metals method methods microscope microscopy microstructure middle might
mild minimum minor minutes mixed mixture mode model models moderate modulus
molten molybdenum moment monitor monitoring more most much must natural
nature near nearly necessary need needed needs negative neutron next nickel
nine niobium nitrogen noise nominal non normal not noted nozzle nuclear
nuclei number numbers observation observations observed obtain obtained
occur occurred occurrence occurs off often once one only open operating
operation operations optical optimum order other out outer outlet output
outside over overall oxidation oxide oxygen page paper parallel parameter
parameters part partial particle particles particular parts pass path
pattern patterns pe peak per percent performance period phase phases
phenomena phosphorus physical physics pipe piping pitch place plane plant
plants plastic plate plates plot plotted plutonium point points polar
position positive possible powder power practical precipitation precision
predict predicted predicting present presented pressure pressures previous
primary principal principle probability probe problem problems procedure
process processes processing produce produced product products program
propagation properties property proportional proposed protection provide
provided pump pumps pure purpose quality quantity radial radiation radio
range ranges rapid rare rate rates rather ratio ratios react reaction
reactions reactor reactors reason recorded reduce reduced reduction
reference regarding region regions relative release reliability remain
remaining removal removed report reported reports represents require
required requirement requirements research residual resistance resolution
respect respectively response result resulting results review right rise
rod rods roll room rotation rough roughly rupture safe safety same sample
samples scale scan scanning scattering schematic science second secondary
section sections seen selected selection sensitive sensitivity sensor
separate sequence series set setup seven several shaft shall shape shear
sheet shell shield shielding shift should show showed shown shows shut side
sides significant significantly silicon similar simple simulation since
single sintered site six size slightly slow small smaller sodium soft
solid solidification solution solutions some source sources special
specific specimen specimens spectra spectrum speed stability stable stage
stainless standard start state statement states static station steam steel
steels step steps strain strength stress stresses strong structural
structure structures studied studies study subjected subsequent such
suitable sulphur sum supply support surface surfaces surveillance system
systems table taken target technique techniques technology temperature
temperatures ten tensile term terms test tested testing tests
than that the their them then theoretical theory there therefore thermal
these they thick thickness thin third this thorium those thousand three
threshold through thus time times tin titanium together told tool top
torque total toughness tracer transfer transformation transient transition
treated treatment trend trial tube tubes tungsten turbine turn two type
types typical ultimate ultra under uniform unit units until upon upper
uranium use used useful using usually vacuum value values vanadium
variation various vary velocity version vertical vessel vessels vibration
view viscosity voltage volume wall walls warrant was water wave waves wear
weight welding well were wheel when where whereas which while whole wide
width will wire with within without work working would xenon yield zero
zinc zirconium zone zones
""".split()

SUBWORDS = """
##able ##age ##ages ##al ##aling ##ally ##ance ##ane ##ange ##ant ##ary
##ate ##ated ##ates ##ating ##ation ##bid ##bri ##can ##cated ##cation
##chemical ##down ##ed ##eld ##en ##ence ##ency ##ent ##ents ##er ##ers
##es ##est ##ful ##graphy ##gy ##har ##ial ##ian ##iation ##ible ##ic
##ics ##ide ##ine ##ing ##ining ##ious ##isation ##ise ##ised ##ism ##ist
##ists ##ite ##ites ##ity ##ium ##ive ##ivity ##ization ##ize ##ized
##less ##llet ##ly ##ment ##ments ##mine ##ness ##oid ##ol ##one ##ory
##ose ##ous ##pour ##rad ##ri ##ron ##rri ##sc ##ship ##sion ##sonic
##tic ##tion ##tions ##ure ##ures ##ward ##yl
""".split()

N_UNUSED_BEFORE_UNK = 99
N_UNUSED_AFTER_MASK = 895


def required_tokens() -> set[str]:
    return {frag for frags in EXPECTED_TOKENIZATIONS.values() for frag in frags}


def forbidden_tokens() -> set[str]:
    """Any entry that would out-match an expected fragment under greedy
    longest-match-first."""
    forbidden: set[str] = set()
    for word, frags in EXPECTED_TOKENIZATIONS.items():
        pos = 0
        for frag in frags:
            body = frag[2:] if frag.startswith("##") else frag
            assert word[pos:pos + len(body)] == body, (word, frag)
            for longer in range(len(body) + 1, len(word) - pos + 1):
                piece = word[pos:pos + longer]
                forbidden.add("##" + piece if pos > 0 else piece)
            pos += len(body)
        assert pos == len(word), (word, frags)
    return forbidden


def build_tokens() -> list[str]:
    tokens = ["[PAD]"]
    tokens += [f"[unused{i}]" for i in range(N_UNUSED_BEFORE_UNK)]
    tokens += ["[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    tokens += [f"[unused{i}]" for i in
               range(N_UNUSED_BEFORE_UNK,
                     N_UNUSED_BEFORE_UNK + N_UNUSED_AFTER_MASK)]
    tokens += list(string.punctuation)
    tokens += list(string.digits)
    tokens += list(string.ascii_lowercase)

    required = required_tokens()
    words = sorted(set(WORDS)
                   | {t for t in required if not t.startswith("##")
                      and len(t) > 1})
    tokens += words
    subwords = sorted(set(SUBWORDS)
                      | {t for t in required if t.startswith("##")}
                      | {f"##{c}" for c in string.ascii_lowercase}
                      | {f"##{c}" for c in string.digits})
    tokens += subwords
    return tokens


def main() -> None:
    tokens = build_tokens()
    assert len(tokens) == len(set(tokens)), "duplicate vocabulary entries"

    forbidden = forbidden_tokens()
    clashes = sorted(set(tokens) & forbidden)
    assert not clashes, f"entries would preempt expected fragments: {clashes}"

    vocab = Vocab.from_tokens(tokens)
    for word, expected in EXPECTED_TOKENIZATIONS.items():
        got = wordpiece_tokenize(word, vocab)
        assert got == expected, f"{word}: {got} != {expected}"
    n_unused = len(vocab.unused_slot_ids())
    assert n_unused == N_UNUSED_BEFORE_UNK + N_UNUSED_AFTER_MASK

    OUT_PATH.parent.mkdir(parents=True, exist_ok=True)
    OUT_PATH.write_text("\n".join(tokens) + "\n", encoding="utf-8")
    print(f"wrote {OUT_PATH} ({len(tokens)} tokens, {n_unused} unused slots)")


if __name__ == "__main__":
    main()
