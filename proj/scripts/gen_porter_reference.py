"""Regenerates tests/data/porter_reference.tsv from NLTK's Porter stemmer
in ORIGINAL_ALGORITHM mode. Run manually; the output is committed."""
import pathlib
from nltk.stem.porter import PorterStemmer

ROOT = pathlib.Path(__file__).resolve().parent.parent
WORDS = """
caresses ponies ties caress cats feed agreed plastered bled motoring sing
conflated troubled sized hopping tanned falling hissing fizzed failing
filing happy sky relational conditional rational valenci hesitanci
digitizer conformabli radicalli differentli vileli analogousli
vietnamization predication operator feudalism decisiveness hopefulness
callousness formaliti sensitiviti sensibiliti triplicate formative
formalize electriciti electrical hopeful goodness revival allowance
inference airliner gyroscopic adjustable defensible irritant replacement
adjustment dependent adoption homologou communism activate angulariti
homologous effective bowdlerize probate rate cease controll roll
generalizations oscillators running lockdowns lockdown covid coronavirus
quarantine quarantined quarantining socialdistancing stayhome staysafe
vaccine vaccines vaccination pandemic pandemics extended extending
tweets tweeting retweeted hospitals hospitalized deaths died dying
cases testing tested positive negative recovered recovering recovery
masks wearing distancing isolation isolating infections infected
symptoms government governments lockdowns outbreak outbreaks spreading
frontline workers doctors nurses heroes thanks grateful families
schools closed reopening economy economic businesses unemployment
news media reports reported updates update statement announced
ones happiness happily generously generosity beautifully wonderful
running runner runs ran agreement disagreement national nationality
sensational conditioning predicted predictable caring cared careless
abilities ability possibly possible universal university universe
meetings meeting meets organization organizer organizing organized
connection connections connective connected connecting relate related
relativity relatives relation relations activities activity active
actively actions action acting acted electricity electric electrical
sky skies flying flies fly played playing player plays play dries dry
is as was has his this us bus gas yes yesterday day days saying says
said doing does goes going gone argue argued argues arguing argument
feet foot geese goose agreed sizing hoping hopped hopes hope hoped
trouble troubling troubles stress stressed stresses stressful worry
worried worries worrying sadness sadly happier happiest sickness
covid19 19 2020 a i y e ed ing eed s ss sses ies xyz bbb
""".split()

def main() -> None:
    stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
    seen = []
    for w in WORDS:
        if w not in seen:
            seen.append(w)
    out = ROOT / "tests" / "data" / "porter_reference.tsv"
    with out.open("w") as f:
        f.write("# word<TAB>stem, from NLTK PorterStemmer(mode=ORIGINAL_ALGORITHM)\n")
        for w in seen:
            f.write(f"{w}\t{stemmer.stem(w)}\n")
    print(f"wrote {len(seen)} entries to {out}")

if __name__ == "__main__":
    main()
