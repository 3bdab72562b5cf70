#!/usr/bin/env python3
"""Builds the selenocysteine release history used by the detector tests.

The opal-codon sentence starts in P07658 and P07203, spreads to 84 entries,
peaks at 54 entries in Swiss-Prot 44, and by Swiss-Prot 45 survives only in
nine entries, none of them an origin. P12079 and P18283 lose it for years and
regain it; P21765 and five other entries carry it for a single release.
A second sentence starts in TrEMBL and reaches Swiss-Prot through a merge.

Run from any directory; rewrites the .dat files and manifest.tsv next to it.
"""
import os
import textwrap

HERE = os.path.dirname(os.path.abspath(__file__))

SWISSPROT = [
    ("9", "1988-11-01"), ("11", "1989-07-01"), ("12", "1989-10-01"), ("13", "1990-01-01"),
    ("14", "1990-04-01"), ("16", "1990-11-01"), ("18", "1991-05-01"), ("20", "1991-11-01"),
    ("22", "1992-07-01"), ("23", "1992-11-01"), ("24", "1993-01-01"), ("25", "1993-04-01"),
    ("27", "1993-10-01"), ("29", "1994-06-01"), ("31", "1995-02-01"), ("33", "1996-02-01"),
    ("35", "1997-11-01"), ("37", "1999-01-01"), ("38", "1999-07-01"), ("39", "2000-05-01"),
    ("40", "2001-10-01"), ("41", "2003-02-01"), ("42", "2003-10-01"), ("43", "2004-03-01"),
    ("44", "2004-07-01"), ("45", "2004-10-01"), ("46", "2005-02-01"),
]
TREMBL = [("1", "1996-11-01"), ("5", "1998-01-01"), ("10", "1999-05-01"), ("27", "2004-07-01")]
LAST = len(SWISSPROT) - 1
SP44, SP45 = 24, 25

OPAL = "The active-site selenocysteine is encoded by the opal codon, UGA."
OPAL_SIMILAR = "The active-site selenocysteine is encoded by the opal codon, UGA (By similarity)."
OPAL_UGC = "The active-site selenocysteine is not encoded by the opal codon UGA but by UGC."
FAMILY = "Belongs to the glutathione peroxidase family."
CYANIDE = "Inactivated by cyanide."
LPS = "May have an essential function in lipopolysaccharides biosynthesis."


class Entry:
    def __init__(self, accessions, first=0, last=LAST):
        self.accessions = accessions
        self.first, self.last = first, last
        self.topics = {}  # release index -> list of (topic, sentence)

    def add(self, index, topic, sentence):
        self.topics.setdefault(index, []).append((topic, sentence))


def opal_entry(accessions, spans, first=None, last=LAST, between=None):
    """Entry holding the opal sentence over the given inclusive release spans."""
    first = spans[0][0] if first is None else first
    entry = Entry(accessions, first, last)
    held = set()
    for lo, hi in spans:
        held.update(range(lo, hi + 1))
    for index in range(first, last + 1):
        if index in held:
            entry.add(index, "MISCELLANEOUS", OPAL)
        elif between and between[0] <= index <= between[1]:
            entry.add(index, "MISCELLANEOUS", between[2])
        entry.add(index, "SIMILARITY", FAMILY)
    return entry


def build_swissprot():
    entries = [
        opal_entry(["P07658"], [(0, SP44)]),
        opal_entry(["P07203"], [(0, SP44)]),
        opal_entry(["P12079"], [(1, 8), (22, SP44)], between=(9, 21, OPAL_SIMILAR)),
        opal_entry(["P18283"], [(2, 10), (19, SP45)], between=(11, 18, OPAL_SIMILAR)),
        opal_entry(["P21765"], [(10, 10)], between=(11, LAST, OPAL_UGC)),
    ]
    entries += [opal_entry(["P6%04d" % i], [(SP44, SP44)]) for i in range(1, 6)]

    # two entries carrying the sentence are merged in Swiss-Prot 41
    first_half = opal_entry(["P99001"], [(14, 18)], last=20)
    second_half = opal_entry(["Q99002"], [(15, 20)], last=20)
    merged = opal_entry(["P99001", "Q99002"], [(21, SP44)], first=21)
    entries += [first_half, second_half, merged]

    entries += [opal_entry(["P7%04d" % i], [(start, SP45)]) for i, start in enumerate([3, 5, 7, 9, 11, 13, 15, 17], 1)]
    entries += [opal_entry(["P8%04d" % i], [(19 + i % 5, SP44)]) for i in range(1, 37)]
    # runs of at least two releases that end before Swiss-Prot 44
    short_runs = []
    for i in range(1, 30):
        start = 2 + (i * 7) % 18
        short_runs.append((start, min(start + 1 + i % 3, 22)))
    entries += [opal_entry(["P9%04d" % i], [span]) for i, span in enumerate(short_runs, 1)]

    # the TrEMBL-born sentence arrives in Swiss-Prot 39 with the merged TrEMBL entries
    cyanide = Entry(["P33333", "Q11111", "Q22222"], first=19)
    for index in range(19, LAST + 1):
        cyanide.add(index, "FUNCTION", CYANIDE)
    entries.append(cyanide)

    origin = Entry(["P55555"], first=5, last=15)
    for index in range(5, 16):
        origin.add(index, "FUNCTION", LPS)
    copy = Entry(["P55556"], first=8)
    for index in range(8, LAST + 1):
        copy.add(index, "FUNCTION", LPS)
    entries += [origin, copy]

    unannotated = Entry(["P00001"])
    entries.append(unannotated)
    return entries


def build_trembl():
    entries = []
    for i in range(1, 4):
        filler = Entry(["Q9%04d" % i], first=0, last=len(TREMBL) - 1)
        for index in range(len(TREMBL)):
            filler.add(index, "SIMILARITY", "Belongs to the peroxiredoxin family.")
        entries.append(filler)
    first = Entry(["Q11111"], first=1, last=2)
    second = Entry(["Q22222"], first=2, last=2)
    for entry in (first, second):
        for index in range(entry.first, entry.last + 1):
            entry.add(index, "FUNCTION", CYANIDE)
    entries += [first, second]
    entries.append(Entry(["Q00002"]))  # never annotated
    return entries


def render(entry, index, reviewed):
    lines = ["ID   %s_FIXTURE   %s;   120 AA." % (entry.accessions[0], "Reviewed" if reviewed else "Unreviewed")]
    lines.append("AC   " + " ".join(a + ";" for a in entry.accessions))
    lines.append("DE   RecName: Full=Fixture protein %s;" % entry.accessions[0])
    for topic, sentence in entry.topics.get(index, []):
        wrapped = textwrap.wrap("-!- %s: %s" % (topic, sentence), 71)
        lines.append("CC   " + wrapped[0])
        lines += ["CC       " + part for part in wrapped[1:]]
    if entry.topics.get(index):
        lines += [
            "CC   -----------------------------------------------------------------------",
            "CC   Copyrighted by the UniProt Consortium, see https://www.uniprot.org/terms",
            "CC   Distributed under the Creative Commons Attribution (CC BY 4.0) License",
            "CC   -----------------------------------------------------------------------",
        ]
    lines.append("SQ   SEQUENCE   120 AA;  13000 MW;  0000000000000000 CRC64;")
    lines.append("     MCAAQRSAAA LAAAAPRTVY AFSARPLAGG EPFNLSSLRG KVLLIENVAS LUGTTVRDYT")
    lines.append("//")
    return "\n".join(lines) + "\n"


def alive(entry, index):
    return entry.first <= index <= entry.last


def check(swissprot):
    def holders(index):
        return [e for e in swissprot if alive(e, index) and (("MISCELLANEOUS", OPAL) in e.topics.get(index, []))]

    # clusters are unions of co-listed accessions
    clusters = {}
    for entry in swissprot:
        touching = [k for k in clusters if set(k) & set(entry.accessions)]
        members = set(entry.accessions)
        for key in touching:
            members |= set(key)
            del clusters[key]
        clusters[tuple(sorted(members))] = True
    opal_clusters = {tuple(sorted(k)) for k in clusters
                     if any(set(e.accessions) & set(k) for i in range(len(SWISSPROT)) for e in holders(i))}
    counts = [len({next(k for k in clusters if set(e.accessions) & set(k)) for e in holders(i)}) for i in range(len(SWISSPROT))]
    assert len(opal_clusters) == 84, len(opal_clusters)
    assert counts[SP44] == 54 and max(counts) == 54 and counts.count(54) == 1, counts
    assert counts[SP44 - 1] < 54
    assert counts[SP45] == 9, counts[SP45]
    assert counts[LAST] == 0


def main():
    swissprot = build_swissprot()
    trembl = build_trembl()
    check(swissprot)
    manifest = ["section\tlabel\tdate\tpath"]
    for index, (label, date) in enumerate(SWISSPROT):
        name = "swissprot_%s.dat" % label
        with open(os.path.join(HERE, name), "w") as out:
            out.writelines(render(e, index, True) for e in swissprot if alive(e, index))
        manifest.append("swissprot\t%s\t%s\t%s" % (label, date, name))
    for index, (label, date) in enumerate(TREMBL):
        name = "trembl_%s.dat" % label
        with open(os.path.join(HERE, name), "w") as out:
            out.writelines(render(e, index, False) for e in trembl if alive(e, index))
        manifest.append("trembl\t%s\t%s\t%s" % (label, date, name))
    with open(os.path.join(HERE, "manifest.tsv"), "w") as out:
        out.write("\n".join(manifest) + "\n")


if __name__ == "__main__":
    main()
