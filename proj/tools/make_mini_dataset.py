#!/usr/bin/env python3
# Copyright 2026 The ctrnli Authors
# SPDX-License-Identifier: Apache-2.0
"""Generate the bundled mini dataset under data/mini.

Every long trial section is a block of boilerplate lines shared by all
trials followed by one finding line made of rare clinical terms. The
finding sits past the point where plain truncation stops, so a statement
about it can only be checked when the premise is shortened by content.
Run from the repository root; output is fully determined by --seed.
"""

import argparse
import json
import random
from pathlib import Path

SECTIONS = ["Eligibility", "Intervention", "Results", "Adverse Events"]

BOILERPLATE = [
    "Participants were enrolled at the participating sites after written informed consent was obtained from each of them",
    "The study team recorded baseline characteristics at the screening visit and again at the start of the first cycle",
    "All data were collected on standard case report forms and reviewed by the study monitor before database lock",
    "Outcome measures were assessed at each scheduled visit according to the protocol and the schedule of activities",
    "Participants who missed a visit were contacted by phone and asked to return within the allowed visit window",
    "The sponsor provided the study medication and the central laboratory processed all of the collected samples",
    "Dose modifications were permitted for toxicity as described in the protocol and were documented for each cycle",
    "Concomitant medications were recorded throughout the study and reviewed at every visit by the site investigator",
    "An independent committee reviewed safety data at regular intervals during the conduct of the whole study",
    "The analysis population included all participants who received at least one dose of the assigned study treatment",
    "Missing values were handled as described in the statistical analysis plan that was finalized before unblinding",
    "Participants could withdraw from the study at any time for any reason without any effect on their usual care",
    "The protocol was approved by the ethics committee at each site before the first participant was enrolled",
    "Laboratory values were graded using the common terminology criteria and reported with the local reference ranges",
    "Follow up continued after the end of treatment until the participant died or withdrew consent from the study",
    "Vital signs and body weight were measured before each dose and at the end of every treatment cycle",
    "The number of participants analyzed differs from the number enrolled because some did not start the treatment",
    "Time frame for this measure was from the first dose until the data cutoff date that was defined in the protocol",
    "Each participant was assigned a unique study number that was used on all samples and all of the study records",
    "Imaging was performed at baseline and then every eight weeks until disease progression or the end of the study",
    "The site staff reviewed the eligibility criteria with each participant before any study procedure was performed",
    "Adherence to the study medication was checked by counting the returned tablets at the end of each cycle",
    "Results are reported as the number of participants with the event in each arm of the study population",
    "Participants were asked to keep a diary of symptoms and to bring the diary to each of the scheduled visits",
    "Blood samples for pharmacokinetic analysis were drawn before the dose and at several time points after it",
    "The randomization list was generated by an independent statistician and kept by the central pharmacy team",
    "Site investigators attended a training meeting on the protocol procedures before the first enrollment at each site",
    "Quality of life questionnaires were completed by participants at baseline and at the end of each of the cycles",
    "Serious events were reported to the sponsor within one day of the site becoming aware of the event",
    "Participants received reimbursement for travel costs related to the study visits according to local policy",
    "The data management team resolved queries with the sites before the data were frozen for the final analysis",
    "Results for secondary measures are descriptive only and no formal hypothesis testing was planned for them",
]

ONSETS = ["bra", "cor", "dex", "fen", "gal", "hor", "ixa", "jun", "kel", "lum", "mor", "nav",
          "ost", "pel", "quo", "rav", "sul", "tor", "ulv", "ven", "wex", "zan"]
CODAS = ["atinib", "umab", "oxetine", "iprazole", "ostatin", "emycin", "afil", "olimus",
         "arsen", "otide", "enzide", "ocaine"]


def make_terms(rng, count):
    terms = set()
    while len(terms) < count:
        terms.add(rng.choice(ONSETS) + rng.choice(ONSETS)[1:] + rng.choice(CODAS))
    return sorted(terms)


def long_section(rng, finding, early):
    lines = BOILERPLATE[:]
    rng.shuffle(lines)
    lines = [line + "." for line in lines]
    position = 2 if early else len(lines)
    lines.insert(position, finding)
    return lines


def finding_line(words):
    return "Notably " + " ".join(words) + "."


def build(seed):
    rng = random.Random(seed)
    terms = make_terms(rng, 48)
    trials = {}
    findings = {}

    long_ids = [f"NCT900{n:05d}" for n in range(1, 25)]
    short_ids = [f"NCT800{n:05d}" for n in range(1, 9)]
    for index, trial_id in enumerate(long_ids):
        trial = {"trial_id": trial_id}
        for section in SECTIONS:
            words = rng.sample(terms, 6)
            # A few findings sit early so truncation is not always wrong.
            early = rng.random() < 0.15
            trial[section] = long_section(rng, finding_line(words), early)
            findings[(trial_id, section)] = words
        trials[trial_id] = trial
    for trial_id in short_ids:
        trial = {"trial_id": trial_id}
        for section in SECTIONS:
            words = rng.sample(terms, 4)
            trial[section] = [BOILERPLATE[rng.randrange(len(BOILERPLATE))] + ".",
                              finding_line(words)]
            findings[(trial_id, section)] = words
        trials[trial_id] = trial

    def statement(label, premise_words):
        if label == "Entailment":
            words = rng.sample(premise_words, 4)
        else:
            absent = [t for t in terms if t not in premise_words]
            words = rng.sample(absent, 4)
        return "The " + " ".join(words) + " finding was reported."

    def instance(kind, label, trial_pool, used):
        primary = trial_pool[used % len(trial_pool)]
        section = SECTIONS[rng.randrange(len(SECTIONS))]
        body = {"type": kind, "section": section, "primary": primary}
        premise_words = list(findings[(primary, section)])
        if kind == "Comparison":
            secondary = short_ids[rng.randrange(len(short_ids))]
            body["secondary"] = secondary
            premise_words += findings[(secondary, section)]
        # Comparison statements are about the primary trial's finding.
        primary_words = findings[(primary, section)]
        body["statement"] = statement(label, primary_words if label == "Entailment" else premise_words)
        body["label"] = label
        return body

    train_trials, dev_trials, test_trials = long_ids[:12], long_ids[12:18], long_ids[18:]

    def split(prefix, count, pool, contrast_count):
        out = {}
        for n in range(count):
            kind = "Comparison" if n % 3 == 2 else "Single"
            label = "Entailment" if n % 2 == 0 else "Contradiction"
            out[f"{prefix}-{n:03d}"] = instance(kind, label, pool, n)
            out[f"{prefix}-{n:03d}"]["contrast"] = None
        originals = list(out.items())[:contrast_count]
        for n, (original_id, body) in enumerate(originals):
            altering = n % 2 == 0
            perturbed = dict(body)
            section_words = findings[(body["primary"], body["section"])]
            if altering:
                label = "Contradiction" if body["label"] == "Entailment" else "Entailment"
                premise_words = list(section_words)
                if "secondary" in body:
                    premise_words += findings[(body["secondary"], body["section"])]
                perturbed["statement"] = statement(
                    label, section_words if label == "Entailment" else premise_words)
            else:
                label = body["label"]
                words = body["statement"].split()[1:-3]
                rng.shuffle(words)
                perturbed["statement"] = "A " + " ".join(words) + " finding was described."
            perturbed["label"] = label
            perturbed["contrast"] = {
                "original_id": original_id,
                "intervention": "Altering" if altering else "Preserving",
            }
            out[f"{prefix}-{n:03d}-p"] = perturbed
        return out

    splits = {
        "train": split("train", 30, train_trials, 0),
        "dev": split("dev", 10, dev_trials, 4),
        "test": split("test", 14, test_trials, 6),
    }
    return trials, splits


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=20240613)
    parser.add_argument("--out", type=Path, default=Path("data/mini"))
    args = parser.parse_args()

    trials, splits = build(args.seed)
    (args.out / "trials").mkdir(parents=True, exist_ok=True)
    for trial_id, trial in trials.items():
        with open(args.out / "trials" / f"{trial_id}.json", "w") as f:
            json.dump(trial, f, indent=2)
            f.write("\n")
    for name, instances in splits.items():
        with open(args.out / f"{name}.json", "w") as f:
            json.dump(instances, f, indent=2)
            f.write("\n")
    print(f"{len(trials)} trials, " + ", ".join(f"{k} {len(v)}" for k, v in splits.items()))


if __name__ == "__main__":
    main()
