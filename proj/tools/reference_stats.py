"""Independent reference for the cohort statistics, built on scipy.

Usage: reference_stats.py SAMPLES.csv  (prints JSON on stdout)

For every feature it reports Shapiro-Wilk per group, both Welch and
Mann-Whitney results, Cohen's d and the test picked at alpha = 0.05.
"""

import csv
import json
import sys

import numpy as np
from scipy import stats

FEATURES = ["racket_velocity_max", "rotation_range_deg", "peak_angular_velocity", "stroke_duration_s"]
ALPHA = 0.05


def cohens_d(a, b):
    n1, n2 = len(a), len(b)
    pooled = ((n1 - 1) * np.var(a, ddof=1) + (n2 - 1) * np.var(b, ddof=1)) / (n1 + n2 - 2)
    return float((np.mean(a) - np.mean(b)) / np.sqrt(pooled))


def main(path):
    groups = {"expert": {f: [] for f in FEATURES}, "beginner": {f: [] for f in FEATURES}}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            g = "beginner" if row["group"].strip().lower() in ("beginner", "amateur") else "expert"
            for f in FEATURES:
                groups[g][f].append(float(row[f]))

    out = []
    for f in FEATURES:
        a = np.array(groups["expert"][f])
        b = np.array(groups["beginner"][f])
        sw_a = stats.shapiro(a)
        sw_b = stats.shapiro(b)
        welch = stats.ttest_ind(a, b, equal_var=False)
        mwu = stats.mannwhitneyu(a, b, alternative="two-sided", use_continuity=True, method="asymptotic")
        normal = sw_a.pvalue >= ALPHA and sw_b.pvalue >= ALPHA
        chosen = welch if normal else mwu
        out.append({
            "feature": f,
            "shapiro_expert": {"w": float(sw_a.statistic), "p": float(sw_a.pvalue)},
            "shapiro_beginner": {"w": float(sw_b.statistic), "p": float(sw_b.pvalue)},
            "welch": {"statistic": float(welch.statistic), "p_value": float(welch.pvalue)},
            "mann_whitney": {"statistic": float(mwu.statistic), "p_value": float(mwu.pvalue)},
            "test_used": "welch-t" if normal else "mann-whitney-u",
            "statistic": float(chosen.statistic),
            "p_value": float(chosen.pvalue),
            "cohens_d": cohens_d(a, b),
        })
    json.dump({"features": out}, sys.stdout, indent=2)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main(sys.argv[1])
