"""Reference healthcare scenario shared by the CLI and acceptance tests.

Nine threats with their maturity indices, reported success bands (p_m, p*,
p_M), reported change-regime likelihoods, published expert estimates, and
impact ranges in million EUR. The derived curve below (growth -1, midpoint
4.3, endpoints 0.97/0.03, spread 1) is the parameterization that comes
closest to reproducing the reported bands.
"""

import json

DERIVED_GROWTH_RATE = -1.0
DERIVED_MIDPOINT = 4.3
CURVE_UPPER = 0.97
CURVE_LOWER = 0.03
SPREAD = 1.0

SLOTS_PER_YEAR = 365
MEAN_ATTEMPTS = 4.0

# id, name, maturity, p*, p_m, p_M, L_change, expert L, (impact low, high) MEUR
HEALTHCARE_THREATS = [
    (1, "Malware", 4.3, 0.50, 0.28, 0.72, 0.86, 0.80, (2.1360, 2.3941)),
    (2, "Web-based attacks", 5.6, 0.23, 0.11, 0.43, 0.61, 0.75, (1.8156, 2.0381)),
    (3, "Denial of services", 3.6, 0.66, 0.43, 0.83, 0.92, 0.90, (1.4151, 1.5842)),
    (4, "Malicious insiders", 1.9, 0.90, 0.79, 0.95, 0.97, 0.55, (1.2816, 1.4329)),
    (5, "Phishing and social engineering", 3.6, 0.66, 0.43, 0.83, 0.92, 0.95, (1.1748, 1.3172)),
    (6, "Malicious code", 6.0, 0.17, 0.08, 0.34, 0.52, 0.70, (1.1659, 1.2994)),
    (7, "Stolen devices", 4.8, 0.38, 0.19, 0.62, 0.78, 0.45, (0.77875, 0.87576)),
    (8, "Ransomware", 5.1, 0.32, 0.16, 0.55, 0.72, 0.85, (0.48060, 0.53845)),
    (9, "Botnets", 4.3, 0.50, 0.28, 0.72, 0.86, 0.80, (0.31684, 0.35600)),
]

#: Sum of the nine impact upper bounds, in million EUR.
ALL_UPPER_BOUND_TOTAL = 11.8361

# Loss-magnitude bands for the frequency-and-magnitude case study, in EUR.
# The response band arrives with swapped columns on purpose; loading it is
# expected to reorder (and warn).
LOSS_CATEGORIES = [
    {"name": "response", "min": 2_750, "most_likely": 22_000, "max": 8_250, "confidence": 20},
    {"name": "replacement", "min": 20_000, "most_likely": 30_000, "max": 50_000, "confidence": 20},
]

FAIR_MATURITY = 6.9
FAIR_COMPLEXITY = 5.2


def write_json(path, payload):
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return path


def write_threat_catalog(path, with_cvss=False, with_likelihood=False):
    threats = []
    for tid, name, maturity, _, _, _, lik, expert, (low, high) in HEALTHCARE_THREATS:
        entry = {
            "id": tid,
            "name": name,
            "maturity_index": maturity,
            "impact_low": low,
            "impact_high": high,
            "currency": "MEUR",
            "expert_likelihood": expert,
        }
        if with_likelihood:
            entry["likelihood"] = lik
        if with_cvss and tid == 4:
            # local access, medium complexity, multiple authentication: 0.15
            entry["cvss"] = {"av": "local", "ac": "medium", "au": "multiple",
                             "e": "high", "rc": "confirmed"}
        if with_cvss and tid == 1:
            entry["cvss"] = {"av": "network", "ac": "low", "au": "none",
                             "e": "unproven", "rc": "unconfirmed"}
        threats.append(entry)
    return write_json(path, {"schema_version": "1", "threats": threats})


def write_profile(path, complexity=DERIVED_MIDPOINT, maturity=5.0,
                  attractiveness="very_high"):
    return write_json(
        path,
        {
            "schema_version": "1",
            "awareness_index": 5.0,
            "maturity_index": maturity,
            "complexity_index": complexity,
            "attractiveness": attractiveness,
        },
    )


def write_loss_categories(path):
    return write_json(path, {"schema_version": "1", "categories": LOSS_CATEGORIES})


def write_run_config(path, inputs, seed=20240, n_avg=MEAN_ATTEMPTS, t=SLOTS_PER_YEAR,
                     growth_rate=DERIVED_GROWTH_RATE, trials=2_000, regime="change",
                     replications=200_000, extra=None):
    payload = {
        "schema_version": "1",
        "logistic": {"B": growth_rate, "U": CURVE_UPPER, "L": CURVE_LOWER, "q": SPREAD},
        "count": {"t": t, "delta_t": 1.0, "n_avg": n_avg, "kind": "binomial"},
        "trials": trials,
        "replications": replications,
        "seed": seed,
        "regime": regime,
        "inputs": inputs,
    }
    if extra:
        payload.update(extra)
    return write_json(path, payload)


def write_questionnaire(path, kind, scores, s_max=4, label=None, weights=None):
    responses = []
    for i, score in enumerate(scores):
        entry = {"control_id": f"{kind[:2]}-{i}", "score": score}
        if weights is not None:
            entry["weight"] = weights[i]
        responses.append(entry)
    payload = {"schema_version": "1", "kind": kind, "s_max": s_max, "responses": responses}
    if label is not None:
        payload["category_label"] = label
    return write_json(path, payload)
