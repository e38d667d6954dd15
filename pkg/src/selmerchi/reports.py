"""Report assembly, JSON serialization, table rendering, and batch processing.

Reports are plain dicts of JSON-safe values (exact integers, strings for
rationals), so `json.loads(report_json(r)) == r` holds identically and batch
outputs are byte-reproducible.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .cache import LocalDataCache
from .curves import WeierstrassCurve, minimal_model, parse_curve
from .errors import HypothesisFailure
from .euler import (
    EulerCharResult,
    FieldLocalData,
    HypothesisReport,
    check_hypotheses,
    euler_char,
    p_power_exponent,
    parse_signs,
    picture_from_field_data,
    picture_from_rows,
)
from .local import LocalData, bad_primes
from .torsion import torsion_subgroup


def _frac_str(x) -> str:
    return str(x)


def _chi_str(result: EulerCharResult) -> str:
    return str(result.chi)


def _hypotheses_dict(report: HypothesisReport) -> dict:
    def check(c):
        return {"status": c.status, "reason": c.reason}

    return {
        "s1_good_reduction_above_p": check(report.s1),
        "s2_trace_zero_and_base_qp": check(report.s2),
        "s3_unramified_at_supersingular": check(report.s3),
        "s4_local_degree_not_div_4": check(report.s4),
        "selmer_finiteness": report.selmer_finiteness,
        "overall": report.overall,
        "sign_vector": "".join(report.sign_vector),
        "supersingular_count": report.supersingular_count,
        "notes": list(report.notes),
    }


def _euler_dict(result: EulerCharResult) -> dict:
    return {
        "chi": _chi_str(result),
        "chi_exponent": result.chi_exponent,
        "breakdown": {
            "sha_p": result.breakdown.sha_p,
            "torsion_p_sq": result.breakdown.torsion_p_sq,
            "tamagawa_product_p_part": result.breakdown.tamagawa_product_p_part,
            "ordinary_d_sq_product": result.breakdown.ordinary_d_sq_product,
        },
        "sign_vector": "".join(result.sign_vector_used),
        "notes": list(result.notes),
    }


def _local_row(data: LocalData, p: int) -> dict:
    return {
        "prime": data.prime,
        "reduction": data.reduction.value,
        "a_q": data.a_q,
        "kodaira": data.kodaira,
        "conductor_exp": data.conductor_exp,
        "tamagawa": data.tamagawa,
        "tamagawa_p_part": data.tamagawa_p_part(p),
        "d_p_part": data.d_p_part(p),
    }


def analyze_curve(
    curve: WeierstrassCurve | str,
    p: int,
    signs: str = "",
    sha_p_order: int = 1,
    selmer_finite_asserted: bool = False,
    override_hypotheses: bool = False,
    cache: LocalDataCache | None = None,
    sha_defaulted: bool = False,
    label: str | None = None,
) -> dict:
    """Full pipeline over Q; returns the AnalysisReport dict.

    Input validation errors raise; hypothesis failures do not (the report
    carries status "hypothesis_failure" and no Euler block).
    """
    if isinstance(curve, str):
        curve = parse_curve(curve, label=label)
    cache = cache or LocalDataCache(None)
    sign_vec = parse_signs(signs)
    p_power_exponent(sha_p_order, p)  # validates; raises NonPPower

    cmin, transform = minimal_model(curve)
    primes = sorted(set(bad_primes(cmin)) | {p})
    rows = {q: cache.get_or_compute(cmin, q) for q in primes}
    torsion = torsion_subgroup(cmin)
    picture = picture_from_rows(rows, p, torsion.p_part(p))

    hypotheses = check_hypotheses(picture, p, sign_vec, selmer_finite_asserted)
    euler = None
    failure = None
    status = "ok"
    try:
        euler = euler_char(
            picture, p, sign_vec, sha_p_order,
            selmer_finite_asserted, override_hypotheses,
        )
    except HypothesisFailure as exc:
        status = "hypothesis_failure"
        failure = "; ".join(exc.report.failures()) or "Selmer finiteness not asserted"

    return {
        "tool_version": __version__,
        "status": status,
        "curve": {
            "label": curve.label,
            "a_invariants": [_frac_str(a) for a in curve.ainvs()],
        },
        "minimal_model": {
            "a_invariants": [_frac_str(a) for a in cmin.ainvs()],
            "transform": {
                "u": _frac_str(transform.u),
                "r": _frac_str(transform.r),
                "s": _frac_str(transform.s),
                "t": _frac_str(transform.t),
            },
            "discriminant": _frac_str(cmin.delta),
        },
        "p": p,
        "local_table": [_local_row(rows[q], p) for q in primes],
        "torsion": {
            "structure": torsion.group_structure,
            "order": torsion.order,
            "p_part": torsion.p_part(p),
            "generators": [
                [_frac_str(x), _frac_str(y)] for (x, y) in torsion.generators
            ],
        },
        "hypotheses": _hypotheses_dict(hypotheses),
        "euler": None if euler is None else _euler_dict(euler),
        "failure": failure,
        "inputs": {
            "sha_p_order": str(sha_p_order),
            "sha_p_defaulted": sha_defaulted,
            "selmer_finite_asserted": selmer_finite_asserted,
            "signs": signs,
            "override_hypotheses": override_hypotheses,
        },
    }


def analyze_field_data(fd: FieldLocalData, signs: str) -> dict:
    """Hypothesis check and formula assembly on user-supplied field data."""
    sign_vec = parse_signs(signs)
    picture = picture_from_field_data(fd)
    hypotheses = check_hypotheses(
        picture, fd.p, sign_vec, fd.selmer_finite_asserted
    )
    euler = None
    failure = None
    status = "ok"
    try:
        euler = euler_char(
            picture, fd.p, sign_vec, fd.sha_p_order, fd.selmer_finite_asserted
        )
    except HypothesisFailure as exc:
        status = "hypothesis_failure"
        failure = "; ".join(exc.report.failures()) or "Selmer finiteness not asserted"
    return {
        "tool_version": __version__,
        "status": status,
        "mode": "field_data",
        "p": fd.p,
        "places_above_p": [
            {
                "label": w.label,
                "e": w.ramification,
                "f": w.residue_degree,
                "reduction": w.reduction.value,
                "a": w.a,
                "d_p_part": w.d_p_part,
            }
            for w in fd.primes_above_p
        ],
        "hypotheses": _hypotheses_dict(hypotheses),
        "euler": None if euler is None else _euler_dict(euler),
        "failure": failure,
        "inputs": {
            "sha_p_order": str(fd.sha_p_order),
            "selmer_finite_asserted": fd.selmer_finite_asserted,
            "signs": signs,
        },
    }


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# table rendering (plain fixed-width text, pipeline friendly)

def _rule(width=72) -> str:
    return "-" * width


def render_local_row(row: dict) -> str:
    lines = [
        f"prime          {row['prime']}",
        f"reduction      {row['reduction']}",
        f"kodaira        {row['kodaira']}",
        f"conductor_exp  {row['conductor_exp']}",
        f"tamagawa       {row['tamagawa']}",
    ]
    if row.get("a_q") is not None:
        lines.insert(2, f"a_q            {row['a_q']}")
    if row.get("tamagawa_p_part") is not None:
        lines.append(f"tamagawa p-part {row['tamagawa_p_part']}")
    if row.get("d_p_part") is not None:
        lines.append(f"d p-part       {row['d_p_part']}")
    return "\n".join(lines) + "\n"


def render_table(report: dict) -> str:
    out = io.StringIO()
    w = out.write
    w(_rule() + "\n")
    if "curve" in report:
        coeffs = ",".join(report["curve"]["a_invariants"])
        label = report["curve"]["label"] or "(unlabelled)"
        w(f"curve    {label}  [{coeffs}]\n")
        w(f"minimal  [{','.join(report['minimal_model']['a_invariants'])}]"
          f"  delta = {report['minimal_model']['discriminant']}\n")
    else:
        w("field-data mode\n")
    w(f"p        {report['p']}\n")
    w(_rule() + "\n")
    if report.get("local_table"):
        w(f"{'q':>10} {'reduction':<24} {'kodaira':<8} {'f':>3} {'c':>6}"
          f" {'c p-part':>9} {'a_q':>8} {'d p-part':>9}\n")
        for row in report["local_table"]:
            a_q = "" if row["a_q"] is None else row["a_q"]
            d = "" if row["d_p_part"] is None else row["d_p_part"]
            w(f"{row['prime']:>10} {row['reduction']:<24} {row['kodaira']:<8}"
              f" {row['conductor_exp']:>3} {row['tamagawa']:>6}"
              f" {row['tamagawa_p_part']:>9} {a_q:>8} {d:>9}\n")
        w(_rule() + "\n")
    if report.get("torsion"):
        t = report["torsion"]
        gens = "  ".join(f"({x}, {y})" for x, y in t["generators"]) or "(none)"
        w(f"torsion  {t['structure']}  order {t['order']}"
          f"  p-part {t['p_part']}  generators {gens}\n")
        w(_rule() + "\n")
    h = report["hypotheses"]
    for key in (
        "s1_good_reduction_above_p",
        "s2_trace_zero_and_base_qp",
        "s3_unramified_at_supersingular",
        "s4_local_degree_not_div_4",
    ):
        check = h[key]
        reason = f"  ({check['reason']})" if check["reason"] else ""
        w(f"{key:<34} {check['status']}{reason}\n")
    w(f"{'selmer_finiteness':<34} {h['selmer_finiteness']}\n")
    w(f"{'hypotheses overall':<34} {'pass' if h['overall'] else 'fail'}\n")
    w(_rule() + "\n")
    if report["euler"] is not None:
        e = report["euler"]
        b = e["breakdown"]
        w(f"chi      {e['chi']}   (p^{e['chi_exponent']})\n")
        w(f"  sha_p                  {b['sha_p']}\n")
        w(f"  1 / torsion_p^2        1/{b['torsion_p_sq']}\n")
        w(f"  tamagawa p-part prod   {b['tamagawa_product_p_part']}\n")
        w(f"  ordinary d^2 prod      {b['ordinary_d_sq_product']}\n")
    else:
        w(f"no Euler characteristic: {report['failure']}\n")
    notes = list(h.get("notes", []))
    if report["euler"] is not None:
        notes += report["euler"]["notes"]
    if notes:
        w(_rule() + "\n")
        for note in dict.fromkeys(notes):
            w(f"note: {note}\n")
    w(_rule() + "\n")
    return out.getvalue()


# ---------------------------------------------------------------------------
# batch processing

def run_batch(
    csv_text: str,
    p: int,
    sha_default: int = 1,
    selmer_finite_asserted: bool = False,
    jobs: int = 1,
    cache: LocalDataCache | None = None,
) -> dict:
    """One report per CSV row (label,a1,a2,a3,a4,a6[,sha_p]); skips bad rows."""
    cache = cache or LocalDataCache(None)
    tasks = []
    skipped = []
    for idx, row in enumerate(csv.reader(io.StringIO(csv_text))):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) not in (6, 7):
            skipped.append({"row": idx, "reason": f"expected 6 or 7 columns, got {len(row)}"})
            continue
        tasks.append((idx, [cell.strip() for cell in row]))

    def work(task):
        idx, row = task
        label = row[0]
        try:
            sha = int(row[6]) if len(row) == 7 else sha_default
            return idx, analyze_curve(
                ",".join(row[1:6]),
                p,
                sha_p_order=sha,
                selmer_finite_asserted=selmer_finite_asserted,
                cache=cache,
                sha_defaulted=len(row) < 7,
                label=label,
            ), None
        except Exception as exc:  # isolate row failures
            return idx, None, f"{type(exc).__name__}: {exc}"

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, tasks))
    else:
        results = [work(t) for t in tasks]

    reports = []
    n_fail = 0
    for idx, report, err in results:
        if err is not None:
            skipped.append({"row": idx, "reason": err})
            continue
        if report["status"] != "ok":
            n_fail += 1
        reports.append(report)
    skipped.sort(key=lambda s: s["row"])
    return {
        "reports": reports,
        "summary": {
            "rows_analyzed": len(reports),
            "passed": len(reports) - n_fail,
            "hypothesis_failures": n_fail,
            "skipped": len(skipped),
            "skipped_rows": skipped,
        },
    }
