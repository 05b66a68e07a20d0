"""Analysis reports: plain-data certificates plus a human-readable summary.

Every residual in a report is recomputed here from the matrices returned by
the pipeline instead of being copied from intermediate results.
"""

import hashlib
import json
import math

import numpy as np

from .antisym import quaternionic_defect, verify_symmetry
from .estimator import PseudoHermitianAnalyzer
from .io import array_to_entries
from .numfield import DEFAULT_TOL, adjoint, op_norm, rel
from .pseudoherm import metric_residual

__all__ = ["digest", "analyze", "jordan_section", "dumps", "summary"]


def digest(H):
    H = np.ascontiguousarray(np.asarray(H, dtype=np.complex128))
    return hashlib.sha256(repr(H.shape).encode() + H.tobytes()).hexdigest()


def _c(z):
    return [float(np.real(z)), float(np.imag(z))]


def _f(x):
    x = float(x)
    return None if math.isnan(x) else x


def jordan_section(jd):
    return {
        "eigenvalues": [_c(E) for E in jd.eigenvalues],
        "blocks": [
            {"n": row["n"], "eigenvalue": _c(row["eigenvalue"]), "a": row["a"], "p": row["p"], "k": row["k"]}
            for row in jd.ledger()
        ],
        "d": jd.d,
        "g": jd.g,
        "diagonalizable": jd.is_diagonalizable,
        "residuals": {
            "biorthonormality": op_norm(adjoint(jd.P) @ jd.Q - np.eye(jd.N)),
            "completeness": op_norm(jd.P @ adjoint(jd.Q) - np.eye(jd.N)),
            "reconstruction": rel(
                op_norm(jd.P @ jd.jordan_matrix @ adjoint(jd.Q) - jd.H), jd.norm
            ),
            "condition_number": jd.residuals["condition_number"],
        },
    }


def _classification_section(cls):
    return {
        "real": [{"n": n, "eigenvalue": _c(E), "segre": list(seg)} for n, E, seg in cls.real_eigs],
        "pairs": [
            {
                "plus": {"n": p.n_plus, "eigenvalue": _c(p.E_plus), "segre": list(p.segre_plus)},
                "minus": {"n": p.n_minus, "eigenvalue": _c(p.E_minus), "segre": list(p.segre_minus)},
                "jordan_match": p.jordan_match,
                "conjugation_error": p.conjugation_error,
            }
            for p in cls.paired_eigs
        ],
        "unpaired": [{"n": n, "eigenvalue": _c(E)} for n, E in cls.unpaired_complex],
        "condition_i": cls.condition_i_holds,
    }


def analyze(H, tol=DEFAULT_TOL, seed=0, sections=None):
    """Run the full pipeline on ``H`` and return ``(analyzer, report_dict)``."""
    est = PseudoHermitianAnalyzer(**tol.to_dict(), random_state=seed).fit(H)
    H = est.jordan_.H
    jd, cls, oracle = est.jordan_, est.classification_, est.oracle_
    rep = {
        "input": {"n": jd.N, "digest": digest(H)},
        "tolerances": tol.to_dict(),
        "jordan": jordan_section(jd),
        "classification": _classification_section(cls),
    }
    oracle_res = (
        rel(op_norm(oracle.witness @ H - adjoint(H) @ oracle.witness), op_norm(oracle.witness) * jd.norm)
        if oracle.witness is not None
        else None
    )
    rep["verdict"] = {
        "structural": cls.condition_i_holds,
        "oracle": oracle.pseudo_hermitian,
        "agree": cls.condition_i_holds == oracle.pseudo_hermitian,
        "oracle_dimension": oracle.dimension,
        "oracle_sigma_ratio": oracle.sigma_ratio,
        "oracle_residual": oracle_res,
    }

    metric = est.metric_
    if metric is not None:
        eta = metric.eta
        rep["metric"] = {
            "eta": array_to_entries(eta),
            "inertia": list(metric.inertia),
            "residual": metric_residual(eta, H, tol),
            "hermiticity": rel(op_norm(eta - adjoint(eta)), op_norm(eta)),
        }
        expected = jd.is_diagonalizable and cls.all_real
        rep["definiteness"] = {
            "definite": metric.definite,
            "diagonalizable_real_spectrum": expected,
            "consistent": metric.definite == expected,
            "inertia": list(metric.inertia),
        }
    else:
        rep["metric"] = None
        rep["definiteness"] = None

    if est.symmetry_ is not None:
        check = verify_symmetry(H, est.symmetry_, tol)
        real = est.realification_
        rep["symmetry"] = {
            "square_kind": check.square_kind,
            "square_residual": op_norm(est.symmetry_.square() - np.eye(jd.N)),
            "commutation_residual": check.commutation_residual,
            "realified_max_imag": real.max_imag,
            "realified_relative_imag": rel(real.max_imag, jd.norm),
            "factor_residual": real.factor_residual,
        }
    else:
        rep["symmetry"] = None

    kv = est.kramers_
    kramers = {
        "pairing_ok": kv.pairing_ok,
        "offending_blocks": [{"eigenvalue": _c(E), "p": p, "k": k} for E, p, k in kv.offending_blocks],
        "T_exists": kv.T is not None,
        "T_square_residual": None,
        "T_commutation_residual": None,
    }
    if kv.T is not None:
        check = verify_symmetry(H, kv.T, tol)
        kramers["T_square_residual"] = op_norm(kv.T.square() + np.eye(jd.N))
        kramers["T_commutation_residual"] = check.commutation_residual
    rep["kramers"] = kramers

    form = est.symplectic_form_
    rep["symplectic"] = (
        {"form": array_to_entries(form), "defect": quaternionic_defect(form)} if form is not None else None
    )
    if sections is not None:
        rep = {k: v for k, v in rep.items() if k in sections}
    return est, rep


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _f(obj)
    return obj


def dumps(report):
    return json.dumps(_clean(report), indent=2, sort_keys=True)


def _fmt(z):
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}i"


def summary(report):
    """Short human-readable rendering of a report dict."""
    lines = []
    if "input" in report:
        lines.append(f"N = {report['input']['n']}  digest {report['input']['digest'][:16]}")
    if "jordan" in report:
        jd = report["jordan"]
        lines.append("Jordan blocks:")
        for b in jd["blocks"]:
            lines.append(f"  E = {_fmt(complex(*b['eigenvalue']))}  a = {b['a']}  p = {b['p']}  k = {b['k']}")
        lines.append(
            f"  diagonalizable: {jd['diagonalizable']}  "
            f"reconstruction residual {jd['residuals']['reconstruction']:.2e}"
        )
    if "verdict" in report:
        v = report["verdict"]
        flag = "" if v["agree"] else "  ** STRUCTURAL AND ORACLE VERDICTS DISAGREE **"
        lines.append(
            f"pseudo-Hermitian: structural={v['structural']} oracle={v['oracle']} "
            f"(intertwiner dim {v['oracle_dimension']}, sigma ratio {v['oracle_sigma_ratio']:.2e}){flag}"
        )
    if report.get("metric"):
        m = report["metric"]
        n_pos, n_neg = m["inertia"]
        kind = "definite" if n_pos == 0 or n_neg == 0 else "indefinite"
        lines.append(f"metric: inertia ({n_pos}, {n_neg}) {kind}, residual {m['residual']:.2e}")
    if report.get("symmetry"):
        s = report["symmetry"]
        lines.append(
            f"involutory symmetry: square residual {s['square_residual']:.2e}, "
            f"commutation {s['commutation_residual']:.2e}, realified imag {s['realified_relative_imag']:.2e}"
        )
    if "kramers" in report:
        k = report["kramers"]
        if k["T_exists"]:
            lines.append(
                f"Kramers: T exists, |T^2+1| {k['T_square_residual']:.2e}, "
                f"commutation {k['T_commutation_residual']:.2e}"
            )
        else:
            odd = ", ".join(f"E={_fmt(complex(*o['eigenvalue']))} p={o['p']} k={o['k']}" for o in k["offending_blocks"])
            lines.append(f"Kramers: no T (pairing_ok={k['pairing_ok']}{'; odd: ' + odd if odd else ''})")
    return "\n".join(lines)
