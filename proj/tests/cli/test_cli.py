"""End-to-end checks of the cascadeho command line. Usage: test_cli.py <cascadeho>."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

CLI = sys.argv[1]
failures = []


def run(*args, stdin=None):
    return subprocess.run([CLI, *args], input=stdin, capture_output=True, text=True)


def check(name, cond, detail=""):
    print(("ok   " if cond else "FAIL ") + name + (f"  {detail}" if detail and not cond else ""))
    if not cond:
        failures.append(name)


def groups(report):
    return {(g["class"], g["grading"]): g["group"] for g in report["homology"]["groups"]}


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)

    doc = run("scenario", "prequantization", "--g", "1", "--e", "1", "--d", "2")
    check("scenario prequantization", doc.returncode == 0, doc.stderr)
    r = run("--format", "json", "chs1", "-", "--umax", "3", stdin=doc.stdout)
    check("chs1 from stdin", r.returncode == 0, r.stderr)
    rep = json.loads(r.stdout)
    g = groups(rep)
    check("chs1 degree 0", g.get(("2Γ", 0)) == "Z^2 + Z/2", str(g))
    check("chs1 degree 1", g.get(("2Γ", 1)) == "Z + (Z/2)^2", str(g))
    check("chs1 truncation", rep.get("truncation_consistent") is True)

    saved = tmp / "report.json"
    saved.write_text(r.stdout)
    text = run("report", str(saved))
    check("report re-render", text.returncode == 0 and "Z + (Z/2)^2" in text.stdout, text.stdout)

    nch = run("--format", "json", "nch", "-", stdin=doc.stdout)
    check("nch degree 2", groups(json.loads(nch.stdout)).get(("2Γ", 2)) == "Z")

    mutated = run("scenario", "mutation", "--name", "interval-pair", "--mutation", "label-sign-flip")
    check("scenario mutation", mutated.returncode == 0, mutated.stderr)
    bad = tmp / "bad.json"
    bad.write_text(mutated.stdout)
    v = run("validate", str(bad))
    check("validate rejects a mutant with exit 1", v.returncode == 1, f"exit {v.returncode}")

    pd = tmp / "pd.json"
    out = run("scenario", "period-doubling", "--side", "plus", "--c", "1", "-o", str(pd))
    check("scenario -o", out.returncode == 0 and pd.exists(), out.stderr)
    c = run("compare", str(pd), "--umax", "4")
    check("compare period doubling", c.returncode == 0, c.stdout + c.stderr)

    even = run("scenario", "period-doubling", "--side", "plus", "--c", "2")
    check("even c needs --allow-even", even.returncode == 3, f"exit {even.returncode}")

    nonreduced = json.loads(run("scenario", "fixture", "--name", "one-interval").stdout)
    nonreduced["payload"]["basepoints"]["a"] = "2/4"
    nr = tmp / "nr.json"
    nr.write_text(json.dumps(nonreduced))
    s = run("validate", str(nr))
    check("non-reduced rational is a schema error", s.returncode == 3, f"exit {s.returncode}")

    phi = tmp / "phi.json"
    run("scenario", "fixture", "--name", "trivial-cobordism", "-o", str(phi))
    m = run("--format", "json", "morphism", str(phi))
    check("trivial cobordism is the identity", m.returncode == 0 and json.loads(m.stdout).get("identity") is True)

    missing = run("nch", str(tmp / "absent.json"))
    check("missing file exits 3", missing.returncode == 3)

sys.exit(1 if failures else 0)
