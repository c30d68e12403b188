# coding: utf-8

# # Driving the command line from Python
#
# The `nexact` command wraps the same library calls.  Every report has a
# text form and a structured JSON form with identical numbers, and each
# bounded claim carries its bound.

import io
import json
from pathlib import Path

from nexact import cli

DATA = Path(__file__).resolve().parent / "data"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


code, out, _ = run("maxn", DATA / "fix_c.alg")
print(out)

# The structured form echoes the configuration and the scope of each claim.

code, out, _ = run("check", DATA / "fix_c.alg", DATA / "class_s1.txt", "--format", "json")
report = json.loads(out)
print(json.dumps(report["scope"], indent=2))
for v in report["result"]["axioms"]["verdicts"]:
    print(f'{v["axiom"]:16s} {v["status"]}')

# A class that is not inside ex_n is rejected with the reason, and the
# exit status says the input was at fault.

code, _, err = run("check", DATA / "fix_b.alg", DATA / "class_s1.txt")
print("exit", code, err.strip())
