"""Run every claim and print the verdicts plus one certificate in full."""

import json

from dp2verify.report import RunConfig, run_all, run_claim

report = run_all(RunConfig())
for claim, verdict in report.summary().items():
    print(f"{claim:26s} {verdict}")
print("exit code:", report.exit_code)

cert = run_claim("lemma-2.2")
print(json.dumps(cert.to_dict(timing=False), indent=2))

# the same settings give the same document, whatever the worker count
again = run_all(RunConfig(jobs=2))
print("identical without timing:", again.to_json(timing=False) == report.to_json(timing=False))
