"""
Running the identity catalog
============================

Every catalog case pairs two evaluators with a parameter grid and a
deterministic sample of points.  The runner reports the worst relative
error per case.  The same report is what ``ellverify verify`` prints.
"""
from ellverify.cli import render_text
from ellverify.identity_suite import SuiteConfig, build_catalog, run_suite

catalog = build_catalog()
print(f"{len(catalog)} cases; errata noted on", [c.id for c in catalog if c.erratum_note])

report = run_suite(config=SuiteConfig(workers=4))
print(render_text(report))

# Failing cases keep per-binding detail, which shows where an identity breaks
for r in report.results:
    if not r.passed:
        for b in r.bindings:
            print(f"{r.case_id} {b.params}: max rel err {b.max_rel_err:.2e}")
        print("  note:", r.erratum_note)
