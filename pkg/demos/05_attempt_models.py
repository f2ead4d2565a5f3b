#!/usr/bin/env python3
"""Why the campaign defaults to independent interference per attempt.

The geometric retry model behind the closed forms treats attempts as
independent with success probability rho_u * rho_d.  Freezing a trial's
interference geometry breaks that independence: a trial stuck with a bad
geometry retries for a very long time, the attempt distribution grows a
heavy tail, and the sample mean is dominated by the retry cap.  This demo
measures both attempt models on identical deployments.
"""

import numpy as np

from dudasim import TrialConfig, run_campaign

ITERATIONS = 800
CAP = 200

for model in ("independent", "fixed"):
    cfg = TrialConfig(
        iterations=ITERATIONS, scheme="duda", seed=7,
        attempt_model=model, max_attempts=CAP,
    )
    st = run_campaign(cfg)
    att = st.attempts
    p = st.empirical_rho_u * st.empirical_rho_d
    print(f"=== attempt_model = {model!r} ===")
    print(f"  first-attempt success product : {p:.4f}  (1/p = {1 / p:.2f})")
    print(f"  mean attempts                 : {att.mean():8.2f}")
    print(f"  median attempts               : {np.median(att):8.1f}")
    print(f"  90th percentile               : {np.percentile(att, 90):8.1f}")
    print(f"  censored at cap {CAP:4d}          : {st.censored_count}/{ITERATIONS}")
    print(f"  mean latency                  : {st.mean:8.2f} slots")
    print()

print("The independent model reproduces the geometric attempt law the")
print("closed forms assume; the fixed model's mean is an artifact of the")
print("retry cap and keeps growing as the cap is raised.")
