"""Heisenberg-limited versus shot-noise scaling, through the experiment runner.

The same sweep over target precisions is run for overlap estimation and for
the one-ancilla sampling baseline at matched U-uses. The fitted log-log
slope of median error against resources is about -1 for the former and
-1/2 for the latter. The equivalent command line is

    qexpect --algorithm oea --instance random-unitary --trials 100 \
            --sweep 0.2,0.1,0.05,0.025 --out oea.csv
"""

from qexpect.cli import ExperimentConfig, InstanceSpec, run

sweep = (0.2, 0.1, 0.05, 0.025)
for algorithm in ("oea", "one_ancilla"):
    config = ExperimentConfig(algorithm=algorithm, p=sweep[0], trials=100, seed=4, sweep=sweep,
                              instance=InstanceSpec("random-unitary"))
    _, summary = run(config)
    print(f"== {algorithm}")
    for line in summary.lines():
        print(line)
