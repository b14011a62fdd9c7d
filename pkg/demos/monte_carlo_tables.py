"""
Small Monte Carlo tables from the experiment harness
====================================================

Runs reduced versions of the two simulation studies through the same code the
command line uses and prints the CSV they would write.
"""

from gencauchy.experiments import build_config, run_table1, run_table2
from gencauchy.experiments.output import report_csv

# distribution of the normalized statistic at four scale choices
cfg = build_config("table1", cli_settings=dict(replicates=20, n="200", ranges="0.3", pool_size=1000, seed=5))
print(report_csv(run_table1(cfg)))

# mean prediction-efficiency ratios for the compatible GW working model
cfg = build_config("table2", cli_settings=dict(replicates=10, n="50,200", ranges="0.3", deltas="1.2",
                                               pool_size=1000, seed=5))
print(report_csv(run_table2(cfg)))

# the equivalent command line is
#   gencauchy table1 --replicates 20 --n 200 --ranges 0.3 --pool-size 1000 --seed 5
