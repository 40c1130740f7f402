"""
Seeded campaigns
================

A campaign runs one check over many generated games. Each instance gets
its own seed from the campaign seed and its index, so the record stream
does not depend on the number of workers.
"""

# %%
import dataclasses

from spgames.documents import dumps_game
from spgames.search import CampaignConfig, FamilySpec, GenParams, gen_random_game, run_campaign

params = GenParams(n=2, vertex_count=(3, 6), seed=1)
print(dumps_game(gen_random_game(params))[:200], "...")

# %%
config = CampaignConfig("bisp_strong", params, count=200, seed=7)
report = run_campaign(config)
print(report.instances_run, report.counts, f"{report.elapsed:.2f}s")

two = run_campaign(dataclasses.replace(config, workers=2))
print("same stream with two workers:", two.stream() == report.stream())

# %%
# Exhaustive family of small games instead of random ones.
family = run_campaign(CampaignConfig("ne_bisp_equiv", params, family=FamilySpec()))
print(family.instances_run, family.counts)

# %%
# Three players: equilibria may fail to exist. Any candidate is
# re-verified by enumerating every profile before it is reported.
hunt = run_campaign(CampaignConfig("ns_nperson", dataclasses.replace(params, n=3), count=2000, seed=3))
print(hunt.counts, "candidates:", len(hunt.counterexamples))
