"""How often does bp(G) equal n - alpha(G) for small random graphs?

The equality is an asymptotic statement for p below about 0.312; at n = 8
the frequencies below are only a desk-scale impression of it.
"""
from bplab.experiments import CampaignConfig, run_campaign

cfg = CampaignConfig(n_values=[6, 8, 10], p_values=[0.2, "p0", 0.45], trials=100, base_seed=2024)
res = run_campaign(cfg)

print(f"{'n':>3} {'p':>6} {'P[bp = n - alpha]':>18} {'mean alpha':>11} {'mean bp':>8}")
for s in res.summary:
    print(f"{s['n']:>3} {s['p']:>6.3f} {s['equality_frequency']:>18.2f} {s['mean_alpha']:>11.2f} {s['mean_bp']:>8.2f}")

with open("campaign.csv", "w") as fh:
    fh.write(res.to_csv())
print("wrote campaign.csv with", len(res.records), "rows")
