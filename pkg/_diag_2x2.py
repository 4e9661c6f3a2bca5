"""Isolate presence-effect from seed-effect; bucket recon->GT error by label."""
import json, os
import numpy as np
from scipy.spatial import cKDTree
from dentamorph.sampling import load_samples
from dentamorph.mesh import load_mesh_archive
from dentamorph.checkpoint import load_checkpoint
from dentamorph.fitting import FitConfig, fit_latents, extract_labelled_mesh
from dentamorph.metrics import sample_mesh_uniform

CKPT = "_probe_q/run/checkpoint_final.ckpt"
man = json.load(open("_probe_q/data/manifest.json"))
base = "_probe_q/data"
bundle = load_checkpoint(CKPT)
entry = next(e for e in man["scans"] if e["split"] == "test")
samples = load_samples(os.path.join(base, entry["samples"]))
gt = load_mesh_archive(os.path.join(base, entry["mesh"]))
gt_pts = sample_mesh_uniform(gt, 50000, seed=5)
tree_g = cKDTree(gt_pts)
presence = samples.presence.astype(bool)
drop = next(i for i in (1, 2, 8, 9) if presence[i])
wrongp = presence.copy(); wrongp[drop] = False

for seed in (101, 211):
    for tag, pres in (("correct", None), ("wrong", wrongp)):
        fit = fit_latents(CKPT, samples, FitConfig(iterations=300,
                          points_per_iter=2000, seed=seed, presence=pres))
        rec = extract_labelled_mesh(bundle, fit, resolution=96)
        rp, fid = sample_mesh_uniform(rec, 50000, seed=6, return_face_ids=True)
        rlab = rec.face_labels[fid]
        d_gr, _ = cKDTree(rp).query(gt_pts)
        d_rg, _ = tree_g.query(rp)
        cd = 0.5 * (d_gr.mean() + d_rg.mean())
        print(f"seed {seed} {tag:8s} chamfer={cd:.5f} gt->r={d_gr.mean():.5f} "
              f"r->gt={d_rg.mean():.5f}", flush=True)
        rows = []
        for comp in np.unique(rlab):
            sel = rlab == comp
            rows.append((int(comp), int(sel.sum()), float(d_rg[sel].mean()),
                         float(d_rg[sel].max())))
        worst = sorted(rows, key=lambda r: -r[1] * r[2])[:6]
        for comp, n, mean, mx in worst:
            mark = " <== dropped" if comp == drop else ""
            print(f"    comp {comp:2d}: n={n:6d} r->gt mean={mean:.5f} "
                  f"max={mx:.4f} contrib={n*mean/50000:.5f}{mark}", flush=True)
