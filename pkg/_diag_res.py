"""Does higher extraction resolution surface the wrong-presence artifact?"""
import json, os, time
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

lab_tree = cKDTree(samples.points)
_, nearest = lab_tree.query(gt_pts)
gt_label = samples.labels[nearest]

fits = {
    "correct": fit_latents(CKPT, samples, FitConfig(iterations=300, points_per_iter=2000, seed=101)),
    "wrong": fit_latents(CKPT, samples, FitConfig(iterations=300, points_per_iter=2000, seed=211, presence=wrongp)),
}
print("fits done", flush=True)
for res in (96, 160):
    scores = {}
    for tag, fit in fits.items():
        t0 = time.time()
        rec = extract_labelled_mesh(bundle, fit, resolution=res)
        rp = sample_mesh_uniform(rec, 50000, seed=6)
        d_gr, _ = cKDTree(rp).query(gt_pts)
        d_rg, _ = tree_g.query(rp)
        cd = 0.5 * (d_gr.mean() + d_rg.mean())
        scores[tag] = cd
        sel = gt_label == drop
        print(f"res {res} {tag:8s} chamfer={cd:.5f} gt->r={d_gr.mean():.5f} "
              f"r->gt={d_rg.mean():.5f} dropped-region={d_gr[sel].mean():.5f} "
              f"({time.time()-t0:.0f}s)", flush=True)
    r = scores["wrong"] / scores["correct"]
    print(f"res {res} RATIO = {r:.3f} {'WORSE' if r > 1 else 'BETTER(!)'}", flush=True)
