"""Probe eval on retrained model: ordering, quality, latent usage, blob size."""
import json, os
import numpy as np
from scipy.spatial import cKDTree
from dentamorph.sampling import load_samples
from dentamorph.mesh import load_mesh_archive
from dentamorph.checkpoint import load_checkpoint
from dentamorph.fitting import (FitConfig, fit_latents, extract_labelled_mesh,
                                label_surface)
from dentamorph.metrics import sample_mesh_uniform

bundle = load_checkpoint("_probe_q/run2/checkpoint_final.ckpt")
man = json.load(open("_probe_q/data/manifest.json"))
base = "_probe_q/data"
INCISORS = (1, 2, 8, 9)

for entry in [e for e in man["scans"] if e["split"] == "test"]:
    samples = load_samples(os.path.join(base, entry["samples"]))
    gt = load_mesh_archive(os.path.join(base, entry["mesh"]))
    gt_pts, gfid = sample_mesh_uniform(gt, 50000, seed=5, return_face_ids=True)
    glab = gt.face_labels[gfid]
    tree_g = cKDTree(gt_pts)
    presence = samples.presence.astype(bool)
    drop = next(i for i in INCISORS if presence[i])
    wrongp = presence.copy(); wrongp[drop] = False
    print(f"\n{entry['id']} drop={drop}", flush=True)
    scores = {}
    for tag, pres, seed in (("correct", presence, 101), ("wrong", wrongp, 211)):
        cfg = FitConfig(iterations=300, points_per_iter=2000,
                        latent_weight=1e-4, seed=seed, presence=pres)
        fit = fit_latents(bundle, samples, cfg)
        zn = np.linalg.norm(fit.codes, axis=-1)
        rec = extract_labelled_mesh(bundle, fit, resolution=96)
        rp, fid = sample_mesh_uniform(rec, 50000, seed=6, return_face_ids=True)
        rlab = rec.face_labels[fid]
        d_rg, _ = tree_g.query(rp)
        d_gr, _ = cKDTree(rp).query(gt_pts)
        cd = 0.5 * (d_gr.mean() + d_rg.mean())
        scores[tag] = cd
        sel = rlab == drop
        far = sel & (d_rg > 0.04)
        print(f"  {tag:8s} chamfer={cd:.5f} gt->r={d_gr.mean():.5f} "
              f"r->gt={d_rg.mean():.5f} comp{drop} share={sel.mean():.3f} "
              f"far_n={far.sum()} zmax={zn.max():.3f} zmean={zn[presence].mean():.3f}",
              flush=True)
        if tag == "correct":
            pl = label_surface(bundle, fit, gt_pts)
            acc = float((pl == glab).mean())
            print(f"  label_acc={acc:.4f}")
    print(f"  RATIO={scores['wrong'] / scores['correct']:.3f}")
