"""Where is the bloated incisor surface, and does it shrink with more iterations?"""
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

entry = next(e for e in man["scans"] if e["split"] == "test")  # t0016
samples = load_samples(os.path.join(base, entry["samples"]))
gt = load_mesh_archive(os.path.join(base, entry["mesh"]))
gt_pts, gfid = sample_mesh_uniform(gt, 50000, seed=5, return_face_ids=True)
glab = gt.face_labels[gfid]
tree_g = cKDTree(gt_pts)
g1 = gt_pts[glab == 1]
gum = gt_pts[glab == 0]
print(f"GT tooth1 bbox  lo={g1.min(0).round(3)} hi={g1.max(0).round(3)} "
      f"centroid={g1.mean(0).round(3)} n={len(g1)}", flush=True)

for iters in (300, 600):
    cfg = FitConfig(iterations=iters, points_per_iter=2000, seed=101)
    fit = fit_latents(bundle, samples, cfg)
    rec = extract_labelled_mesh(bundle, fit, resolution=96)
    rp, fid = sample_mesh_uniform(rec, 50000, seed=6, return_face_ids=True)
    rlab = rec.face_labels[fid]
    d_rg, _ = tree_g.query(rp)
    d_gr, _ = cKDTree(rp).query(gt_pts)
    cd = 0.5 * (d_gr.mean() + d_rg.mean())
    sel = rlab == 1
    far = sel & (d_rg > 0.04)
    print(f"\niters={iters} chamfer={cd:.5f} comp1 n={sel.sum()} far_n={far.sum()} "
          f"comp1 d mean={d_rg[sel].mean():.4f}", flush=True)
    if far.sum():
        blob = rp[far]
        print(f"  blob bbox lo={blob.min(0).round(3)} hi={blob.max(0).round(3)} "
              f"centroid={blob.mean(0).round(3)}")
        # local gum height under the blob footprint
        bb = blob.mean(0)
        near_gum = gum[np.linalg.norm(gum[:, :2] - bb[:2], axis=1) < 0.08]
        if len(near_gum):
            print(f"  gum z under blob: mean={near_gum[:,2].mean():.3f} "
                  f"max={near_gum[:,2].max():.3f}  blob z range "
                  f"[{blob[:,2].min():.3f},{blob[:,2].max():.3f}]")
        # distance of blob points to GT tooth-1 surface specifically
        d1, _ = cKDTree(g1).query(blob)
        print(f"  blob->GTtooth1 mean={d1.mean():.4f}; mirrored-x centroid "
              f"{(blob.mean(0)*np.array([-1,1,1])).round(3)}")
