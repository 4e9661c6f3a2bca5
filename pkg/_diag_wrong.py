"""Where does the wrong-presence fit put its error, and who covers the gap?"""
import json, os
import numpy as np
from scipy.spatial import cKDTree
from dentamorph.sampling import load_samples
from dentamorph.mesh import load_mesh_archive
from dentamorph.checkpoint import load_checkpoint
from dentamorph.fitting import FitConfig, fit_latents, extract_labelled_mesh, label_surface
from dentamorph.metrics import sample_mesh_uniform

CKPT = "_probe_q/run/checkpoint_final.ckpt"
man = json.load(open("_probe_q/data/manifest.json"))
base = "_probe_q/data"
bundle = load_checkpoint(CKPT)
entry = next(e for e in man["scans"] if e["split"] == "test")
samples = load_samples(os.path.join(base, entry["samples"]))
gt = load_mesh_archive(os.path.join(base, entry["mesh"]))
gt_pts = sample_mesh_uniform(gt, 50000, seed=5)
presence = samples.presence.astype(bool)
drop = next(i for i in (1, 2, 8, 9) if presence[i])
wrongp = presence.copy(); wrongp[drop] = False
print(f"scan {entry['id']} drop component {drop}; present: {np.nonzero(presence)[0].tolist()}")

fits = {}
for tag, pres, seed in (("correct", None, 101), ("wrong", wrongp, 211)):
    fits[tag] = fit_latents(CKPT, samples, FitConfig(iterations=300,
                            points_per_iter=2000, seed=seed, presence=pres))
    rec = extract_labelled_mesh(bundle, fits[tag], resolution=96)
    rp = sample_mesh_uniform(rec, 50000, seed=6)
    tree_r = cKDTree(rp); tree_g = cKDTree(gt_pts)
    d_gt_to_r, _ = tree_r.query(gt_pts)   # GT -> recon (coverage error)
    d_r_to_gt, _ = tree_g.query(rp)       # recon -> GT (hallucination error)
    print(f"\n== {tag}: chamfer={0.5*(d_gt_to_r.mean()+d_r_to_gt.mean()):.5f} "
          f"gt->r={d_gt_to_r.mean():.5f} r->gt={d_r_to_gt.mean():.5f}")
    # regional: GT surface points labelled by component
    lab_tree = cKDTree(samples.points)
    _, nearest = lab_tree.query(gt_pts)
    gt_label = samples.labels[nearest]
    for comp in sorted(set(gt_label.tolist())):
        sel = gt_label == comp
        mark = " <== dropped" if comp == drop else ""
        print(f"  comp {comp:2d}: n={sel.sum():6d} gt->recon mean={d_gt_to_r[sel].mean():.5f} "
              f"max={d_gt_to_r[sel].max():.4f}{mark}")
    # who claims the dropped tooth's region in the recon?
    gt_drop = gt_pts[gt_label == drop]
    claimed = label_surface(bundle, fits[tag], gt_drop)
    vals, counts = np.unique(claimed, return_counts=True)
    print(f"  dropped-region claimed by: {dict(zip(vals.tolist(), counts.tolist()))}")
