"""Do near-surface free samples at fit time kill the gap bulge?"""
import json, os
import numpy as np
import torch
from scipy.spatial import cKDTree
from dentamorph.sampling import load_samples
from dentamorph.mesh import load_mesh_archive
from dentamorph.checkpoint import load_checkpoint
from dentamorph.fitting import (FitConfig, LatentSet, extract_labelled_mesh,
                                _STREAM_FIT, _global_sdf)
from dentamorph.losses import LossWeights
from dentamorph.metrics import sample_mesh_uniform

CKPT = "_probe_q/run/checkpoint_final.ckpt"
man = json.load(open("_probe_q/data/manifest.json"))
base = "_probe_q/data"
bundle = load_checkpoint(CKPT)
model = bundle.model
model.eval()

def fit_mixed(samples, presence_np, seed, near_frac, sigma=0.04):
    m, d = model.config.m, model.config.latent_dim
    presence = torch.from_numpy(presence_np)
    surface = torch.as_tensor(samples.points, dtype=torch.float32)
    normals = torch.as_tensor(samples.normals, dtype=torch.float32)
    free = torch.as_tensor(samples.free, dtype=torch.float32)
    n_surf, n_free = len(surface), len(free)
    k_surf = round(2000 * n_surf / (n_surf + n_free))
    k_free = 2000 - k_surf
    k_near = int(round(near_frac * k_free))
    z = torch.zeros(m, d, requires_grad=True)
    present_rows = torch.nonzero(presence, as_tuple=False)[:, 0]
    cfg = FitConfig(iterations=300, points_per_iter=2000, seed=seed)
    opt = torch.optim.Adam([z], lr=cfg.lr, betas=(0.9, 0.999))
    for it in range(cfg.iterations):
        for g in opt.param_groups:
            g["lr"] = cfg.lr_at(it)
        rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, _STREAM_FIT, it)))
        rs = torch.from_numpy(rng.choice(n_surf, size=k_surf, replace=False))
        rf = torch.from_numpy(rng.choice(n_free, size=k_free - k_near, replace=False))
        fr = free[rf]
        if k_near:
            anchors = rng.choice(n_surf, size=k_near, replace=False)
            noise = rng.normal(0.0, sigma, (k_near, 3)).astype(np.float32)
            near = np.clip(samples.points[anchors] + noise, -1.0, 1.0)
            fr = torch.cat([fr, torch.from_numpy(near)], dim=0)
        loss = _global_sdf(model, z, presence, surface[rs], normals[rs],
                           fr, LossWeights())
        loss = loss + cfg.latent_weight * (z[present_rows] ** 2).sum()
        opt.zero_grad(set_to_none=True)
        loss.backward()
        with torch.no_grad():
            z.grad[~presence] = 0.0
        opt.step()
    return LatentSet(z.detach().numpy().copy(), presence_np)

for entry in [e for e in man["scans"] if e["split"] == "test"]:
    samples = load_samples(os.path.join(base, entry["samples"]))
    gt = load_mesh_archive(os.path.join(base, entry["mesh"]))
    gt_pts = sample_mesh_uniform(gt, 50000, seed=5)
    tree_g = cKDTree(gt_pts)
    presence = samples.presence.astype(bool)
    drop = next(i for i in (1, 2, 8, 9) if presence[i])
    wrongp = presence.copy(); wrongp[drop] = False
    print(f"{entry['id']} present={np.nonzero(presence)[0].tolist()} drop={drop}", flush=True)
    for near_frac in (0.0, 0.5):
        scores = {}
        for tag, pres, seed in (("correct", presence, 101), ("wrong", wrongp, 211)):
            fit = fit_mixed(samples, pres, seed, near_frac)
            rec = extract_labelled_mesh(bundle, fit, resolution=96)
            rp, fid = sample_mesh_uniform(rec, 50000, seed=6, return_face_ids=True)
            d_gr, _ = cKDTree(rp).query(gt_pts)
            d_rg, _ = tree_g.query(rp)
            cd = 0.5 * (d_gr.mean() + d_rg.mean())
            scores[tag] = cd
            share = float((rec.face_labels[fid] == drop).mean())
            print(f"  near={near_frac} {tag:8s} chamfer={cd:.5f} r->gt={d_rg.mean():.5f} "
                  f"comp{drop}-share={share:.3f}", flush=True)
        print(f"  near={near_frac} RATIO={scores['wrong']/scores['correct']:.3f}", flush=True)
