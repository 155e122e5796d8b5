use std::path::PathBuf;

use pentamotion::design::DesignParams;
use pentamotion::geometry::{ellipsoid_for, sigma_p_at};
use pentamotion::kinematics::{Direction, Vec3};
use pentamotion::reality::{reality_interval, reality_report, workspace_free};
use pentamotion::selfmotion::p5_from_h;
use pentamotion::surface::{generators_of, krames_reflect_motion, patch_from_generators, quintic_residual};
use pentamotion::verify::{imaginary_cubics_check_with, motion_report, trajectory_fit};
use pentamotion::Complex;
use serde_json::{json, Value};

use crate::config::{resolve_motion, ResolvedMotion, RunConfig};
use crate::output::{num, OutDir};
use crate::CliError;

/// Sphere fits of trajectories count as spherical below this rms.
const SPHERE_FIT_TOL: f64 = 1e-8;
/// Scaled distance to the example quintic accepted for surface points.
const QUINTIC_TOL: f64 = 1e-6;
/// Trajectory fits need at least this many poses.
const MIN_FIT_POSES: usize = 25;

pub struct Context {
    pub cfg: RunConfig,
    pub out: OutDir,
    pub tol: f64,
}

/// Command result: the JSON payload, files written, and whether all checks
/// inside the command passed.
pub struct Outcome {
    pub result: Value,
    pub files: Vec<PathBuf>,
    pub pass: bool,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Self { result, files: Vec::new(), pass: true }
    }
}

fn complex(z: Complex<f64>) -> [f64; 2] {
    [z.re, z.im]
}

fn vec(p: &Vec3<f64>) -> [f64; 3] {
    [p.x, p.y, p.z]
}

/// The worked example, which unlocks the quintic and
/// imaginary-cubic checks.
fn is_worked_example(design: &DesignParams<f64>, h: &Direction<f64>) -> bool {
    let e = (design.a, design.c, design.a_r, design.a_c, design.a4);
    e == (-1.0, -5.0, 7.0, 4.0, 2.0) && h.same_as(&Direction { h: [1.0, 1.5, 0.5] }, 1e-12)
}

fn motion_for_fits(ctx: &Context) -> Result<ResolvedMotion, CliError> {
    let count = ctx.cfg.sampling.count;
    if count < MIN_FIT_POSES {
        return Err(CliError::Validation(format!("sampling.count must be at least {MIN_FIT_POSES} for sphere fits")));
    }
    resolve_motion(&ctx.cfg, count)
}

pub fn classify(ctx: &Context) -> Result<Outcome, CliError> {
    let cfg = &ctx.cfg;
    let d = cfg.design()?;
    let off = d.darboux_offsets();
    let mut r = json!({
        "ptype": format!("{:?}", d.ptype),
        "v": d.v,
        "w": d.w,
        "p2": complex(off.p2),
        "p3": complex(off.p3),
        "p4": off.p4,
        "special_v0": d.v == 0.0,
    });
    if d.v != 0.0 {
        if let Some(p5) = cfg.p5 {
            r["R1_sq_from_p5"] = json!(d.r1_sq_from_p5(p5)?);
        }
        if let Some(r1) = cfg.r1 {
            r["p5_from_R1"] = json!(d.p5_from_r1_sq(r1 * r1)?);
        }
        if let Some(h) = cfg.direction()? {
            let p5 = p5_from_h(&d, &h)?;
            r["p5_from_h"] = json!(p5);
            r["R1_sq_from_h"] = json!(d.r1_sq_from_p5(p5)?);
        }
    }
    Ok(Outcome::ok(r))
}

pub fn trace(ctx: &Context) -> Result<Outcome, CliError> {
    let rm = resolve_motion(&ctx.cfg, ctx.cfg.sampling.count)?;
    let readings = rm.motion.readings()?;
    let mut header = vec!["index", "e1", "e2", "e3", "f1", "f2", "f3"];
    header.extend(["r11", "r12", "r13", "r21", "r22", "r23", "r31", "r32", "r33", "s1", "s2", "s3"]);
    header.extend(["leg1", "leg2", "leg3", "leg4", "leg5"]);
    let mut rows = Vec::with_capacity(rm.motion.poses.len());
    for (i, (pose, legs)) in rm.motion.poses.iter().zip(&readings).enumerate() {
        let p = pose.normalized()?;
        let disp = p.displacement()?;
        let mut row = vec![i.to_string()];
        row.extend(p.e[1..].iter().chain(&p.f[1..]).map(|&x| num(x)));
        for r in 0..3 {
            row.extend((0..3).map(|c| num(disp.rotation[(r, c)])));
        }
        row.extend(disp.translation.iter().map(|&x| num(x)));
        row.extend(legs.lengths().iter().map(|&x| num(x)));
        rows.push(row);
    }
    let csv = ctx.out.write_csv("trace.csv", &header, &rows)?;
    let report = motion_report(&rm.motion, ctx.cfg.report_tolerances(ctx.tol))?;
    let pass = report.pass;
    let json = ctx.out.write_json("residuals.json", &report)?;
    Ok(Outcome {
        result: json!({
            "resolved": rm.summary(),
            "curve": rm.motion.curve.coeffs(),
            "residuals": report,
        }),
        files: vec![csv, json],
        pass,
    })
}

pub fn surface(ctx: &Context) -> Result<Outcome, CliError> {
    let s = &ctx.cfg.sampling;
    if s.grid < 2 || s.count < 2 {
        return Err(CliError::Validation("sampling.count and sampling.grid must be at least 2".into()));
    }
    let rm = resolve_motion(&ctx.cfg, s.count)?;
    let gens = generators_of(&rm.motion)?;
    let patch = patch_from_generators(&gens, (s.gamma_range[0], s.gamma_range[1]), s.grid);
    let obj = ctx.out.write_obj("surface.obj", &patch.points)?;
    let header = ["index", "sweep", "dir1", "dir2", "dir3", "moment1", "moment2", "moment3", "pedal1", "pedal2", "pedal3"];
    let rows: Vec<Vec<String>> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut row = vec![i.to_string(), num(g.sweep_param)];
            for v in [&g.line.direction, &g.line.moment, &g.pedal] {
                row.extend(v.iter().map(|&x| num(x)));
            }
            row
        })
        .collect();
    let csv = ctx.out.write_csv("generators.csv", &header, &rows)?;
    let mut files = vec![obj, csv];
    let mut result = json!({
        "resolved": rm.summary(),
        "generators": gens.len(),
        "points_per_generator": s.grid,
        "gamma_range": s.gamma_range,
    });
    let mut pass = true;
    if is_worked_example(&rm.design, &rm.h) {
        let pts: Vec<_> = patch.points.iter().flatten().copied().collect();
        let (_, stats) = quintic_residual(&pts);
        pass = stats.max <= QUINTIC_TOL;
        let q = json!({ "stats": stats, "tolerance": QUINTIC_TOL, "pass": pass });
        files.push(ctx.out.write_json("quintic.json", &q)?);
        result["quintic"] = q;
    }
    Ok(Outcome { result, files, pass })
}

pub fn reality(ctx: &Context) -> Result<Outcome, CliError> {
    let t = ctx.cfg.require_t()?;
    let r = reality_report(&ctx.cfg.design()?, t)?;
    Ok(Outcome::ok(json!({
        "t": t,
        "interval": [r.interval.lower, r.interval.upper],
        "degenerate": r.interval.degenerate,
        "slice": r.slice,
        "pedal_points": r.pedal.pedal_points,
        "distances": r.pedal.distances,
        "circle_case": r.pedal.circle_case,
    })))
}

pub fn workspace(ctx: &Context) -> Result<Outcome, CliError> {
    let t = ctx.cfg.require_t()?;
    let [lo, hi] = ctx.cfg.leg_range.ok_or_else(|| CliError::Validation("config needs `leg_range`".into()))?;
    let d = ctx.cfg.design()?;
    let free = workspace_free(&d, t, lo, hi)?;
    let i = reality_interval(&d, t)?;
    Ok(Outcome::ok(json!({
        "t": t,
        "free": free,
        "interval": [i.lower, i.upper],
        "degenerate": i.degenerate,
        "range": [lo, hi],
    })))
}

pub fn krames(ctx: &Context) -> Result<Outcome, CliError> {
    let rm = motion_for_fits(ctx)?;
    let s = &ctx.cfg.sampling;
    let cfg = krames_reflect_motion(&rm.motion, s.pose_index, &s.t_samples)?;
    let header = ["kind", "t", "x", "y", "z", "center_x", "center_y", "center_z", "radius", "rms", "center_line_distance"];
    let blank = || String::new();
    let mut rows = Vec::new();
    for g in [0.0, 1.0] {
        let p = cfg.p_bar.point_at(g);
        let mut row = vec!["p_bar".to_string(), blank()];
        row.extend(p.iter().map(|&x| num(x)));
        row.extend((0..6).map(|_| blank()));
        rows.push(row);
    }
    let mut fits = Vec::new();
    let mut pass = true;
    for (&t, x) in cfg.t_samples.iter().zip(&cfg.p_bar_samples) {
        let fit = trajectory_fit(&rm.motion.poses, x)?;
        let dist = cfg.p_bar.distance_to(&fit.center);
        pass &= fit.rms_residual <= SPHERE_FIT_TOL && dist <= SPHERE_FIT_TOL;
        let mut row = vec!["P_bar".to_string(), num(t)];
        row.extend(x.iter().chain(fit.center.iter()).map(|&v| num(v)));
        row.extend([num(fit.radius_sq.max(0.0).sqrt()), num(fit.rms_residual), num(dist)]);
        rows.push(row);
        fits.push(json!({ "t": t, "point": vec(x), "center": vec(&fit.center), "rms": fit.rms_residual, "center_line_distance": dist }));
    }
    let csv = ctx.out.write_csv("krames.csv", &header, &rows)?;
    Ok(Outcome {
        result: json!({
            "resolved": rm.summary(),
            "pose_index": s.pose_index,
            "generator": cfg.generator,
            "p_bar": cfg.p_bar,
            "special_borel": cfg.special_borel,
            "fits": fits,
            "tolerance": SPHERE_FIT_TOL,
            "pass": pass,
        }),
        files: vec![csv],
        pass,
    })
}

pub fn verify(ctx: &Context) -> Result<Outcome, CliError> {
    let rm = motion_for_fits(ctx)?;
    let tols = ctx.cfg.report_tolerances(ctx.tol);
    let residuals = motion_report(&rm.motion, tols)?;
    let mut pass = residuals.pass;

    // every p_t stays on its ellipsoid and on the sphere around σ(p_t)
    let mut loci = Vec::new();
    for &t in &ctx.cfg.sampling.t_samples {
        let ell = ellipsoid_for(&rm.design, t);
        let traj = rm.motion.trajectory(t)?;
        let ell_max = traj.iter().fold(0.0_f64, |a, p| a.max(ell.residual(p).abs()));
        let sphere_spread = match sigma_p_at(&rm.design, t) {
            Ok(c) => {
                let radii: Vec<f64> = traj.iter().map(|p| (p - c).norm()).collect();
                let lo = radii.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = radii.iter().copied().fold(0.0, f64::max);
                Some((hi - lo) / hi.max(1.0))
            }
            Err(_) => None,
        };
        pass &= ell_max <= SPHERE_FIT_TOL && sphere_spread.is_none_or(|s| s <= SPHERE_FIT_TOL);
        loci.push(json!({ "t": t, "ellipsoid_residual": ell_max, "sphere_spread": sphere_spread }));
    }
    let mut result = json!({
        "resolved": rm.summary(),
        "residuals": residuals,
        "loci": loci,
    });
    if is_worked_example(&rm.design, &rm.h) {
        let gens = generators_of(&rm.motion)?;
        let patch = patch_from_generators(&gens, (-10.0, 10.0), 20);
        let pts: Vec<_> = patch.points.iter().flatten().copied().collect();
        let (_, stats) = quintic_residual(&pts);
        pass &= stats.max <= QUINTIC_TOL;
        result["quintic"] = json!(stats);
        let cubics = imaginary_cubics_check_with(&rm.motion, 8)?;
        pass &= cubics.pass;
        result["imaginary_cubics"] = json!(cubics);
    }
    result["pass"] = json!(pass);
    Ok(Outcome { result, files: Vec::new(), pass })
}
