//! Tracing real branches of projective plane curves and the self-motions
//! they parametrize.
//!
//! A curve `P(e) = 0` in the projective plane of `(e1:e2:e3)` is followed on
//! the unit sphere, where it is a closed smooth loop (or a path joining
//! antipodes). Steps are predicted along `∇P × e` and corrected by Newton
//! iterations toward the curve along the sphere.

use serde::Serialize;

use crate::design::DesignParams;
use crate::error::{Error, Result};
use crate::kinematics::{Direction, StudyPose, Vec3};
use crate::poly::{binary_form_real_roots, HomogPoly3, NodeGrid};
use crate::scalar::Scalar;
use crate::selfmotion::{line_symmetric_frame, p5_from_h, LegReadings, LineSymmetricFrame, Pentapod};

/// Step control for the continuation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Largest step along the sphere, in radians.
    pub max_step: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self { max_step: 0.01, min_step: 1e-9, max_steps: 400_000 }
    }
}

fn unit<S: Scalar>(v: Vec3<S>) -> Vec3<S> {
    v / v.norm()
}

fn tangent<S: Scalar>(poly: &HomogPoly3<S>, e: &Vec3<S>) -> Option<Vec3<S>> {
    let t = poly.gradient(e).cross(e);
    let n = t.norm();
    (n > S::zero() && n.is_finite()).then(|| t / n)
}

/// Newton projection of a unit vector onto `P = 0` along the sphere.
fn correct<S: Scalar>(poly: &HomogPoly3<S>, start: &Vec3<S>) -> Option<Vec3<S>> {
    let mut e = unit(*start);
    for _ in 0..20 {
        let value = poly.eval(&e);
        let g = poly.gradient(&e);
        // gradient component tangent to the sphere
        let gt = g - e * g.dot(&e);
        let gn = gt.norm_squared();
        if gn == S::zero() || !gn.is_finite() {
            return None;
        }
        let delta = gt * (value / gn);
        e = unit(e - delta);
        if delta.norm() < S::lit(1e-15) {
            return Some(e);
        }
    }
    let g = poly.gradient(&e);
    let gt = (g - e * g.dot(&e)).norm();
    ((poly.eval(&e) / gt).abs() < S::lit(1e-12)).then_some(e)
}

/// A regular real point of the curve, searched on coordinate great circles
/// starting with `e3 = 0`.
pub fn find_seed<S: Scalar>(poly: &HomogPoly3<S>) -> Result<Vec3<S>> {
    let (o, l) = (S::zero(), S::one());
    let pencils = [
        (Vec3::new(l, o, o), Vec3::new(o, l, o)),
        (Vec3::new(l, o, o), Vec3::new(o, o, l)),
        (Vec3::new(o, l, o), Vec3::new(o, o, l)),
        (Vec3::new(l, l, o), Vec3::new(o, o, l)),
        (Vec3::new(l, -l, o), Vec3::new(o, o, l)),
        (Vec3::new(l, o, l), Vec3::new(o, l, o)),
    ];
    let scale = poly.norm();
    for (a, b) in pencils {
        for (x, y) in binary_form_real_roots(&poly.restrict_to_pencil(&a, &b)) {
            let Some(e) = correct(poly, &unit(a * x + b * y)) else { continue };
            let g = poly.gradient(&e);
            if (g - e * g.dot(&e)).norm() > S::lit(1e-6) * scale {
                return Ok(e);
            }
        }
    }
    Err(Error::NoRealSeed)
}

fn dist_to_segment<S: Scalar>(p: &Vec3<S>, a: &Vec3<S>, b: &Vec3<S>) -> S {
    let ab = b - a;
    let len = ab.norm_squared();
    if len == S::zero() {
        return (p - a).norm();
    }
    let t = ((p - a).dot(&ab) / len).max(S::zero()).min(S::one());
    (p - (a + ab * t)).norm()
}

/// Follows the branch through `seed` once around and returns the polyline,
/// starting at the seed and ending where it closes (at `±seed`).
pub fn follow_branch<S: Scalar>(poly: &HomogPoly3<S>, seed: &Vec3<S>, opts: &TraceOptions) -> Result<Vec<Vec3<S>>> {
    let seed = correct(poly, seed).ok_or(Error::NoRealSeed)?;
    let mut t = tangent(poly, &seed).ok_or(Error::NoRealSeed)?;
    let max_step = S::lit(opts.max_step);
    let min_step = S::lit(opts.min_step);
    let mut step = max_step;
    let mut pts = vec![seed];
    let mut e = seed;
    let mut travelled = S::zero();
    for _ in 0..opts.max_steps {
        let accepted = correct(poly, &(e + t * step)).and_then(|next| {
            let mut tn = tangent(poly, &next)?;
            if tn.dot(&t) < S::zero() {
                tn = -tn;
            }
            let moved = (next - e).norm();
            let ok = tn.dot(&t) > S::lit(0.9) && moved < S::lit(2.0) * step && moved > S::lit(0.25) * step;
            ok.then_some((next, tn, moved))
        });
        let Some((next, tn, moved)) = accepted else {
            step /= S::lit(2.0);
            if step < min_step {
                return Err(Error::TraceFailure(format!("step size underflow after {} points", pts.len())));
            }
            continue;
        };
        if travelled > S::lit(4.0) * max_step {
            for target in [seed, -seed] {
                if dist_to_segment(&target, &e, &next) < S::lit(0.05) * step {
                    return Ok(pts);
                }
            }
        }
        travelled += moved;
        pts.push(next);
        e = next;
        t = tn;
        step = (step * S::lit(1.5)).min(max_step);
    }
    Err(Error::TraceFailure("branch did not close".into()))
}

/// `count` points spread by arc length along the closed branch through the
/// first real seed of `poly`.
pub fn sample_branch<S: Scalar>(poly: &HomogPoly3<S>, count: usize, opts: &TraceOptions) -> Result<Vec<Vec3<S>>> {
    let poly = poly.normalized();
    let seed = find_seed(&poly)?;
    let mut line = follow_branch(&poly, &seed, opts)?;
    // close the loop at whichever of ±seed the path returned to
    let last = *line.last().unwrap_or(&seed);
    let end = if (last - seed).norm() < (last + seed).norm() { seed } else { -seed };
    line.push(end);
    let mut cum = vec![S::zero()];
    for w in line.windows(2) {
        let prev = *cum.last().unwrap_or(&S::zero());
        cum.push(prev + (w[1] - w[0]).norm());
    }
    let total = *cum.last().unwrap_or(&S::zero());
    let mut out = Vec::with_capacity(count);
    let mut seg = 0;
    for k in 0..count {
        let target = total * S::from_usize(k).unwrap_or(S::zero()) / S::from_usize(count).unwrap_or(S::one());
        while seg + 2 < cum.len() && cum[seg + 1] < target {
            seg += 1;
        }
        let span = cum[seg + 1] - cum[seg];
        let frac = if span > S::zero() { (target - cum[seg]) / span } else { S::zero() };
        let guess = line[seg] + (line[seg + 1] - line[seg]) * frac;
        let p = correct(&poly, &guess).ok_or_else(|| Error::TraceFailure("resampling did not converge".into()))?;
        out.push(p);
    }
    let distinct = count_distinct(&out);
    if distinct < count {
        return Err(Error::ContinuationStall { produced: distinct, requested: count });
    }
    Ok(out)
}

fn count_distinct<S: Scalar>(pts: &[Vec3<S>]) -> usize {
    let mut n = 0;
    for (i, p) in pts.iter().enumerate() {
        let dup = pts[..i].iter().any(|q| (p - q).norm() < S::lit(1e-12) || (p + q).norm() < S::lit(1e-12));
        if !dup {
            n += 1;
        }
    }
    n
}

/// A traced self-motion with the data needed to inspect it.
#[derive(Debug, Clone, Serialize)]
pub struct SelfMotion<S: Scalar> {
    pub pentapod: Pentapod<S>,
    pub frame: LineSymmetricFrame<S>,
    /// The curve in `(e1:e2:e3)` that was traced.
    pub curve: HomogPoly3<S>,
    pub poses: Vec<StudyPose<S>>,
}

impl<S: Scalar> SelfMotion<S> {
    pub fn readings(&self) -> Result<Vec<LegReadings<S>>> {
        self.poses.iter().map(|p| self.pentapod.leg_readings(p)).collect()
    }

    /// Trajectory of the platform point with line coordinate `t`.
    pub fn trajectory(&self, t: S) -> Result<Vec<Vec3<S>>> {
        let x = self.pentapod.platform_point(t);
        self.poses.iter().map(|p| Ok(p.displacement()?.apply(&x))).collect()
    }
}

fn poses_on<S: Scalar>(pentapod: &Pentapod<S>, pts: &[Vec3<S>]) -> Result<Vec<StudyPose<S>>> {
    pts.iter().map(|e| pentapod.pose_for(e)).collect()
}

/// Traces the line-symmetric self-motion of `design` whose platform line has
/// direction `h`; `p5` and `R1` follow from `h`.
pub fn trace_motion<S: Scalar>(design: &DesignParams<S>, h: &Direction<S>, count: usize) -> Result<SelfMotion<S>> {
    if design.v == S::zero() {
        return Err(Error::SpecialCaseV0);
    }
    let frame = line_symmetric_frame(design, h);
    let p5 = p5_from_h(design, h)?;
    let legs = design.legs_for_p5(p5)?;
    let pentapod = Pentapod::from_frame(*design, legs, &frame);
    let curve = pentapod.recover_f(NodeGrid::default())?;
    let pts = sample_branch(&curve, count, &TraceOptions::default())?;
    let poses = poses_on(&pentapod, &pts)?;
    Ok(SelfMotion { pentapod, frame, curve, poses })
}

/// Traces the self-motion of a `v = 0` design. Here `F` and `G` vanish
/// identically and the motion is the leg-1 sphere condition alone, for any
/// direction `h` of the platform line.
pub fn trace_motion_special_v0<S: Scalar>(
    design: &DesignParams<S>,
    h: &Direction<S>,
    p5: S,
    r1_sq: S,
    count: usize,
) -> Result<SelfMotion<S>> {
    let legs = design.legs_special_v0(p5, r1_sq)?;
    let frame = line_symmetric_frame(design, h);
    let pentapod = Pentapod::from_frame(*design, legs, &frame);
    let curve = pentapod.recover_leg1(NodeGrid::default())?;
    let pts = sample_branch(&curve, count, &TraceOptions::default())?;
    let poses = poses_on(&pentapod, &pts)?;
    Ok(SelfMotion { pentapod, frame, curve, poses })
}

/// Range of `R1²` over the two-parameter family of poses of a `v = 0`
/// design; radii strictly inside give a real self-motion.
pub fn special_v0_r1_sq_range<S: Scalar>(design: &DesignParams<S>, h: &Direction<S>) -> Result<(S, S)> {
    let legs = design.legs_special_v0(design.a_r, S::zero())?;
    let frame = line_symmetric_frame(design, h);
    let pentapod = Pentapod::from_frame(*design, legs, &frame);
    let m1 = pentapod.m1();
    let base = design.base_m1();
    let (mut lo, mut hi) = (S::max_value().unwrap_or(S::lit(f64::MAX)), S::zero());
    let steps = 90;
    for i in 0..=steps {
        let theta = S::pi() * S::from_usize(i).unwrap_or(S::zero()) / S::from_usize(steps).unwrap_or(S::one());
        for j in 0..(2 * steps) {
            let phi = S::pi() * S::from_usize(j).unwrap_or(S::zero()) / S::from_usize(steps).unwrap_or(S::one());
            let e = Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
            let Ok(pose) = pentapod.pose_for(&e) else { continue };
            let q = (pose.displacement()?.apply(&m1) - base).norm_squared();
            lo = lo.min(q);
            hi = hi.max(q);
        }
    }
    if lo > hi {
        return Err(Error::SingularSystem);
    }
    Ok((lo, hi))
}
