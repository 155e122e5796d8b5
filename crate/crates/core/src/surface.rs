//! Basic surfaces of line-symmetric self-motions and Krames' reflection
//! construction.
//!
//! Every pose `(0, e; 0, f)` of a line-symmetric motion is the half-turn
//! about the line with direction `e` and pedal point `f × e`. These lines
//! rule the basic surface. Reflecting the platform line and the curve of
//! sphere centers in one generator exchanges the roles of the fixed and
//! moving systems, which yields a second line of points on spheres.

use serde::Serialize;

use crate::design::DesignParams;
use crate::error::{Error, Result};
use crate::geometry::sigma_p_at;
use crate::kinematics::{Direction, PluckerLine, StudyPose, Vec3};
use crate::poly::{real_roots, SparsePoly3};
use crate::scalar::Scalar;
use crate::trace::{trace_motion, SelfMotion};

/// A ruling of the basic surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Generator<S: Scalar> {
    pub line: PluckerLine<S>,
    /// `f × e`, the foot of the perpendicular from the origin.
    pub pedal: Vec3<S>,
    /// Position of the pose along the traced motion, in `[0, 1)`.
    pub sweep_param: S,
}

impl<S: Scalar> Generator<S> {
    pub fn from_pose(pose: &StudyPose<S>, sweep_param: S) -> Result<Self> {
        let line = pose.plucker_line()?;
        Ok(Self { pedal: line.pedal_point(), line, sweep_param })
    }

    pub fn point_at(&self, gamma: S) -> Vec3<S> {
        self.pedal + self.line.direction * gamma
    }
}

pub fn generators_of<S: Scalar>(motion: &SelfMotion<S>) -> Result<Vec<Generator<S>>> {
    let count = S::from_usize(motion.poses.len()).unwrap_or(S::one());
    motion
        .poses
        .iter()
        .enumerate()
        .map(|(k, p)| Generator::from_pose(p, S::from_usize(k).unwrap_or(S::zero()) / count))
        .collect()
}

pub fn generators<S: Scalar>(design: &DesignParams<S>, h: &Direction<S>, count: usize) -> Result<Vec<Generator<S>>> {
    generators_of(&trace_motion(design, h, count)?)
}

/// Grid of basic-surface points; row `j` samples generator `j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuledPatch<S: Scalar> {
    pub points: Vec<Vec<Vec3<S>>>,
    pub gamma_range: (S, S),
}

pub fn patch_from_generators<S: Scalar>(gens: &[Generator<S>], gamma_range: (S, S), n_gamma: usize) -> RuledPatch<S> {
    let (lo, hi) = gamma_range;
    let steps = S::from_usize(n_gamma.saturating_sub(1).max(1)).unwrap_or(S::one());
    let points = gens
        .iter()
        .map(|g| {
            (0..n_gamma)
                .map(|k| g.point_at(lo + (hi - lo) * S::from_usize(k).unwrap_or(S::zero()) / steps))
                .collect()
        })
        .collect();
    RuledPatch { points, gamma_range }
}

pub fn sample_basic_surface<S: Scalar>(
    design: &DesignParams<S>,
    h: &Direction<S>,
    n_gen: usize,
    gamma_range: (S, S),
    n_gamma: usize,
) -> Result<RuledPatch<S>> {
    Ok(patch_from_generators(&generators(design, h, n_gen)?, gamma_range, n_gamma))
}

#[rustfmt::skip]
const EXAMPLE_QUINTIC: [(f64, [u32; 3]); 49] = [
    (18368287.0, [5, 0, 0]),
    (-20098036.0, [4, 1, 0]),
    (25569691.0, [4, 0, 1]),
    (156741893.0, [4, 0, 0]),
    (36736574.0, [3, 2, 0]),
    (-5063828.0, [3, 1, 0]),
    (-100313675.0, [3, 0, 2]),
    (507256879.0, [3, 0, 1]),
    (193802233.0, [3, 0, 0]),
    (-40196072.0, [2, 3, 0]),
    (51139382.0, [2, 2, 1]),
    (-35065660.0, [2, 2, 0]),
    (-59658690.0, [2, 1, 2]),
    (199127898.0, [2, 1, 1]),
    (378103208.0, [2, 1, 0]),
    (-33771290.0, [2, 0, 3]),
    (-176781955.0, [2, 0, 2]),
    (1163441469.0, [2, 0, 1]),
    (-138195885.0, [2, 0, 0]),
    (18368287.0, [1, 4, 0]),
    (-5063828.0, [1, 3, 0]),
    (-100313675.0, [1, 2, 2]),
    (507256879.0, [1, 2, 1]),
    (-582502914.0, [1, 2, 0]),
    (-109272380.0, [1, 1, 2]),
    (812997056.0, [1, 1, 1]),
    (195340960.0, [1, 1, 0]),
    (-84016380.0, [1, 0, 3]),
    (34883415.0, [1, 0, 2]),
    (556424125.0, [1, 0, 1]),
    (-187188000.0, [1, 0, 0]),
    (-20098036.0, [0, 5, 0]),
    (25569691.0, [0, 4, 1]),
    (-191807553.0, [0, 4, 0]),
    (-59658690.0, [0, 3, 2]),
    (199127898.0, [0, 3, 1]),
    (-423262296.0, [0, 3, 0]),
    (-33771290.0, [0, 2, 3]),
    (96060335.0, [0, 2, 2]),
    (-28318339.0, [0, 2, 1]),
    (323499460.0, [0, 2, 0]),
    (13179040.0, [0, 1, 3]),
    (-41015170.0, [0, 1, 2]),
    (639976950.0, [0, 1, 1]),
    (-214586000.0, [0, 1, 0]),
    (-53539850.0, [0, 0, 3]),
    (115381175.0, [0, 0, 2]),
    (-211012100.0, [0, 0, 1]),
    (46930000.0, [0, 0, 0]),
];

/// Implicit equation of the basic surface for the worked example
/// (design `(-1, -5, 7, 4, 2)`, `h = (1, 3/2, 1/2)`), in fixed coordinates.
pub fn example_quintic<S: Scalar>() -> SparsePoly3<S> {
    SparsePoly3::new(EXAMPLE_QUINTIC.iter().map(|&(c, e)| (S::lit(c), e)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualStats<S> {
    pub count: usize,
    pub min: S,
    pub mean: S,
    pub max: S,
}

impl<S: Scalar> ResidualStats<S> {
    pub fn of(values: &[S]) -> Self {
        let mut stats = Self { count: values.len(), min: S::zero(), mean: S::zero(), max: S::zero() };
        if values.is_empty() {
            return stats;
        }
        stats.min = values.iter().fold(values[0], |a, &b| a.min(b));
        stats.max = values.iter().fold(values[0], |a, &b| a.max(b));
        stats.mean = values.iter().fold(S::zero(), |a, &b| a + b) / S::from_usize(values.len()).unwrap_or(S::one());
        stats
    }
}

/// `|Q(p)| / |∇Q(p)|` for the example quintic `Q`, a first-order distance
/// to the surface.
pub fn quintic_residual<S: Scalar>(points: &[Vec3<S>]) -> (Vec<S>, ResidualStats<S>) {
    let q = example_quintic::<S>();
    let values: Vec<S> = points
        .iter()
        .map(|p| {
            let g = q.gradient(p).norm();
            let v = q.eval(p).abs();
            if g > S::zero() { v / g } else { v }
        })
        .collect();
    let stats = ResidualStats::of(&values);
    (values, stats)
}

/// Number of real intersections of a line with the example quintic.
pub fn quintic_line_intersections<S: Scalar>(origin: &Vec3<S>, dir: &Vec3<S>) -> usize {
    real_roots(&example_quintic::<S>().along_line(origin, dir)).len()
}

/// Result of reflecting the platform line and sphere centers in a generator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReflectedConfig<S: Scalar> {
    pub generator: Generator<S>,
    /// Reflected platform line, fixed coordinates.
    pub p_bar: PluckerLine<S>,
    pub t_samples: Vec<S>,
    /// Reflected sphere centers, in moving coordinates.
    pub p_bar_samples: Vec<Vec3<S>>,
    /// `h1 = h2 = 0` or `h0 = 0`: the ideal point `W` lies on `p̄` and the
    /// result is a known Borel–Bricard motion.
    pub special_borel: bool,
}

pub fn is_special_borel<S: Scalar>(h: &Direction<S>) -> bool {
    let [h0, h1, h2] = h.h;
    let tol = S::lit(1e-12) * h.norm_sq().sqrt();
    h0.abs() <= tol || (h1.abs() <= tol && h2.abs() <= tol)
}

/// Reflects the platform line (in the configuration of pose `pose_index`)
/// and the sphere centers `σ(p_t)` in that pose's generator.
pub fn krames_reflect_motion<S: Scalar>(
    motion: &SelfMotion<S>,
    pose_index: usize,
    t_samples: &[S],
) -> Result<ReflectedConfig<S>> {
    let pose = motion
        .poses
        .get(pose_index)
        .ok_or_else(|| Error::Precondition(format!("pose index {pose_index} out of range")))?;
    let count = S::from_usize(motion.poses.len()).unwrap_or(S::one());
    let generator = Generator::from_pose(pose, S::from_usize(pose_index).unwrap_or(S::zero()) / count)?;
    let g = generator.line;
    let disp = pose.displacement()?;
    let pp = &motion.pentapod;
    let at = disp.apply(&pp.n);
    let p_bar = PluckerLine::through(&g.reflect(&at), &(g.reflect(&(at + disp.rotation * pp.d)) - g.reflect(&at)))?;
    let p_bar_samples = t_samples
        .iter()
        .map(|&t| Ok(disp.apply_inverse(&g.reflect(&sigma_p_at(&pp.design, t)?))))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReflectedConfig {
        generator,
        p_bar,
        t_samples: t_samples.to_vec(),
        p_bar_samples,
        special_borel: is_special_borel(&motion.frame.h),
    })
}

pub fn krames_reflect<S: Scalar>(
    design: &DesignParams<S>,
    h: &Direction<S>,
    count: usize,
    pose_index: usize,
    t_samples: &[S],
) -> Result<(SelfMotion<S>, ReflectedConfig<S>)> {
    let motion = trace_motion(design, h, count)?;
    let cfg = krames_reflect_motion(&motion, pose_index, t_samples)?;
    Ok((motion, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::Displacement;

    fn example() -> (DesignParams<f64>, Direction<f64>) {
        (DesignParams::classify(-1.0, -5.0, 7.0, 4.0, 2.0).unwrap(), Direction::new(1.0, 1.5, 0.5).unwrap())
    }

    #[test]
    fn quintic_constant_term() {
        let q = example_quintic::<f64>();
        assert_eq!(q.terms.len(), 49);
        assert_eq!(q.degree(), 5);
        assert_eq!(q.eval(&Vec3::zeros()), 46930000.0);
    }

    #[test]
    fn basic_surface_satisfies_quintic() {
        let (d, h) = example();
        let patch = sample_basic_surface(&d, &h, 50, (-10.0, 10.0), 20).unwrap();
        let pts: Vec<_> = patch.points.iter().flatten().copied().collect();
        let (_, stats) = quintic_residual(&pts);
        assert!(stats.max < 1e-6, "{stats:?}");
        // off-surface points fail clearly
        let off: Vec<_> = pts.iter().step_by(37).map(|p| p + Vec3::new(0.6, -0.5, 0.7)).collect();
        let (_, bad) = quintic_residual(&off);
        assert!(bad.min > 1e-3, "{bad:?}");
    }

    #[test]
    fn generators_are_lines_of_the_motion() {
        let (d, h) = example();
        let motion = trace_motion(&d, &h, 30).unwrap();
        let gens = generators_of(&motion).unwrap();
        let f = motion.curve.normalized();
        for (g, pose) in gens.iter().zip(&motion.poses) {
            assert!(g.line.plucker_residual().abs() < 1e-10);
            assert!(g.pedal.dot(&g.line.direction).abs() < 1e-10);
            assert!(f.eval(&g.line.direction).abs() < 1e-9);
            let ht: Displacement<f64> = g.line.half_turn();
            let disp = pose.displacement().unwrap();
            assert!((ht.rotation - disp.rotation).norm() < 1e-10);
            assert!((ht.translation - disp.translation).norm() < 1e-10);
        }
    }

    #[test]
    fn reflection_round_trip() {
        let (d, h) = example();
        let (motion, cfg) = krames_reflect(&d, &h, 30, 4, &[0.0, 1.0, 5.0]).unwrap();
        assert!(!cfg.special_borel);
        let disp = motion.poses[4].displacement().unwrap();
        let g = cfg.generator.line;
        for (t, pbar) in cfg.t_samples.iter().zip(&cfg.p_bar_samples) {
            let back = g.reflect(&disp.apply(pbar));
            assert!((back - sigma_p_at(&d, *t).unwrap()).norm() < 1e-10);
        }
        // p̄ is the platform line itself, read in fixed coordinates
        let platform = PluckerLine::through(&motion.pentapod.n, &motion.pentapod.d).unwrap();
        assert!(cfg.p_bar.coincides(&platform, 1e-9));
    }

    #[test]
    fn borel_flag() {
        assert!(is_special_borel(&Direction::new(1.0, 0.0, 0.0).unwrap()));
        assert!(is_special_borel(&Direction::new(0.0, 1.0, 2.0).unwrap()));
        assert!(!is_special_borel(&Direction::new(1.0, 1.5, 0.5).unwrap()));
    }
}
