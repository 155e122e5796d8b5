//! Independent checks: sphere fitting for real and complex point sets,
//! residual reports over traced motions, and the points of the worked
//! example that run on spheres.

use nalgebra::{ComplexField, DMatrix, DVector, Vector3};
use num_traits::{FromPrimitive, One, Zero};
use serde::Serialize;

use crate::design::DesignParams;
use crate::error::{Error, Result};
use crate::geometry::sigma_p_at;
use crate::kinematics::{Direction, StudyPose, Vec3};
use crate::poly::{roots_complex_coeffs, SparsePoly3};
use crate::scalar::{Complex, Scalar};
use crate::selfmotion::{LegReadings, Pentapod};
use crate::trace::{trace_motion, SelfMotion};

/// Least-squares sphere `|q - center|² = radius_sq`.
///
/// For complex points the square is the bilinear `q·q`, so the fit tests
/// the algebraic sphere condition rather than a Hermitian distance.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereFit<T: ComplexField> {
    pub center: Vector3<T>,
    pub radius_sq: T,
    /// Root mean square of `|q - center|² - radius_sq` over the points.
    pub rms_residual: T::RealField,
}

/// Sphere fit over any field; shared by the real and complex entry points.
pub fn fit_sphere_generic<T>(points: &[Vector3<T>]) -> Result<SphereFit<T>>
where
    T: ComplexField + Copy,
    T::RealField: Scalar,
{
    if points.len() < 5 {
        return Err(Error::Degenerate { rank: points.len().min(4) });
    }
    let n = T::from_real(T::RealField::from_usize(points.len()).unwrap_or(T::RealField::one()));
    let centroid = points.iter().fold(Vector3::from_element(T::zero()), |acc, p| acc + p) / n;
    let spread = points
        .iter()
        .map(|p| (p - centroid).norm_squared())
        .fold(T::RealField::zero(), |a, b| a + b)
        / n.real();
    let scale = spread.sqrt();
    if !(scale > T::RealField::zero()) {
        return Err(Error::Degenerate { rank: 1 });
    }
    let scale_t = T::from_real(scale);
    let two = T::from_real(T::RealField::lit(2.0));
    let local: Vec<Vector3<T>> = points.iter().map(|p| (p - centroid) / scale_t).collect();
    let a = DMatrix::from_fn(local.len(), 4, |r, c| if c < 3 { -two * local[r][c] } else { T::one() });
    let b = DVector::from_iterator(local.len(), local.iter().map(|q| -q.dot(q)));
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd.singular_values.iter().filter(|&&s| s > smax * T::RealField::lit(1e-10)).count();
    if rank < 4 {
        return Err(Error::Degenerate { rank });
    }
    let sol = svd.solve(&b, T::RealField::zero()).map_err(|_| Error::Degenerate { rank })?;
    let c_local = Vector3::new(sol[0], sol[1], sol[2]);
    let center = centroid + c_local * scale_t;
    let radius_sq = (c_local.dot(&c_local) - sol[3]) * scale_t * scale_t;
    let sum_sq = points.iter().fold(T::RealField::zero(), |acc, p| {
        let d = p - center;
        let r = d.dot(&d) - radius_sq;
        acc + r.modulus_squared()
    });
    Ok(SphereFit { center, radius_sq, rms_residual: (sum_sq / n.real()).sqrt() })
}

pub fn fit_sphere<S: Scalar>(points: &[Vec3<S>]) -> Result<SphereFit<S>> {
    fit_sphere_generic(points)
}

pub fn fit_sphere_complex<S: Scalar>(points: &[Vec3<Complex<S>>]) -> Result<SphereFit<Complex<S>>> {
    fit_sphere_generic(points)
}

/// The sphere condition of the moving point `x` w.r.t. center `center` and
/// radius `radius` (`e0 = 0` required).
pub fn sphere_condition<S: Scalar>(pose: &StudyPose<S>, x: &Vec3<S>, center: &Vec3<S>, radius: S) -> Result<S> {
    pose.sphere_condition(x, center, radius * radius)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReportTolerances {
    pub residual: f64,
    pub drift: f64,
}

impl Default for ReportTolerances {
    fn default() -> Self {
        Self { residual: 1e-9, drift: 1e-8 }
    }
}

/// Per-quantity maxima over the poses of a motion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub count: usize,
    pub study_quadric: f64,
    pub e0: f64,
    pub f0: f64,
    pub omega2: f64,
    pub omega3: f64,
    pub omega4: f64,
    pub pi5: f64,
    pub leg_drift: f64,
    pub tolerances: ReportTolerances,
    /// True when there were no poses to check.
    pub vacuous: bool,
    pub pass: bool,
}

pub fn motion_residual_report<S: Scalar>(
    pentapod: &Pentapod<S>,
    poses: &[StudyPose<S>],
    tol: ReportTolerances,
) -> Result<ResidualReport> {
    let mut r = ResidualReport {
        count: poses.len(),
        study_quadric: 0.0,
        e0: 0.0,
        f0: 0.0,
        omega2: 0.0,
        omega3: 0.0,
        omega4: 0.0,
        pi5: 0.0,
        leg_drift: 0.0,
        tolerances: tol,
        vacuous: poses.is_empty(),
        pass: true,
    };
    let mut reference: Option<LegReadings<S>> = None;
    for pose in poses {
        let p = pose.normalized()?;
        let c = pentapod.constraint_residuals(&p)?;
        let readings = pentapod.leg_readings(&p)?;
        let upd = |slot: &mut f64, v: S| *slot = slot.max(v.abs().to_f64_lossy());
        upd(&mut r.study_quadric, c.psi);
        upd(&mut r.e0, p.e[0]);
        upd(&mut r.f0, p.f[0]);
        upd(&mut r.omega2, c.omega2.re.abs().max(c.omega2.im.abs()));
        upd(&mut r.omega3, c.omega3.re.abs().max(c.omega3.im.abs()));
        upd(&mut r.omega4, c.omega4);
        upd(&mut r.pi5, c.pi5);
        let base = *reference.get_or_insert(readings);
        upd(&mut r.leg_drift, readings.drift(&base));
    }
    let worst = [r.study_quadric, r.e0, r.f0, r.omega2, r.omega3, r.omega4, r.pi5].into_iter().fold(0.0, f64::max);
    r.pass = worst <= tol.residual && r.leg_drift <= tol.drift;
    Ok(r)
}

pub fn motion_report<S: Scalar>(motion: &SelfMotion<S>, tol: ReportTolerances) -> Result<ResidualReport> {
    motion_residual_report(&motion.pentapod, &motion.poses, tol)
}

/// Sphere fit of the trajectory of a moving point over a motion.
pub fn trajectory_fit<S: Scalar>(poses: &[StudyPose<S>], x: &Vec3<S>) -> Result<SphereFit<S>> {
    let pts = poses.iter().map(|p| Ok(p.displacement()?.apply(x))).collect::<Result<Vec<_>>>()?;
    fit_sphere(&pts)
}

pub fn trajectory_fit_complex<S: Scalar>(poses: &[StudyPose<S>], x: &Vec3<Complex<S>>) -> Result<SphereFit<Complex<S>>> {
    let pts = poses.iter().map(|p| Ok(p.displacement()?.apply_complex(x))).collect::<Result<Vec<_>>>()?;
    fit_sphere_complex(&pts)
}

fn re_poly<S: Scalar>() -> SparsePoly3<S> {
    // variables (y, z, unused)
    let t: [(f64, [u32; 3]); 10] = [
        (274400.0, [3, 0, 0]),
        (3374238.0, [1, 1, 0]),
        (13169366.0, [0, 1, 0]),
        (3927840.0, [2, 0, 0]),
        (-30870.0, [2, 1, 0]),
        (-5472908.0, [0, 2, 0]),
        (-1165514.0, [1, 2, 0]),
        (15910300.0, [1, 0, 0]),
        (113190.0, [0, 3, 0]),
        (17761620.0, [0, 0, 0]),
    ];
    SparsePoly3::new(t.iter().map(|&(c, e)| (S::lit(c), e)).collect())
}

fn im_poly<S: Scalar>() -> SparsePoly3<S> {
    let t: [(f64, [u32; 3]); 9] = [
        (984410.0, [2, 1, 0]),
        (-1840195.0, [2, 0, 0]),
        (9573816.0, [1, 1, 0]),
        (-115248.0, [1, 2, 0]),
        (-15809850.0, [1, 0, 0]),
        (-29479660.0, [0, 0, 0]),
        (817369.0, [0, 2, 0]),
        (20061237.0, [0, 1, 0]),
        (-408170.0, [0, 3, 0]),
    ];
    SparsePoly3::new(t.iter().map(|&(c, e)| (S::lit(c), e)).collect())
}

/// Points of the isotropic plane `ε1` (`sign = 1`) or `ε2` (`sign = -1`)
/// of the worked example, given by `y` and `z`.
pub fn isotropic_point<S: Scalar>(sign: S, y: Complex<S>, z: Complex<S>) -> Vec3<Complex<S>> {
    let c = |v: f64| Complex::from(S::lit(v));
    let i = Complex::new(S::zero(), sign);
    let x = (c(84.0) * y + c(126.0) * z + c(122.0) - i * (c(147.0) * y - c(98.0) * z + c(714.0))) / c(91.0);
    Vector3::new(x, y, z)
}

/// Points of the imaginary cubic `ℜ + sign·i ℑ = 0` in the plane of the same sign.
pub fn imaginary_cubic_points<S: Scalar>(sign: S, ys: &[Complex<S>]) -> Vec<Vec3<Complex<S>>> {
    let cubic = re_poly::<S>().complexify(&im_poly::<S>(), sign);
    let (zero, one) = (Complex::from(S::zero()), Complex::from(S::one()));
    let mut out = Vec::new();
    for &y in ys {
        let coeffs = cubic.along_line(&Vector3::new(y, zero, zero), &Vector3::new(zero, one, zero));
        for z in roots_complex_coeffs(&coeffs) {
            out.push(isotropic_point(sign, y, z));
        }
    }
    out
}

/// Outcome of the spherical-point checks on the worked example.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImaginaryCubicsReport {
    pub poses: usize,
    /// Complex sphere-fit rms for points on the cubic in ε1 and ε2.
    pub eps1_rms: Vec<f64>,
    pub eps2_rms: Vec<f64>,
    /// Smallest rms among points of ε1, ε2 moved off their cubic.
    pub off_curve_min_rms: f64,
    /// For points of the line `p`: parameter `t`, fit rms and distance of
    /// the fitted center from `σ(p_t)`.
    pub line_p: Vec<(f64, f64, f64)>,
    pub generic_rms: f64,
    pub pass: bool,
}

pub fn imaginary_cubics_check_with(motion: &SelfMotion<f64>, per_plane: usize) -> Result<ImaginaryCubicsReport> {
    let ys = [
        Complex::new(0.3, 0.1),
        Complex::new(-1.2, 0.5),
        Complex::new(2.0, -0.3),
        Complex::new(0.7, 0.9),
    ];
    let mut eps = [Vec::new(), Vec::new()];
    let mut off = f64::MAX;
    for (slot, sign) in [(0, 1.0), (1, -1.0)] {
        for x in imaginary_cubic_points(sign, &ys).into_iter().take(per_plane) {
            eps[slot].push(trajectory_fit_complex(&motion.poses, &x)?.rms_residual);
            let shifted = isotropic_point(sign, x.y, x.z + Complex::new(0.5, 0.0));
            off = off.min(trajectory_fit_complex(&motion.poses, &shifted)?.rms_residual);
        }
    }
    let design = motion.pentapod.design;
    let mut line_p = Vec::new();
    for t in [-1.0, 0.0, 1.0, 3.45, 5.0, 9.0] {
        let fit = trajectory_fit(&motion.poses, &motion.pentapod.platform_point(t))?;
        let err = (fit.center - sigma_p_at(&design, t)?).norm();
        line_p.push((t, fit.rms_residual, err));
    }
    let generic_rms = trajectory_fit(&motion.poses, &Vec3::new(0.3, 1.0, -2.0))?.rms_residual;
    let worst = eps.iter().flatten().fold(0.0_f64, |a, &b| a.max(b));
    let line_ok = line_p.iter().all(|&(_, rms, err)| rms <= 1e-8 && err <= 1e-8);
    let pass = worst <= 1e-8 && off >= 1e4 * worst.max(1e-12) && line_ok && generic_rms > 1e-4;
    Ok(ImaginaryCubicsReport {
        poses: motion.poses.len(),
        eps1_rms: eps[0].clone(),
        eps2_rms: eps[1].clone(),
        off_curve_min_rms: off,
        line_p,
        generic_rms,
        pass,
    })
}

/// The worked example: design `(-1, -5, 7, 4, 2)` with `h = (1, 3/2, 1/2)`.
pub fn worked_example() -> Result<(DesignParams<f64>, Direction<f64>)> {
    Ok((DesignParams::classify(-1.0, -5.0, 7.0, 4.0, 2.0)?, Direction::new(1.0, 1.5, 0.5)?))
}

pub fn imaginary_cubics_check() -> Result<ImaginaryCubicsReport> {
    let (design, h) = worked_example()?;
    let motion = trace_motion(&design, &h, 60)?;
    imaginary_cubics_check_with(&motion, 8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unit_sphere_axes() {
        let pts: Vec<Vec3<f64>> = [
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ]
        .iter()
        .map(|p| Vec3::from_column_slice(p))
        .collect();
        let fit = fit_sphere(&pts).unwrap();
        assert!(fit.center.norm() < 1e-14);
        assert_relative_eq!(fit.radius_sq, 1.0, epsilon = 1e-14);
        assert!(fit.rms_residual < 1e-14);
    }

    #[test]
    fn coplanar_is_degenerate() {
        let pts: Vec<Vec3<f64>> = (0..5).map(|k| Vec3::new(k as f64, (k * k) as f64, 2.0)).collect();
        assert!(matches!(fit_sphere(&pts), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn sphere_condition_matches_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let mut v = || rng.random_range(-2.0_f64..2.0);
            let e = Vec3::new(v(), v(), v());
            let (a, b) = (Vec3::new(v(), v(), v()), v());
            // f with e·f = 0
            let f = a - e * (a.dot(&e) / e.norm_squared());
            let pose = StudyPose::with_zero_e0(e, b, f).normalized().unwrap();
            let (x, c, r) = (Vec3::new(v(), v(), v()), Vec3::new(v(), v(), v()), v().abs());
            let d = pose.displacement().unwrap();
            let expect = (d.apply(&x) - c).norm_squared() - r * r;
            let got = sphere_condition(&pose, &x, &c, r).unwrap();
            assert!((got - expect).abs() < 1e-10 * (1.0 + expect.abs()));
        }
    }

    #[test]
    fn report_flags_perturbation() {
        let (d, h) = worked_example().unwrap();
        let motion = trace_motion(&d, &h, 50).unwrap();
        let ok = motion_report(&motion, ReportTolerances::default()).unwrap();
        assert!(ok.pass, "{ok:?}");
        let bad: Vec<_> = motion
            .poses
            .iter()
            .map(|p| {
                let mut q = *p;
                q.f[1] += 1e-3;
                q
            })
            .collect();
        let rep = motion_residual_report(&motion.pentapod, &bad, ReportTolerances::default()).unwrap();
        assert!(!rep.pass);
        assert!(rep.study_quadric > 1e-6 || rep.omega2 > 1e-6);
        let empty = motion_residual_report(&motion.pentapod, &[], ReportTolerances::default()).unwrap();
        assert!(empty.pass && empty.vacuous && empty.count == 0);
    }

    #[test]
    fn worked_example_spherical_points() {
        let rep = imaginary_cubics_check().unwrap();
        eprintln!("{rep:?}");
        assert!(rep.pass);
    }
}
