//! Study-parameter displacements, lines in Plücker form and half-turns.
//!
//! A pose is a point `(e0:e1:e2:e3:f0:f1:f2:f3)` of the Study quadric
//! `e0 f0 + e1 f1 + e2 f2 + e3 f3 = 0`. For `N = e0² + e1² + e2² + e3² = 1`
//! it acts on points as `x ↦ R x + s` with
//!
//! ```text
//! s = -2 (e0 f - f0 e + e × f)
//! R = (e0² - e·e) I + 2 e eᵀ + 2 e0 [e]×
//! ```
//!
//! where `e = (e1, e2, e3)` and `f = (f1, f2, f3)`. Poses with `e0 = f0 = 0`
//! are half-turns about the line whose direction is `e` and whose pedal point
//! (foot of the perpendicular from the origin) is `f × e`.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{tolerance, Complex, Scalar};

pub type Vec3<S> = Vector3<S>;

/// Projective Study parameters of a spatial displacement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StudyPose<S> {
    pub e: [S; 4],
    pub f: [S; 4],
}

impl<S: Scalar> StudyPose<S> {
    pub fn new(e: [S; 4], f: [S; 4]) -> Self {
        Self { e, f }
    }

    /// Pose with `e0 = 0`, the chart used by line-symmetric motions.
    pub fn with_zero_e0(e: Vec3<S>, f0: S, f: Vec3<S>) -> Self {
        Self::new([S::zero(), e.x, e.y, e.z], [f0, f.x, f.y, f.z])
    }

    /// `N = e0² + e1² + e2² + e3²`.
    pub fn rotation_norm(&self) -> S {
        self.e.iter().fold(S::zero(), |acc, &x| acc + x * x)
    }

    /// Value of the Study quadric `Σ ei fi`.
    pub fn quadric_residual(&self) -> S {
        self.e
            .iter()
            .zip(self.f.iter())
            .fold(S::zero(), |acc, (&a, &b)| acc + a * b)
    }

    pub fn e_vec(&self) -> Vec3<S> {
        Vec3::new(self.e[1], self.e[2], self.e[3])
    }

    pub fn f_vec(&self) -> Vec3<S> {
        Vec3::new(self.f[1], self.f[2], self.f[3])
    }

    pub fn scaled(&self, k: S) -> Self {
        Self::new(self.e.map(|x| x * k), self.f.map(|x| x * k))
    }

    /// Representative with `N = 1` and first nonzero e-component positive.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.rotation_norm();
        if !(n > tolerance::<S>() * tolerance::<S>()) {
            return Err(Error::ZeroNorm);
        }
        let mut k = S::one() / n.sqrt();
        let eps = tolerance::<S>();
        if let Some(first) = self.e.iter().find(|x| x.abs() * k > eps) {
            if *first < S::zero() {
                k = -k;
            }
        }
        Ok(self.scaled(k))
    }

    /// `(R, s)` evaluated on the raw parameters, both scaled by `N`.
    ///
    /// These are the homogeneous quadratic forms behind the displacement;
    /// constraint equations are written with them.
    pub fn unnormalized_action(&self) -> (Matrix3<S>, Vec3<S>) {
        let [e0, e1, e2, e3] = self.e;
        let [f0, f1, f2, f3] = self.f;
        let two = S::lit(2.0);
        let translation = Vec3::new(
            -two * (e0 * f1 - e1 * f0 + e2 * f3 - e3 * f2),
            -two * (e0 * f2 - e2 * f0 + e3 * f1 - e1 * f3),
            -two * (e0 * f3 - e3 * f0 + e1 * f2 - e2 * f1),
        );
        #[rustfmt::skip]
        let rotation = Matrix3::new(
            e0 * e0 + e1 * e1 - e2 * e2 - e3 * e3, two * (e1 * e2 - e0 * e3), two * (e1 * e3 + e0 * e2),
            two * (e1 * e2 + e0 * e3), e0 * e0 - e1 * e1 + e2 * e2 - e3 * e3, two * (e2 * e3 - e0 * e1),
            two * (e1 * e3 - e0 * e2), two * (e2 * e3 + e0 * e1), e0 * e0 - e1 * e1 - e2 * e2 + e3 * e3,
        );
        (rotation, translation)
    }

    /// Rigid displacement of the normalized pose.
    pub fn displacement(&self) -> Result<Displacement<S>> {
        let (rotation, translation) = self.normalized()?.unnormalized_action();
        Ok(Displacement { rotation, translation })
    }

    /// Sphere condition for `e0 = 0`: vanishes iff the moving point `x` is
    /// carried onto the sphere with center `center` and radius² `r_sq`.
    /// Equals `N (|R x + s - center|² - r_sq)` for the normalized action.
    pub fn sphere_condition(&self, x: &Vec3<S>, center: &Vec3<S>, r_sq: S) -> Result<S> {
        if self.e[0].abs() > tolerance::<S>() * self.rotation_norm().sqrt() {
            return Err(Error::Precondition("sphere condition form assumes e0 = 0".into()));
        }
        let [_, e1, e2, e3] = self.e;
        let [f0, f1, f2, f3] = self.f;
        let (x, y, z) = (x.x, x.y, x.z);
        let (cx, cy, cz) = (center.x, center.y, center.z);
        let two = S::lit(2.0);
        let four = S::lit(4.0);
        let value = (x * x + y * y + z * z + cx * cx + cy * cy + cz * cz - r_sq) * (e1 * e1 + e2 * e2 + e3 * e3)
            + four * (f0 * f0 + f1 * f1 + f2 * f2 + f3 * f3)
            - two * (x * cx - y * cy - z * cz) * e1 * e1
            + two * (x * cx - y * cy + z * cz) * e2 * e2
            + two * (x * cx + y * cy - z * cz) * e3 * e3
            - four * (y * cx + x * cy) * e1 * e2
            - four * (z * cx + x * cz) * e1 * e3
            - four * (z * cy + y * cz) * e2 * e3
            - four * (x + cx) * (e3 * f2 - e2 * f3)
            - four * (y + cy) * (e1 * f3 - e3 * f1)
            - four * (z + cz) * (e2 * f1 - e1 * f2)
            + four * (x - cx) * e1 * f0
            + four * (y - cy) * e2 * f0
            + four * (z - cz) * e3 * f0;
        Ok(value)
    }

    /// Generator line of a line-symmetric pose (`e0 = f0 = 0`).
    ///
    /// The line is returned with unit direction and first nonzero direction
    /// component positive; its moment uses the Study convention, so the pedal
    /// point is `f × e`.
    pub fn plucker_line(&self) -> Result<PluckerLine<S>> {
        let p = self.normalized()?;
        let tol = tolerance::<S>();
        let fscale = S::one().max(p.f_vec().norm());
        if p.e[0].abs() > tol || p.f[0].abs() > tol * fscale {
            return Err(Error::NotLineSymmetric {
                e0: p.e[0].to_f64_lossy(),
                f0: p.f[0].to_f64_lossy(),
            });
        }
        PluckerLine::new(p.e_vec(), p.f_vec())
    }
}

/// `x ↦ R x + s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Displacement<S: Scalar> {
    pub rotation: Matrix3<S>,
    pub translation: Vec3<S>,
}

impl<S: Scalar> Displacement<S> {
    pub fn identity() -> Self {
        Self { rotation: Matrix3::identity(), translation: Vec3::zeros() }
    }

    pub fn apply(&self, p: &Vec3<S>) -> Vec3<S> {
        self.rotation * p + self.translation
    }

    /// Action on a point with complex coordinates (bilinear, no conjugation).
    pub fn apply_complex(&self, p: &Vec3<Complex<S>>) -> Vec3<Complex<S>> {
        let r = self.rotation.map(Complex::from);
        r * p + self.translation.map(Complex::from)
    }

    /// Preimage of a point in the fixed frame.
    pub fn apply_inverse(&self, q: &Vec3<S>) -> Vec3<S> {
        self.rotation.transpose() * (q - self.translation)
    }

    /// `max(|RᵀR - I|_max, |det R - 1|)`.
    pub fn orthogonality_residual(&self) -> S {
        let gram = self.rotation.transpose() * self.rotation - Matrix3::identity();
        gram.amax().max((self.rotation.determinant() - S::one()).abs())
    }
}

/// Oriented line with unit direction `e` and Study-convention moment `f`
/// (`e · f = 0`, pedal point `f × e`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PluckerLine<S: Scalar> {
    pub direction: Vec3<S>,
    pub moment: Vec3<S>,
}

impl<S: Scalar> PluckerLine<S> {
    /// Builds a line from any representative `(e; f)`; rescales so `|e| = 1`
    /// with the first nonzero component of `e` positive.
    pub fn new(direction: Vec3<S>, moment: Vec3<S>) -> Result<Self> {
        let len = direction.norm();
        if !(len > S::zero()) {
            return Err(Error::Precondition("line direction must be nonzero".into()));
        }
        let tol = tolerance::<S>();
        if direction.dot(&moment).abs() > tol * len * S::one().max(moment.norm()) {
            return Err(Error::Precondition("Plücker condition e·f = 0 violated".into()));
        }
        let mut k = S::one() / len;
        if let Some(first) = direction.iter().find(|x| x.abs() * k > tol) {
            if *first < S::zero() {
                k = -k;
            }
        }
        Ok(Self { direction: direction * k, moment: moment * k })
    }

    /// Line through `point` with direction `direction`.
    pub fn through(point: &Vec3<S>, direction: &Vec3<S>) -> Result<Self> {
        let len = direction.norm();
        if !(len > S::zero()) {
            return Err(Error::Precondition("line direction must be nonzero".into()));
        }
        let e = direction / len;
        Self::new(e, e.cross(point))
    }

    /// Foot of the perpendicular from the origin.
    pub fn pedal_point(&self) -> Vec3<S> {
        self.moment.cross(&self.direction)
    }

    pub fn point_at(&self, gamma: S) -> Vec3<S> {
        self.pedal_point() + self.direction * gamma
    }

    pub fn plucker_residual(&self) -> S {
        self.direction.dot(&self.moment)
    }

    pub fn distance_to(&self, p: &Vec3<S>) -> S {
        let q = p - self.pedal_point();
        (q - self.direction * q.dot(&self.direction)).norm()
    }

    /// Half-turn of `p` about the line.
    pub fn reflect(&self, p: &Vec3<S>) -> Vec3<S> {
        let q = self.pedal_point();
        let rel = p - q;
        let foot = q + self.direction * rel.dot(&self.direction);
        foot * S::lit(2.0) - p
    }

    /// The half-turn as a displacement: `R = 2 e eᵀ - I`, `s = 2 q`.
    pub fn half_turn(&self) -> Displacement<S> {
        let e = self.direction;
        Displacement {
            rotation: e * e.transpose() * S::lit(2.0) - Matrix3::identity(),
            translation: self.pedal_point() * S::lit(2.0),
        }
    }

    /// Image of this line under a displacement.
    pub fn transformed(&self, d: &Displacement<S>) -> Result<Self> {
        let p = d.apply(&self.pedal_point());
        Self::through(&p, &(d.rotation * self.direction))
    }

    /// Whether both lines coincide as point sets.
    pub fn coincides(&self, other: &Self, tol: S) -> bool {
        let parallel = self.direction.cross(&other.direction).norm() <= tol;
        parallel && self.distance_to(&other.pedal_point()) <= tol * S::one().max(self.pedal_point().norm())
    }
}

/// Homogeneous parameters `(h0:h1:h2)` of a direction on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Direction<S> {
    pub h: [S; 3],
}

impl<S: Scalar> Direction<S> {
    pub fn new(h0: S, h1: S, h2: S) -> Result<Self> {
        if h0 == S::zero() && h1 == S::zero() && h2 == S::zero() {
            return Err(Error::AllZero);
        }
        Ok(Self { h: [h0, h1, h2] })
    }

    /// `h0² + h1² + h2²`.
    pub fn norm_sq(&self) -> S {
        self.h.iter().fold(S::zero(), |acc, &x| acc + x * x)
    }

    /// Unit vector `d` of the rational sphere parametrization.
    pub fn unit(&self) -> Vec3<S> {
        let [h0, h1, h2] = self.h;
        let two = S::lit(2.0);
        let den = self.norm_sq();
        Vec3::new(two * h0 * h1 / den, two * h0 * h2 / den, (h1 * h1 + h2 * h2 - h0 * h0) / den)
    }

    /// True when `(self)` and `other` are the same projective point.
    pub fn same_as(&self, other: &Self, tol: S) -> bool {
        let a = Vec3::from(self.h);
        let b = Vec3::from(other.h);
        a.cross(&b).norm() <= tol * a.norm() * b.norm()
    }
}

/// Unit vector for `(h0:h1:h2)`.
pub fn direction_from_h<S: Scalar>(h0: S, h1: S, h2: S) -> Result<Vec3<S>> {
    Ok(Direction::new(h0, h1, h2)?.unit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pose(e: [f64; 4], f: [f64; 4]) -> StudyPose<f64> {
        StudyPose::new(e, f)
    }

    #[test]
    fn identity_pose() {
        let d = pose([1.0, 0.0, 0.0, 0.0], [0.0; 4]).displacement().unwrap();
        assert_relative_eq!(d.rotation, Matrix3::identity());
        assert_relative_eq!(d.translation, Vec3::zeros());
    }

    #[test]
    fn half_turn_about_z() {
        let d = pose([0.0, 0.0, 0.0, 1.0], [0.0; 4]).displacement().unwrap();
        assert_relative_eq!(d.rotation, Matrix3::from_diagonal(&Vec3::new(-1.0, -1.0, 1.0)));
        assert_relative_eq!(d.translation, Vec3::zeros());
    }

    #[test]
    fn translated_half_turn_about_z() {
        // s2 = -2 (e3 f1) = -2
        let d = pose([0.0, 0.0, 0.0, 1.0], [0.0, 1.0, 0.0, 0.0]).displacement().unwrap();
        assert_relative_eq!(d.rotation, Matrix3::from_diagonal(&Vec3::new(-1.0, -1.0, 1.0)));
        assert_relative_eq!(d.translation, Vec3::new(0.0, -2.0, 0.0));
    }

    #[test]
    fn zero_norm_rejected() {
        let err = pose([0.0; 4], [1.0, 0.0, 0.0, 0.0]).displacement().unwrap_err();
        assert_eq!(err, Error::ZeroNorm);
    }

    #[test]
    fn z_axis_line() {
        let l = pose([0.0, 0.0, 0.0, 1.0], [0.0; 4]).plucker_line().unwrap();
        assert_relative_eq!(l.direction, Vec3::new(0.0, 0.0, 1.0));
        assert_relative_eq!(l.moment, Vec3::zeros());
    }

    #[test]
    fn x_parallel_line() {
        let p = pose([0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]);
        let l = p.plucker_line().unwrap();
        assert_relative_eq!(l.direction, Vec3::new(1.0, 0.0, 0.0));
        assert_relative_eq!(l.moment, Vec3::new(0.0, 0.0, 1.0));
        // s = (0, 2, 0) and R = diag(1, -1, -1): the half-turn axis passes through (0, 1, 0)
        assert_relative_eq!(l.pedal_point(), Vec3::new(0.0, 1.0, 0.0));
        let d = p.displacement().unwrap();
        let h = l.half_turn();
        assert_relative_eq!(d.rotation, h.rotation, epsilon = 1e-12);
        assert_relative_eq!(d.translation, h.translation, epsilon = 1e-12);
    }

    #[test]
    fn identity_is_not_line_symmetric() {
        let err = pose([1.0, 0.0, 0.0, 0.0], [0.0; 4]).plucker_line().unwrap_err();
        assert!(matches!(err, Error::NotLineSymmetric { .. }));
    }

    #[test]
    fn reflections_about_z() {
        let l = PluckerLine::new(Vec3::new(0.0, 0.0, 1.0), Vec3::zeros()).unwrap();
        assert_relative_eq!(l.reflect(&Vec3::new(1.0, 0.0, 0.0)), Vec3::new(-1.0, 0.0, 0.0));
        assert_relative_eq!(l.reflect(&Vec3::new(1.0, 2.0, 3.0)), Vec3::new(-1.0, -2.0, 3.0));
        let on = Vec3::new(0.0, 0.0, -4.5);
        assert_relative_eq!(l.reflect(&on), on);
    }

    #[test]
    fn directions() {
        assert_relative_eq!(direction_from_h(1.0, 0.0, 0.0).unwrap(), Vec3::new(0.0, 0.0, -1.0));
        assert_relative_eq!(direction_from_h(0.0, 1.0, 0.0).unwrap(), Vec3::new(0.0, 0.0, 1.0));
        assert_relative_eq!(
            direction_from_h(1.0, 1.5, 0.5).unwrap(),
            Vec3::new(6.0 / 7.0, 2.0 / 7.0, 3.0 / 7.0),
            epsilon = 1e-15
        );
        assert_eq!(direction_from_h(0.0, 0.0, 0.0).unwrap_err(), Error::AllZero);
    }

    #[test]
    fn single_precision_smoke() {
        let d = direction_from_h(1.0_f32, 1.5, 0.5).unwrap();
        assert!((d.norm() - 1.0).abs() < 1e-6);
        let m = StudyPose::<f32>::new([0.0, 0.0, 0.0, 1.0], [0.0; 4]).displacement().unwrap();
        assert!(m.orthogonality_residual() < 1e-6);
    }

    #[test]
    fn through_point_roundtrip() {
        let p = Vec3::new(1.0_f64, -2.0, 0.5);
        let l = PluckerLine::through(&p, &Vec3::new(0.0, 3.0, 4.0)).unwrap();
        assert!(l.distance_to(&p) < 1e-14);
        assert!(l.plucker_residual().abs() < 1e-14);
        assert!(l.pedal_point().dot(&l.direction).abs() < 1e-14);
    }
}
