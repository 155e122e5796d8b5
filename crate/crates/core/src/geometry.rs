//! The straight cubic circle of sphere centers and the ellipsoids traced by
//! platform points over the family of line-symmetric self-motions.
//!
//! A platform point `p_t = n + (t - a_r) d` runs on a sphere centered at
//! `P_t = σ(p_t)`. The curve of centers is a straight cubic circle whose
//! ideal point `W` belongs to `t = a4`; `t → ∞` gives `M5`. For Type 2
//! designs the circle lies in `z = 0` (its line component is not modelled).

use serde::Serialize;

use crate::design::DesignParams;
use crate::error::{Error, Result};
use crate::kinematics::{Direction, Vec3};
use crate::scalar::{tolerance, Scalar};
use crate::selfmotion::{line_symmetric_frame, p5_from_h, Pentapod};

/// Parameter of a point on the platform line, including the ideal point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LineParam<S> {
    Finite(S),
    Infinity,
}

/// Sphere center belonging to the platform point with parameter `t`.
pub fn sigma_p<S: Scalar>(design: &DesignParams<S>, t: LineParam<S>) -> Result<Vec3<S>> {
    let DesignParams { a, c, a_r, a_c, a4, .. } = *design;
    let t = match t {
        LineParam::Infinity => return Ok(Vec3::zeros()),
        LineParam::Finite(t) => t,
    };
    if t == a4 {
        return Err(Error::IdealPoint);
    }
    let q = (t - a_r) * (t - a_r) + a_c * a_c;
    Ok(Vec3::new(a * (a_r * a_r + a_c * a_c - t * a_r) / q, -a * a_c * t / q, c * a4 / (a4 - t)))
}

/// Shorthand for a finite parameter.
pub fn sigma_p_at<S: Scalar>(design: &DesignParams<S>, t: S) -> Result<Vec3<S>> {
    sigma_p(design, LineParam::Finite(t))
}

/// Common center `C` of the ellipsoids and its curve parameter `c`
/// (`None` when `a_r = a4`, where `c = ∞` and `C = M5`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CenterPoint<S: Scalar> {
    pub c: Option<S>,
    pub point: Vec3<S>,
}

pub fn center_point<S: Scalar>(design: &DesignParams<S>) -> CenterPoint<S> {
    let DesignParams { a_r, a_c, a4, .. } = *design;
    if a4 == a_r {
        return CenterPoint { c: None, point: Vec3::zeros() };
    }
    let c = (a4 * a4 - a_c * a_c - a_r * a_r) / (S::lit(2.0) * (a4 - a_r));
    // c = a4 would need a_c = 0, which classify rejects
    let point = sigma_p_at(design, c).unwrap_or_else(|_| Vec3::zeros());
    CenterPoint { c: Some(c), point }
}

/// Ellipsoid of rotation with axis parallel to z.
///
/// For `t = a4` it flattens to the disc `z = p4` of radius `equator_radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ellipsoid<S: Scalar> {
    pub center: Vec3<S>,
    pub vertex_half_length: S,
    pub equator_radius: S,
    pub degenerate_disc: bool,
}

impl<S: Scalar> Ellipsoid<S> {
    /// Value of the implicit form minus one; for the disc, the height offset
    /// from its plane (or the radial excess outside the rim).
    pub fn residual(&self, p: &Vec3<S>) -> S {
        let q = p - self.center;
        let radial_sq = q.x * q.x + q.y * q.y;
        if self.degenerate_disc {
            let excess = radial_sq.sqrt() - self.equator_radius;
            return if excess > S::zero() { q.z.abs().max(excess) } else { q.z };
        }
        radial_sq / (self.equator_radius * self.equator_radius)
            + q.z * q.z / (self.vertex_half_length * self.vertex_half_length)
            - S::one()
    }

    pub fn is_sphere(&self, tol: S) -> bool {
        (self.equator_radius - self.vertex_half_length).abs() <= tol * S::one().max(self.equator_radius)
    }

    /// Point at longitude `phi` and latitude `theta`.
    pub fn point_at(&self, theta: S, phi: S) -> Vec3<S> {
        self.center
            + Vec3::new(
                self.equator_radius * theta.cos() * phi.cos(),
                self.equator_radius * theta.cos() * phi.sin(),
                self.vertex_half_length * theta.sin(),
            )
    }
}

/// Locus of the platform point `p_t` over all self-motions of the design.
pub fn ellipsoid_for<S: Scalar>(design: &DesignParams<S>, t: S) -> Ellipsoid<S> {
    let center = center_point(design).point;
    let DesignParams { a_r, a_c, a4, .. } = *design;
    Ellipsoid {
        center,
        vertex_half_length: (a4 - t).abs(),
        equator_radius: ((a_r - t) * (a_r - t) + a_c * a_c).sqrt(),
        degenerate_disc: t == a4,
    }
}

/// Position of `p_t` in the configuration `L = 0` of the self-motion with
/// platform direction `h`.
pub fn locus_point<S: Scalar>(design: &DesignParams<S>, h: &Direction<S>, t: S) -> Result<Vec3<S>> {
    let [_, h1, h2] = h.h;
    let r = (h1 * h1 + h2 * h2).sqrt();
    if r <= tolerance::<S>() * h.norm_sq().sqrt() {
        return Err(Error::Precondition("locus needs (h1, h2) ≠ (0, 0)".into()));
    }
    let frame = line_symmetric_frame(design, h);
    let legs = if design.v == S::zero() {
        design.legs_special_v0(design.a_r, S::zero())?
    } else {
        design.legs_for_p5(p5_from_h(design, h)?)?
    };
    let pentapod = Pentapod::from_frame(*design, legs, &frame);
    let e = Vec3::new(h2 / r, -h1 / r, S::zero());
    let pose = pentapod.pose_for(&e)?;
    Ok(pose.displacement()?.apply(&pentapod.platform_point(t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn design_e() -> DesignParams<f64> {
        DesignParams::classify(-1.0, -5.0, 7.0, 4.0, 2.0).unwrap()
    }

    #[test]
    fn sigma_endpoints() {
        let d = design_e();
        assert_relative_eq!(sigma_p_at(&d, 0.0).unwrap(), d.base_m1());
        assert_eq!(sigma_p(&d, LineParam::Infinity).unwrap(), Vec3::zeros());
        assert_eq!(sigma_p_at(&d, 2.0), Err(Error::IdealPoint));
        let p = sigma_p_at(&d, 69.0 / 20.0).unwrap();
        assert_relative_eq!(p, Vec3::new(-40.85 / 28.6025, 13.8 / 28.6025, 10.0 / 1.45), epsilon = 1e-12);
        // large t approaches M5
        assert!(sigma_p_at(&d, 1e9).unwrap().norm() < 1e-7);
    }

    #[test]
    fn center_example() {
        let cp = center_point(&design_e());
        assert_relative_eq!(cp.c.unwrap(), 6.1, epsilon = 1e-14);
        assert_relative_eq!(cp.point, Vec3::new(-1.32659, 1.45152, 2.43902), epsilon = 1e-5);
        assert_relative_eq!(cp.point.z, 100.0 / 41.0, epsilon = 1e-14);
        let flat = DesignParams::classify(-1.0, -5.0, 2.0, 4.0, 2.0).unwrap();
        assert_eq!(center_point(&flat), CenterPoint { c: None, point: Vec3::zeros() });
    }

    #[test]
    fn ellipsoid_examples() {
        let d = design_e();
        let e = ellipsoid_for(&d, 69.0 / 20.0);
        assert_relative_eq!(e.vertex_half_length, 29.0 / 20.0, epsilon = 1e-15);
        assert_relative_eq!(e.equator_radius, 11441f64.sqrt() / 20.0, epsilon = 1e-15);
        let s = ellipsoid_for(&d, 6.1);
        assert!(s.is_sphere(1e-12));
        assert_relative_eq!(s.equator_radius, 4.1, epsilon = 1e-14);
        let disc = ellipsoid_for(&d, 2.0);
        assert!(disc.degenerate_disc);
        assert_relative_eq!(disc.center.z, 100.0 / 41.0, epsilon = 1e-14);
    }

    #[test]
    fn locus_on_ellipsoid() {
        let d = design_e();
        for t in [0.0, 1.0, 69.0 / 20.0, 6.1, 2.0] {
            let ell = ellipsoid_for(&d, t);
            for (h1, h2) in [(1.5, 0.5), (-0.3, 2.0), (0.7, -0.9)] {
                let h = Direction::new(1.0, h1, h2).unwrap();
                let p = locus_point(&d, &h, t).unwrap();
                assert!(ell.residual(&p).abs() < 1e-9, "t = {t}: {}", ell.residual(&p));
            }
        }
    }

    #[test]
    fn type2_circle_is_planar() {
        let d = DesignParams::classify(-1.0, 0.0, 7.0, 4.0, 0.0).unwrap();
        for t in [-3.0, 0.5, 1.0, 10.0] {
            assert_eq!(sigma_p_at(&d, t).unwrap().z, 0.0);
        }
    }
}
