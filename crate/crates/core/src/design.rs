//! Pentapod geometry in the canonical frames and leg-parameter synthesis.
//!
//! Base: `M5 = (0,0,0)`, `M1 = (A,0,C)`, `M2`, `M3` the ideal points in
//! direction `(1, ±i, 0)` and `M4` the ideal point of the z-axis.
//! Platform: `m_i = n + (a_i - a_r) d` with `a1 = 0`, `a2,3 = a_r ± i a_c`,
//! and `m5` the ideal point of the carrier line in direction `d`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kinematics::{Direction, Vec3};
use crate::scalar::{tolerance, Complex, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PentapodType {
    Type1,
    Type2,
}

/// The five design numbers plus the derived `v = a2 + a3 - 2 a4` and
/// `w = a2 a3 - a4²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DesignParams<S> {
    pub a: S,
    pub c: S,
    pub a_r: S,
    pub a_c: S,
    pub a4: S,
    pub v: S,
    pub w: S,
    pub ptype: PentapodType,
}

impl<S: Scalar> DesignParams<S> {
    /// Validates the design and classifies it as Type 1 or Type 2.
    pub fn classify(a: S, c: S, a_r: S, a_c: S, a4: S) -> Result<Self> {
        if [a, c, a_r, a_c, a4].iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidDesign("non-finite design parameter"));
        }
        if a == S::zero() {
            return Err(Error::InvalidDesign("A = 0"));
        }
        if a_c == S::zero() {
            return Err(Error::InvalidDesign("a_c = 0"));
        }
        let ptype = match (a4 == S::zero(), c == S::zero()) {
            (false, false) => PentapodType::Type1,
            (true, true) => PentapodType::Type2,
            _ => return Err(Error::UnsupportedType),
        };
        let v = S::lit(2.0) * (a_r - a4);
        let w = a_r * a_r + a_c * a_c - a4 * a4;
        let design = Self { a, c, a_r, a_c, a4, v, w, ptype };
        debug_assert!({
            let (a2, a3, a4c) = (design.a2(), design.a3(), Complex::from(a4));
            let vc = a2 + a3 - a4c * S::lit(2.0);
            let wc = a2 * a3 - a4c * a4c;
            let tol = tolerance::<S>() * S::one().max(w.abs());
            (vc.re - v).abs() <= tol && (wc.re - w).abs() <= tol && vc.im == S::zero()
        });
        Ok(design)
    }

    pub fn a2(&self) -> Complex<S> {
        Complex::new(self.a_r, self.a_c)
    }

    pub fn a3(&self) -> Complex<S> {
        Complex::new(self.a_r, -self.a_c)
    }

    /// `(a2 - a4)(a3 - a4) = (a_r - a4)² + a_c²`, positive for valid designs.
    pub fn k(&self) -> S {
        let dr = self.a_r - self.a4;
        dr * dr + self.a_c * self.a_c
    }

    pub fn base_m1(&self) -> Vec3<S> {
        Vec3::new(self.a, S::zero(), self.c)
    }

    pub fn base_m5(&self) -> Vec3<S> {
        Vec3::zeros()
    }

    /// Design with every length multiplied by `kappa`.
    pub fn scaled(&self, kappa: S) -> Result<Self> {
        Self::classify(self.a * kappa, self.c * kappa, self.a_r * kappa, self.a_c * kappa, self.a4 * kappa)
    }

    /// Darboux offsets `(p2, p3, p4)` forced by self-mobility.
    pub fn darboux_offsets(&self) -> DarbouxOffsets<S> {
        let a4 = Complex::from(self.a4);
        let (a2, a3) = (self.a2(), self.a3());
        let av = Complex::from(self.a * self.v);
        let p2 = av * a3 / ((a3 - a4) * (a3 - a4));
        let p3 = av * a2 / ((a2 - a4) * (a2 - a4));
        let p4 = -self.c * self.a4 * self.v / self.k();
        DarbouxOffsets { p2, p3, p4 }
    }

    /// Left side of the leg condition linking `p5` and `R1²`.
    pub fn leg_condition_residual(&self, p5: S, r1_sq: S) -> S {
        let k = self.k();
        let two = S::lit(2.0);
        k * k * (two * self.w * p5 - self.v * r1_sq - (two * self.w - self.v * self.a4) * self.a4)
            + self.v * self.w * self.w * (self.a * self.a + self.c * self.c)
    }

    /// `R1²` consistent with `p5` (may be negative).
    pub fn r1_sq_from_p5(&self, p5: S) -> Result<S> {
        if self.v == S::zero() {
            return Err(Error::SpecialCaseV0);
        }
        let k = self.k();
        let two = S::lit(2.0);
        let rhs = two * self.w * p5 - (two * self.w - self.v * self.a4) * self.a4
            + self.v * self.w * self.w * (self.a * self.a + self.c * self.c) / (k * k);
        Ok(rhs / self.v)
    }

    /// `p5` consistent with `R1²`.
    pub fn p5_from_r1_sq(&self, r1_sq: S) -> Result<S> {
        if self.v == S::zero() {
            return Err(Error::SpecialCaseV0);
        }
        if self.w == S::zero() {
            return Err(Error::Precondition("w = 0: p5 is free and R1 = |a4| is forced".into()));
        }
        let k = self.k();
        let two = S::lit(2.0);
        let num = self.v * r1_sq + (two * self.w - self.v * self.a4) * self.a4
            - self.v * self.w * self.w * (self.a * self.a + self.c * self.c) / (k * k);
        Ok(num / (two * self.w))
    }

    /// Complete leg data for a given `p5` (general case `v ≠ 0`).
    pub fn legs_for_p5(&self, p5: S) -> Result<LegParams<S>> {
        let r1_sq = self.r1_sq_from_p5(p5)?;
        Ok(LegParams::new(self.darboux_offsets(), p5, r1_sq))
    }

    /// Leg data for the `v = 0` case, where `p5 = a4 = a_r` and `R1` is free.
    pub fn legs_special_v0(&self, p5: S, r1_sq: S) -> Result<LegParams<S>> {
        if self.v != S::zero() {
            return Err(Error::Precondition("design has v ≠ 0".into()));
        }
        if (p5 - self.a_r).abs() > tolerance::<S>() * S::one().max(self.a_r.abs()) {
            return Err(Error::Precondition("v = 0 forces p5 = a4 = a_r".into()));
        }
        Ok(LegParams::new(self.darboux_offsets(), p5, r1_sq))
    }

    /// Anchor points for a platform placed at `n` with direction `h`.
    pub fn anchors(&self, n: Vec3<S>, h: &Direction<S>) -> AnchorSet<S> {
        let d = h.unit();
        let cd = d.map(Complex::from);
        let cn = n.map(Complex::from);
        let i = Complex::new(S::zero(), S::one());
        let one = Complex::from(S::one());
        AnchorSet {
            base_m1: self.base_m1(),
            base_m5: self.base_m5(),
            ideal_m2: Vec3::new(one, i, Complex::from(S::zero())),
            ideal_m3: Vec3::new(one, -i, Complex::from(S::zero())),
            ideal_m4: Vec3::new(S::zero(), S::zero(), S::one()),
            m1: n - d * self.a_r,
            m2: cn + cd * (i * self.a_c),
            m3: cn - cd * (i * self.a_c),
            m4: n + d * (self.a4 - self.a_r),
            ideal_m5: d,
        }
    }
}

/// The Darboux plane offsets; `p3 = conj(p2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DarbouxOffsets<S> {
    pub p2: Complex<S>,
    pub p3: Complex<S>,
    pub p4: S,
}

/// All leg parameters of a self-mobile pentapod.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LegParams<S> {
    pub p2: Complex<S>,
    pub p3: Complex<S>,
    pub p4: S,
    pub p5: S,
    pub r1_sq: S,
}

impl<S: Scalar> LegParams<S> {
    pub fn new(offsets: DarbouxOffsets<S>, p5: S, r1_sq: S) -> Self {
        Self { p2: offsets.p2, p3: offsets.p3, p4: offsets.p4, p5, r1_sq }
    }
}

/// Anchor data in the canonical frames. Ideal points are stored as directions.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchorSet<S: Scalar> {
    pub base_m1: Vec3<S>,
    pub base_m5: Vec3<S>,
    pub ideal_m2: Vec3<Complex<S>>,
    pub ideal_m3: Vec3<Complex<S>>,
    pub ideal_m4: Vec3<S>,
    pub m1: Vec3<S>,
    pub m2: Vec3<Complex<S>>,
    pub m3: Vec3<Complex<S>>,
    pub m4: Vec3<S>,
    pub ideal_m5: Vec3<S>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn example() -> DesignParams<f64> {
        DesignParams::classify(-1.0, -5.0, 7.0, 4.0, 2.0).unwrap()
    }

    #[test]
    fn classify_example() {
        let d = example();
        assert_eq!(d.ptype, PentapodType::Type1);
        assert_eq!(d.v, 10.0);
        assert_eq!(d.w, 61.0);
    }

    #[test]
    fn classify_rejections() {
        assert_eq!(DesignParams::classify(1.0, 0.0, 1.0, 1.0, 0.0).unwrap().ptype, PentapodType::Type2);
        assert_eq!(DesignParams::classify(1.0, -5.0, 7.0, 4.0, 0.0).unwrap_err(), Error::UnsupportedType);
        assert_eq!(DesignParams::classify(1.0, 0.0, 7.0, 4.0, 2.0).unwrap_err(), Error::UnsupportedType);
        assert_eq!(DesignParams::classify(0.0, -5.0, 7.0, 4.0, 2.0).unwrap_err(), Error::InvalidDesign("A = 0"));
        assert_eq!(DesignParams::classify(1.0, -5.0, 7.0, 0.0, 2.0).unwrap_err(), Error::InvalidDesign("a_c = 0"));
        assert!(DesignParams::classify(f64::NAN, -5.0, 7.0, 4.0, 2.0).is_err());
    }

    #[test]
    fn example_offsets() {
        let o = example().darboux_offsets();
        assert_relative_eq!(o.p4, 100.0 / 41.0, epsilon = 1e-14);
        assert_relative_eq!(o.p2.re, -2230.0 / 1681.0, epsilon = 1e-14);
        assert_relative_eq!(o.p2.im, -2440.0 / 1681.0, epsilon = 1e-14);
        assert_eq!(o.p3, o.p2.conj());
    }

    #[test]
    fn type2_has_zero_p4() {
        let d = DesignParams::classify(1.5, 0.0, 2.0, 3.0, 0.0).unwrap();
        assert_eq!(d.darboux_offsets().p4, 0.0);
    }

    #[test]
    fn leg_condition() {
        let d = example();
        let r1 = d.r1_sq_from_p5(6.0).unwrap();
        assert_relative_eq!(r1, 927514.0 / 8405.0, max_relative = 1e-14);
        assert!(d.leg_condition_residual(6.0, r1).abs() < 1e-8);
        let p5 = 527538.0 / 82369.0;
        let r1 = d.r1_sq_from_p5(p5).unwrap();
        assert!(d.leg_condition_residual(p5, r1).abs() < 1e-8);
        assert_relative_eq!(d.p5_from_r1_sq(r1).unwrap(), p5, max_relative = 1e-14);
    }

    #[test]
    fn v_zero_branch() {
        let d = DesignParams::classify(-1.0, -5.0, 2.0, 4.0, 2.0).unwrap();
        assert_eq!(d.v, 0.0);
        assert_eq!(d.r1_sq_from_p5(2.0).unwrap_err(), Error::SpecialCaseV0);
        assert_eq!(d.p5_from_r1_sq(3.0).unwrap_err(), Error::SpecialCaseV0);
        assert!(d.legs_special_v0(2.0, 9.0).is_ok());
        assert!(matches!(d.legs_special_v0(3.0, 9.0), Err(Error::Precondition(_))));
    }

    #[test]
    fn anchors_follow_platform_parametrization() {
        let design = example();
        let h = Direction::new(1.0, 1.5, 0.5).unwrap();
        let d = h.unit();
        let a = design.anchors(Vec3::zeros(), &h);
        assert_relative_eq!(a.m1, -d * 7.0, epsilon = 1e-14);
        assert_relative_eq!(a.m4, Vec3::new(-30.0 / 7.0, -10.0 / 7.0, -15.0 / 7.0), epsilon = 1e-14);
        assert_eq!(a.base_m1, Vec3::new(-1.0, 0.0, -5.0));
        assert_eq!(a.base_m5, Vec3::zeros());
        for k in 0..3 {
            assert_eq!(a.m3[k], a.m2[k].conj());
        }
    }
}
