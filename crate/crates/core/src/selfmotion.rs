//! Constraint system of a line-symmetric pentapod and the polynomials that
//! govern its self-motion.
//!
//! With `e0 = 0` the Darboux constraints and the quadric `Ψ` are linear in
//! `f0..f3`. Solving them leaves two homogeneous conditions in `(e1:e2:e3)`:
//! the cubic `F` (numerator of `f0`) and the quartic `G` (numerator of the
//! Mannheim constraint). On the frame of [`line_symmetric_frame`] these obey
//! `4 L F - G = N² μ`, so the branch `F = 0` is a line-symmetric self-motion
//! once `μ` vanishes, which fixes `p5`.

use nalgebra::{Matrix4, Vector4};
use serde::Serialize;

use crate::design::{DesignParams, LegParams};
use crate::error::{Error, Result};
use crate::kinematics::{Direction, StudyPose, Vec3};
use crate::poly::{binary_form_real_roots, HomogPoly3, NodeGrid};
use crate::scalar::{tolerance, Complex, Scalar};

/// Platform placement `n`, direction `d` and the linear factor `L` for a
/// chosen direction `h` of the platform line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineSymmetricFrame<S: Scalar> {
    pub h: Direction<S>,
    pub d: Vec3<S>,
    pub n: Vec3<S>,
    /// `2 (h0² + h1² + h2²)`.
    pub lambda: S,
    pub l: HomogPoly3<S>,
}

pub fn line_symmetric_frame<S: Scalar>(design: &DesignParams<S>, h: &Direction<S>) -> LineSymmetricFrame<S> {
    let d = h.unit();
    let n = Vec3::new(design.a_c * d.y, -design.a_c * d.x, (design.a_r - design.a4) * d.z);
    LineSymmetricFrame { h: *h, d, n, lambda: S::lit(2.0) * h.norm_sq(), l: HomogPoly3::linear(&d) }
}

/// Residuals of the five defining constraints plus the Study quadric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstraintResiduals<S> {
    pub omega2: Complex<S>,
    pub omega3: Complex<S>,
    pub omega4: S,
    pub pi5: S,
    pub psi: S,
}

impl<S: Scalar> ConstraintResiduals<S> {
    pub fn max_abs(&self) -> S {
        [self.omega2.re, self.omega2.im, self.omega3.re, self.omega3.im, self.omega4, self.pi5, self.psi]
            .iter()
            .fold(S::zero(), |acc, x| acc.max(x.abs()))
    }
}

/// Solution of the linear system for the translation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FSolution<S> {
    /// `f0..f3` for the given (not necessarily unit) `e`.
    pub f: [S; 4],
    /// `N = e1² + e2² + e3²`, the common denominator.
    pub denom: S,
}

/// What each leg reads at a pose; constant along a self-motion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LegReadings<S> {
    /// Distance from the moved `m1` to the base point `M1`.
    pub sphere1: S,
    /// `x - i y` of the moved `m2`, the Darboux offset of leg 2.
    pub darboux2: Complex<S>,
    pub darboux3: Complex<S>,
    /// Height of the moved `m4`.
    pub darboux4: S,
    /// Signed offset of `M5` from the moved plane through the Mannheim
    /// point orthogonal to the platform line.
    pub mannheim5: S,
}

impl<S: Scalar> LegReadings<S> {
    /// Real leg lengths 1–5 (moduli for the complex Darboux legs).
    pub fn lengths(&self) -> [S; 5] {
        [self.sphere1, nalgebra::ComplexField::modulus(self.darboux2), nalgebra::ComplexField::modulus(self.darboux3), self.darboux4, self.mannheim5]
    }

    /// Largest relative deviation from `reference` over all seven components.
    pub fn drift(&self, reference: &Self) -> S {
        let pairs = [
            (self.sphere1, reference.sphere1),
            (self.darboux2.re, reference.darboux2.re),
            (self.darboux2.im, reference.darboux2.im),
            (self.darboux3.re, reference.darboux3.re),
            (self.darboux3.im, reference.darboux3.im),
            (self.darboux4, reference.darboux4),
            (self.mannheim5, reference.mannheim5),
        ];
        pairs.iter().fold(S::zero(), |acc, &(a, b)| {
            acc.max((a - b).abs() / S::one().max(a.abs()).max(b.abs()))
        })
    }
}

/// A pentapod with given design, leg data and platform placement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pentapod<S: Scalar> {
    pub design: DesignParams<S>,
    pub legs: LegParams<S>,
    pub n: Vec3<S>,
    pub d: Vec3<S>,
}

impl<S: Scalar> Pentapod<S> {
    pub fn new(design: DesignParams<S>, legs: LegParams<S>, n: Vec3<S>, d: Vec3<S>) -> Self {
        Self { design, legs, n, d }
    }

    pub fn from_frame(design: DesignParams<S>, legs: LegParams<S>, frame: &LineSymmetricFrame<S>) -> Self {
        Self::new(design, legs, frame.n, frame.d)
    }

    /// Point of the platform line with coordinate `t` (`a_r` sits at `n`).
    pub fn platform_point(&self, t: S) -> Vec3<S> {
        self.n + self.d * (t - self.design.a_r)
    }

    pub fn m1(&self) -> Vec3<S> {
        self.platform_point(S::zero())
    }

    pub fn m2(&self) -> Vec3<Complex<S>> {
        let i = Complex::new(S::zero(), self.design.a_c);
        self.n.map(Complex::from) + self.d.map(|x| Complex::from(x) * i)
    }

    pub fn m4(&self) -> Vec3<S> {
        self.platform_point(self.design.a4)
    }

    /// The Mannheim point `𝐩5`.
    pub fn mannheim_point(&self) -> Vec3<S> {
        self.platform_point(self.legs.p5)
    }

    /// Constraint values on the raw homogeneous parameters (no normalization).
    fn raw_constraints(&self, pose: &StudyPose<S>) -> (Complex<S>, S, S, S) {
        let (r, s) = pose.unnormalized_action();
        let nn = pose.rotation_norm();
        let m2 = self.m2();
        let row = |k: usize| -> Complex<S> {
            Complex::from(r[(k, 0)]) * m2.x + Complex::from(r[(k, 1)]) * m2.y + Complex::from(r[(k, 2)]) * m2.z
        };
        let i = Complex::new(S::zero(), S::one());
        let omega2 = (row(0) + s.x) - i * (row(1) + s.y) - self.legs.p2 * nn;
        let m4 = self.m4();
        let omega4 = s.z + r.row(2).transpose().dot(&m4) - self.legs.p4 * nn;
        let rd = r * self.d;
        let pi5 = rd.dot(&(s + r * self.mannheim_point())) / nn;
        (omega2, omega4, pi5, pose.quadric_residual())
    }

    /// Residuals of Ω2, Ω3, Ω4, Π5 and Ψ at the normalized pose.
    pub fn constraint_residuals(&self, pose: &StudyPose<S>) -> Result<ConstraintResiduals<S>> {
        let p = pose.normalized()?;
        let (omega2, omega4, pi5, psi) = self.raw_constraints(&p);
        // Ω3 is the conjugate constraint; it differs from conj(Ω2) only
        // through p3 not being exactly conj(p2).
        let nn = p.rotation_norm();
        let omega3 = omega2.conj() + (self.legs.p2.conj() - self.legs.p3) * nn;
        Ok(ConstraintResiduals { omega2, omega3, omega4, pi5, psi })
    }

    /// Solves `Ψ = Re Ω2 = Im Ω2 = Ω4 = 0` for `f0..f3` with `e0 = 0`.
    pub fn solve_f(&self, e: &Vec3<S>) -> Result<FSolution<S>> {
        let nn = e.norm_squared();
        if nn == S::zero() || !nn.is_finite() {
            return Err(Error::ZeroNorm);
        }
        // The constraints are affine in f: recover the columns by evaluation.
        let eval = |f: [S; 4]| -> Vector4<S> {
            let pose = StudyPose::new([S::zero(), e.x, e.y, e.z], f);
            let (o2, o4, _, psi) = self.raw_constraints(&pose);
            Vector4::new(psi, o2.re, o2.im, o4)
        };
        let b = eval([S::zero(); 4]);
        let mut m = Matrix4::<S>::zeros();
        for k in 0..4 {
            let mut f = [S::zero(); 4];
            f[k] = S::one();
            m.set_column(k, &(eval(f) - b));
        }
        // det = 8 N² for every admissible placement
        let det = m.determinant();
        let scale = m.norm().powi(4);
        if !(det.abs() > S::lit(1e-13) * scale) {
            return Err(Error::SingularSystem);
        }
        let sol = m.lu().solve(&(-b)).ok_or(Error::SingularSystem)?;
        Ok(FSolution { f: [sol[0], sol[1], sol[2], sol[3]], denom: nn })
    }

    /// The line-symmetric pose `(0, e; f(e))`, normalized.
    pub fn pose_for(&self, e: &Vec3<S>) -> Result<StudyPose<S>> {
        let sol = self.solve_f(e)?;
        StudyPose::new([S::zero(), e.x, e.y, e.z], sol.f).normalized()
    }

    /// `N f0(e)`: the cubic `F` evaluated pointwise.
    pub fn f_numerator(&self, e: &Vec3<S>) -> Result<S> {
        let sol = self.solve_f(e)?;
        Ok(sol.f[0] * sol.denom)
    }

    /// `N Π5(e, f(e))`: the quartic `G` evaluated pointwise.
    pub fn g_numerator(&self, e: &Vec3<S>) -> Result<S> {
        let sol = self.solve_f(e)?;
        let pose = StudyPose::new([S::zero(), e.x, e.y, e.z], sol.f);
        Ok(self.raw_constraints(&pose).2 * sol.denom)
    }

    /// `N Λ1(e, f(e))`: the leg-1 sphere condition as a quartic in `e`.
    pub fn leg1_numerator(&self, e: &Vec3<S>) -> Result<S> {
        let sol = self.solve_f(e)?;
        let pose = StudyPose::new([S::zero(), e.x, e.y, e.z], sol.f);
        let value = pose.sphere_condition(&self.m1(), &self.design.base_m1(), self.legs.r1_sq)?;
        Ok(value * sol.denom)
    }

    pub fn recover_f(&self, grid: NodeGrid) -> Result<HomogPoly3<S>> {
        HomogPoly3::interpolate(3, grid, |e| self.f_numerator(e))
    }

    pub fn recover_g(&self, grid: NodeGrid) -> Result<HomogPoly3<S>> {
        HomogPoly3::interpolate(4, grid, |e| self.g_numerator(e))
    }

    pub fn recover_leg1(&self, grid: NodeGrid) -> Result<HomogPoly3<S>> {
        HomogPoly3::interpolate(4, grid, |e| self.leg1_numerator(e))
    }

    pub fn leg_readings(&self, pose: &StudyPose<S>) -> Result<LegReadings<S>> {
        let disp = pose.displacement()?;
        let sphere1 = (disp.apply(&self.m1()) - self.design.base_m1()).norm();
        let q2 = disp.apply_complex(&self.m2());
        let i = Complex::new(S::zero(), S::one());
        let darboux2 = q2.x - i * q2.y;
        let darboux3 = darboux2.conj();
        let darboux4 = disp.apply(&self.m4()).z;
        let dir = disp.rotation * self.d;
        let mannheim5 = dir.dot(&(self.design.base_m5() - disp.apply(&self.mannheim_point())));
        Ok(LegReadings { sphere1, darboux2, darboux3, darboux4, mannheim5 })
    }
}

/// Outcome of dividing `Δ = 4 L F - G` by `N²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Factorization<S: Scalar> {
    /// Scalar quotient; equals `p5* - p5` where `p5*` is the self-motion value.
    pub mu: S,
    pub remainder_norm: S,
    /// Coefficient norm of `Δ`, and of `G` for scale.
    pub delta_norm: S,
    pub g_norm: S,
}

/// Leg data for an arbitrary `p5`; with `v = 0` the radius is irrelevant to
/// `F` and `G` and is set to zero.
fn legs_any<S: Scalar>(design: &DesignParams<S>, p5: S) -> LegParams<S> {
    match design.r1_sq_from_p5(p5) {
        Ok(r1_sq) => LegParams::new(design.darboux_offsets(), p5, r1_sq),
        Err(_) => LegParams::new(design.darboux_offsets(), p5, S::zero()),
    }
}

/// Checks `λ L F - G = N² μ` on the frame of `h` with Mannheim offset `p5`.
///
/// `F` is taken as `(4 / λ) N f0`, the scale at which the quotient is the
/// plain difference `p5* - p5`.
pub fn factorization_check<S: Scalar>(design: &DesignParams<S>, h: &Direction<S>, p5: S) -> Result<Factorization<S>> {
    let frame = line_symmetric_frame(design, h);
    let pentapod = Pentapod::from_frame(*design, legs_any(design, p5), &frame);
    let f = pentapod.recover_f(NodeGrid::default())?.scale(S::lit(4.0) / frame.lambda);
    let g = pentapod.recover_g(NodeGrid::default())?;
    let delta = frame.l.scale(frame.lambda).mul(&f).sub(&g)?;
    let n2 = HomogPoly3::sum_of_squares().pow(2);
    let (quotient, remainder_norm) = delta.divide(&n2)?;
    let scale = S::one().max(delta.norm()).max(g.norm());
    if remainder_norm > S::lit(1e3) * tolerance::<S>() * scale {
        return Err(Error::DivisionFails { remainder: remainder_norm.to_f64_lossy() });
    }
    Ok(Factorization { mu: quotient.coeffs()[0], remainder_norm, delta_norm: delta.norm(), g_norm: g.norm() })
}

/// Polar coordinates of a direction: `h = ((τ1²+τ0²)ρ0, (τ1²-τ0²)ρ1, 2τ0τ1ρ1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarParams<S> {
    pub tau: [S; 2],
    pub rho: [S; 2],
}

/// Inverts the polar map with `τ` on the unit circle.
pub fn polar_from_h<S: Scalar>(h: &Direction<S>) -> PolarParams<S> {
    let [h0, h1, h2] = h.h;
    let r = (h1 * h1 + h2 * h2).sqrt();
    let half = h2.atan2(h1) / S::lit(2.0);
    PolarParams { tau: [half.sin(), half.cos()], rho: [h0, r] }
}

pub fn h_from_polar<S: Scalar>(tau: [S; 2], rho: [S; 2]) -> Result<Direction<S>> {
    let [t0, t1] = tau;
    let two = S::lit(2.0);
    Direction::new((t1 * t1 + t0 * t0) * rho[0], (t1 * t1 - t0 * t0) * rho[1], two * t0 * t1 * rho[1])
}

/// The quartic `H(h; p5)` whose vanishing selects the Mannheim offset.
///
/// In polar form `H = (τ0²+τ1²)³ (H2 τ1² + H1 τ0 τ1 + H0 τ0²)` with the
/// coefficients depending on `ρ` and `p5` only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuarticH<S> {
    pub design: DesignParams<S>,
}

impl<S: Scalar> QuarticH<S> {
    pub fn new(design: DesignParams<S>) -> Self {
        Self { design }
    }

    /// `[H0, H1, H2]` at `ρ` and `p5`.
    pub fn split(&self, rho: [S; 2], p5: S) -> [S; 3] {
        let DesignParams { a, c, a_r, a_c, a4, .. } = self.design;
        let [r0, r1] = rho;
        let (two, eight) = (S::lit(2.0), S::lit(8.0));
        let k = self.design.k();
        let (r0s, r1s) = (r0 * r0, r1 * r1);
        let lead = eight * r0 * r1 * a * (a4 - a_r) * (r1s + r0s);
        let h1 = lead * (a_r * a_r - a4 * a4 + a_c * a_c) * a_c;
        let hm = lead * (a_r * (a_r - a4) * (a_r - a4) + a_c * a_c * (a_r - two * a4));
        let hp = two
            * k
            * (two * a4 * (r1s * r1s - r0s * r0s) * (a4 - a_r) * c
                + k * ((r0s * r0s + r1s * r1s) * (a4 - p5) + two * r0s * r1s * (two * a_r - a4 - p5)));
        [(hp + hm) / two, h1, (hp - hm) / two]
    }

    pub fn eval(&self, h: &Direction<S>, p5: S) -> S {
        let p = polar_from_h(h);
        let [h0, h1, h2] = self.split(p.rho, p5);
        let [t0, t1] = p.tau;
        (t0 * t0 + t1 * t1).powi(3) * (h2 * t1 * t1 + h1 * t0 * t1 + h0 * t0 * t0)
    }

    /// The unique `p5` with `H(h; p5) = 0`.
    pub fn p5_from_h(&self, h: &Direction<S>) -> Result<S> {
        // H is affine in p5
        let h_at0 = self.eval(h, S::zero());
        let slope = self.eval(h, S::one()) - h_at0;
        let k = self.design.k();
        let scale = k * k * h.norm_sq() * h.norm_sq();
        if slope.abs() <= S::lit(1e-12) * scale {
            return Err(Error::DegenerateDirection);
        }
        Ok(-h_at0 / slope)
    }

    /// Real directions with polar radii `ρ` solving `H = 0` for the given `p5`.
    pub fn h_from_p5(&self, p5: S, rho: [S; 2]) -> Result<Vec<Direction<S>>> {
        if rho[0] == S::zero() && rho[1] == S::zero() {
            return Err(Error::AllZero);
        }
        let [h0, h1, h2] = self.split(rho, p5);
        // binary form in (x, y) = (τ1, τ0)
        let mut out: Vec<Direction<S>> = Vec::new();
        for (t1, t0) in binary_form_real_roots(&[h2, h1, h0]) {
            let dir = h_from_polar([t0, t1], rho)?;
            if !out.iter().any(|o| o.same_as(&dir, S::lit(1e-9))) {
                out.push(dir);
            }
        }
        Ok(out)
    }
}

pub fn p5_from_h<S: Scalar>(design: &DesignParams<S>, h: &Direction<S>) -> Result<S> {
    QuarticH::new(*design).p5_from_h(h)
}

pub fn h_from_p5<S: Scalar>(design: &DesignParams<S>, p5: S, rho: [S; 2]) -> Result<Vec<Direction<S>>> {
    QuarticH::new(*design).h_from_p5(p5, rho)
}
