//! Reality intervals of leg lengths and the self-motion-free workspace test.
//!
//! Over all self-motions of a design the platform point `p_t` sweeps the
//! ellipsoid `ℰ_t`, while leg `t` keeps `p_t` at a fixed distance from
//! `P_t`. A real self-motion therefore needs a leg length between the
//! smallest and largest distance from `P_t` to `ℰ_t`. These extremes are
//! attained at pedal points of the meridian ellipse through `P_t`, which are
//! cut out by the Lagrange curve of `P_t`.

use serde::Serialize;

use crate::design::DesignParams;
use crate::error::{Error, Result};
use crate::geometry::{ellipsoid_for, sigma_p_at};
use crate::poly::real_roots;
use crate::scalar::Scalar;

/// Pedal points of the ellipse `κ1 ξ² + κ2 ζ² = 1` w.r.t. a query point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PedalResult<S> {
    pub pedal_points: Vec<[S; 2]>,
    pub distances: Vec<S>,
    /// Set when `k1 = k2` and the extremes came from the circle formula.
    pub circle_case: bool,
}

impl<S: Scalar> PedalResult<S> {
    pub fn min_distance(&self) -> S {
        self.distances.iter().fold(S::max_value().unwrap_or(S::lit(f64::MAX)), |a, &b| a.min(b))
    }

    pub fn max_distance(&self) -> S {
        self.distances.iter().fold(S::zero(), |a, &b| a.max(b))
    }
}

fn push_point<S: Scalar>(out: &mut PedalResult<S>, p: [S; 2], q: [S; 2]) {
    let merge = S::lit(1e-7);
    if out.pedal_points.iter().any(|o| (o[0] - p[0]).abs() < merge && (o[1] - p[1]).abs() < merge) {
        return;
    }
    out.distances.push(((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt());
    out.pedal_points.push(p);
}

/// Pedal points of the ellipse with half-axes `k1` (along ξ) and `k2`
/// (along ζ) with respect to `(ξ_t, ζ_t)`.
pub fn pedal_points<S: Scalar>(k1: S, k2: S, xi_t: S, zeta_t: S) -> Result<PedalResult<S>> {
    if !(k1 > S::zero() && k2 > S::zero()) {
        return Err(Error::Precondition("ellipse half-axes must be positive".into()));
    }
    let q = [xi_t, zeta_t];
    let mut out = PedalResult { pedal_points: Vec::new(), distances: Vec::new(), circle_case: false };
    let scale = k1.max(k2);
    let tiny = S::lit(1e-12) * scale;
    if (k1 - k2).abs() <= S::lit(1e-12) * scale {
        out.circle_case = true;
        let d = (xi_t * xi_t + zeta_t * zeta_t).sqrt();
        let (ux, uz) = if d > tiny { (xi_t / d, zeta_t / d) } else { (S::one(), S::zero()) };
        push_point(&mut out, [ux * k1, uz * k1], q);
        push_point(&mut out, [-ux * k1, -uz * k1], q);
        return Ok(out);
    }
    let (kap1, kap2) = (S::one() / (k1 * k1), S::one() / (k2 * k2));
    let on_zeta_axis = xi_t.abs() <= tiny;
    let on_xi_axis = zeta_t.abs() <= tiny;
    if on_zeta_axis || on_xi_axis {
        // The Lagrange curve splits into the axis through the query point
        // and a line parallel to the other axis.
        if on_zeta_axis {
            push_point(&mut out, [S::zero(), k2], q);
            push_point(&mut out, [S::zero(), -k2], q);
            let zeta = kap1 * zeta_t / (kap1 - kap2);
            let rest = (S::one() - kap2 * zeta * zeta) / kap1;
            if rest >= S::zero() {
                push_point(&mut out, [rest.sqrt(), zeta], q);
                push_point(&mut out, [-rest.sqrt(), zeta], q);
            }
        }
        if on_xi_axis {
            push_point(&mut out, [k1, S::zero()], q);
            push_point(&mut out, [-k1, S::zero()], q);
            let xi = kap2 * xi_t / (kap2 - kap1);
            let rest = (S::one() - kap1 * xi * xi) / kap2;
            if rest >= S::zero() {
                push_point(&mut out, [xi, rest.sqrt()], q);
                push_point(&mut out, [xi, -rest.sqrt()], q);
            }
        }
        return Ok(out);
    }
    // Substituting the Lagrange curve (k, κ1 ζ_t k / ((κ1-κ2) k + κ2 ξ_t))
    // into the ellipse gives (κ1 k² - 1) D² + κ2 κ1² ζ_t² k² = 0.
    let alpha = kap1 - kap2;
    let beta = kap2 * xi_t;
    let quartic = [
        -beta * beta,
        -S::lit(2.0) * alpha * beta,
        kap1 * beta * beta - alpha * alpha + kap2 * kap1 * kap1 * zeta_t * zeta_t,
        S::lit(2.0) * kap1 * alpha * beta,
        kap1 * alpha * alpha,
    ];
    for k in real_roots(&quartic) {
        let denom = alpha * k + beta;
        if denom.abs() <= tiny * kap1 {
            continue;
        }
        let zeta = kap1 * zeta_t * k / denom;
        push_point(&mut out, [k, zeta], q);
    }
    if out.pedal_points.is_empty() {
        return Err(Error::Precondition("no real pedal points".into()));
    }
    Ok(out)
}

/// Leg lengths `R` with a real self-motion: the open interval `]I-, I+[`,
/// or the single value `I- = I+` when degenerate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealityInterval<S> {
    pub lower: S,
    pub upper: S,
    pub degenerate: bool,
}

impl<S: Scalar> RealityInterval<S> {
    pub fn contains(&self, r: S) -> bool {
        if self.degenerate {
            (r - self.lower).abs() <= S::lit(1e-9) * S::one().max(self.lower)
        } else {
            self.lower < r && r < self.upper
        }
    }
}

/// The meridian section of `ℰ_t` through `P_t`: half-axes and the in-plane
/// coordinates of `P_t` (`ξ` measured from the axis, `ζ` along it).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeridianSlice<S> {
    pub k1: S,
    pub k2: S,
    pub xi_t: S,
    pub zeta_t: S,
}

pub fn meridian_slice<S: Scalar>(design: &DesignParams<S>, t: S) -> Result<MeridianSlice<S>> {
    let p = sigma_p_at(design, t)?;
    let ell = ellipsoid_for(design, t);
    let q = p - ell.center;
    Ok(MeridianSlice {
        k1: ell.equator_radius,
        k2: ell.vertex_half_length,
        xi_t: (q.x * q.x + q.y * q.y).sqrt(),
        zeta_t: q.z,
    })
}

/// Full result of a reality computation, including the pedal data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealityReport<S> {
    pub t: S,
    pub slice: MeridianSlice<S>,
    pub interval: RealityInterval<S>,
    pub pedal: PedalResult<S>,
}

pub fn reality_report<S: Scalar>(design: &DesignParams<S>, t: S) -> Result<RealityReport<S>> {
    let slice = meridian_slice(design, t)?;
    let pedal = pedal_points(slice.k1, slice.k2, slice.xi_t, slice.zeta_t)?;
    let scale = S::one().max(slice.k1);
    let at_center = slice.xi_t.abs() + slice.zeta_t.abs() <= S::lit(1e-12) * scale;
    let interval = if pedal.circle_case && at_center {
        // P_t is the center of a spherical ℰ_t: every configuration has the
        // same leg length (for w = 0 this is leg 1 with R1 = |a4|).
        RealityInterval { lower: slice.k1, upper: slice.k1, degenerate: true }
    } else {
        RealityInterval { lower: pedal.min_distance(), upper: pedal.max_distance(), degenerate: false }
    };
    Ok(RealityReport { t, slice, interval, pedal })
}

pub fn reality_interval<S: Scalar>(design: &DesignParams<S>, t: S) -> Result<RealityInterval<S>> {
    Ok(reality_report(design, t)?.interval)
}

/// Sufficient test that leg `t` admits no self-motion for any length in
/// `[l_min, l_max]`.
pub fn workspace_free<S: Scalar>(design: &DesignParams<S>, t: S, l_min: S, l_max: S) -> Result<bool> {
    if !(l_min > S::zero() && l_min <= l_max) {
        return Err(Error::Precondition("leg range must satisfy 0 < Lmin ≤ Lmax".into()));
    }
    let i = reality_interval(design, t)?;
    Ok(if i.degenerate { i.lower < l_min || i.lower > l_max } else { l_max <= i.lower || l_min >= i.upper })
}
