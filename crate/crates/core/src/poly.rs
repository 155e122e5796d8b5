//! Polynomials in three variables and univariate root finding.
//!
//! [`HomogPoly3`] stores a homogeneous polynomial densely, one coefficient
//! per monomial `e1^i e2^j e3^k` with `i + j + k = degree`, ordered by
//! descending `i` and then descending `j`. [`SparsePoly3`] holds the
//! explicit (inhomogeneous) equations used as fixed oracles.

use nalgebra::{ComplexField, DMatrix, DVector, Vector3, SVD};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kinematics::Vec3;
use crate::scalar::{Complex, Scalar};
use num_traits::{FromPrimitive, Zero};

/// Exponent triples of all monomials of a given degree, in storage order.
pub fn monomials(degree: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::with_capacity((degree + 1) * (degree + 2) / 2);
    for i in (0..=degree).rev() {
        for j in (0..=degree - i).rev() {
            out.push([i, j, degree - i - j]);
        }
    }
    out
}

fn monomial_value<T: ComplexField + Copy>(p: &Vector3<T>, exps: [usize; 3]) -> T {
    let mut v = T::one();
    for (axis, &k) in exps.iter().enumerate() {
        for _ in 0..k {
            v *= p[axis];
        }
    }
    v
}

/// Homogeneous polynomial in `(e1, e2, e3)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomogPoly3<S> {
    degree: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> HomogPoly3<S> {
    pub fn zero(degree: usize) -> Self {
        Self { degree, coeffs: vec![S::zero(); (degree + 1) * (degree + 2) / 2] }
    }

    pub fn from_coeffs(degree: usize, coeffs: Vec<S>) -> Result<Self> {
        if coeffs.len() != (degree + 1) * (degree + 2) / 2 {
            return Err(Error::Precondition(format!(
                "degree {degree} needs {} coefficients, got {}",
                (degree + 1) * (degree + 2) / 2,
                coeffs.len()
            )));
        }
        Ok(Self { degree, coeffs })
    }

    /// `a e1 + b e2 + c e3`.
    pub fn linear(v: &Vec3<S>) -> Self {
        Self { degree: 1, coeffs: vec![v.x, v.y, v.z] }
    }

    /// `e1² + e2² + e3²`.
    pub fn sum_of_squares() -> Self {
        let mut p = Self::zero(2);
        p.set_coeff([2, 0, 0], S::one());
        p.set_coeff([0, 2, 0], S::one());
        p.set_coeff([0, 0, 2], S::one());
        p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    fn index_of(&self, exps: [usize; 3]) -> Option<usize> {
        let [i, j, k] = exps;
        if i + j + k != self.degree {
            return None;
        }
        // rows with larger e1-exponent come first
        let before: usize = ((i + 1)..=self.degree).map(|ii| self.degree - ii + 1).sum();
        Some(before + (self.degree - i - j))
    }

    pub fn coeff(&self, exps: [usize; 3]) -> S {
        self.index_of(exps).map_or(S::zero(), |ix| self.coeffs[ix])
    }

    pub fn set_coeff(&mut self, exps: [usize; 3], value: S) {
        let ix = self.index_of(exps).expect("exponents do not match degree");
        self.coeffs[ix] = value;
    }

    pub fn eval(&self, p: &Vec3<S>) -> S {
        self.eval_generic(p)
    }

    pub fn eval_generic<T>(&self, p: &Vector3<T>) -> T
    where
        T: ComplexField<RealField = S> + Copy,
    {
        monomials(self.degree)
            .into_iter()
            .zip(self.coeffs.iter())
            .fold(T::zero(), |acc, (m, &c)| acc + T::from_real(c) * monomial_value(p, m))
    }

    pub fn gradient(&self, p: &Vec3<S>) -> Vec3<S> {
        let mut g = Vec3::zeros();
        for (m, &c) in monomials(self.degree).into_iter().zip(self.coeffs.iter()) {
            for axis in 0..3 {
                if m[axis] == 0 {
                    continue;
                }
                let mut dm = m;
                dm[axis] -= 1;
                g[axis] += c * S::from_usize(m[axis]).unwrap() * monomial_value(p, dm);
            }
        }
        g
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (ma, &ca) in monomials(self.degree).iter().zip(self.coeffs.iter()) {
            for (mb, &cb) in monomials(other.degree).iter().zip(other.coeffs.iter()) {
                let ix = out.index_of([ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]]).unwrap();
                out.coeffs[ix] += ca * cb;
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self { degree: 0, coeffs: vec![S::one()] };
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn scale(&self, k: S) -> Self {
        Self { degree: self.degree, coeffs: self.coeffs.iter().map(|&c| c * k).collect() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::Precondition("degree mismatch".into()));
        }
        let coeffs = self.coeffs.iter().zip(other.coeffs.iter()).map(|(&a, &b)| a - b).collect();
        Ok(Self { degree: self.degree, coeffs })
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> S {
        self.coeffs.iter().fold(S::zero(), |acc, &c| acc + c * c).sqrt()
    }

    pub fn max_abs_coeff(&self) -> S {
        self.coeffs.iter().fold(S::zero(), |acc, &c| acc.max(c.abs()))
    }

    /// Unit coefficient norm, first nonzero coefficient positive.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == S::zero() {
            return self.clone();
        }
        let tiny = n * S::lit(1e-12);
        let sign = match self.coeffs.iter().find(|c| c.abs() > tiny) {
            Some(c) if *c < S::zero() => -S::one(),
            _ => S::one(),
        };
        self.scale(sign / n)
    }

    /// Cosine of the angle between coefficient vectors.
    pub fn cosine(&self, other: &Self) -> S {
        let dot = self.coeffs.iter().zip(other.coeffs.iter()).fold(S::zero(), |acc, (&a, &b)| acc + a * b);
        dot / (self.norm() * other.norm())
    }

    /// Least-squares quotient of `self / divisor` and the norm of the remainder.
    pub fn divide(&self, divisor: &Self) -> Result<(Self, S)> {
        if divisor.degree > self.degree {
            return Err(Error::Precondition("divisor degree exceeds dividend degree".into()));
        }
        let qdeg = self.degree - divisor.degree;
        let qmons = monomials(qdeg);
        let rows = self.coeffs.len();
        let mut m = DMatrix::<S>::zeros(rows, qmons.len());
        for (col, qm) in qmons.iter().enumerate() {
            let mut basis = Self::zero(qdeg);
            basis.set_coeff(*qm, S::one());
            let prod = basis.mul(divisor);
            for (row, &c) in prod.coeffs.iter().enumerate() {
                m[(row, col)] = c;
            }
        }
        let rhs = DVector::from_column_slice(&self.coeffs);
        let sol = least_squares(m.clone(), &rhs)?;
        let remainder = (m * &sol - rhs).norm();
        Ok((Self { degree: qdeg, coeffs: sol.iter().copied().collect() }, remainder))
    }

    /// Binary form `P(x a + y b) = Σ_k c_k x^(d-k) y^k`; returns `c_0..c_d`.
    pub fn restrict_to_pencil(&self, a: &Vec3<S>, b: &Vec3<S>) -> Vec<S> {
        // work in t = y/x: each coordinate is a_i + t b_i
        let mut out = vec![S::zero(); self.degree + 1];
        for (m, &c) in monomials(self.degree).into_iter().zip(self.coeffs.iter()) {
            let mut term = vec![c];
            for axis in 0..3 {
                for _ in 0..m[axis] {
                    term = poly1_mul(&term, &[a[axis], b[axis]]);
                }
            }
            for (k, v) in term.into_iter().enumerate() {
                out[k] += v;
            }
        }
        out
    }

    /// Recovers a homogeneous polynomial of `degree` from point evaluations.
    ///
    /// `f` is called at unit vectors built from the integer nodes of `grid`;
    /// nodes where it reports [`Error::SingularSystem`] are skipped.
    pub fn interpolate<F>(degree: usize, grid: NodeGrid, mut f: F) -> Result<Self>
    where
        F: FnMut(&Vec3<S>) -> Result<S>,
    {
        let mons = monomials(degree);
        let mut rows: Vec<Vec<S>> = Vec::new();
        let mut values = Vec::new();
        for node in grid.nodes::<S>(degree) {
            match f(&node) {
                Ok(v) => {
                    rows.push(mons.iter().map(|&m| monomial_value(&node, m)).collect());
                    values.push(v);
                }
                Err(Error::SingularSystem) => continue,
                Err(e) => return Err(e),
            }
        }
        if rows.len() < mons.len() {
            return Err(Error::RankDeficiency);
        }
        let m = DMatrix::from_fn(rows.len(), mons.len(), |r, c| rows[r][c]);
        let sol = least_squares(m, &DVector::from_vec(values))?;
        Ok(Self { degree, coeffs: sol.iter().copied().collect() })
    }
}

/// Deterministic integer interpolation nodes.
///
/// With `shift = 0` the nodes are `(i, j, 1)` on a square grid in the affine
/// chart `e3 = 1` plus `(i, 1, 0)` on the line at infinity. A positive shift
/// `k` uses the homogeneous integer nodes `(m i + k, m j + k, m)` and
/// `(m i + k, m, 0)` with `m = k + 1`, i.e. the same window offset by the
/// non-integer `k / m`, so it shares no projective point with the unshifted
/// grid. Nodes are scaled to unit length before evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NodeGrid {
    pub shift: u32,
}

impl NodeGrid {
    pub fn shifted(shift: u32) -> Self {
        Self { shift }
    }

    pub fn nodes<S: Scalar>(&self, degree: usize) -> Vec<Vec3<S>> {
        let r = (degree / 2 + 1) as i64;
        let k = i64::from(self.shift);
        let m = k + 1;
        let mut out = Vec::new();
        let mut push = |x: i64, y: i64, z: i64| {
            let v = Vec3::new(S::from_i64(x).unwrap(), S::from_i64(y).unwrap(), S::from_i64(z).unwrap());
            out.push(v / v.norm());
        };
        for i in -r..=r {
            for j in -r..=r {
                push(m * i + k, m * j + k, m);
            }
        }
        for i in -r..=r {
            push(m * i + k, m, 0);
        }
        out
    }
}

fn least_squares<S: Scalar>(m: DMatrix<S>, rhs: &DVector<S>) -> Result<DVector<S>> {
    let svd = SVD::new(m, true, true);
    let sv = &svd.singular_values;
    let smax = sv.max();
    let smin = sv.min();
    if !(smax > S::zero()) || smin <= smax * S::lit(1e-12) {
        return Err(Error::RankDeficiency);
    }
    svd.solve(rhs, S::zero()).map_err(|_| Error::RankDeficiency)
}

/// Product of two univariate coefficient vectors (ascending powers).
pub fn poly1_mul<T: ComplexField + Copy>(a: &[T], b: &[T]) -> Vec<T> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Horner evaluation of value and derivative (ascending powers).
pub fn poly1_eval<T: ComplexField + Copy>(c: &[T], x: T) -> (T, T) {
    let mut p = T::zero();
    let mut dp = T::zero();
    for &a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

fn trim_leading<T: ComplexField + Copy>(c: &[T]) -> &[T] {
    let scale = c.iter().fold(T::RealField::zero(), |acc, x| {
        let m = x.modulus();
        if m > acc {
            m
        } else {
            acc
        }
    });
    let tiny = scale * T::RealField::from_f64(1e-14).unwrap();
    let mut n = c.len();
    while n > 0 && c[n - 1].modulus() <= tiny {
        n -= 1;
    }
    &c[..n]
}

fn polish<T: ComplexField + Copy>(c: &[T], mut z: T) -> T {
    for _ in 0..8 {
        let (p, dp) = poly1_eval(c, z);
        if dp.modulus() == T::RealField::zero() {
            break;
        }
        let step = p / dp;
        let znew = z - step;
        if !znew.is_finite() {
            break;
        }
        // accept only improving steps
        if poly1_eval(c, znew).0.modulus() > p.modulus() {
            break;
        }
        z = znew;
    }
    z
}

/// All complex roots of a real polynomial (ascending coefficients) from the
/// eigenvalues of its companion matrix, refined by Newton steps.
pub fn roots_real_coeffs<S: Scalar>(coeffs: &[S]) -> Vec<Complex<S>> {
    let c = trim_leading(coeffs);
    if c.len() < 2 {
        return Vec::new();
    }
    let n = c.len() - 1;
    let lead = c[n];
    let comp = DMatrix::<S>::from_fn(n, n, |r, col| {
        if col == n - 1 {
            -c[r] / lead
        } else if r == col + 1 {
            S::one()
        } else {
            S::zero()
        }
    });
    let cc: Vec<Complex<S>> = c.iter().map(|&x| Complex::from(x)).collect();
    comp.complex_eigenvalues().iter().map(|&z| polish(&cc, z)).collect()
}

/// Real roots of a real polynomial (ascending coefficients), sorted.
pub fn real_roots<S: Scalar>(coeffs: &[S]) -> Vec<S> {
    let c = trim_leading(coeffs);
    let scale = c.iter().fold(S::zero(), |acc, x| acc.max(x.abs()));
    let mut out: Vec<S> = roots_real_coeffs(c)
        .into_iter()
        .filter_map(|z| {
            let mag = S::one().max(z.modulus());
            if z.im.abs() <= S::lit(1e-7) * mag {
                // confirm on the real axis
                let x = polish(c, z.re);
                let (p, dp) = poly1_eval(c, x);
                let ok = p.abs() <= S::lit(1e-8) * scale * mag.powi(c.len() as i32 - 1)
                    || z.im.abs() <= S::lit(1e-10) * mag
                    || dp == S::zero();
                ok.then_some(x)
            } else {
                None
            }
        })
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// All roots of a polynomial with complex coefficients (ascending).
pub fn roots_complex_coeffs<S: Scalar>(coeffs: &[Complex<S>]) -> Vec<Complex<S>> {
    let c = trim_leading(coeffs);
    if c.len() < 2 {
        return Vec::new();
    }
    let n = c.len() - 1;
    let lead = c[n];
    let zero = Complex::from(S::zero());
    let comp = DMatrix::<Complex<S>>::from_fn(n, n, |r, col| {
        if col == n - 1 {
            -c[r] / lead
        } else if r == col + 1 {
            Complex::from(S::one())
        } else {
            zero
        }
    });
    let schur = nalgebra::linalg::Schur::new(comp);
    let (_, t) = schur.unpack();
    (0..n).map(|i| polish(c, t[(i, i)])).collect()
}

/// Real projective roots `(x : y)` of a binary form `Σ c_k x^(d-k) y^k`.
///
/// Roots are returned as unit vectors `(x, y)`; a drop in degree produces
/// the root `(0 : 1)`.
pub fn binary_form_real_roots<S: Scalar>(coeffs: &[S]) -> Vec<(S, S)> {
    let scale = coeffs.iter().fold(S::zero(), |acc, x| acc.max(x.abs()));
    if scale == S::zero() {
        return Vec::new();
    }
    let mut out: Vec<(S, S)> = real_roots(coeffs)
        .into_iter()
        .map(|t| {
            let n = (S::one() + t * t).sqrt();
            (S::one() / n, t / n)
        })
        .collect();
    if coeffs.last().is_some_and(|c| c.abs() <= scale * S::lit(1e-14)) {
        out.push((S::zero(), S::one()));
    }
    out
}

/// Sparse polynomial in three variables with coefficients in `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePoly3<T> {
    pub terms: Vec<(T, [u32; 3])>,
}

impl<T: ComplexField + Copy> SparsePoly3<T> {
    pub fn new(terms: Vec<(T, [u32; 3])>) -> Self {
        Self { terms }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(_, e)| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn eval(&self, p: &Vector3<T>) -> T {
        self.terms.iter().fold(T::zero(), |acc, (c, e)| {
            acc + *c * monomial_value(p, [e[0] as usize, e[1] as usize, e[2] as usize])
        })
    }

    pub fn gradient(&self, p: &Vector3<T>) -> Vector3<T> {
        let mut g = Vector3::from_element(T::zero());
        for (c, e) in &self.terms {
            for axis in 0..3 {
                if e[axis] == 0 {
                    continue;
                }
                let mut de = [e[0] as usize, e[1] as usize, e[2] as usize];
                de[axis] -= 1;
                g[axis] += *c * T::from_f64(f64::from(e[axis])).unwrap() * monomial_value(p, de);
            }
        }
        g
    }

    /// Univariate coefficients (ascending) of `γ ↦ P(origin + γ dir)`.
    pub fn along_line(&self, origin: &Vector3<T>, dir: &Vector3<T>) -> Vec<T> {
        let mut out = vec![T::zero(); self.degree() as usize + 1];
        for (c, e) in &self.terms {
            let mut term = vec![*c];
            for axis in 0..3 {
                for _ in 0..e[axis] {
                    term = poly1_mul(&term, &[origin[axis], dir[axis]]);
                }
            }
            for (k, v) in term.into_iter().enumerate() {
                out[k] += v;
            }
        }
        out
    }
}

impl<S: Scalar> SparsePoly3<S> {
    /// `self + i·sign·imag` as a polynomial with complex coefficients.
    pub fn complexify(&self, imag: &SparsePoly3<S>, sign: S) -> SparsePoly3<Complex<S>> {
        let mut terms: Vec<(Complex<S>, [u32; 3])> =
            self.terms.iter().map(|&(c, e)| (Complex::new(c, S::zero()), e)).collect();
        terms.extend(imag.terms.iter().map(|&(c, e)| (Complex::new(S::zero(), sign * c), e)));
        SparsePoly3 { terms }
    }
}
