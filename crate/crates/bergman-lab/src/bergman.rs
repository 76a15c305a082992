//! The A^2 core: A^p norms, inner products, and the orthonormal monomial
//! basis with exact norms.
//!
//! All three supported shapes are Reinhardt domains (invariant under
//! independent rotations of each coordinate), so distinct monomials are
//! orthogonal and the Gram matrix of the monomial basis is diagonal. That
//! diagonal is available in closed form:
//!
//! - unit ball:  ||z^alpha||^2 = pi^n alpha! / (n + |alpha|)!
//! - polydisc:   prod_k pi r_k^{2 alpha_k + 2} / (alpha_k + 1)
//! - ellipsoid:  prod_k a_k^{2 alpha_k + 2} times the ball value, by the
//!   linear change of variables z_k = a_k w_k.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{ComplexPoint, Domain};
use crate::polyalg::{MultiIndex, MultiPoly};
use crate::quadrature::{integrate, IntegralResult, QuadratureSpec};

/// One element of the orthonormal monomial basis e_alpha = z^alpha / ||z^alpha||.
#[derive(Debug, Clone)]
pub struct BasisElement {
    pub alpha: MultiIndex,
    /// Exact squared monomial norm ||z^alpha||^2 on `domain`.
    pub norm_sq: f64,
    pub domain: Domain,
}

impl BasisElement {
    /// The normalized basis polynomial z^alpha / ||z^alpha||.
    pub fn polynomial(&self) -> MultiPoly {
        MultiPoly::monomial(
            self.alpha.clone(),
            Complex64::new(1.0 / self.norm_sq.sqrt(), 0.0),
        )
    }
}

/// Largest factorial argument representable in f64.
const FACTORIAL_LIMIT: usize = 170;

fn factorial(k: usize) -> Result<f64> {
    if k > FACTORIAL_LIMIT {
        return Err(Error::InvalidParameter(format!(
            "factorial({k}) overflows f64"
        )));
    }
    let mut v = 1.0;
    for i in 2..=k {
        v *= i as f64;
    }
    Ok(v)
}

/// Exact squared A^2 norm of the monomial z^alpha on the domain.
pub fn monomial_norm_sq(alpha: &MultiIndex, domain: &Domain) -> Result<f64> {
    if alpha.dim() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            got: alpha.dim(),
        });
    }
    match domain {
        Domain::UnitBall { dim } => ball_monomial_norm_sq(*dim, alpha),
        Domain::Polydisc { radii } => {
            let mut v = 1.0;
            for (&e, r) in alpha.exponents().iter().zip(radii) {
                v *= PI * r.powi(2 * e as i32 + 2) / (e as f64 + 1.0);
            }
            Ok(v)
        }
        Domain::Ellipsoid { semiaxes } => {
            let mut v = ball_monomial_norm_sq(semiaxes.len(), alpha)?;
            for (&e, a) in alpha.exponents().iter().zip(semiaxes) {
                v *= a.powi(2 * e as i32 + 2);
            }
            Ok(v)
        }
    }
}

fn ball_monomial_norm_sq(n: usize, alpha: &MultiIndex) -> Result<f64> {
    let total = alpha.total_degree() as usize;
    let mut v = PI.powi(n as i32) / factorial(n + total)?;
    for &e in alpha.exponents() {
        v *= factorial(e as usize)?;
    }
    Ok(v)
}

/// All multi-indices with |alpha| <= d in graded-lex order, paired with
/// their exact norms. The list has C(n + d, n) entries.
pub fn enumerate_basis(n: usize, d: u32, domain: &Domain) -> Result<Vec<BasisElement>> {
    if n != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            got: n,
        });
    }
    let mut indices = Vec::new();
    let mut current = vec![0u32; n];
    collect_degree_indices(n, d, 0, &mut current, &mut indices);
    indices.sort();
    indices
        .into_iter()
        .map(|alpha| {
            Ok(BasisElement {
                norm_sq: monomial_norm_sq(&alpha, domain)?,
                alpha,
                domain: domain.clone(),
            })
        })
        .collect()
}

fn collect_degree_indices(
    n: usize,
    budget: u32,
    axis: usize,
    current: &mut Vec<u32>,
    out: &mut Vec<MultiIndex>,
) {
    if axis == n {
        out.push(MultiIndex::new(current.clone()));
        return;
    }
    for e in 0..=budget {
        current[axis] = e;
        collect_degree_indices(n, budget - e, axis + 1, current, out);
    }
    current[axis] = 0;
}

/// Monte Carlo estimate of the A^p norm (int |f|^p dV)^{1/p}.
pub fn norm_p<F>(f: F, domain: &Domain, p: f64, spec: &QuadratureSpec) -> Result<IntegralResult>
where
    F: Fn(&ComplexPoint) -> Complex64 + Sync,
{
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "norm exponent p = {p} must lie in [1, infinity)"
        )));
    }
    let raw = integrate(domain, |z| f(z).norm().powf(p).into(), spec)?;
    let value = raw.re().max(0.0).powf(1.0 / p);
    // Delta method: d/dI I^{1/p} = I^{1/p - 1} / p.
    let std_error = if raw.re() > 0.0 {
        raw.std_error * value / (p * raw.re())
    } else {
        raw.std_error
    };
    Ok(IntegralResult {
        value: value.into(),
        std_error,
        samples_used: raw.samples_used,
    })
}

/// Monte Carlo estimate of the A^2 inner product int f conj(g) dV.
pub fn inner_product<F, G>(
    f: F,
    g: G,
    domain: &Domain,
    spec: &QuadratureSpec,
) -> Result<IntegralResult>
where
    F: Fn(&ComplexPoint) -> Complex64 + Sync,
    G: Fn(&ComplexPoint) -> Complex64 + Sync,
{
    integrate(domain, |z| f(z) * g(z).conj(), spec)
}

/// Exact inner product of two polynomials via the diagonal monomial Gram.
pub fn poly_inner_product(p: &MultiPoly, q: &MultiPoly, domain: &Domain) -> Result<Complex64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: q.dim(),
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (alpha, cp) in p.terms() {
        let cq = q.coefficient(alpha);
        if cq != Complex64::new(0.0, 0.0) {
            acc += cp * cq.conj() * monomial_norm_sq(alpha, domain)?;
        }
    }
    Ok(acc)
}

/// Exact squared A^2 norm of a polynomial.
pub fn poly_norm_sq(p: &MultiPoly, domain: &Domain) -> Result<f64> {
    let mut acc = 0.0;
    for (alpha, c) in p.terms() {
        acc += c.norm_sqr() * monomial_norm_sq(alpha, domain)?;
    }
    Ok(acc)
}
