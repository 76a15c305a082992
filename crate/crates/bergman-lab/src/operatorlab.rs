//! Finite compressions of the composition operator C_phi in the orthonormal
//! monomial basis, with singular-value diagnostics, essential-norm lower
//! bounds from singular test families, reverse-Carleson ratios, and
//! conjugation-invariance checks.
//!
//! On the supported Reinhardt domains the monomial Gram matrix is diagonal
//! and known exactly, so for polynomial symbols every compression entry
//! <e_alpha o phi, e_beta> is computed by exact polynomial expansion; the
//! quadrature path exists to cross-check the exact one.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::bergman::{enumerate_basis, BasisElement};
use crate::error::{Error, Result};
use crate::geometry::{self, Domain};
use crate::maps::{self, HolomorphicMap};
use crate::polyalg::MultiPoly;
use crate::quadrature::{integrate, splitmix64, IntegralResult, QuadratureSpec};
use crate::sequences::{Family, TestFamilySpec};

/// Basis-size guard for compressions.
const MAX_BASIS: usize = 10_000;

/// Boundary samples used to verify the self-map precondition.
const SELF_MAP_SCAN: usize = 2_000;

/// Per-k singular values must move less than this across degrees to count
/// as stabilized.
const STABILIZATION_TOL: f64 = 1e-6;

/// The compression P_d C_phi P_d against the normalized monomial basis.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub degree: u32,
    /// entries[(row b, col a)] = <e_alpha o phi, e_beta>.
    pub entries: DMatrix<Complex64>,
    pub basis: Vec<BasisElement>,
    pub map: HolomorphicMap,
    pub domain: Domain,
    /// True when the entries came from exact polynomial expansion.
    pub exact: bool,
}

impl OperatorMatrix {
    pub fn size(&self) -> usize {
        self.basis.len()
    }
}

fn require_self_map(map: &HolomorphicMap, domain: &Domain, seed: u64) -> Result<()> {
    let (ok, worst) = maps::is_self_map(map, domain, SELF_MAP_SCAN, splitmix64(seed ^ 0x5e1f))?;
    if !ok {
        return Err(Error::NotSelfMap {
            worst_violation: worst,
        });
    }
    Ok(())
}

/// Build the compression of C_phi at truncation degree `d`.
///
/// The quadrature spec seeds the self-map scan; the entries themselves are
/// exact for the polynomial symbols handled here.
pub fn build_matrix(
    map: &HolomorphicMap,
    domain: &Domain,
    d: u32,
    quad: &QuadratureSpec,
) -> Result<OperatorMatrix> {
    let n = domain.dim();
    if map.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: map.dim(),
        });
    }
    require_self_map(map, domain, quad.seed)?;
    let basis = enumerate_basis(n, d, domain)?;
    if basis.len() > MAX_BASIS {
        return Err(Error::DegreeOverflow {
            size: basis.len(),
            limit: MAX_BASIS,
        });
    }

    // Shared power cache: powers[k][e] = phi_k^e for e <= d.
    let mut powers: Vec<Vec<MultiPoly>> = map
        .components()
        .iter()
        .map(|c| vec![MultiPoly::constant(n, Complex64::new(1.0, 0.0)), c.clone()])
        .collect();
    for k in 0..n {
        for _ in 2..=d.max(1) {
            let next = powers[k].last().unwrap().mul(&map.components()[k])?;
            powers[k].push(next);
        }
    }

    let columns: Vec<Vec<Complex64>> = basis
        .par_iter()
        .map(|col| {
            // z^alpha o phi = prod_k phi_k^{alpha_k}, expanded exactly.
            let mut composed = MultiPoly::constant(n, Complex64::new(1.0, 0.0));
            for (k, &e) in col.alpha.exponents().iter().enumerate() {
                if e > 0 {
                    composed = composed.mul(&powers[k][e as usize])?;
                }
            }
            let col_norm = col.norm_sq.sqrt();
            Ok(basis
                .iter()
                .map(|row| {
                    composed.coefficient(&row.alpha) * (row.norm_sq.sqrt() / col_norm)
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let size = basis.len();
    let entries = DMatrix::from_fn(size, size, |r, c| columns[c][r]);
    Ok(OperatorMatrix {
        degree: d,
        entries,
        basis,
        map: map.clone(),
        domain: domain.clone(),
        exact: true,
    })
}

/// Monte Carlo estimate of a single compression entry <e_alpha o phi, e_beta>;
/// the independent cross-check of the exact path.
pub fn quadrature_entry(
    map: &HolomorphicMap,
    domain: &Domain,
    alpha: &BasisElement,
    beta: &BasisElement,
    quad: &QuadratureSpec,
) -> Result<IntegralResult> {
    let scale = 1.0 / (alpha.norm_sq.sqrt() * beta.norm_sq.sqrt());
    let raw = integrate(
        domain,
        |z| {
            let image = map.evaluate(z).expect("dimension checked");
            let mut val = Complex64::new(1.0, 0.0);
            for (c, &e) in image.coords().iter().zip(alpha.alpha.exponents()) {
                val *= c.powu(e);
            }
            let mut conj_mono = Complex64::new(1.0, 0.0);
            for (c, &e) in z.coords().iter().zip(beta.alpha.exponents()) {
                conj_mono *= c.powu(e);
            }
            val * conj_mono.conj()
        },
        quad,
    )?;
    Ok(IntegralResult {
        value: raw.value * scale,
        std_error: raw.std_error * scale,
        samples_used: raw.samples_used,
    })
}

/// Descending singular values of the compression.
pub fn singular_values(matrix: &OperatorMatrix) -> Result<Vec<f64>> {
    let svd = matrix
        .entries
        .clone()
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::NumericFailure("SVD did not converge".into()))?;
    let mut sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    if sigma.iter().any(|s| !s.is_finite()) {
        return Err(Error::NumericFailure("non-finite singular value".into()));
    }
    sigma.sort_by(|a, b| b.total_cmp(a));
    Ok(sigma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    CompactLikely,
    NoncompactLikely,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::CompactLikely => "COMPACT_LIKELY",
            Verdict::NoncompactLikely => "NONCOMPACT_LIKELY",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// Singular-value profiles across truncation degrees with the plateau
/// statistics behind the verdict.
#[derive(Debug, Clone)]
pub struct CompactnessDiagnostic {
    pub degrees: Vec<u32>,
    /// Descending singular values, one profile per degree.
    pub singular_profiles: Vec<Vec<f64>>,
    /// Number of singular values >= tau, per degree.
    pub plateau_counts: Vec<usize>,
    pub tau: f64,
    pub verdict: Verdict,
    /// Filled in by experiments that pair the diagnostic with a test family.
    pub essential_lower_bound: Option<f64>,
}

/// Compression diagnostics across increasing truncation degrees.
///
/// A growing tau-plateau signals noncompactness (the compressions keep
/// acquiring near-unit directions); a constant plateau together with
/// per-index stabilization of the singular values signals a compact limit.
/// Anything else is inconclusive. Plateau growth is only trusted across at
/// least three degrees.
pub fn compactness_diagnostic(
    map: &HolomorphicMap,
    domain: &Domain,
    degrees: &[u32],
    tau: f64,
    quad: &QuadratureSpec,
) -> Result<CompactnessDiagnostic> {
    if degrees.len() < 2 {
        return Err(Error::InvalidParameter(
            "need at least two truncation degrees".into(),
        ));
    }
    if degrees.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "truncation degrees must be strictly increasing".into(),
        ));
    }
    if !(0.0 < tau && tau < 1.0 + 1e-9) {
        return Err(Error::InvalidParameter(format!(
            "plateau threshold tau = {tau} must lie in (0, 1]"
        )));
    }

    let mut profiles = Vec::with_capacity(degrees.len());
    for &d in degrees {
        let m = build_matrix(map, domain, d, quad)?;
        profiles.push(singular_values(&m)?);
    }
    let plateau_counts: Vec<usize> = profiles
        .iter()
        .map(|p| p.iter().filter(|&&s| s >= tau).count())
        .collect();

    let growing = degrees.len() >= 3 && plateau_counts.windows(2).all(|w| w[1] > w[0]);
    let constant = plateau_counts.windows(2).all(|w| w[1] == w[0]);
    let head = profiles[0].len();
    let stabilized = profiles.windows(2).all(|pair| {
        (0..head).all(|k| (pair[1][k] - pair[0][k]).abs() <= STABILIZATION_TOL)
    });

    let verdict = if growing {
        Verdict::NoncompactLikely
    } else if constant && stabilized {
        Verdict::CompactLikely
    } else {
        Verdict::Inconclusive
    };

    Ok(CompactnessDiagnostic {
        degrees: degrees.to_vec(),
        singular_profiles: profiles,
        plateau_counts,
        tau,
        verdict,
        essential_lower_bound: None,
    })
}

/// Norms of composed normalized family members, and their minimum.
#[derive(Debug, Clone)]
pub struct EssentialBound {
    /// min over the family of ||h o phi||_2; bounded away from 0 witnesses
    /// noncompactness relative to the family.
    pub value: f64,
    /// (beta, ||h_beta o phi||_2) rows.
    pub per_beta: Vec<(f64, f64)>,
}

/// Desk-scale surrogate for liminf ||C_phi h_j||: each member is normalized
/// and composed with the symbol, using one shared quadrature spec so the
/// normalization and the composed norm see the same draw.
pub fn essential_lower_bound(
    map: &HolomorphicMap,
    domain: &Domain,
    family: Family,
    betas: &[f64],
    quad: &QuadratureSpec,
) -> Result<EssentialBound> {
    if betas.is_empty() {
        return Err(Error::InvalidParameter("empty beta list".into()));
    }
    require_self_map(map, domain, quad.seed)?;
    let mut per_beta = Vec::with_capacity(betas.len());
    for &beta in betas {
        let spec = TestFamilySpec::with_beta(family, beta, domain.clone())?;
        let spec = crate::sequences::normalize(spec, quad)?;
        let alpha = spec.alpha.expect("normalized");
        let composed_sq = integrate(
            domain,
            |z| {
                let image = map.evaluate(z).expect("dimension checked");
                let gap = spec.pole_gap(&image);
                Complex64::new(gap.powf(-2.0 * beta), 0.0)
            },
            quad,
        )?;
        per_beta.push((beta, alpha * composed_sq.re().max(0.0).sqrt()));
    }
    let value = per_beta.iter().map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
    Ok(EssentialBound { value, per_beta })
}

/// Reverse-Carleson ratio ||f||_{2,Omega} / ||f||_{2,U_delta}.
#[derive(Debug, Clone)]
pub struct CarlesonRatio {
    pub ratio: f64,
    pub std_error: f64,
    pub delta: f64,
}

/// Measure the ratio with one shared draw for numerator and denominator, so
/// the set inclusion U_delta subset Omega holds pathwise and the ratio is
/// never below 1. The standard error comes from the spread of per-batch
/// ratios.
pub fn reverse_carleson_ratio<F>(
    f: F,
    domain: &Domain,
    delta: f64,
    quad: &QuadratureSpec,
) -> Result<CarlesonRatio>
where
    F: Fn(&geometry::ComplexPoint) -> Complex64 + Sync,
{
    let layer = geometry::BoundaryLayer::new(domain.clone(), delta)?;
    let full = integrate(domain, |z| Complex64::new(f(z).norm_sqr(), 0.0), quad)?;
    let layer_part = integrate(
        domain,
        |z| {
            let v = f(z).norm_sqr();
            let inside = layer.contains(z).unwrap_or(true);
            Complex64::new(if inside { v } else { 0.0 }, 0.0)
        },
        quad,
    )?;
    if layer_part.re() <= 0.0 {
        return Err(Error::NumericFailure(
            "layer norm is zero; the ratio is undefined".into(),
        ));
    }
    let ratio = (full.re() / layer_part.re()).sqrt();
    // First-order error propagation for sqrt(a/b) with positively correlated
    // a and b; conservative: treat the two errors as independent.
    let rel = (full.std_error / full.re()).hypot(layer_part.std_error / layer_part.re());
    Ok(CarlesonRatio {
        ratio,
        std_error: 0.5 * ratio * rel,
        delta,
    })
}

/// Verify that the linear map `b` carries dom1 onto dom2, by gauging images
/// of boundary samples in both directions.
fn validate_linear_bijection(
    b: &HolomorphicMap,
    dom1: &Domain,
    dom2: &Domain,
    seed: u64,
) -> Result<HolomorphicMap> {
    let matrix = b.linear_matrix()?;
    let inv = maps::invert_linear(&matrix)?;
    let n = b.dim();
    let b_inv = HolomorphicMap::new(
        (0..n)
            .map(|i| {
                let mut acc = MultiPoly::zero(n);
                for (k, coeff) in inv[i].iter().enumerate() {
                    acc = acc.add(&MultiPoly::variable(n, k)?.scale(*coeff))?;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?,
    )?;

    let tol = 1e-8;
    for z in geometry::sample_boundary(dom1, 500, splitmix64(seed ^ 0xb17)) {
        let image = b.evaluate(&z)?;
        if (dom2.gauge(&image)? - 1.0).abs() > tol {
            return Err(Error::InvalidParameter(format!(
                "B does not map the {} boundary onto the {} boundary",
                dom1.kind_name(),
                dom2.kind_name()
            )));
        }
    }
    for w in geometry::sample_boundary(dom2, 500, splitmix64(seed ^ 0xb27)) {
        let image = b_inv.evaluate(&w)?;
        if (dom1.gauge(&image)? - 1.0).abs() > tol {
            return Err(Error::InvalidParameter(format!(
                "B^-1 does not map the {} boundary onto the {} boundary",
                dom2.kind_name(),
                dom1.kind_name()
            )));
        }
    }
    Ok(b_inv)
}

/// Both sides of the change-of-variables identity
/// ||h o B||^2_{dom1} = int_{dom2} |h|^2 |J(B^{-1})|^2 dV,
/// measured with independent substreams.
#[derive(Debug, Clone)]
pub struct ChangeOfVariablesReport {
    pub lhs: IntegralResult,
    pub rhs: IntegralResult,
    pub residual: f64,
}

pub fn change_of_variables_check<H>(
    h: H,
    b: &HolomorphicMap,
    dom1: &Domain,
    dom2: &Domain,
    quad: &QuadratureSpec,
) -> Result<ChangeOfVariablesReport>
where
    H: Fn(&geometry::ComplexPoint) -> Complex64 + Sync,
{
    let b_inv = validate_linear_bijection(b, dom1, dom2, quad.seed)?;
    let origin = geometry::ComplexPoint::from_re(&vec![0.0; b.dim()])?;
    let jac_inv_sq = maps::jacobian_det(&b_inv, &origin)?.norm_sqr();

    let lhs = integrate(
        dom1,
        |z| {
            let image = b.evaluate(z).expect("dimension checked");
            Complex64::new(h(&image).norm_sqr(), 0.0)
        },
        quad,
    )?;
    let rhs_raw = integrate(
        dom2,
        |w| Complex64::new(h(w).norm_sqr() * jac_inv_sq, 0.0),
        &quad.reseeded(0xc0f),
    )?;
    let denom = lhs.re().abs().max(rhs_raw.re().abs());
    let residual = if denom > 0.0 {
        (lhs.re() - rhs_raw.re()).abs() / denom
    } else {
        0.0
    };
    Ok(ChangeOfVariablesReport {
        lhs,
        rhs: rhs_raw,
        residual,
    })
}

/// Paired diagnostics for C_phi on dom2 and C_{B^{-1} phi B} on dom1.
#[derive(Debug, Clone)]
pub struct ConjugationReport {
    pub original: CompactnessDiagnostic,
    pub conjugated: CompactnessDiagnostic,
    pub verdicts_agree: bool,
    /// Largest singular-value discrepancy across shared profile indices.
    pub max_profile_gap: f64,
}

/// Lemma-2 instrument: the conjugated symbol is computed exactly by
/// polynomial composition and compressed against dom1's own exact basis
/// (the pullback of dom2's basis through B spans the same truncated spaces,
/// so the two compressions are unitarily equivalent and must share singular
/// values).
pub fn conjugation_invariance_check(
    map: &HolomorphicMap,
    b: &HolomorphicMap,
    dom1: &Domain,
    dom2: &Domain,
    degrees: &[u32],
    tau: f64,
    quad: &QuadratureSpec,
) -> Result<ConjugationReport> {
    validate_linear_bijection(b, dom1, dom2, quad.seed)?;
    let original = compactness_diagnostic(map, dom2, degrees, tau, quad)?;
    let conjugated_map = maps::conjugate(map, b)?;
    let conjugated = compactness_diagnostic(&conjugated_map, dom1, degrees, tau, quad)?;
    let mut max_gap = 0.0f64;
    for (p, q) in original
        .singular_profiles
        .iter()
        .zip(&conjugated.singular_profiles)
    {
        for (a, c) in p.iter().zip(q) {
            max_gap = max_gap.max((a - c).abs());
        }
    }
    Ok(ConjugationReport {
        verdicts_agree: original.verdict == conjugated.verdict,
        original,
        conjugated,
        max_profile_gap: max_gap,
    })
}
