//! Singular test-function families with a boundary pole: numeric
//! normalization, weak-null diagnostics, and blow-up exponent estimation.
//!
//! Two families are supported, both powered by the principal branch:
//!
//! - F family: h(z) = alpha (1 - z_1)^{-beta}, pole at (1, 0, ..., 0);
//! - G family: h(w) = alpha w_1^{-beta} on the domain translated by +1 along
//!   the first coordinate. Pulled back to the centered domain this reads
//!   alpha (1 + z_1)^{-beta}, pole at (-1, 0, ..., 0).
//!
//! On every supported domain with first extent <= 1 the argument of the
//! power has positive real part, so the principal branch is cut-free.

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{self, ComplexPoint, Domain};
use crate::quadrature::{self, integrate, QuadratureSpec};

/// Last consecutive alpha ratio below which the sequence is flagged as
/// vanishing. A genuinely divergent normalization integral drives the ratio
/// to 1/sqrt(ratio of norms), well below this; a convergent one drives it
/// to 1.
pub const ALPHA_VANISH_RATIO: f64 = 0.9;

/// Number of deterministic samples of the compact core K_eps used for sup
/// estimates.
pub const CORE_SAMPLES: usize = 10_000;

/// Largest dyadic shell index considered by the blow-up instrument.
const MAX_SHELL: usize = 24;

/// Minimum raw hits for a shell to enter the decay-exponent regression.
const MIN_SHELL_HITS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// (1 - z_1)^{-beta} on the centered domain.
    F,
    /// z_1^{-beta} on the domain shifted into { Re z_1 > 0 }.
    G,
}

/// One member of a singular test family, before or after normalization.
#[derive(Debug, Clone)]
pub struct TestFamilySpec {
    pub family: Family,
    /// Present when constructed from the index law beta_j = 1 - 1/j.
    pub j: Option<u32>,
    pub beta: f64,
    /// Normalization constant; set by `normalize`.
    pub alpha: Option<f64>,
    pub domain: Domain,
    /// Location of the boundary singularity in centered coordinates.
    pub pole: ComplexPoint,
}

pub fn beta_from_index(j: u32) -> f64 {
    1.0 - 1.0 / j as f64
}

impl TestFamilySpec {
    pub fn from_index(family: Family, j: u32, domain: Domain) -> Result<Self> {
        if j < 2 {
            return Err(Error::InvalidParameter(format!("family index j = {j} must be >= 2")));
        }
        let mut spec = Self::with_beta(family, beta_from_index(j), domain)?;
        spec.j = Some(j);
        Ok(spec)
    }

    pub fn with_beta(family: Family, beta: f64, domain: Domain) -> Result<Self> {
        if !(0.0..2.0).contains(&beta) {
            return Err(Error::InvalidParameter(format!(
                "exponent beta = {beta} must lie in [0, 2)"
            )));
        }
        check_half_plane(&domain)?;
        let mut pole = vec![Complex64::new(0.0, 0.0); domain.dim()];
        pole[0] = match family {
            Family::F => Complex64::new(1.0, 0.0),
            Family::G => Complex64::new(-1.0, 0.0),
        };
        Ok(Self {
            family,
            j: None,
            beta,
            alpha: None,
            domain,
            pole: ComplexPoint::new(pole)?,
        })
    }

    /// Distance from z to the pole along the first coordinate: |1 -+ z_1|.
    pub fn pole_gap(&self, z: &ComplexPoint) -> f64 {
        let z1 = z.coords()[0];
        match self.family {
            Family::F => (Complex64::new(1.0, 0.0) - z1).norm(),
            Family::G => (Complex64::new(1.0, 0.0) + z1).norm(),
        }
    }

    /// Unnormalized value at a point of the centered domain.
    pub fn evaluate_raw(&self, z: &ComplexPoint) -> Complex64 {
        let z1 = z.coords()[0];
        let w = match self.family {
            Family::F => Complex64::new(1.0, 0.0) - z1,
            Family::G => Complex64::new(1.0, 0.0) + z1,
        };
        power_negative(w, self.beta)
    }

    /// alpha times the raw value; requires a normalized spec.
    pub fn evaluate(&self, z: &ComplexPoint) -> Result<Complex64> {
        let alpha = self.alpha.ok_or_else(|| {
            Error::InvalidParameter("family member is not normalized yet".into())
        })?;
        Ok(alpha * self.evaluate_raw(z))
    }
}

/// w^{-beta} with the principal branch; errors on the closed negative real
/// axis (including w = 0).
pub fn principal_power(w: Complex64, beta: f64) -> Result<Complex64> {
    if w.im == 0.0 && w.re <= 0.0 {
        return Err(Error::BranchCut(format!("w = {w}")));
    }
    Ok(power_negative(w, beta))
}

/// Unchecked w^{-beta}; infinite at w = 0 so that quadrature counts the draw
/// as non-finite instead of poisoning sums with NaN.
fn power_negative(w: Complex64, beta: f64) -> Complex64 {
    if beta == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    if w.norm_sqr() == 0.0 {
        return Complex64::new(f64::INFINITY, 0.0);
    }
    w.powf(-beta)
}

fn check_half_plane(domain: &Domain) -> Result<()> {
    let extent = match domain {
        Domain::UnitBall { .. } => 1.0,
        Domain::Polydisc { radii } => radii[0],
        Domain::Ellipsoid { semiaxes } => semiaxes[0],
    };
    if extent > 1.0 {
        return Err(Error::HalfPlaneViolation(format!(
            "first-coordinate extent {extent} > 1, the pole would fall inside"
        )));
    }
    Ok(())
}

/// The unnormalized F-family function z -> (1 - z_1)^{-beta}, holomorphic on
/// the domain because the branch cut points away from it.
pub fn make_f(beta: f64, domain: &Domain) -> Result<impl Fn(&ComplexPoint) -> Complex64 + Sync> {
    if !(0.0..2.0).contains(&beta) {
        return Err(Error::InvalidParameter(format!(
            "exponent beta = {beta} must lie in [0, 2)"
        )));
    }
    check_half_plane(domain)?;
    Ok(move |z: &ComplexPoint| power_negative(Complex64::new(1.0, 0.0) - z.coords()[0], beta))
}

/// The unnormalized G-family function w -> w_1^{-beta} on the shifted domain
/// (centered domain translated by +1 along Re z_1).
pub fn make_g(beta: f64, domain: &Domain) -> Result<impl Fn(&ComplexPoint) -> Complex64 + Sync> {
    if !(0.0..2.0).contains(&beta) {
        return Err(Error::InvalidParameter(format!(
            "exponent beta = {beta} must lie in [0, 2)"
        )));
    }
    check_half_plane(domain)?;
    Ok(move |w: &ComplexPoint| power_negative(w.coords()[0], beta))
}

/// Translate a point by `offset` along the real axis of the first coordinate.
pub fn shift_first_coordinate(z: &ComplexPoint, offset: f64) -> ComplexPoint {
    let mut coords = z.coords().to_vec();
    coords[0] += offset;
    ComplexPoint::new(coords).expect("finite shift of a finite point")
}

/// Measure the unnormalized L^2 norm and set alpha = 1 / norm.
///
/// A divergence flag from quadrature means the member is not in A^2, so
/// normalization is impossible.
pub fn normalize(spec: TestFamilySpec, quad: &QuadratureSpec) -> Result<TestFamilySpec> {
    let (normalized, _, _) = normalize_with_norm(spec, quad)?;
    Ok(normalized)
}

/// As `normalize`, additionally returning the squared-norm estimate and its
/// standard error.
pub fn normalize_with_norm(
    spec: TestFamilySpec,
    quad: &QuadratureSpec,
) -> Result<(TestFamilySpec, f64, f64)> {
    let beta = spec.beta;
    let family = spec.family;
    let result = integrate(
        &spec.domain,
        |z| {
            let gap = match family {
                Family::F => (Complex64::new(1.0, 0.0) - z.coords()[0]).norm(),
                Family::G => (Complex64::new(1.0, 0.0) + z.coords()[0]).norm(),
            };
            Complex64::new(gap.powf(-2.0 * beta), 0.0)
        },
        quad,
    )
    .map_err(|e| match e {
        Error::Divergent { .. } => Error::NormalizationImpossible {
            beta,
            domain: spec.domain.kind_name().to_string(),
        },
        other => other,
    })?;
    let norm_sq = result.re();
    if !(norm_sq > 0.0 && norm_sq.is_finite()) {
        return Err(Error::NormalizationImpossible {
            beta,
            domain: spec.domain.kind_name().to_string(),
        });
    }
    let mut out = spec;
    out.alpha = Some(1.0 / norm_sq.sqrt());
    Ok((out, norm_sq, result.std_error))
}

/// One row of the weak-null report.
#[derive(Debug, Clone)]
pub struct WeakNullRow {
    pub j: Option<u32>,
    pub beta: f64,
    pub alpha: f64,
    /// Norm of the normalized member, re-evaluated with the report's
    /// quadrature spec (1 by construction, up to roundoff).
    pub norm: f64,
    pub norm_std_error: f64,
    /// Sup of |h| over the deterministic sample of the compact core K_eps.
    pub sup_on_core: f64,
}

/// Weak-null diagnostics along a list of family indices.
#[derive(Debug, Clone)]
pub struct WeakNullReport {
    pub family: Family,
    pub eps: f64,
    pub rows: Vec<WeakNullRow>,
    /// Whether the K_eps sups fall toward 0: the maximum occurs in the first
    /// half of the list and the sequence strictly decreases after it.
    /// None when fewer than two rows make the question well-posed.
    pub sup_decreasing: Option<bool>,
    /// Whether alpha_j is strictly decreasing with a final consecutive ratio
    /// below `ALPHA_VANISH_RATIO`. None for fewer than two rows.
    pub alpha_vanishing: Option<bool>,
}

pub fn weak_null_report(
    family: Family,
    domain: &Domain,
    j_list: &[u32],
    eps: f64,
    quad: &QuadratureSpec,
) -> Result<WeakNullReport> {
    if j_list.is_empty() {
        return Err(Error::InvalidParameter("empty index list".into()));
    }
    if !(eps > 0.0 && eps < domain.inradius()) {
        return Err(Error::InvalidParameter(format!(
            "eps = {eps} must lie in (0, inradius = {})",
            domain.inradius()
        )));
    }

    // Deterministic sample of the core K_eps, shared by all rows.
    let core = sample_core(domain, eps, CORE_SAMPLES, quad.seed)?;

    let mut rows = Vec::with_capacity(j_list.len());
    for &j in j_list {
        let spec = TestFamilySpec::from_index(family, j, domain.clone())?;
        let (normalized, norm_sq, norm_sq_se) =
            normalize_with_norm(spec, quad).map_err(|e| annotate_row_failure(e, j))?;
        let alpha = normalized.alpha.expect("set by normalize");
        let beta = normalized.beta;
        let sup_on_core = core
            .iter()
            .map(|&gap| alpha * gap.powf(-beta))
            .fold(0.0f64, f64::max);
        rows.push(WeakNullRow {
            j: Some(j),
            beta,
            alpha,
            norm: alpha * norm_sq.sqrt(),
            norm_std_error: norm_sq_se / (2.0 * norm_sq),
            sup_on_core,
        });
    }

    let sups: Vec<f64> = rows.iter().map(|r| r.sup_on_core).collect();
    let alphas: Vec<f64> = rows.iter().map(|r| r.alpha).collect();
    Ok(WeakNullReport {
        family,
        eps,
        rows,
        sup_decreasing: sup_decreasing_flag(&sups),
        alpha_vanishing: alpha_vanishing_flag(&alphas),
    })
}

fn annotate_row_failure(e: Error, j: u32) -> Error {
    match e {
        Error::NormalizationImpossible { beta, domain } => Error::NormalizationImpossible {
            beta,
            domain: format!("{domain} (family index j = {j})"),
        },
        other => other,
    }
}

fn sup_decreasing_flag(sups: &[f64]) -> Option<bool> {
    if sups.len() < 2 {
        return None;
    }
    let argmax = sups
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    if argmax > sups.len() / 2 {
        return Some(false);
    }
    Some(sups[argmax..].windows(2).all(|w| w[1] < w[0]))
}

fn alpha_vanishing_flag(alphas: &[f64]) -> Option<bool> {
    if alphas.len() < 2 {
        return None;
    }
    let decreasing = alphas.windows(2).all(|w| w[1] < w[0]);
    let last_ratio = alphas[alphas.len() - 1] / alphas[alphas.len() - 2];
    Some(decreasing && last_ratio < ALPHA_VANISH_RATIO)
}

/// Pole gaps |1 - z_1| of a deterministic interior sample of K_eps.
fn sample_core(domain: &Domain, eps: f64, count: usize, seed: u64) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(quadrature::splitmix64(seed ^ 0x4b45));
    let mut point = ComplexPoint::from_re(&vec![0.0; domain.dim()])?;
    let mut gaps = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while gaps.len() < count {
        attempts += 1;
        if attempts > count * 1000 {
            return Err(Error::NumericFailure(format!(
                "could not draw {count} samples of K_eps (eps = {eps}); acceptance rate too low"
            )));
        }
        geometry::fill_interior(domain, &mut rng, (0.0, 1.0), point.coords_mut());
        if domain.boundary_distance(&point)? >= eps {
            gaps.push((Complex64::new(1.0, 0.0) - point.coords()[0]).norm());
        }
    }
    Ok(gaps)
}

/// One grid point of the blow-up curve.
#[derive(Debug, Clone)]
pub struct BlowupPoint {
    pub beta: f64,
    /// Raw Monte Carlo estimate of ||(1 - z_1)^{-beta}||^2; when the
    /// divergence flag is set the number is reported for the curve but is
    /// not a trustworthy integral value.
    pub norm_sq: f64,
    pub std_error: f64,
    pub divergent: bool,
}

/// The measured norm curve with divergence flags and the estimated blow-up
/// exponent.
#[derive(Debug, Clone)]
pub struct BlowupReport {
    pub points: Vec<BlowupPoint>,
    /// Midpoint between the largest finite-flagged and smallest
    /// divergence-flagged grid points; None when the grid does not straddle
    /// the transition.
    pub beta_star: Option<f64>,
    /// Fitted decay exponent kappa of the dyadic shell fractions
    /// P(|1 - z_1| ~ 2^{-m}) ~ 2^{-kappa m}. The norm integral diverges
    /// exactly when 2 beta >= kappa.
    pub shell_exponent: f64,
    /// (shell index, log2 of the weighted shell fraction) pairs used in the
    /// fit.
    pub shell_fit_data: Vec<(usize, f64)>,
}

/// Scan the norm curve beta -> ||(1 - z_1)^{-beta}||^2 over a grid.
///
/// A single sampling pass is shared by all grid points: each point reuses
/// the same pole gaps, which makes the curve pathwise comparable across
/// beta. Divergence at a grid point is decided by the dyadic-shell exponent
/// (2 beta >= kappa), by monotone growth of the running estimate, or by an
/// excess of non-finite draws.
pub fn blowup_threshold(
    domain: &Domain,
    beta_grid: &[f64],
    quad: &QuadratureSpec,
) -> Result<BlowupReport> {
    if beta_grid.len() < 2 {
        return Err(Error::InvalidParameter("beta grid needs at least 2 points".into()));
    }
    if beta_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("beta grid must be strictly increasing".into()));
    }
    if beta_grid.iter().any(|b| !(0.0..2.0).contains(b)) {
        return Err(Error::InvalidParameter("beta grid must lie within (0, 2)".into()));
    }
    check_half_plane(domain)?;

    let pass = quadrature::real_sample_pass(
        domain,
        |z| (Complex64::new(1.0, 0.0) - z.coords()[0]).norm(),
        quad,
    );
    let vol = quadrature::volume(domain);

    // Shell statistics are beta-independent; fit the decay exponent once.
    let shells = pass.dyadic_shell_fractions(MAX_SHELL);
    let fit_data: Vec<(usize, f64)> = shells
        .iter()
        .enumerate()
        .skip(1) // shell 0 is not in the asymptotic regime
        .filter(|(_, (frac, raw))| *raw >= MIN_SHELL_HITS && *frac > 0.0)
        .map(|(m, (frac, _))| (m, frac.log2()))
        .collect();
    if fit_data.len() < 3 {
        return Err(Error::NumericFailure(format!(
            "only {} usable dyadic shells; increase the sample budget",
            fit_data.len()
        )));
    }
    let kappa = -fit_slope(&fit_data);

    let mut points = Vec::with_capacity(beta_grid.len());
    for &beta in beta_grid {
        let stats = pass.statistics(|gap| gap.powf(-2.0 * beta), vol);
        let divergent = 2.0 * beta >= kappa || stats.growth_flag || stats.nonfinite_excess;
        points.push(BlowupPoint {
            beta,
            norm_sq: stats.value,
            std_error: stats.std_error,
            divergent,
        });
    }

    let last_finite = points.iter().rev().find(|p| !p.divergent).map(|p| p.beta);
    let first_divergent = points.iter().find(|p| p.divergent).map(|p| p.beta);
    let beta_star = match (last_finite, first_divergent) {
        (Some(lo), Some(hi)) if lo < hi => Some(0.5 * (lo + hi)),
        _ => None,
    };

    Ok(BlowupReport {
        points,
        beta_star,
        shell_exponent: kappa,
        shell_fit_data: fit_data,
    })
}

fn fit_slope(data: &[(usize, f64)]) -> f64 {
    let n = data.len() as f64;
    let mean_x = data.iter().map(|(m, _)| *m as f64).sum::<f64>() / n;
    let mean_y = data.iter().map(|(_, y)| *y).sum::<f64>() / n;
    let sxy: f64 = data
        .iter()
        .map(|(m, y)| (*m as f64 - mean_x) * (y - mean_y))
        .sum();
    let sxx: f64 = data
        .iter()
        .map(|(m, _)| (*m as f64 - mean_x).powi(2))
        .sum();
    sxy / sxx
}
